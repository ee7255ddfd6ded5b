"""Integer sets in [1, N]: constructions, residue diagnostics, and file I/O.

A set carries both a sorted element array (for iteration and windowed scans)
and a 0/1 membership mask indexed by value (for O(1) lookups); the two views
are built together and never mutated.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .arith import EpsilonSpec, sieve_primes
from .errors import SetFileError
from .limits import check_allocation

__all__ = [
    "IntegerSet",
    "ResidueProfile",
    "squares_up_to",
    "quadratic_image",
    "sidon_set",
    "is_sidon",
    "residue_avoiding_random",
    "occupancy",
    "mod4_restrict",
    "read_set",
    "write_set",
]


@dataclass(frozen=True, eq=False)
class IntegerSet:
    """Immutable set of integers in [1, cap] with sorted-array and mask views."""

    cap: int
    elements: np.ndarray
    mask: np.ndarray

    def __post_init__(self):
        self.elements.setflags(write=False)
        self.mask.setflags(write=False)

    @classmethod
    def from_elements(cls, cap: int, elements: Iterable[int]) -> "IntegerSet":
        if cap < 1:
            raise ValueError("cap must be a positive integer")
        arr = np.asarray(sorted(set(int(e) for e in elements)), dtype=np.int64)
        if len(arr) and (arr[0] < 1 or arr[-1] > cap):
            bad = int(arr[0]) if arr[0] < 1 else int(arr[-1])
            raise ValueError(f"element {bad} outside [1, {cap}]")
        check_allocation(cap + 1, f"membership mask for cap {cap}")
        mask = np.zeros(cap + 1, dtype=bool)
        mask[arr] = True
        return cls(cap=cap, elements=arr, mask=mask)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, n) -> bool:
        n = int(n)
        return 1 <= n <= self.cap and bool(self.mask[n])

    def __iter__(self):
        return (int(e) for e in self.elements)


@dataclass(frozen=True, eq=False)
class ResidueProfile:
    """Class counts of a set modulo v: counts[h] = #{a in A : a = h mod v}."""

    modulus: int
    counts: np.ndarray
    occupancy: int

    def __post_init__(self):
        self.counts.setflags(write=False)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def occupancy(A: IntegerSet, v: int) -> ResidueProfile:
    """Exact per-class counts of A modulo v and the number of occupied classes."""
    if v < 1:
        raise ValueError("modulus must be positive")
    counts = np.bincount(A.elements % v, minlength=v).astype(np.int64)
    return ResidueProfile(modulus=v, counts=counts, occupancy=int((counts > 0).sum()))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------

def squares_up_to(N: int) -> IntegerSet:
    """The perfect squares in [1, N]; exactly isqrt(N) of them."""
    if N < 1:
        raise ValueError("N must be positive")
    r = math.isqrt(N)
    return IntegerSet.from_elements(N, np.arange(1, r + 1, dtype=np.int64) ** 2)


def quadratic_image(a: int, b: int, c: int, N: int) -> IntegerSet:
    """Values of a*x^2 + b*x + c over integer x, intersected with [1, N]."""
    if a == 0:
        raise ValueError("leading coefficient must be nonzero (degenerate quadratic)")
    if N < 1:
        raise ValueError("N must be positive")
    # any x with 1 <= q(x) <= N satisfies |a|x^2 <= |b||x| + |N-c| + |1-c|
    reach = abs(N - c) + abs(1 - c)
    span = math.isqrt(2 * reach // abs(a) + 1) + 2 * abs(b) + 4
    xs = np.arange(-span, span + 1, dtype=np.int64)
    vals = a * xs * xs + b * xs + c
    vals = vals[(vals >= 1) & (vals <= N)]
    return IntegerSet.from_elements(N, vals)


def sidon_set(p: int, N: int) -> IntegerSet:
    """A Sidon set from quadratic residues: {2p*i + (i^2 mod p) + 1 : 0 <= i < p}.

    All pairwise sums of the result are distinct; elements beyond N are
    dropped (a subset of a Sidon set is Sidon).  Fits entirely when
    2p^2 + p <= N.
    """
    if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")
    if N < 1:
        raise ValueError("N must be positive")
    i = np.arange(p, dtype=np.int64)
    vals = 2 * p * i + (i * i) % p + 1
    return IntegerSet.from_elements(N, vals[vals <= N])


def is_sidon(X: IntegerSet) -> bool:
    """True iff every nonzero difference of X occurs at most once.

    Checked through the equivalent condition that all pairwise sums
    x_i + x_j (i <= j) are distinct.
    """
    xs = X.elements
    n = len(xs)
    if n < 2:
        return True
    sums = xs[None, :] + xs[:, None]
    iu = np.triu_indices(n)
    vals = sums[iu]
    return len(np.unique(vals)) == len(vals)


def residue_avoiding_random(
    N: int,
    eps: EpsilonSpec,
    prime_bound: int,
    seed: int,
    *,
    strategy: str = "qr",
) -> IntegerSet:
    """Random subset of [1, N] confined to few residue classes per small prime.

    For each prime p <= prime_bound an allowed class set of size
    floor(p/2 + eps(p)) is chosen: strategy "qr" takes the smallest classes
    hit by squares (so square-like sets survive), "uniform" samples classes
    at random.  Survivors are the n whose residue is allowed at every prime.
    Deterministic for a fixed seed; may legitimately come out empty.
    """
    if N < 1:
        raise ValueError("N must be positive")
    if strategy not in ("qr", "uniform"):
        raise ValueError(f"unknown strategy {strategy!r}")
    rng = random.Random(seed)
    keep = np.ones(N + 1, dtype=bool)
    keep[0] = False
    for p in sieve_primes(prime_bound):
        size = int(math.floor(p / 2 + eps.at(p)))
        size = max(1, min(size, p))
        if strategy == "qr":
            qr = sorted({(x * x) % p for x in range(p)})
            allowed = qr[:size]
        else:
            allowed = sorted(rng.sample(range(p), size))
        ok = np.zeros(p, dtype=bool)
        ok[allowed] = True
        keep &= ok[np.arange(N + 1) % p]
    out = IntegerSet.from_elements(N, np.flatnonzero(keep))
    if len(out) == 0:
        warnings.warn(
            f"residue filtering emptied [1, {N}] (prime_bound={prime_bound})",
            stacklevel=2,
        )
    return out


def mod4_restrict(A: IntegerSet) -> IntegerSet:
    """Subset of A in its most-populated class mod 4 (smallest class on ties).

    Keeps at least a quarter of the elements.
    """
    if len(A) == 0:
        raise ValueError("set must be nonempty")
    residues = A.elements % 4
    counts = np.bincount(residues, minlength=4)
    best = int(np.argmax(counts))  # argmax returns the smallest index on ties
    return IntegerSet.from_elements(A.cap, A.elements[residues == best])


# ---------------------------------------------------------------------------
# File format: `N=<cap>` header, one element per line, `#` comments
# ---------------------------------------------------------------------------

def read_set(path) -> IntegerSet:
    with open(path, encoding="utf-8") as fh:
        cap = None
        elements: list[int] = []
        seen: set[int] = set()
        duplicates = 0
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if cap is None:
                if not line.startswith("N="):
                    raise SetFileError("expected `N=<cap>` header before elements", lineno)
                try:
                    cap = int(line[2:])
                except ValueError:
                    raise SetFileError(f"bad cap {line[2:]!r}", lineno) from None
                if cap < 1:
                    raise SetFileError(f"cap must be positive, got {cap}", lineno)
                continue
            try:
                value = int(line)
            except ValueError:
                raise SetFileError(f"not an integer: {line!r}", lineno) from None
            if not 1 <= value <= cap:
                raise SetFileError(f"element {value} outside [1, {cap}]", lineno)
            if value in seen:
                duplicates += 1
                continue
            seen.add(value)
            elements.append(value)
    if cap is None:
        raise SetFileError("missing `N=<cap>` header")
    if duplicates:
        warnings.warn(f"{path}: ignored {duplicates} duplicate element(s)", stacklevel=2)
    return IntegerSet.from_elements(cap, elements)


def write_set(A: IntegerSet, path) -> None:
    """Writes sorted, deduplicated, newline-terminated; round-trips exactly."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"N={A.cap}\n")
        for e in A.elements:
            fh.write(f"{int(e)}\n")
