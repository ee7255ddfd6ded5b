"""Primes, factorization, and the sieve occupancy ceiling.

The central object is the multiplicative function used as a per-modulus
occupancy ceiling: on a prime power it takes the value p^(k-1) * (p/2 + eps(p)),
where eps is a nonnegative, uniformly bounded weight per prime.  Everything
here is exact: the ceiling is evaluated in rational arithmetic whenever eps is
rational, and floats appear only in the partial-sum reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .errors import ResourceLimitError
from .limits import SIEVE_LIMIT_CAP, check_allocation

__all__ = [
    "PrimeTable",
    "Factorization",
    "EpsilonSpec",
    "EPS_ZERO",
    "EPS_HALF",
    "EPS_ONE",
    "SeriesTable",
    "sieve_primes",
    "factorize",
    "table_for",
    "delta",
    "delta_prime_power",
    "is_squarefree",
    "m_partial_sum",
    "t_partial_sum",
    "singular_series",
    "series_table",
]


# ---------------------------------------------------------------------------
# Prime generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes <= limit, ascending."""

    limit: int
    primes: np.ndarray

    def __post_init__(self):
        self.primes.setflags(write=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self) -> Iterator[int]:
        return (int(p) for p in self.primes)

    def __contains__(self, n: int) -> bool:
        i = int(np.searchsorted(self.primes, n))
        return i < len(self.primes) and int(self.primes[i]) == n


def sieve_primes(limit: int, *, segment_size: int = 1 << 20) -> PrimeTable:
    """Segmented sieve of Eratosthenes over [2, limit]."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    if limit > SIEVE_LIMIT_CAP:
        raise ResourceLimitError(f"sieve limit {limit} exceeds cap {SIEVE_LIMIT_CAP}")
    if segment_size < 8:
        raise ValueError("segment_size must be at least 8")
    if limit < 2:
        return PrimeTable(limit, np.empty(0, dtype=np.int64))

    root = math.isqrt(limit)
    base = np.ones(root + 1, dtype=bool)
    base[:2] = False
    for p in range(2, math.isqrt(root) + 1):
        if base[p]:
            base[p * p :: p] = False
    base_primes = np.flatnonzero(base).astype(np.int64)

    chunks = [base_primes]
    lo = root + 1
    while lo <= limit:
        hi = min(lo + segment_size - 1, limit)
        seg = np.ones(hi - lo + 1, dtype=bool)
        for p in base_primes:
            p = int(p)
            start = max(p * p, ((lo + p - 1) // p) * p)
            if start <= hi:
                seg[start - lo :: p] = False
        chunks.append(np.flatnonzero(seg).astype(np.int64) + lo)
        lo = hi + 1
    return PrimeTable(limit, np.concatenate(chunks))


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """n as a product of prime powers; factors ascending, exponents >= 1."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = 1
        for p, k in self.factors:
            out *= p**k
        return out


def factorize(n: int, primes: PrimeTable) -> Factorization:
    """Trial division against the table; needs limit >= n or limit^2 >= n."""
    if n < 1:
        raise ValueError("n must be positive")
    if primes.limit < n and primes.limit * primes.limit < n:
        raise ValueError(
            f"prime table up to {primes.limit} cannot certify a factorization of {n}"
        )
    factors: list[tuple[int, int]] = []
    rest = n
    for p in primes.primes:
        p = int(p)
        if p * p > rest:
            break
        if rest % p == 0:
            k = 0
            while rest % p == 0:
                rest //= p
                k += 1
            factors.append((p, k))
    if rest > 1:
        # rest has no prime factor <= sqrt(rest) within the table, so it is prime
        factors.append((rest, 1))
    return Factorization(n, tuple(factors))


# ---------------------------------------------------------------------------
# The epsilon weights and the occupancy ceiling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EpsilonSpec:
    """Nonnegative weight eps(p) per prime: a default plus optional overrides."""

    default: Fraction
    overrides: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        if self.default < 0:
            raise ValueError("eps default must be >= 0")
        for p, v in self.overrides:
            if p < 2:
                raise ValueError(f"override key {p} is not a prime candidate")
            if v < 0:
                raise ValueError(f"eps({p}) must be >= 0")

    @property
    def bound(self) -> Fraction:
        """sup over primes of eps(p)."""
        vals = [self.default, *(v for _, v in self.overrides)]
        return max(vals)

    def at(self, p: int) -> Fraction:
        for q, v in self.overrides:
            if q == p:
                return v
        return self.default

    @classmethod
    def constant(cls, value) -> "EpsilonSpec":
        return cls(default=Fraction(value))

    @classmethod
    def from_file(cls, path) -> "EpsilonSpec":
        """Key-value text config: lines `p=value` plus `default=value`.

        Values are rationals `a/b` or decimals; blank lines and `#` comments
        are skipped.
        """
        default = Fraction(0)
        seen_default = False
        overrides: list[tuple[int, Fraction]] = []
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
                key, _, val = line.partition("=")
                key = key.strip()
                try:
                    value = Fraction(val.strip())
                except (ValueError, ZeroDivisionError) as exc:
                    raise ValueError(f"{path}:{lineno}: bad value {val.strip()!r}") from exc
                if key == "default":
                    default = value
                    seen_default = True
                elif key.isdigit():
                    overrides.append((int(key), value))
                else:
                    raise ValueError(f"{path}:{lineno}: bad key {key!r}")
        if not seen_default and not overrides:
            raise ValueError(f"{path}: empty epsilon config")
        return cls(default=default, overrides=tuple(sorted(overrides)))


EPS_ZERO = EpsilonSpec.constant(0)
EPS_HALF = EpsilonSpec.constant(Fraction(1, 2))
EPS_ONE = EpsilonSpec.constant(1)


def delta_prime_power(p: int, k: int, eps: EpsilonSpec) -> Fraction:
    """Ceiling value on p^k: p^(k-1) * (p/2 + eps(p))."""
    return Fraction(p) ** (k - 1) * (Fraction(p, 2) + eps.at(p))


@lru_cache(maxsize=65536)
def _delta_cached(v: int, eps: EpsilonSpec, limit: int) -> Fraction:
    table = _shared_table(limit)
    out = Fraction(1)
    for p, k in factorize(v, table).factors:
        out *= delta_prime_power(p, k, eps)
    return out


@lru_cache(maxsize=8)
def _shared_table(limit: int) -> PrimeTable:
    return sieve_primes(limit)


def table_for(n: int) -> PrimeTable:
    """A cached prime table adequate to factorize n (limit^2 >= n)."""
    limit = 64
    while limit * limit < n:
        limit <<= 1
    return _shared_table(limit)


def delta(v: int, eps: EpsilonSpec, primes: PrimeTable | None = None) -> Fraction:
    """Multiplicative extension of the prime-power ceiling; delta(1) = 1."""
    if v < 1:
        raise ValueError("v must be positive")
    if v == 1:
        return Fraction(1)
    if primes is not None:
        out = Fraction(1)
        for p, k in factorize(v, primes).factors:
            out *= delta_prime_power(p, k, eps)
        return out
    return _delta_cached(v, eps, table_for(v).limit)


def is_squarefree(n: int, primes: PrimeTable) -> bool:
    return all(k == 1 for _, k in factorize(n, primes).factors)


# ---------------------------------------------------------------------------
# Partial sums and the truncated singular series
# ---------------------------------------------------------------------------

def _spf(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 2..limit."""
    check_allocation(8 * (limit + 1), "smallest-prime-factor table")
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if spf[p] == 0:
            sl = spf[p::p]
            sl[sl == 0] = p
    return spf


def _delta_terms(x: int, eps: EpsilonSpec):
    """Yield (n, delta(n) as float, squarefree?) for n = 1..x via one SPF pass."""
    yield 1, 1.0, True
    if x < 2:
        return
    spf = _spf(x)
    eps_f: dict[int, float] = {}
    for n in range(2, x + 1):
        m = n
        d = 1.0
        squarefree = True
        while m > 1:
            p = int(spf[m])
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            if k > 1:
                squarefree = False
            e = eps_f.get(p)
            if e is None:
                e = eps_f[p] = float(eps.at(p))
            d *= p ** (k - 1) * (p / 2.0 + e)
        yield n, d, squarefree


def m_partial_sum(x: int, eps: EpsilonSpec = EPS_ZERO) -> float:
    """Sum over squarefree n <= x of 1/delta(n)."""
    if x < 1:
        raise ValueError("x must be positive")
    return math.fsum(1.0 / d for _, d, sf in _delta_terms(x, eps) if sf)


def t_partial_sum(x: int, eps: EpsilonSpec = EPS_ZERO, *, squarefree_only: bool = True) -> float:
    """Sum of n^2/delta(n) for n <= x, restricted to squarefree n by default.

    The unrestricted variant (squarefree_only=False) is exposed as well since
    both versions are of interest when measuring the x^2 log x growth.
    """
    if x < 1:
        raise ValueError("x must be positive")
    return math.fsum(
        n * n / d for n, d, sf in _delta_terms(x, eps) if sf or not squarefree_only
    )


def singular_series(eps: EpsilonSpec = EPS_ZERO, trunc_prime: int = 10**5) -> float:
    """Truncated Euler product: prod over p <= trunc_prime of (1-1/p)^2 (1+1/delta(p))."""
    if trunc_prime < 2:
        raise ValueError("truncation bound must be at least 2")
    out = 1.0
    for p in _shared_table(trunc_prime).primes:
        p = int(p)
        out *= (1.0 - 1.0 / p) ** 2 * (1.0 + 1.0 / float(delta_prime_power(p, 1, eps)))
    return out


@dataclass(frozen=True)
class SeriesTable:
    """Partial sums on an increasing grid, plus the truncated Euler product."""

    xs: tuple[int, ...]
    m_values: tuple[float, ...]
    t_values: tuple[float, ...]        # squarefree-restricted
    t_all_values: tuple[float, ...]    # unrestricted variant
    trunc_prime: int
    singular: float

    def __post_init__(self):
        if list(self.xs) != sorted(set(self.xs)):
            raise ValueError("x-grid must be strictly increasing")
        for name in ("m_values", "t_values", "t_all_values"):
            col = getattr(self, name)
            if any(not (v > 0) or not math.isfinite(v) for v in col):
                raise ValueError(f"{name} must be finite and positive")
            if any(a > b for a, b in zip(col, col[1:])):
                raise ValueError(f"{name} must be nondecreasing")


def series_table(
    xs: Sequence[int], eps: EpsilonSpec = EPS_ZERO, trunc_prime: int = 10**5
) -> SeriesTable:
    xs = tuple(int(x) for x in xs)
    if not xs or any(x < 1 for x in xs):
        raise ValueError("need a nonempty grid of positive x values")
    top = max(xs)
    want = set(xs)
    m_at: dict[int, float] = {}
    t_at: dict[int, float] = {}
    ta_at: dict[int, float] = {}
    m_terms: list[float] = []
    t_terms: list[float] = []
    ta_terms: list[float] = []
    for n, d, sf in _delta_terms(top, eps):
        if sf:
            m_terms.append(1.0 / d)
            t_terms.append(n * n / d)
        ta_terms.append(n * n / d)
        if n in want:
            m_at[n] = math.fsum(m_terms)
            t_at[n] = math.fsum(t_terms)
            ta_at[n] = math.fsum(ta_terms)
    return SeriesTable(
        xs=xs,
        m_values=tuple(m_at[x] for x in xs),
        t_values=tuple(t_at[x] for x in xs),
        t_all_values=tuple(ta_at[x] for x in xs),
        trunc_prime=trunc_prime,
        singular=singular_series(eps, trunc_prime),
    )
