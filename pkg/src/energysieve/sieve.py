"""Occupancy-based sieve inequalities and divisor sums over difference sets.

Two results are made executable here.  First, the composite-moduli inequality:
if every prime-power class count of A stays under the multiplicative ceiling,
then |A|^2 / delta(v) <= sum over classes h mod v of |A(v;h)|^2, checked in
exact rational arithmetic.  Second, the divisor sum
sum_{1 <= u < v <= sqrt(N)} r_{A-A}(uv), computed both by direct product
enumeration against a difference table and by an independent
congruence-window scan; the two totals agree exactly, pair for pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import (
    EPS_ZERO,
    EpsilonSpec,
    delta,
    delta_prime_power,
    factorize,
    sieve_primes,
    table_for,
)
from .limits import check_allocation
from .sets import IntegerSet, ResidueProfile, occupancy

__all__ = [
    "SieveCheckResult",
    "DivisorSumRow",
    "DivisorSumTrace",
    "DivisorGrowthReport",
    "DifferenceTable",
    "composite_moduli_check",
    "gallagher_bound",
    "divisor_sum_direct",
    "divisor_sum_partition",
    "divisor_growth_report",
]

# dense difference tables beyond this value range fall back to a sparse view
DENSE_DIFF_LIMIT = 2 * 10**7


@dataclass(frozen=True)
class SieveCheckResult:
    """One modulus check of |A|^2/delta(v) against the class-count square sum."""

    modulus: int
    card: int
    delta_value: Fraction
    lhs: Fraction        # |A|^2 / delta(v)
    rhs: int             # sum_h |A(v;h)|^2
    hypothesis_ok: bool  # occupancy under the ceiling at every prime power of v
    holds: bool          # lhs <= rhs


def composite_moduli_check(
    A: IntegerSet, v: int, eps: EpsilonSpec, *, profile: ResidueProfile | None = None
) -> SieveCheckResult:
    """Evaluate the inequality at modulus v; hypothesis failures are reported,
    never raised, since the conclusion is only guaranteed under the hypothesis."""
    if v < 1:
        raise ValueError("modulus must be positive")
    if profile is None or profile.modulus != v:
        profile = occupancy(A, v)
    counts = profile.counts
    rhs = int(np.dot(counts, counts))
    dv = delta(v, eps)
    card = len(A)
    lhs = Fraction(card * card) / dv

    hypothesis_ok = True
    if v > 1:
        for p, k in factorize(v, table_for(v)).factors:
            pk = p**k
            if occupancy(A, pk).occupancy > delta_prime_power(p, k, eps):
                hypothesis_ok = False
                break
    return SieveCheckResult(
        modulus=v,
        card=card,
        delta_value=dv,
        lhs=lhs,
        rhs=rhs,
        hypothesis_ok=hypothesis_ok,
        holds=lhs <= rhs,
    )


def gallagher_bound(profiles: Sequence[ResidueProfile], N: int) -> float | None:
    """The larger-sieve cardinality bound from prime occupancy data.

    Returns (sum log p - log N) / (sum log p / |A_p| - log N) over the given
    prime moduli, or None when the denominator is not positive (inconclusive).
    """
    if N < 1:
        raise ValueError("N must be positive")
    seen: set[int] = set()
    num = -math.log(N)
    den = -math.log(N)
    for prof in profiles:
        p = prof.modulus
        if p in seen:
            raise ValueError(f"duplicate prime modulus {p}")
        seen.add(p)
        if prof.occupancy < 1:
            raise ValueError(f"profile at {p} has empty occupancy")
        num += math.log(p)
        den += math.log(p) / prof.occupancy
    if den <= 0:
        return None
    return num / den


# ---------------------------------------------------------------------------
# Difference table
# ---------------------------------------------------------------------------

class DifferenceTable:
    """r_{A-A}(d) for d >= 1, materialized once; dense or sparse by range."""

    def __init__(self, A: IntegerSet, max_diff: int):
        self.max_diff = max_diff
        elems = A.elements
        if len(elems) < 2:
            self._dense = np.zeros(1, dtype=np.int64)
            self._values = np.zeros(0, dtype=np.int64)
            self._counts = np.zeros(0, dtype=np.int64)
            self.dense = True
            return
        self.dense = max_diff <= DENSE_DIFF_LIMIT
        chunk = max(1, (1 << 22) // len(elems))
        if self.dense:
            check_allocation(8 * (max_diff + 1), "difference table")
            table = np.zeros(max_diff + 1, dtype=np.int64)
            for i in range(0, len(elems), chunk):
                d = (elems[i : i + chunk, None] - elems[None, :]).ravel()
                d = d[(d > 0) & (d <= max_diff)]
                table += np.bincount(d, minlength=max_diff + 1)
            self._dense = table
        else:
            parts = []
            for i in range(0, len(elems), chunk):
                d = (elems[i : i + chunk, None] - elems[None, :]).ravel()
                parts.append(d[(d > 0) & (d <= max_diff)])
            vals, cnts = np.unique(np.concatenate(parts), return_counts=True)
            self._values = vals
            self._counts = cnts.astype(np.int64)

    def lookup(self, ds: np.ndarray) -> np.ndarray:
        """Counts for an array of candidate differences in [1, max_diff]."""
        if self.dense:
            return self._dense[ds]
        if len(self._values) == 0:
            return np.zeros(len(ds), dtype=np.int64)
        idx = np.minimum(np.searchsorted(self._values, ds), len(self._values) - 1)
        hit = self._values[idx] == ds
        out = np.zeros(len(ds), dtype=np.int64)
        out[hit] = self._counts[idx[hit]]
        return out


# ---------------------------------------------------------------------------
# Divisor sums, two ways
# ---------------------------------------------------------------------------

def divisor_sum_direct(
    A: IntegerSet, N: int, *, radius: int | None = None, table: DifferenceTable | None = None
) -> int:
    """sum over 1 <= u < v <= radius of r_{A-A}(uv); radius defaults to isqrt(N)."""
    if radius is None:
        radius = math.isqrt(N)
    if radius < 2 or len(A) < 2:
        return 0
    if table is None:
        table = DifferenceTable(A, radius * radius)
    total = 0
    for u in range(1, radius):
        prods = u * np.arange(u + 1, radius + 1, dtype=np.int64)
        total += int(table.lookup(prods).sum())
    return total


@dataclass(frozen=True)
class DivisorSumRow:
    v: int
    j_count: int               # number of length-v^2 blocks covering [1, N]
    window_count: int          # pairs a > b, a = b mod v, a - b < v^2
    partition_lower_bound: int # same-class pairs inside single blocks


@dataclass(frozen=True)
class DivisorSumTrace:
    cap: int
    rows: tuple[DivisorSumRow, ...]
    total: int
    partition_total: int

    def to_csv(self, fh) -> None:
        fh.write("v,J_v,window_count,partition_lower_bound\n")
        for r in self.rows:
            fh.write(f"{r.v},{r.j_count},{r.window_count},{r.partition_lower_bound}\n")


def divisor_sum_partition(A: IntegerSet, N: int) -> DivisorSumTrace:
    """The congruence-window route: for each v count pairs a = b mod v with
    0 < a - b < v^2, by scanning each residue class with a sorted-window rule.

    Shares nothing with the product-enumeration route, yet the totals are
    equal: a - b = uv with 1 <= u < v exactly when v divides a - b and the
    difference is under v^2.  Also records, per v, the count of same-class
    pairs falling inside a single length-v^2 block of [1, N]; every such pair
    is a window pair, so this is a valid per-v lower bound.
    """
    radius = math.isqrt(N)
    elems = A.elements
    rows: list[DivisorSumRow] = []
    total = 0
    part_total = 0
    for v in range(1, radius + 1):
        vsq = v * v
        j_count = max(1, N // vsq)
        window = 0
        partition = 0
        if len(elems) >= 2:
            residues = elems % v if v > 1 else np.zeros(len(elems), dtype=np.int64)
            for h in np.unique(residues):
                cls = elems[residues == h]
                if len(cls) < 2:
                    continue
                # pairs (a=cls[j], b=cls[i]) with i < j and a - b < v^2
                lo = np.searchsorted(cls, cls - vsq + 1, side="left")
                window += int((np.arange(len(cls)) - lo).sum())
                # same-class pairs within one aligned block [j*v^2, (j+1)*v^2)
                blocks = cls // vsq
                m = np.bincount(blocks - blocks[0])
                partition += int((m * (m - 1) // 2).sum())
        rows.append(
            DivisorSumRow(
                v=v, j_count=j_count, window_count=window, partition_lower_bound=partition
            )
        )
        total += window
        part_total += partition
    return DivisorSumTrace(cap=N, rows=tuple(rows), total=total, partition_total=part_total)


@dataclass(frozen=True)
class DivisorGrowthReport:
    cap: int
    card: int
    total: int
    scale: float   # |A|^2 log N
    ratio: float   # total / scale
    hypothesis_ok: bool
    hypothesis_checked_to: int


def divisor_growth_report(A: IntegerSet, N: int, eps: EpsilonSpec = EPS_ZERO) -> DivisorGrowthReport:
    """Measured constant in the divisor-sum growth: total / (|A|^2 log N).

    The occupancy hypothesis is tested against eps for all primes up to
    isqrt(N) and reported, not enforced.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    total = divisor_sum_direct(A, N)
    card = len(A)
    scale = card * card * math.log(N)
    limit = math.isqrt(N)
    hyp = True
    for p in sieve_primes(limit):
        if occupancy(A, int(p)).occupancy > delta_prime_power(int(p), 1, eps):
            hyp = False
            break
    return DivisorGrowthReport(
        cap=N,
        card=card,
        total=total,
        scale=scale,
        ratio=total / scale if scale > 0 else 0.0,
        hypothesis_ok=hyp,
        hypothesis_checked_to=limit,
    )
