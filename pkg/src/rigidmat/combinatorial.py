"""Deterministic combinatorial independence tests and the fast bipartite rank.

A subset E of the grid [m] x [n] is stored as the family of row sections
A_0, ..., A_{m-1} (A_i = columns used in row i).  For tensor matroids with
small side dimension (min(s, r) <= 3) independence is decided exactly, in
every characteristic, by counting inequalities on the A_i; through duality
this yields a polynomial-time rank function for bipartite rigidity whenever
min(m - a, n - b) <= 3.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceededError, UnsupportedParametersError

LAMAN_ROWS_CAP = 24


@dataclass(frozen=True)
class RowFamily:
    """E = union of {i} x A_i inside [m] x [n]."""

    m: int
    n: int
    sets: tuple[frozenset, ...]

    def __post_init__(self):
        if len(self.sets) != self.m:
            raise ValueError("need exactly m row sections")
        for a in self.sets:
            if any(not (0 <= j < self.n) for j in a):
                raise ValueError("column index out of range")

    @classmethod
    def from_mask(cls, mask: int, m: int, n: int) -> "RowFamily":
        sets = []
        for i in range(m):
            row = (mask >> (i * n)) & ((1 << n) - 1)
            sets.append(frozenset(j for j in range(n) if row >> j & 1))
        return cls(m, n, tuple(sets))

    def to_mask(self) -> int:
        mask = 0
        for i, a in enumerate(self.sets):
            for j in a:
                mask |= 1 << (i * self.n + j)
        return mask

    def transpose(self) -> "RowFamily":
        sets = [frozenset(i for i in range(self.m) if j in self.sets[i]) for j in range(self.n)]
        return RowFamily(self.n, self.m, tuple(sets))

    @property
    def total(self) -> int:
        return sum(len(a) for a in self.sets)

    def multiplicity_classes(self) -> dict[int, frozenset]:
        """Columns keyed by how many row sections contain them (>= 1)."""
        counts: dict[int, int] = {}
        for a in self.sets:
            for j in a:
                counts[j] = counts.get(j, 0) + 1
        out: dict[int, set] = {}
        for j, c in counts.items():
            out.setdefault(c, set()).add(j)
        return {c: frozenset(s) for c, s in out.items()}


def transpose_mask(mask: int, m: int, n: int) -> int:
    out = 0
    for i in range(m):
        for j in range(n):
            if mask >> (i * n + j) & 1:
                out |= 1 << (j * m + i)
    return out


# ---------------------------------------------------------------------------
# independence characterizations for tensor matroids, valid in every
# characteristic


def disjoint_independent(fam: RowFamily, s: int, r: int) -> bool:
    """Disjoint row sections: independent iff each |A_i| <= r and total <= s*r."""
    seen: set = set()
    for a in fam.sets:
        if seen & a:
            raise ValueError("row sections are not pairwise disjoint")
        seen |= a
    return all(len(a) <= r for a in fam.sets) and fam.total <= s * r


def s1_independent(fam: RowFamily, r: int) -> bool:
    """Side dimension 1: pairwise disjoint sections with at most r cells."""
    seen: set = set()
    for a in fam.sets:
        if seen & a:
            return False
        seen |= a
    return fam.total <= r


def s2_independent(fam: RowFamily, r: int) -> bool:
    """Side dimension 2.

    Independent iff no column lies in three sections, the global pairwise
    overlap plus any section's private part fits in r, and the total fits in
    2r.  A section larger than r is immediately dependent.
    """
    if any(len(a) > r for a in fam.sets):
        return False
    classes = fam.multiplicity_classes()
    if any(c >= 3 for c in classes):
        return False
    overlap = sum(len(a & b) for a, b in combinations(fam.sets, 2))
    s1 = classes.get(1, frozenset())
    for k, a in enumerate(fam.sets):
        if overlap + len(a & s1) > r:
            return False
    return fam.total <= 2 * r


def s3_independent(fam: RowFamily, r: int) -> bool:
    """Side dimension 3: the five inequality families on S_1, S_2, S_3.

    Quantifiers are evaluated literally: the paired-overlap bound ranges over
    all unordered partitions of four distinct rows into two pairs, and the
    2r bound over all unordered row pairs.
    """
    if any(len(a) > r for a in fam.sets):
        return False
    classes = fam.multiplicity_classes()
    if any(c >= 4 for c in classes):
        return False
    s1 = classes.get(1, frozenset())
    s2 = classes.get(2, frozenset())
    s3 = classes.get(3, frozenset())
    n3 = len(s3)
    sets = fam.sets
    m = fam.m
    for a in sets:
        if len(a - s3) + n3 > r:
            return False
    for quad in combinations(range(m), 4):
        i, j, k, l = quad
        for (p, q), (u, w) in (((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))):
            if len((sets[p] & sets[q]) - s3) + len((sets[u] & sets[w]) - s3) + n3 > r:
                return False
    for i, j in combinations(range(m), 2):
        if len(sets[i] - s3) + len(sets[j] - s3) + len(s2 - (s3 | sets[i] | sets[j])) + 2 * n3 > 2 * r:
            return False
    return len(s1) + 2 * len(s2) + 3 * n3 <= 3 * r


def tensor_independent_det(e, m: int, n: int, s: int, r: int) -> bool:
    """Deterministic independence in the (s, r) tensor matroid, any
    characteristic; requires min(s, r) <= 3.

    ``e`` is a grid bitmask or a RowFamily.  When r <= 3 < s the test runs on
    the transposed pattern.
    """
    if not (0 <= s <= m and 0 <= r <= n):
        raise UnsupportedParametersError("require 0 <= s <= m and 0 <= r <= n")
    fam = e if isinstance(e, RowFamily) else RowFamily.from_mask(e, m, n)
    if s > 3:
        if r > 3:
            raise UnsupportedParametersError(
                f"no deterministic test for min(s, r) = {min(s, r)} > 3; use a Monte Carlo oracle"
            )
        return tensor_independent_det(fam.transpose(), n, m, r, s)
    if s == 0:
        return fam.total == 0
    if s == 1:
        return s1_independent(fam, r)
    if s == 2:
        return s2_independent(fam, r)
    return s3_independent(fam, r)


def tensor_rank_det(mask: int, m: int, n: int, s: int, r: int) -> int:
    """Greedy rank in the (s, r) tensor matroid via the deterministic test.

    Elements are inserted in row-major order; greedy closure is exact for
    matroids and the fixed order keeps runs reproducible.
    """
    current = 0
    rank = 0
    for i in range(m):
        for j in range(n):
            bit = 1 << (i * n + j)
            if mask & bit:
                if tensor_independent_det(current | bit, m, n, s, r):
                    current |= bit
                    rank += 1
    return rank


# ---------------------------------------------------------------------------
# Laman counting condition


@dataclass(frozen=True)
class Rectangle:
    """A witness rectangle S x T for a Laman-condition violation."""

    rows: frozenset
    cols: frozenset

    def bound(self, a: int, b: int) -> int:
        return len(self.rows) * b + len(self.cols) * a - a * b

    def cell_count(self, mask: int, m: int, n: int) -> int:
        return sum(
            1 for i in self.rows for j in self.cols if mask >> (i * n + j) & 1
        )

    def violates(self, mask: int, m: int, n: int, a: int, b: int) -> bool:
        return (
            len(self.rows) >= a
            and len(self.cols) >= b
            and self.cell_count(mask, m, n) > self.bound(a, b)
        )


def laman_violation(mask: int, m: int, n: int, a: int, b: int) -> Rectangle | None:
    """Find a rectangle S x T (|S| >= a, |T| >= b) with more than
    |S|b + |T|a - ab cells of the pattern, or None.

    For each S the best T of size t is the t columns with the largest counts
    against the S-rows (ties to the lowest column index), so enumerating all
    S and all t is complete.
    """
    if not (0 <= a <= m and 0 <= b <= n):
        raise UnsupportedParametersError("require 0 <= a <= m and 0 <= b <= n")
    if m > LAMAN_ROWS_CAP:
        raise BudgetExceededError(f"Laman search enumerates 2^m row subsets; m = {m} > {LAMAN_ROWS_CAP}")
    rows_bits = [(mask >> (i * n)) & ((1 << n) - 1) for i in range(m)]
    for smask in range(1 << m):
        srows = [i for i in range(m) if smask >> i & 1]
        if len(srows) < a:
            continue
        cnt = [0] * n
        for i in srows:
            rb = rows_bits[i]
            for j in range(n):
                if rb >> j & 1:
                    cnt[j] += 1
        order = sorted(range(n), key=lambda j: (-cnt[j], j))
        total = 0
        for t, j in enumerate(order, start=1):
            total += cnt[j]
            if t >= b and total > len(srows) * b + t * a - a * b:
                return Rectangle(frozenset(srows), frozenset(order[:t]))
    return None


def all_circuits_laman(m: int, n: int, a: int, b: int) -> bool:
    """Whether every circuit of the (a, b) bipartite rigidity matroid on
    [m] x [n] is a Laman circuit."""
    return a <= 1 or b <= 1 or m - a <= 2 or n - b <= 2


# ---------------------------------------------------------------------------
# fast bipartite rigidity rank (via duality)


def rank_bipartite_fast(mask: int, m: int, n: int, a: int, b: int) -> int:
    """Deterministic rank in the (a, b) bipartite rigidity matroid.

    Uses the dual identity rank(F) = |F| - (m-a)(n-b) + rank_T(complement)
    with the tensor rank computed greedily by the deterministic test;
    requires min(m - a, n - b) <= 3.
    """
    if not (0 <= a <= m and 0 <= b <= n):
        raise UnsupportedParametersError("require 0 <= a <= m and 0 <= b <= n")
    s, r = m - a, n - b
    if min(s, r) > 3:
        raise UnsupportedParametersError(
            f"fast rank needs min(m - a, n - b) <= 3, got {min(s, r)}"
        )
    full = (1 << (m * n)) - 1
    comp = full & ~mask
    rank_t = tensor_rank_det(comp, m, n, s, r)
    value = mask.bit_count() - s * r + rank_t
    assert 0 <= value <= min(mask.bit_count(), a * n + b * m - a * b)
    return value


def bipartite_independent_fast(mask: int, m: int, n: int, a: int, b: int) -> bool:
    return rank_bipartite_fast(mask, m, n, a, b) == mask.bit_count()


def find_circuit_fast(mask: int, m: int, n: int, a: int, b: int) -> int:
    """Greedily shrink a dependent pattern to a circuit mask it contains,
    using the deterministic rank function."""
    if bipartite_independent_fast(mask, m, n, a, b):
        raise ValueError("pattern is independent; it contains no circuit")
    for pos in range(m * n):
        bit = 1 << pos
        if mask & bit:
            smaller = mask & ~bit
            if not bipartite_independent_fast(smaller, m, n, a, b):
                mask = smaller
    return mask
