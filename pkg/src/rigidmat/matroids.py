"""Matroid rank oracles over finite ground sets.

A :class:`MatroidOracle` wraps a rank function over bitmask-encoded subsets
of a :class:`GroundSet` and derives independence, spanning, duals, minors,
circuit enumeration and matroid equality from it.  Oracles carry a
:class:`Certainty` tag: deterministic, or Monte Carlo with an explicit
one-sided error bound per rank query (reported rank never exceeds the true
rank).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BudgetExceededError, GroundMismatchError

EXHAUSTIVE_EQUALITY_CAP = 22
CIRCUIT_ENUMERATION_CAP = 30


def bits(mask: int):
    """Yield set bit positions of ``mask`` in increasing order."""
    j = 0
    while mask:
        if mask & 1:
            yield j
        mask >>= 1
        j += 1


def popcounts(n: int) -> np.ndarray:
    """Vector of popcounts for all masks below 2^n."""
    pc = np.zeros(1 << n, dtype=np.uint8)
    for k in range(n):
        pc[1 << k : 1 << (k + 1)] = pc[: 1 << k] + 1
    return pc


@dataclass(frozen=True)
class Deterministic:
    def combine(self, queries: int) -> "Deterministic":
        return self

    def describe(self) -> str:
        return "deterministic"


@dataclass(frozen=True)
class MonteCarlo:
    """One-sided per-query error bound: P[reported rank < true rank] <= bound."""

    error_bound: Fraction

    def combine(self, queries: int) -> "MonteCarlo":
        return MonteCarlo(self.error_bound * queries)

    def describe(self) -> str:
        b = self.error_bound
        return f"monte-carlo(error<=({b.numerator}/{b.denominator}))"


class GroundSet:
    """Ordered, distinct element labels; positions are canonical ids."""

    __slots__ = ("labels", "index")

    def __init__(self, labels):
        labels = tuple(labels)
        index = {lab: i for i, lab in enumerate(labels)}
        if len(index) != len(labels):
            raise ValueError("ground set labels must be distinct")
        self.labels = labels
        self.index = index

    @classmethod
    def grid(cls, m: int, n: int) -> "GroundSet":
        """[m] x [n] in row-major order; bit i*n+j <-> cell (i, j), 0-based."""
        return cls((i, j) for i in range(m) for j in range(n))

    @classmethod
    def pairs(cls, n: int) -> "GroundSet":
        """Unordered pairs {i, j} of [n], as sorted tuples in lex order."""
        return cls((i, j) for i in range(n) for j in range(i + 1, n))

    @classmethod
    def pairs_and_singletons(cls, n: int) -> "GroundSet":
        """Pairs in lex order followed by the n singleton labels."""
        labels = [(i, j) for i in range(n) for j in range(i + 1, n)]
        labels += list(range(n))
        return cls(labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def mask_of(self, elements) -> int:
        m = 0
        for e in elements:
            m |= 1 << self.index[e]
        return m

    def __eq__(self, other):
        return isinstance(other, GroundSet) and other.labels == self.labels

    def __hash__(self):
        return hash(self.labels)

    def __len__(self):
        return len(self.labels)

    def __repr__(self):
        return f"GroundSet(size={self.size})"


class EdgeSet:
    """A subset of a ground set, stored as a bitmask."""

    __slots__ = ("ground", "mask")

    def __init__(self, ground: GroundSet, mask: int):
        if mask < 0 or mask > ground.full_mask:
            raise ValueError("mask outside ground set range")
        self.ground = ground
        self.mask = mask

    @classmethod
    def of(cls, ground: GroundSet, elements) -> "EdgeSet":
        return cls(ground, ground.mask_of(elements))

    @classmethod
    def empty(cls, ground: GroundSet) -> "EdgeSet":
        return cls(ground, 0)

    @classmethod
    def full(cls, ground: GroundSet) -> "EdgeSet":
        return cls(ground, ground.full_mask)

    def elements(self) -> list:
        return [self.ground.labels[i] for i in bits(self.mask)]

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def complement(self) -> "EdgeSet":
        return EdgeSet(self.ground, self.ground.full_mask ^ self.mask)

    def __contains__(self, label) -> bool:
        return bool(self.mask >> self.ground.index[label] & 1)

    def __or__(self, other: "EdgeSet") -> "EdgeSet":
        self._check(other)
        return EdgeSet(self.ground, self.mask | other.mask)

    def __and__(self, other: "EdgeSet") -> "EdgeSet":
        self._check(other)
        return EdgeSet(self.ground, self.mask & other.mask)

    def __sub__(self, other: "EdgeSet") -> "EdgeSet":
        self._check(other)
        return EdgeSet(self.ground, self.mask & ~other.mask)

    def _check(self, other):
        if other.ground != self.ground:
            raise GroundMismatchError("edge sets over different ground sets")

    def __eq__(self, other):
        return isinstance(other, EdgeSet) and other.ground == self.ground and other.mask == self.mask

    def __hash__(self):
        return hash((self.ground, self.mask))

    def __repr__(self):
        return f"EdgeSet({sorted(map(str, self.elements()))})"


class MatroidOracle:
    """Rank-function oracle with memoization and derived matroid operations."""

    def __init__(self, ground: GroundSet, rank_fn, certainty=Deterministic(), bulk_fn=None, name: str = ""):
        self.ground = ground
        self.certainty = certainty
        self.name = name
        self._rank_fn = rank_fn
        self._bulk_fn = bulk_fn
        self._memo: dict[int, int] = {}
        self._all: np.ndarray | None = None
        self._lock = threading.Lock()

    # -- queries ------------------------------------------------------------
    def _coerce(self, s) -> int:
        if isinstance(s, EdgeSet):
            if s.ground != self.ground:
                raise GroundMismatchError("edge set over a different ground set")
            return s.mask
        return int(s)

    def rank(self, s) -> int:
        mask = self._coerce(s)
        if self._all is not None:
            return int(self._all[mask])
        r = self._memo.get(mask)
        if r is None:
            r = self._rank_fn(mask)
            self._memo[mask] = r
        return r

    def is_independent(self, s) -> bool:
        mask = self._coerce(s)
        return self.rank(mask) == mask.bit_count()

    def is_spanning(self, s) -> bool:
        return self.rank(s) == self.total_rank

    def is_dependent(self, s) -> bool:
        return not self.is_independent(s)

    @property
    def total_rank(self) -> int:
        return self.rank(self.ground.full_mask)

    def all_ranks(self) -> np.ndarray:
        """Rank of every subset, index = bitmask.  Cached after first call."""
        with self._lock:
            if self._all is None:
                if self.ground.size > EXHAUSTIVE_EQUALITY_CAP:
                    raise BudgetExceededError(
                        f"all_ranks over {self.ground.size} elements exceeds cap {EXHAUSTIVE_EQUALITY_CAP}"
                    )
                if self._bulk_fn is not None:
                    arr = np.asarray(self._bulk_fn(), dtype=np.uint8)
                else:
                    arr = np.fromiter(
                        (self.rank(m) for m in range(1 << self.ground.size)),
                        dtype=np.uint8,
                        count=1 << self.ground.size,
                    )
                self._all = arr
            return self._all

    # -- derived matroids -----------------------------------------------------
    def dual(self) -> "MatroidOracle":
        """Bases of the dual are complements of bases: rank*(F) = |F| - r(E) + r(E \\ F)."""
        full = self.ground.full_mask
        total = self.total_rank

        def rank_fn(mask: int) -> int:
            return mask.bit_count() - total + self.rank(full ^ mask)

        def bulk_fn():
            arr = self.all_ranks().astype(np.int16)
            pc = popcounts(self.ground.size).astype(np.int16)
            return (pc + arr[::-1] - total).astype(np.uint8)

        return MatroidOracle(
            self.ground,
            rank_fn,
            certainty=self.certainty.combine(2),
            bulk_fn=bulk_fn,
            name=f"dual({self.name})" if self.name else "dual",
        )

    def minor(self, contract, delete) -> "MatroidOracle":
        """Contract then delete: rank'(F) = rank(F | C) - rank(C)."""
        cmask = self._coerce(contract)
        dmask = self._coerce(delete)
        if cmask & dmask:
            raise ValueError("contract and delete sets overlap")
        keep = [i for i in range(self.ground.size) if not (cmask | dmask) >> i & 1]
        sub_ground = GroundSet(self.ground.labels[i] for i in keep)
        rank_c = self.rank(cmask)

        def expand(mask: int) -> int:
            out = 0
            for b in bits(mask):
                out |= 1 << keep[b]
            return out

        def rank_fn(mask: int) -> int:
            return self.rank(expand(mask) | cmask) - rank_c

        def bulk_fn():
            t = len(keep)
            idx = np.zeros(1 << t, dtype=np.int64)
            for b, pos in enumerate(keep):
                idx[1 << b : 1 << (b + 1)] = idx[: 1 << b] + (1 << pos)
            parent = self.all_ranks()
            return (parent[idx | cmask].astype(np.int16) - rank_c).astype(np.uint8)

        bulk = bulk_fn if self.ground.size <= EXHAUSTIVE_EQUALITY_CAP else None
        return MatroidOracle(
            sub_ground,
            rank_fn,
            certainty=self.certainty.combine(2),
            bulk_fn=bulk,
            name=f"minor({self.name})" if self.name else "minor",
        )

    def contract(self, c) -> "MatroidOracle":
        return self.minor(c, 0)

    def delete(self, d) -> "MatroidOracle":
        return self.minor(0, d)

    def restrict(self, keep) -> "MatroidOracle":
        keep_mask = self._coerce(keep)
        return self.minor(0, self.ground.full_mask ^ keep_mask)

    def __repr__(self):
        return f"MatroidOracle({self.name or 'anonymous'}, ground={self.ground.size}, {self.certainty.describe()})"


# ---------------------------------------------------------------------------
# circuits


def find_circuit(oracle: MatroidOracle, dependent) -> EdgeSet:
    """Greedily shrink a dependent set to a circuit it contains."""
    mask = oracle._coerce(dependent)
    if oracle.rank(mask) == mask.bit_count():
        raise ValueError("find_circuit requires a dependent set")
    for j in bits(mask):
        smaller = mask & ~(1 << j)
        if oracle.rank(smaller) < smaller.bit_count():
            mask = smaller
    return EdgeSet(oracle.ground, mask)


def is_circuit(oracle: MatroidOracle, s) -> bool:
    mask = oracle._coerce(s)
    size = mask.bit_count()
    if size == 0 or oracle.rank(mask) != size - 1:
        return False
    return all(oracle.rank(mask & ~(1 << j)) == size - 1 for j in bits(mask))


def enumerate_circuits(oracle: MatroidOracle, max_size: int | None = None, within=None) -> list[EdgeSet]:
    """All circuits of size <= max_size (inside ``within`` if given).

    Exhaustive: the searched ground (or restriction) must have at most
    ``CIRCUIT_ENUMERATION_CAP`` elements.  Each reported circuit is verified
    minimal.  Supersets of found circuits are pruned.
    """
    from itertools import combinations

    if within is not None:
        wmask = oracle._coerce(within)
    else:
        wmask = oracle.ground.full_mask
    elems = list(bits(wmask))
    if len(elems) > CIRCUIT_ENUMERATION_CAP:
        raise BudgetExceededError(
            f"circuit enumeration over {len(elems)} elements exceeds cap {CIRCUIT_ENUMERATION_CAP}"
        )
    if max_size is None:
        max_size = len(elems)
    found_masks: list[int] = []
    out: list[EdgeSet] = []
    for size in range(1, max_size + 1):
        for combo in combinations(elems, size):
            mask = 0
            for e in combo:
                mask |= 1 << e
            if any(mask & c == c for c in found_masks):
                continue
            if oracle.rank(mask) == size - 1:
                # minimality: every one-element deletion independent
                if all(oracle.rank(mask & ~(1 << j)) == size - 1 for j in bits(mask)):
                    found_masks.append(mask)
                    out.append(EdgeSet(oracle.ground, mask))
    return out


# ---------------------------------------------------------------------------
# equality


@dataclass
class EqualityReport:
    equal: bool
    mode: str
    checked: int
    witness: EdgeSet | None = None
    rank_a: int | None = None
    rank_b: int | None = None

    def __bool__(self):
        return self.equal


def matroids_equal(
    a: MatroidOracle,
    b: MatroidOracle,
    mode: str = "exhaustive",
    samples: int = 10000,
    rng=None,
) -> EqualityReport:
    """Compare rank functions, exhaustively or on a sample.

    Sampled mode checks all subsets of size <= 4 plus ``samples`` uniform
    random subsets.  On inequality the report carries a witness subset with
    both ranks.
    """
    if a.ground.size != b.ground.size:
        raise GroundMismatchError("matroids over ground sets of different size")
    n = a.ground.size
    if mode == "exhaustive":
        if n > EXHAUSTIVE_EQUALITY_CAP:
            raise BudgetExceededError(f"exhaustive equality over {n} elements exceeds cap")
        ra, rb = a.all_ranks(), b.all_ranks()
        if np.array_equal(ra, rb):
            return EqualityReport(True, "exhaustive", 1 << n)
        w = int(np.nonzero(ra != rb)[0][0])
        return EqualityReport(False, "exhaustive", 1 << n, EdgeSet(a.ground, w), int(ra[w]), int(rb[w]))
    if mode == "sampled":
        from itertools import combinations

        masks = set()
        for size in range(min(4, n) + 1):
            for combo in combinations(range(n), size):
                m = 0
                for e in combo:
                    m |= 1 << e
                masks.add(m)
        if rng is None:
            from .fields import Rng

            rng = Rng(0)
        for _ in range(samples):
            masks.add(rng.randrange(1 << n))
        for m in masks:
            ra, rb = a.rank(m), b.rank(m)
            if ra != rb:
                return EqualityReport(False, "sampled", len(masks), EdgeSet(a.ground, m), ra, rb)
        return EqualityReport(True, "sampled", len(masks))
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# axiom spot checks (used by tests and `selfcheck`)


def spot_check_rank_axioms(oracle: MatroidOracle, rng, probes: int = 1000) -> list[str]:
    """Probe normalization, unit increase, monotonicity and submodularity.

    Returns a list of human-readable violations (empty when all probes pass).
    """
    n = oracle.ground.size
    full = oracle.ground.full_mask
    bad: list[str] = []
    if oracle.rank(0) != 0:
        bad.append("rank(empty) != 0")
    for _ in range(probes):
        x = rng.randrange(full + 1)
        e = 1 << rng.randrange(n)
        rx, rxe = oracle.rank(x), oracle.rank(x | e)
        if not (rx <= rxe <= rx + 1):
            bad.append(f"unit increase fails at mask={x:#x} elem={e:#x}")
        y = rng.randrange(full + 1)
        rxy, ry = oracle.rank(x | y), oracle.rank(y)
        if rxy < max(rx, ry):
            bad.append(f"monotonicity fails at masks={x:#x},{y:#x}")
        if oracle.rank(x | y) + oracle.rank(x & y) > rx + ry:
            bad.append(f"submodularity fails at masks={x:#x},{y:#x}")
        if bad:
            break
    return bad
