"""Rigidity-side matroids from explicit variable-entry matrices.

Bipartite rigidity, hyperconnectivity and symmetric matrix completion are
column matroids of structured matrices whose entries are indeterminates; we
query them through random substitutions over exact fields, with the same
one-sided Monte Carlo contract as the product matroids.  The duality checks
pair each family with its product-matroid dual:

    bipartite(m, n, a, b)   <->  tensor(m, n, m-a, n-b) in characteristic 0
    sym-completion(n, d)    <->  symmetric power(n, n-d)
    hyperconnectivity(n, d) <->  wedge power(n, n-d)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import FieldError
from .fields import Rng
from .matrices import Matrix, column_kernel
from .matroids import EdgeSet, GroundSet, MatroidOracle, MonteCarlo, matroids_equal
from .products import (
    DEFAULT_TRIALS,
    MIN_GENERIC_FIELD_SIZE,
    _resolve_field,
    sym_power_oracle,
    tensor_oracle,
    wedge_power_oracle,
)


def _common_validate(cfg):
    if cfg.trials < 1:
        raise ValueError("trials must be positive")
    object.__setattr__(
        cfg,
        "field",
        _resolve_field(cfg.characteristic, cfg.field, cfg.min_field_size, cfg.char0_surrogate),
    )


@dataclass(frozen=True)
class BipartiteRigidityConfig:
    m: int
    n: int
    a: int
    b: int
    characteristic: int = 0
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    field: object = None
    min_field_size: int = MIN_GENERIC_FIELD_SIZE
    char0_surrogate: bool = False

    def __post_init__(self):
        if not (0 <= self.a <= self.m and 0 <= self.b <= self.n):
            raise ValueError("require 0 <= a <= m and 0 <= b <= n")
        _common_validate(self)

    @property
    def ground(self) -> GroundSet:
        return GroundSet.grid(self.m, self.n)

    @property
    def matrix_rows(self) -> int:
        return self.a * self.n + self.b * self.m


@dataclass(frozen=True)
class HyperconnectivityConfig:
    n: int
    d: int
    characteristic: int = 0
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    field: object = None
    min_field_size: int = MIN_GENERIC_FIELD_SIZE
    char0_surrogate: bool = False

    def __post_init__(self):
        if not 0 <= self.d <= self.n:
            raise ValueError("require 0 <= d <= n")
        _common_validate(self)

    @property
    def ground(self) -> GroundSet:
        return GroundSet.pairs(self.n)

    @property
    def matrix_rows(self) -> int:
        return self.n * self.d


@dataclass(frozen=True)
class SymCompletionConfig:
    n: int
    d: int
    characteristic: int = 0
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    field: object = None
    min_field_size: int = MIN_GENERIC_FIELD_SIZE
    char0_surrogate: bool = False

    def __post_init__(self):
        if not 0 <= self.d <= self.n:
            raise ValueError("require 0 <= d <= n")
        _common_validate(self)
        if self.field.characteristic == 2:
            raise FieldError(
                "symmetric completion over characteristic 2 is rejected: the "
                "rank-d symmetric parametrization is inseparable there, so the "
                "column matroid would not be the completion matroid"
            )

    @property
    def ground(self) -> GroundSet:
        return GroundSet.pairs_and_singletons(self.n)

    @property
    def matrix_rows(self) -> int:
        return self.n * self.d


def build_bipartite_matrix(m: int, n: int, a: int, b: int, field, rng: Rng) -> Matrix:
    """(a*n + b*m) x (m*n) matrix whose column matroid is bipartite rigidity.

    Rows (j, k) for j < a, k < n carry x[p][j] in column (p, k) for every
    p < m; rows (l, i) for l < b, i < m carry y[q][l] in column (i, q) for
    every q < n.  Columns follow the row-major grid order.
    """
    xs = [[field.sample_uniform(rng) for _ in range(a)] for _ in range(m)]
    ys = [[field.sample_uniform(rng) for _ in range(b)] for _ in range(n)]
    nrows = a * n + b * m
    ncols = m * n
    entries = [field.zero] * (nrows * ncols)
    row = 0
    for j in range(a):
        for k in range(n):
            for p in range(m):
                entries[row * ncols + (p * n + k)] = xs[p][j]
            row += 1
    for l in range(b):
        for i in range(m):
            for q in range(n):
                entries[row * ncols + (i * n + q)] = ys[q][l]
            row += 1
    return Matrix(field, nrows, ncols, entries)


def build_hyper_matrix(n: int, d: int, field, rng: Rng) -> Matrix:
    """n*d x binom(n, 2) matrix whose column matroid is hyperconnectivity.

    Row (i, j) holds the wedge coordinates of (sum_k x[k][j] e_k) ^ e_i in
    the basis {e_a ^ e_b : a < b}: +x[k][j] in column {k, i} for k < i and
    -x[k][j] in column {i, k} for k > i.
    """
    xs = [[field.sample_uniform(rng) for _ in range(d)] for _ in range(n)]
    pair_index = {}
    labels = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for c, lab in enumerate(labels):
        pair_index[lab] = c
    nrows = n * d
    ncols = len(labels)
    entries = [field.zero] * (nrows * ncols)
    row = 0
    for i in range(n):
        for j in range(d):
            for k in range(n):
                if k == i:
                    continue
                val = xs[k][j]
                if k > i:
                    val = field.neg(val)
                entries[row * ncols + pair_index[(min(i, k), max(i, k))]] = val
            row += 1
    return Matrix(field, nrows, ncols, entries)


def build_sym_completion_matrix(n: int, d: int, field, rng: Rng) -> Matrix:
    """n*d x (binom(n, 2) + n) matrix for rank-d symmetric completion.

    Row (i, j) has 2*x[i][j] in singleton column i and x[k][j] in pair
    column {i, k} for every k != i.  Characteristic 2 is rejected by the
    configuration layer.
    """
    if field.characteristic == 2:
        raise FieldError("symmetric completion matrix undefined over characteristic 2")
    xs = [[field.sample_uniform(rng) for _ in range(d)] for _ in range(n)]
    pair_labels = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pair_index = {lab: c for c, lab in enumerate(pair_labels)}
    npairs = len(pair_labels)
    ncols = npairs + n
    nrows = n * d
    entries = [field.zero] * (nrows * ncols)
    row = 0
    for i in range(n):
        for j in range(d):
            v = xs[i][j]
            entries[row * ncols + npairs + i] = field.add(v, v)
            for k in range(n):
                if k != i:
                    entries[row * ncols + pair_index[(min(i, k), max(i, k))]] = xs[k][j]
            row += 1
    return Matrix(field, nrows, ncols, entries)


_RIGIDITY_BUILDERS = {
    BipartiteRigidityConfig: lambda c, rng: build_bipartite_matrix(c.m, c.n, c.a, c.b, c.field, rng),
    HyperconnectivityConfig: lambda c, rng: build_hyper_matrix(c.n, c.d, c.field, rng),
    SymCompletionConfig: lambda c, rng: build_sym_completion_matrix(c.n, c.d, c.field, rng),
}


def rigidity_oracle(cfg) -> MatroidOracle:
    """Monte Carlo column-matroid oracle for a rigidity-family configuration."""
    build = _RIGIDITY_BUILDERS[type(cfg)]
    base = Rng(cfg.seed)
    kernels = [column_kernel(build(cfg, base.spawn(t))) for t in range(cfg.trials)]

    def rank_fn(mask: int) -> int:
        return max(k.rank_of(mask) for k in kernels)

    def bulk_fn():
        return np.maximum.reduce([k.all_subset_ranks() for k in kernels])

    eps = min(Fraction(1), Fraction(2 * max(cfg.matrix_rows, 1), cfg.field.size))
    return MatroidOracle(
        cfg.ground,
        rank_fn,
        certainty=MonteCarlo(eps**cfg.trials),
        bulk_fn=bulk_fn,
        name=type(cfg).__name__.replace("Config", "") + repr(tuple(_key_params(cfg))),
    )


def _key_params(cfg):
    if isinstance(cfg, BipartiteRigidityConfig):
        return (cfg.m, cfg.n, cfg.a, cfg.b)
    return (cfg.n, cfg.d)


def bipartite_rigidity_oracle(m, n, a, b, **kw) -> MatroidOracle:
    return rigidity_oracle(BipartiteRigidityConfig(m, n, a, b, **kw))


def hyperconnectivity_oracle(n, d, **kw) -> MatroidOracle:
    return rigidity_oracle(HyperconnectivityConfig(n, d, **kw))


def sym_completion_oracle(n, d, **kw) -> MatroidOracle:
    return rigidity_oracle(SymCompletionConfig(n, d, **kw))


def graph_rigidity_oracle(n: int, d: int, **kw) -> MatroidOracle:
    """Generic graph rigidity in R^d on the edges of K_n.

    Obtained by contracting the diagonal (singleton) elements of the rank
    (d+1) symmetric completion matroid.
    """
    base = sym_completion_oracle(n, d + 1, **kw)
    singles = EdgeSet.of(base.ground, range(n))
    return base.contract(singles)


@dataclass
class DualityReport:
    family: str
    params: tuple
    equal: bool
    mode: str
    checked: int
    witness: list | None
    witness_ranks: tuple | None
    certainty: str

    def __bool__(self):
        return self.equal


def verify_duality(
    family: str,
    params: tuple,
    mode: str = "exhaustive",
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    characteristic: int = 0,
    samples: int = 10000,
    char0_surrogate: bool = False,
) -> DualityReport:
    """Check dual(rigidity oracle) == product-matroid oracle.

    Both sides are built independently (fresh trial seeds); characteristic 0
    is required for the duality statements, with an optional large-prime
    surrogate for wide exhaustive sweeps.
    """
    if characteristic != 0:
        raise ValueError("the duality statements are specific to characteristic 0")
    kw = dict(trials=trials, char0_surrogate=char0_surrogate)
    if family == "bipartite":
        m, n, a, b = params
        rig = bipartite_rigidity_oracle(m, n, a, b, seed=seed, **kw)
        gen = tensor_oracle(m, n, m - a, n - b, seed=seed + 1, **kw)
    elif family == "sym":
        n, d = params
        rig = sym_completion_oracle(n, d, seed=seed, **kw)
        gen = sym_power_oracle(n, n - d, seed=seed + 1, **kw)
    elif family == "wedge":
        n, d = params
        rig = hyperconnectivity_oracle(n, d, seed=seed, **kw)
        gen = wedge_power_oracle(n, n - d, seed=seed + 1, **kw)
    else:
        raise ValueError(f"unknown duality family {family!r}")
    report = matroids_equal(rig.dual(), gen, mode=mode, samples=samples, rng=Rng(seed + 2))
    return DualityReport(
        family=family,
        params=tuple(params),
        equal=report.equal,
        mode=report.mode,
        checked=report.checked,
        witness=report.witness.elements() if report.witness is not None else None,
        witness_ranks=(report.rank_a, report.rank_b) if not report.equal else None,
        certainty=f"{rig.certainty.combine(2).describe()} vs {gen.certainty.describe()}",
    )
