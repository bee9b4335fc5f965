"""Matroids of tensor, symmetric and wedge products of random generic vectors.

The matroid of products of *totally generic* vectors only depends on the
dimensions and the field characteristic.  We realize it by sampling
substitutions over an exact field that is large enough for a quantified
Schwartz-Zippel budget, taking the max rank over independent trials.  The
resulting oracles are Monte Carlo with one-sided error: a reported rank
never exceeds the true generic rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import FieldError
from .fields import (
    PrimeField,
    Rationals,
    Rng,
    char0_surrogate_field,
    field_for_characteristic,
)
from .matrices import Matrix, column_kernel
from .matroids import GroundSet, MatroidOracle, MonteCarlo

DEFAULT_TRIALS = 5
MIN_GENERIC_FIELD_SIZE = 1 << 30


def _resolve_field(characteristic: int, explicit, min_field_size: int, char0_surrogate: bool):
    if explicit is not None:
        if characteristic != getattr(explicit, "characteristic", None) and not (
            characteristic == 0 and char0_surrogate
        ):
            raise FieldError("field characteristic does not match configuration")
        if characteristic != 0 and explicit.size < min_field_size:
            raise FieldError(
                f"field size {explicit.size} below genericity floor {min_field_size}"
            )
        return explicit
    if characteristic == 0:
        return char0_surrogate_field() if char0_surrogate else Rationals()
    return field_for_characteristic(characteristic, min_field_size)


def _validated(cfg):
    if cfg.characteristic != 0:
        from .fields import is_prime

        if not is_prime(cfg.characteristic):
            raise FieldError("characteristic must be 0 or prime")
    if cfg.trials < 1:
        raise ValueError("trials must be positive")
    object.__setattr__(
        cfg,
        "field",
        _resolve_field(cfg.characteristic, cfg.field, cfg.min_field_size, cfg.char0_surrogate),
    )


@dataclass(frozen=True)
class TensorConfig:
    """Products u_i (x) v_j of m generic s-vectors and n generic r-vectors."""

    m: int
    n: int
    s: int
    r: int
    characteristic: int = 0
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    field: object = None
    min_field_size: int = MIN_GENERIC_FIELD_SIZE
    char0_surrogate: bool = False

    def __post_init__(self):
        if not (0 <= self.s <= self.m and 0 <= self.r <= self.n):
            raise ValueError("require 0 <= s <= m and 0 <= r <= n")
        _validated(self)

    @property
    def ground(self) -> GroundSet:
        return GroundSet.grid(self.m, self.n)


@dataclass(frozen=True)
class SymConfig:
    """Products v_i v_j (including squares) of n generic r-vectors."""

    n: int
    r: int
    characteristic: int = 0
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    field: object = None
    min_field_size: int = MIN_GENERIC_FIELD_SIZE
    char0_surrogate: bool = False

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise ValueError("require 0 <= r <= n")
        _validated(self)

    @property
    def ground(self) -> GroundSet:
        return GroundSet.pairs_and_singletons(self.n)


@dataclass(frozen=True)
class WedgeConfig:
    """Products v_i ^ v_j of n generic r-vectors."""

    n: int
    r: int
    characteristic: int = 0
    trials: int = DEFAULT_TRIALS
    seed: int = 0
    field: object = None
    min_field_size: int = MIN_GENERIC_FIELD_SIZE
    char0_surrogate: bool = False

    def __post_init__(self):
        if not 0 <= self.r <= self.n:
            raise ValueError("require 0 <= r <= n")
        _validated(self)

    @property
    def ground(self) -> GroundSet:
        return GroundSet.pairs(self.n)


def _sample_vectors(field, count: int, dim: int, rng: Rng) -> list[list]:
    return [[field.sample_uniform(rng) for _ in range(dim)] for _ in range(count)]


def build_tensor_columns(cfg: TensorConfig, rng: Rng) -> Matrix:
    """s*r x m*n matrix; column (i, j) is the Kronecker product u_i (x) v_j.

    Column order matches ``GroundSet.grid(m, n)`` (row-major); coordinate
    (a, b) of the product sits in matrix row a*r + b.
    """
    f = cfg.field
    us = _sample_vectors(f, cfg.m, cfg.s, rng)
    vs = _sample_vectors(f, cfg.n, cfg.r, rng)
    rows = cfg.s * cfg.r
    entries = [f.zero] * (rows * cfg.m * cfg.n)
    ncols = cfg.m * cfg.n
    for i in range(cfg.m):
        for j in range(cfg.n):
            col = i * cfg.n + j
            for a in range(cfg.s):
                ua = us[i][a]
                for b in range(cfg.r):
                    entries[(a * cfg.r + b) * ncols + col] = f.mul(ua, vs[j][b])
    return Matrix(f, rows, ncols, entries)


def build_sym_columns(cfg: SymConfig, rng: Rng) -> Matrix:
    """binom(r+1, 2) x (binom(n, 2) + n) matrix of pairwise products.

    Monomial basis rows: e_a e_b for a < b in lex order, then e_a^2.
    Column {i, j} (i < j) holds v_i v_j: coordinate (a, b), a < b, equals
    v_i[a] v_j[b] + v_i[b] v_j[a]; coordinate (a, a) equals v_i[a] v_j[a].
    Singleton column i holds v_i^2: coordinate (a, b) equals 2 v_i[a] v_i[b]
    (which vanishes in characteristic 2) and coordinate (a, a) equals
    v_i[a]^2.
    """
    f = cfg.field
    n, r = cfg.n, cfg.r
    vs = _sample_vectors(f, n, r, rng)
    pair_rows = [(a, b) for a in range(r) for b in range(a + 1, r)]
    diag_rows = [(a, a) for a in range(r)]
    basis = pair_rows + diag_rows
    ncols = n * (n - 1) // 2 + n
    nrows = len(basis)
    entries = [f.zero] * (nrows * ncols)

    def fill(col, vi, vj):
        for rix, (a, b) in enumerate(basis):
            if a == b:
                val = f.mul(vi[a], vj[a])
            else:
                val = f.add(f.mul(vi[a], vj[b]), f.mul(vi[b], vj[a]))
            entries[rix * ncols + col] = val

    col = 0
    for i in range(n):
        for j in range(i + 1, n):
            fill(col, vs[i], vs[j])
            col += 1
    for i in range(n):
        fill(col, vs[i], vs[i])
        col += 1
    return Matrix(f, nrows, ncols, entries)


def build_wedge_columns(cfg: WedgeConfig, rng: Rng) -> Matrix:
    """binom(r, 2) x binom(n, 2) matrix; column {i, j} is v_i ^ v_j.

    Basis rows e_a ^ e_b for a < b in lex order; the (a, b) coordinate is
    v_i[a] v_j[b] - v_i[b] v_j[a].
    """
    f = cfg.field
    n, r = cfg.n, cfg.r
    vs = _sample_vectors(f, n, r, rng)
    basis = [(a, b) for a in range(r) for b in range(a + 1, r)]
    ncols = n * (n - 1) // 2
    nrows = len(basis)
    entries = [f.zero] * (nrows * ncols)
    col = 0
    for i in range(n):
        for j in range(i + 1, n):
            for rix, (a, b) in enumerate(basis):
                val = f.sub(f.mul(vs[i][a], vs[j][b]), f.mul(vs[i][b], vs[j][a]))
                entries[rix * ncols + col] = val
            col += 1
    return Matrix(f, nrows, ncols, entries)


_BUILDERS = {
    "tensor": build_tensor_columns,
    "sym": build_sym_columns,
    "wedge": build_wedge_columns,
}


def mc_oracle(kind: str, cfg) -> MatroidOracle:
    """Monte Carlo rank oracle: max of rank over ``cfg.trials`` resamplings.

    Per-query one-sided error is at most (2*rows / field size)^trials, the
    Schwartz-Zippel bound for the defining minor of total degree at most
    2*min(|S|, rows), compounded over independent trials.
    """
    build = _BUILDERS[kind]
    ground = cfg.ground
    base = Rng(cfg.seed)
    kernels = [column_kernel(build(cfg, base.spawn(t))) for t in range(cfg.trials)]
    rows = _matrix_rows(kind, cfg)

    def rank_fn(mask: int) -> int:
        return max(k.rank_of(mask) for k in kernels)

    def bulk_fn():
        return np.maximum.reduce([k.all_subset_ranks() for k in kernels])

    eps = min(Fraction(1), Fraction(2 * max(rows, 1), cfg.field.size))
    return MatroidOracle(
        ground,
        rank_fn,
        certainty=MonteCarlo(eps**cfg.trials),
        bulk_fn=bulk_fn,
        name=f"{kind}{_describe(kind, cfg)}",
    )


def _matrix_rows(kind: str, cfg) -> int:
    if kind == "tensor":
        return cfg.s * cfg.r
    if kind == "sym":
        return cfg.r * (cfg.r + 1) // 2
    return cfg.r * (cfg.r - 1) // 2


def _describe(kind: str, cfg) -> str:
    if kind == "tensor":
        return f"({cfg.m},{cfg.n};{cfg.s},{cfg.r};p={cfg.characteristic})"
    return f"({cfg.n};{cfg.r};p={cfg.characteristic})"


def tensor_oracle(
    m: int,
    n: int,
    s: int,
    r: int,
    characteristic: int = 0,
    trials: int = DEFAULT_TRIALS,
    seed: int = 0,
    **kw,
) -> MatroidOracle:
    return mc_oracle("tensor", TensorConfig(m, n, s, r, characteristic, trials, seed, **kw))


def sym_power_oracle(
    n: int, r: int, characteristic: int = 0, trials: int = DEFAULT_TRIALS, seed: int = 0, **kw
) -> MatroidOracle:
    return mc_oracle("sym", SymConfig(n, r, characteristic, trials, seed, **kw))


def wedge_power_oracle(
    n: int, r: int, characteristic: int = 0, trials: int = DEFAULT_TRIALS, seed: int = 0, **kw
) -> MatroidOracle:
    return mc_oracle("wedge", WedgeConfig(n, r, characteristic, trials, seed, **kw))
