"""Dense exact matrices and column-subset rank kernels.

Ranks are computed by exact elimination only: modular Gaussian elimination
over finite fields and fraction-free (Bareiss) elimination over the
rationals.  The column kernels additionally support computing the rank of
*every* column subset of a fixed matrix in one shared depth-first sweep,
which is what makes exhaustive matroid scans affordable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import numpy as np

from .errors import FieldError
from .fields import ExtensionField, PrimeField, Rationals, Rng

_EXHAUSTIVE_COLS_CAP = 22


class Matrix:
    """Immutable dense matrix over an exact field (row-major entries)."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise FieldError(f"expected {rows * cols} entries, got {len(entries)}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def from_rows(cls, field, row_lists) -> "Matrix":
        row_lists = [list(r) for r in row_lists]
        rows = len(row_lists)
        cols = len(row_lists[0]) if rows else 0
        flat = [x for r in row_lists for x in r]
        return cls(field, rows, cols, flat)

    @classmethod
    def zero(cls, field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, [field.zero] * (rows * cols))

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        e = [field.zero] * (n * n)
        for i in range(n):
            e[i * n + i] = field.one
        return cls(field, n, n, e)

    @classmethod
    def random(cls, field, rows: int, cols: int, rng: Rng) -> "Matrix":
        return cls(field, rows, cols, [field.sample_uniform(rng) for _ in range(rows * cols)])

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def column(self, j: int) -> list:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def transpose(self) -> "Matrix":
        return Matrix(
            self.field,
            self.cols,
            self.rows,
            [self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)],
        )

    def rank(self) -> int:
        return mat_rank(self)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
            and other.cols == self.cols
            and other.entries == self.entries
        )

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.rows}x{self.cols})"


# ---------------------------------------------------------------------------
# rank by exact elimination


def _rank_prime(rows: list[list[int]], p: int) -> int:
    m = [r[:] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c] % p), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [v * inv % p for v in m[rank]]
        prow = m[rank]
        for i in range(rank + 1, nrows):
            f = m[i][c] % p
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_bareiss(rows: list[list[int]]) -> int:
    """Fraction-free elimination; intermediate entries are matrix minors."""
    m = [r[:] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        prow = m[rank]
        lead = prow[c]
        for i in range(rank + 1, nrows):
            f = m[i][c]
            m[i] = [(lead * a - f * b) // prev for a, b in zip(m[i], prow)]
        prev = lead
        rank += 1
        if rank == nrows:
            break
    return rank


def _rank_generic(rows: list[list], field) -> int:
    m = [r[:] for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if not field.is_zero(m[i][c])), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = field.inv(m[rank][c])
        m[rank] = [field.mul(v, inv) for v in m[rank]]
        prow = m[rank]
        for i in range(rank + 1, nrows):
            f = m[i][c]
            if not field.is_zero(f):
                m[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(m[i], prow)]
        rank += 1
        if rank == nrows:
            break
    return rank


def _int_rows_from_rational(rows: list[list[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        fr = [Fraction(x) for x in r]
        den = 1
        for x in fr:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in fr])
    return out


def mat_rank(m: Matrix) -> int:
    """Exact rank of ``m`` over its field."""
    rows = [m.row(i) for i in range(m.rows)]
    if not rows or m.cols == 0:
        return 0
    f = m.field
    if isinstance(f, PrimeField):
        return _rank_prime(rows, f.p)
    if isinstance(f, Rationals):
        return _rank_bareiss(_int_rows_from_rational(rows))
    return _rank_generic(rows, f)


def mat_rank_of_columns(m: Matrix, cols) -> int:
    """Rank of the submatrix of ``m`` on the selected column indices."""
    cols = sorted(set(cols))
    for j in cols:
        if not 0 <= j < m.cols:
            raise IndexError(f"column {j} out of range [0, {m.cols})")
    if not cols:
        return 0
    sub = [[m.entry(i, j) for j in cols] for i in range(m.rows)]
    f = m.field
    if isinstance(f, PrimeField):
        return _rank_prime(sub, f.p)
    if isinstance(f, Rationals):
        return _rank_bareiss(_int_rows_from_rational(sub))
    return _rank_generic(sub, f)


# ---------------------------------------------------------------------------
# column-subset rank kernels
#
# A kernel is bound to one concrete matrix and answers rank queries for
# bitmask-encoded column subsets (bit j <-> column j).  rank_of() does a
# fresh greedy elimination; all_subset_ranks() shares elimination state
# across the whole 2^n subset tree.


class _ColumnKernel:
    ncols: int

    def rank_of(self, mask: int) -> int:
        raise NotImplementedError

    def all_subset_ranks(self) -> np.ndarray:
        raise NotImplementedError


def _check_exhaustive(ncols: int):
    if ncols > _EXHAUSTIVE_COLS_CAP:
        from .errors import BudgetExceededError

        raise BudgetExceededError(
            f"exhaustive subset sweep over {ncols} columns exceeds the cap of {_EXHAUSTIVE_COLS_CAP}"
        )


class _PrimeKernel(_ColumnKernel):
    """Basis vectors are stored monic from their pivot onward (earlier
    entries are zero after full reduction), which halves the axpy work."""

    def __init__(self, columns: list[list[int]], p: int):
        self.cols = [tuple(c) for c in columns]
        self.ncols = len(columns)
        self.p = p

    def _reduce(self, v: list[int], basis) -> list[int] | None:
        p = self.p
        for piv, tail in basis:
            f = v[piv]
            if f:
                v[piv:] = [(a - f * b) % p for a, b in zip(v[piv:], tail)]
        return v if any(v) else None

    def _monic(self, v: list[int]):
        p = self.p
        piv = next(i for i, a in enumerate(v) if a)
        inv = pow(v[piv], p - 2, p)
        return piv, tuple(a * inv % p for a in v[piv:])

    def rank_of(self, mask: int) -> int:
        basis = []
        j = 0
        while mask:
            if mask & 1:
                r = self._reduce(list(self.cols[j]), basis)
                if r is not None:
                    basis.append(self._monic(r))
            mask >>= 1
            j += 1
        return len(basis)

    def all_subset_ranks(self) -> np.ndarray:
        _check_exhaustive(self.ncols)
        n = self.ncols
        ranks = np.zeros(1 << n, dtype=np.uint8)
        cols = self.cols
        reduce, monic = self._reduce, self._monic

        def rec(j: int, mask: int, basis: list, rank: int):
            if j == n:
                ranks[mask] = rank
                return
            rec(j + 1, mask, basis, rank)
            r = reduce(list(cols[j]), basis)
            bit = mask | (1 << j)
            if r is None:
                rec(j + 1, bit, basis, rank)
            else:
                basis.append(monic(r))
                rec(j + 1, bit, basis, rank + 1)
                basis.pop()

        rec(0, 0, [], 0)
        return ranks


def _strip_content(v: list[int]) -> tuple:
    """Divide out the gcd and fix the leading sign; returns (pivot, tail)."""
    g = 0
    for a in v:
        if a:
            g = gcd(g, a)
    piv = next(i for i, a in enumerate(v) if a)
    tail = v[piv:]
    if g > 1:
        tail = [a // g for a in tail]
    if tail[0] < 0:
        tail = [-a for a in tail]
    return piv, tuple(tail)


class _IntKernel(_ColumnKernel):
    """Rational columns, handled fraction-free after per-column scaling.

    Scaling a column by a nonzero rational never changes subset ranks.
    """

    def __init__(self, columns: list[list[Fraction]]):
        self.ncols = len(columns)
        self.cols = []
        for c in columns:
            fr = [Fraction(x) for x in c]
            den = 1
            for x in fr:
                den = den * x.denominator // gcd(den, x.denominator)
            self.cols.append(tuple(int(x * den) for x in fr))

    def _reduce(self, v: list[int], basis) -> list[int] | None:
        for piv, tail in basis:
            f = v[piv]
            if f:
                # fraction-free axpy scales the whole vector by the pivot lead
                lead = tail[0]
                v[:piv] = [lead * a for a in v[:piv]]
                v[piv:] = [lead * a - f * b for a, b in zip(v[piv:], tail)]
        return v if any(v) else None

    def rank_of(self, mask: int) -> int:
        basis = []
        j = 0
        while mask:
            if mask & 1:
                r = self._reduce(list(self.cols[j]), basis)
                if r is not None:
                    basis.append(_strip_content(r))
            mask >>= 1
            j += 1
        return len(basis)

    def all_subset_ranks(self) -> np.ndarray:
        _check_exhaustive(self.ncols)
        n = self.ncols
        ranks = np.zeros(1 << n, dtype=np.uint8)
        cols = self.cols
        reduce = self._reduce

        def rec(j: int, mask: int, basis: list, rank: int):
            if j == n:
                ranks[mask] = rank
                return
            rec(j + 1, mask, basis, rank)
            r = reduce(list(cols[j]), basis)
            bit = mask | (1 << j)
            if r is None:
                rec(j + 1, bit, basis, rank)
            else:
                basis.append(_strip_content(r))
                rec(j + 1, bit, basis, rank + 1)
                basis.pop()

        rec(0, 0, [], 0)
        return ranks


class _ExtKernel(_ColumnKernel):
    """Extension-field columns as (rows, k) int64 arrays, vectorized per row.

    Multiplying a column vector by a scalar polynomial is one integer matrix
    product against the scalar's shift matrix, followed by a vectorized fold
    modulo the (sparse) modulus polynomial.
    """

    def __init__(self, columns: list[list[int]], field: ExtensionField):
        self.field = field
        self.ncols = len(columns)
        self.nrows = len(columns[0]) if columns else 0
        k = field.k
        self.cols = [
            np.array([field.unpack(e) for e in c], dtype=np.int64).reshape(self.nrows, k)
            for c in columns
        ]

    def _shift_matrix(self, f: np.ndarray) -> np.ndarray:
        """k x (2k-1) band matrix M with M[i, i+j] = f[j]; (v @ M) is v * f."""
        k = self.field.k
        pad = np.zeros(3 * k - 2, dtype=np.int64)
        pad[k - 1 : 2 * k - 1] = f
        return np.lib.stride_tricks.sliding_window_view(pad, 2 * k - 1)[::-1]

    def _fold(self, acc: np.ndarray) -> np.ndarray:
        """Reduce limb degrees >= k via x^k = -(sum c_e x^e); bounded passes."""
        k, p = self.field.k, self.field.p
        e_max = max(e for e, _ in self.field.lower_terms)
        while acc.shape[1] > k and acc[:, k:].any():
            hi = acc[:, k:]
            width = hi.shape[1]
            out = np.zeros((acc.shape[0], max(k, e_max + width)), dtype=np.int64)
            out[:, :k] = acc[:, :k]
            for e, c in self.field.lower_terms:
                out[:, e : e + width] -= c * hi
            acc = out % p
        return acc[:, :k] % p

    def _reduce(self, v: np.ndarray, basis) -> np.ndarray | None:
        fld = self.field
        for piv, btail in basis:
            f = v[piv]
            if f.any():
                prod = btail @ self._shift_matrix(f)  # (rows - piv, 2k-1)
                acc = np.zeros_like(prod)
                acc[:, : fld.k] = v[piv:]
                acc -= prod
                v[piv:] = self._fold(acc)
        return v if v.any() else None

    def _monic(self, v: np.ndarray):
        fld = self.field
        piv = next(i for i in range(v.shape[0]) if v[i].any())
        inv = np.array(fld.unpack(fld.inv(fld.pack(v[piv]))), dtype=np.int64)
        tail = self._fold(v[piv:] @ self._shift_matrix(inv))
        return piv, tail

    def rank_of(self, mask: int) -> int:
        basis = []
        j = 0
        while mask:
            if mask & 1:
                r = self._reduce(self.cols[j].copy(), basis)
                if r is not None:
                    basis.append(self._monic(r))
            mask >>= 1
            j += 1
        return len(basis)

    def all_subset_ranks(self) -> np.ndarray:
        _check_exhaustive(self.ncols)
        n = self.ncols
        ranks = np.zeros(1 << n, dtype=np.uint8)
        cols = self.cols

        def rec(j: int, mask: int, basis: list, rank: int):
            if j == n:
                ranks[mask] = rank
                return
            rec(j + 1, mask, basis, rank)
            r = self._reduce(cols[j].copy(), basis)
            bit = mask | (1 << j)
            if r is None:
                rec(j + 1, bit, basis, rank)
            else:
                basis.append(self._monic(r))
                rec(j + 1, bit, basis, rank + 1)
                basis.pop()

        rec(0, 0, [], 0)
        return ranks


class _GenericKernel(_ColumnKernel):
    def __init__(self, columns: list[list], field):
        self.cols = [tuple(c) for c in columns]
        self.ncols = len(columns)
        self.field = field

    def rank_of(self, mask: int) -> int:
        f = self.field
        basis = []
        j = 0
        while mask:
            if mask & 1:
                v = list(self.cols[j])
                for piv, b in basis:
                    c = v[piv]
                    if not f.is_zero(c):
                        v = [f.sub(a, f.mul(c, bb)) for a, bb in zip(v, b)]
                if not all(f.is_zero(a) for a in v):
                    piv = next(i for i, a in enumerate(v) if not f.is_zero(a))
                    inv = f.inv(v[piv])
                    basis.append((piv, tuple(f.mul(a, inv) for a in v)))
            mask >>= 1
            j += 1
        return len(basis)

    def all_subset_ranks(self) -> np.ndarray:
        _check_exhaustive(self.ncols)
        n = self.ncols
        ranks = np.zeros(1 << n, dtype=np.uint8)

        def rec(j, mask, basis, rank):
            if j == n:
                ranks[mask] = rank
                return
            rec(j + 1, mask, basis, rank)
            f = self.field
            v = list(self.cols[j])
            for piv, b in basis:
                c = v[piv]
                if not f.is_zero(c):
                    v = [f.sub(a, f.mul(c, bb)) for a, bb in zip(v, b)]
            bit = mask | (1 << j)
            if all(f.is_zero(a) for a in v):
                rec(j + 1, bit, basis, rank)
            else:
                piv = next(i for i, a in enumerate(v) if not f.is_zero(a))
                inv = f.inv(v[piv])
                basis.append((piv, tuple(f.mul(a, inv) for a in v)))
                rec(j + 1, bit, basis, rank + 1)
                basis.pop()

        rec(0, 0, [], 0)
        return ranks


def column_kernel(m: Matrix) -> _ColumnKernel:
    """Bind a rank kernel to the columns of ``m``."""
    columns = [m.column(j) for j in range(m.cols)]
    f = m.field
    if isinstance(f, PrimeField):
        return _PrimeKernel(columns, f.p)
    if isinstance(f, Rationals):
        return _IntKernel(columns)
    if isinstance(f, ExtensionField):
        return _ExtKernel(columns, f)
    return _GenericKernel(columns, f)
