"""Exact linear programming over the rationals.

A small dense two-phase simplex with Bland's rule (guaranteed termination,
no tolerances anywhere).  On top of it, :func:`strict_feasible_point`
decides strict feasibility of a mixed weak/strict rational system by
maximizing a margin variable on the strict rows; by homogeneity the margin
is capped at 1, so the program is always bounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass
class LpResult:
    status: str
    objective: Fraction | None = None
    x: list[Fraction] | None = None


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int):
    prow = tableau[row]
    pv = prow[col]
    if pv != 1:
        tableau[row] = prow = [v / pv for v in prow]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            f = r[col]
            tableau[i] = [a - f * b for a, b in zip(r, prow)]
    basis[row] = col


def _iterate(tableau: list[list[Fraction]], basis: list[int], ncols: int) -> str:
    """Run simplex to optimality on a min-form tableau (objective = last row)."""
    while True:
        obj = tableau[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)  # Bland: lowest index
        if col is None:
            return OPTIMAL
        row = None
        best = None
        for i in range(len(basis)):
            coef = tableau[i][col]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            return UNBOUNDED
        _pivot(tableau, basis, row, col)


def solve_lp(objective, rows, maximize: bool = False) -> LpResult:
    """Solve min (or max) c.x subject to rows of (coeffs, rel, rhs), x >= 0.

    ``rel`` is one of '<=', '>=', '=='.  All data is taken exactly as
    rationals.  Returns optimal x (length of ``objective``), or an
    infeasible/unbounded status.
    """
    c = [Fraction(v) for v in objective]
    if maximize:
        c = [-v for v in c]
    nvars = len(c)
    norm = []
    for coeffs, rel, rhs in rows:
        coeffs = [Fraction(v) for v in coeffs]
        if len(coeffs) != nvars:
            raise ValueError("constraint width does not match objective")
        rhs = Fraction(rhs)
        if rhs < 0:
            coeffs = [-v for v in coeffs]
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "==": "=="}[rel]
        norm.append((coeffs, rel, rhs))

    nslack = sum(1 for _, rel, _ in norm if rel != "==")
    nart = sum(1 for _, rel, _ in norm if rel != "<=")
    total = nvars + nslack + nart
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    si = nvars
    ai = nvars + nslack
    art_cols = []
    for coeffs, rel, rhs in norm:
        row = coeffs + [_ZERO] * (nslack + nart) + [rhs]
        if rel == "<=":
            row[si] = _ONE
            basis.append(si)
            si += 1
        elif rel == ">=":
            row[si] = Fraction(-1)
            si += 1
            row[ai] = _ONE
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        else:
            row[ai] = _ONE
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        tableau.append(row)

    # phase 1: minimize the sum of artificials
    if art_cols:
        w = [_ZERO] * (total + 1)
        for j in art_cols:
            w[j] = _ONE
        for i, b in enumerate(basis):
            if w[b] != 0:
                f = w[b]
                w = [a - f * v for a, v in zip(w, tableau[i])]
        tableau.append(w)
        _iterate(tableau, basis, total)
        if tableau[-1][-1] != 0:
            return LpResult(INFEASIBLE)
        tableau.pop()
        # pivot surviving artificials out of the basis (or drop redundant rows)
        drop = []
        for i, b in enumerate(basis):
            if b in art_cols:
                col = next(
                    (j for j in range(nvars + nslack) if tableau[i][j] != 0),
                    None,
                )
                if col is None:
                    drop.append(i)
                else:
                    _pivot(tableau, basis, i, col)
        for i in sorted(drop, reverse=True):
            tableau.pop(i)
            basis.pop(i)
        art_set = set(art_cols)
        keep = [j for j in range(total) if j not in art_set] + [total]
        tableau = [[r[j] for j in keep] for r in tableau]
        basis = [b - sum(1 for a in art_cols if a < b) for b in basis]
        total = nvars + nslack

    # phase 2
    obj = [_ZERO] * (total + 1)
    obj[:nvars] = c
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [a - f * v for a, v in zip(obj, tableau[i])]
    tableau.append(obj)
    status = _iterate(tableau, basis, total)
    if status == UNBOUNDED:
        return LpResult(UNBOUNDED)
    x = [_ZERO] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            x[b] = tableau[i][-1]
    value = -tableau[-1][-1]
    if maximize:
        value = -value
    return LpResult(OPTIMAL, value, x)


@dataclass(frozen=True)
class LinearConstraint:
    """coeffs . x  rel  rhs, with rel in {'<=', '>=', '==', '<', '>'}."""

    coeffs: tuple
    rel: str
    rhs: Fraction

    @property
    def strict(self) -> bool:
        return self.rel in ("<", ">")


def strict_feasible_point(constraints, nvars: int) -> list[Fraction] | None:
    """Exact strictly feasible point of a mixed system, or None.

    Variables are free.  Every strict row gets a shared positive margin t;
    t is capped at 1 (by homogeneity of margins this loses nothing), and
    t > 0 at the optimum if and only if the system is strictly feasible.
    """
    rows = []
    T = 2 * nvars  # margin variable index in the split encoding

    def split(coeffs):
        out = []
        for v in coeffs:
            v = Fraction(v)
            out += [v, -v]
        return out

    for con in constraints:
        if len(con.coeffs) != nvars:
            raise ValueError("constraint width mismatch")
        coeffs = split(con.coeffs)
        rel, rhs = con.rel, Fraction(con.rhs)
        if rel == "<":
            coeffs = [-v for v in coeffs]
            rhs, rel = -rhs, ">"
        elif rel == "<=":
            coeffs = [-v for v in coeffs]
            rhs, rel = -rhs, ">="
        if rel == ">":
            rows.append((coeffs + [Fraction(-1)], ">=", rhs))
        elif rel == ">=":
            rows.append((coeffs + [_ZERO], ">=", rhs))
        elif rel == "==":
            rows.append((coeffs + [_ZERO], "==", rhs))
        else:
            raise ValueError(f"unknown relation {rel!r}")
    rows.append(([_ZERO] * (2 * nvars) + [_ONE], "<=", _ONE))  # t <= 1
    objective = [_ZERO] * (2 * nvars) + [_ONE]
    res = solve_lp(objective, rows, maximize=True)
    if res.status != OPTIMAL or res.objective <= 0:
        return None
    x = [res.x[2 * i] - res.x[2 * i + 1] for i in range(nvars)]
    for con in constraints:  # exact re-check, independent of the solver path
        val = sum(Fraction(c) * xi for c, xi in zip(con.coeffs, x))
        ok = {
            "<": val < con.rhs,
            "<=": val <= con.rhs,
            ">": val > con.rhs,
            ">=": val >= con.rhs,
            "==": val == con.rhs,
        }[con.rel]
        if not ok:
            raise AssertionError("solver returned a point violating a constraint")
    return x
