"""Erasure-pattern files and named example patterns.

File format (auto-detected per line after the header):

    line 1:   ``m n [a b] [0-based|1-based]``   (indexing defaults to 1-based)
    then either
      * one cell per line: ``i j``, optionally followed by an orientation
        token (``>`` row-to-column, ``<`` column-to-row) or a positive
        integer color, or
      * an ASCII grid of m rows and n characters, ``#`` for a member cell
        and ``.`` for an empty one.

    Lines starting with ``;`` and blank lines are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class PatternFormatError(ValueError):
    pass


@dataclass
class PatternFile:
    m: int
    n: int
    cells: list[tuple[int, int]]
    a: int | None = None
    b: int | None = None
    directions: dict[tuple[int, int], str] = field(default_factory=dict)
    colors: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def mask(self) -> int:
        out = 0
        for i, j in self.cells:
            out |= 1 << (i * self.n + j)
        return out

    def validate(self):
        seen = set()
        for i, j in self.cells:
            if not (0 <= i < self.m and 0 <= j < self.n):
                raise PatternFormatError(f"cell ({i}, {j}) outside {self.m} x {self.n} grid")
            if (i, j) in seen:
                raise PatternFormatError(f"duplicate cell ({i}, {j})")
            seen.add((i, j))
        return self


def parse_pattern(text: str) -> PatternFile:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith(";")]
    if not lines:
        raise PatternFormatError("empty pattern file")
    head = lines[0].split()
    one_based = True
    if head and head[-1] in ("0-based", "1-based"):
        one_based = head.pop() == "1-based"
    if len(head) not in (2, 4):
        raise PatternFormatError("header must be 'm n' or 'm n a b'")
    try:
        nums = [int(x) for x in head]
    except ValueError as e:
        raise PatternFormatError(f"bad header: {e}") from None
    m, n = nums[0], nums[1]
    a, b = (nums[2], nums[3]) if len(nums) == 4 else (None, None)
    if m < 1 or n < 1:
        raise PatternFormatError("grid dimensions must be positive")
    body = lines[1:]
    grid_mode = bool(body) and all(set(ln) <= {"#", "."} for ln in body)
    cells: list[tuple[int, int]] = []
    directions: dict[tuple[int, int], str] = {}
    colors: dict[tuple[int, int], int] = {}
    if grid_mode:
        if len(body) != m or any(len(ln) != n for ln in body):
            raise PatternFormatError(f"ASCII grid must be {m} rows of {n} characters")
        for i, ln in enumerate(body):
            for j, ch in enumerate(ln):
                if ch == "#":
                    cells.append((i, j))
    else:
        off = 1 if one_based else 0
        for ln in body:
            parts = ln.split()
            if len(parts) not in (2, 3):
                raise PatternFormatError(f"bad cell line: {ln!r}")
            i, j = int(parts[0]) - off, int(parts[1]) - off
            cells.append((i, j))
            if len(parts) == 3:
                tok = parts[2]
                if tok in (">", "<"):
                    directions[(i, j)] = tok
                else:
                    colors[(i, j)] = int(tok)
    return PatternFile(m, n, cells, a, b, directions, colors).validate()


def load_pattern(path) -> PatternFile:
    with open(path, encoding="utf-8") as fh:
        return parse_pattern(fh.read())


def render_pattern(pf: PatternFile) -> str:
    grid = [["."] * pf.n for _ in range(pf.m)]
    for i, j in pf.cells:
        grid[i][j] = "#"
    return "\n".join("".join(row) for row in grid)


# ---------------------------------------------------------------------------
# named patterns used by the regression suite and `selfcheck`


def nonlaman_circuit_5x5() -> PatternFile:
    """Two overlapping 3x3 corner blocks minus their shared center cell.

    A 16-cell circuit of the (2, 2) bipartite rigidity matroid on 5x5 that
    admits no Laman-violating rectangle: filling these entries generically
    puts two conflicting conditions on the center entry.
    """
    cells = [
        (i, j)
        for i in range(3)
        for j in range(3)
        if (i, j) != (2, 2)
    ] + [(i, j) for i in range(2, 5) for j in range(2, 5) if (i, j) != (2, 2)]
    return PatternFile(5, 5, cells, a=2, b=2).validate()


def tensor_circuit_5x5() -> PatternFile:
    """Two opposite 2x2 blocks: the 8-cell circuit of the (3, 3) tensor
    matroid on 5x5 dual to :func:`nonlaman_circuit_5x5` (two 4-dimensional
    block tensors must intersect inside a 9-dimensional space)."""
    cells = [(i, j) for i in range(2) for j in range(3, 5)]
    cells += [(i, j) for i in range(3, 5) for j in range(2)]
    return PatternFile(5, 5, cells).validate()


def tensor_circuit_5x9() -> PatternFile:
    """12-cell circuit of the (3, 4) tensor matroid on 5x9 that violates only
    the two-row counting bound of the side-3 characterization."""
    rows = [
        (0, (0, 1, 2)),
        (1, (3, 4, 5)),
        (2, (7, 8)),
        (3, (6, 8)),
        (4, (6, 7)),
    ]
    cells = [(i, j) for i, js in rows for j in js]
    return PatternFile(5, 9, cells).validate()


def laman_circuit_5x9() -> PatternFile:
    """18 cells filling a 3x6 rectangle: a Laman circuit of the (2, 5)
    bipartite rigidity matroid on 5x9 (bound 3*5 + 6*2 - 10 = 17 < 18)."""
    cells = [(i, j) for i in range(2, 5) for j in range(6)]
    return PatternFile(5, 9, cells, a=2, b=5).validate()


def tensor_nonbasis_7x7() -> PatternFile:
    """16 cells: a 3x3 block minus a corner plus two disjoint 2x2 blocks.

    Has basis size in the (4, 4) tensor matroid on 7x7 and its complement
    satisfies all Laman conditions, yet it is not a basis (rank <= 15)."""
    cells = [(i, j) for i in range(3) for j in range(3) if (i, j) != (2, 2)]
    cells += [(i, j) for i in (3, 4) for j in (3, 4)]
    cells += [(i, j) for i in (5, 6) for j in (5, 6)]
    return PatternFile(7, 7, cells).validate()


def oriented_basis_3x3() -> PatternFile:
    """8-edge basis of the (2, 2) bipartite rigidity matroid on 3x3 together
    with an orientation that has no directed and no alternating cycles."""
    arrows = {
        (0, 0): ">",
        (0, 1): "<",
        (0, 2): ">",
        (1, 0): "<",
        (1, 1): "<",
        (1, 2): ">",
        (2, 0): ">",
        (2, 1): "<",
    }
    pf = PatternFile(3, 3, list(arrows), a=2, b=2)
    pf.directions = dict(arrows)
    return pf.validate()


NAMED_PATTERNS = {
    "nonlaman-circuit-5x5": nonlaman_circuit_5x5,
    "tensor-circuit-5x5": tensor_circuit_5x5,
    "tensor-circuit-5x9": tensor_circuit_5x9,
    "laman-circuit-5x9": laman_circuit_5x9,
    "tensor-nonbasis-7x7": tensor_nonbasis_7x7,
    "oriented-basis-3x3": oriented_basis_3x3,
}
