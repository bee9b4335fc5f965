"""Orientation and coloring certificates of bipartite-rigidity independence.

An orientation of a bipartite pattern certifies independence in the (2, 2)
bipartite rigidity matroid when it has no directed cycles and no
alternating cycles (cycles traversed with edge directions alternating
forward/backward; equivalently, cycles that are monochromatic in the
two orientation classes row-to-column / column-to-row).

The d-colored generalization replaces orientation classes by d colors: no
monochromatic cycles, plus exact vertex labels with zero coordinate sum
whose color coordinate strictly dominates on every edge.  Feasibility of the
labels is decided by exact rational LP.  A verified certificate implies
independence in the dual of the matching tensor matroid in every
characteristic, hence correctability of the pattern as an erasure set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import networkx as nx

from .errors import BudgetExceededError
from .lp import LinearConstraint, strict_feasible_point
from .matroids import bits

ORACLE_EDGE_CAP = 16
SEARCH_EDGE_CAP = 24
COLOR_SEARCH_EDGE_CAP = 16
COLOR_SEARCH_LEAF_CAP = 1 << 24


def _edges_of_mask(mask: int, m: int, n: int) -> tuple:
    return tuple((i, j) for i in range(m) for j in range(n) if mask >> (i * n + j) & 1)


@dataclass(frozen=True)
class Orientation:
    """Each edge (i, j) of a bipartite pattern directed row-to-column
    (member of ``ltr``) or column-to-row."""

    m: int
    n: int
    edges: tuple
    ltr: frozenset

    def __post_init__(self):
        if not self.ltr <= set(self.edges):
            raise ValueError("ltr contains non-edges")

    @classmethod
    def from_mask(cls, mask: int, m: int, n: int, ltr) -> "Orientation":
        edges = _edges_of_mask(mask, m, n)
        return cls(m, n, edges, frozenset(ltr))

    @classmethod
    def from_pattern(cls, pf) -> "Orientation":
        if set(pf.directions) != set(pf.cells):
            raise ValueError("pattern lacks a direction for every cell")
        ltr = frozenset(e for e, tok in pf.directions.items() if tok == ">")
        return cls(pf.m, pf.n, tuple(sorted(pf.cells)), ltr)

    def direction(self, edge) -> str:
        return ">" if edge in self.ltr else "<"

    def as_tokens(self) -> dict:
        return {e: self.direction(e) for e in self.edges}


def _row(i: int) -> tuple:
    return ("row", i)


def _col(j: int) -> tuple:
    return ("col", j)


def has_directed_cycle(o: Orientation) -> list | None:
    """A directed cycle as a vertex list, or None (a topological order exists)."""
    succ: dict = {}
    for (i, j) in o.edges:
        u, v = (_row(i), _col(j)) if (i, j) in o.ltr else (_col(j), _row(i))
        succ.setdefault(u, []).append(v)
        succ.setdefault(v, [])
    color: dict = {}
    stack_pos: dict = {}
    path: list = []

    def dfs(start):
        todo = [(start, iter(succ[start]))]
        color[start] = 1
        stack_pos[start] = 0
        path.append(start)
        while todo:
            node, it = todo[-1]
            advanced = False
            for nxt in it:
                if color.get(nxt, 0) == 1:
                    return path[stack_pos[nxt] :]
                if color.get(nxt, 0) == 0:
                    color[nxt] = 1
                    stack_pos[nxt] = len(path)
                    path.append(nxt)
                    todo.append((nxt, iter(succ[nxt])))
                    advanced = True
                    break
            if not advanced:
                color[node] = 2
                path.pop()
                todo.pop()
        return None

    for v in succ:
        if color.get(v, 0) == 0:
            cyc = dfs(v)
            if cyc is not None:
                return cyc
    return None


def _is_alternating(cycle: list, o: Orientation) -> bool:
    k = len(cycle)
    forward = []
    for t in range(k):
        a, b = cycle[t], cycle[(t + 1) % k]
        if a[0] == "row":
            edge = (a[1], b[1])
            forward.append(edge in o.ltr)
        else:
            edge = (b[1], a[1])
            forward.append(edge not in o.ltr)
    return all(forward[t] != forward[(t + 1) % k] for t in range(k))


def _enumerate_simple_cycles(o: Orientation):
    """All simple cycles of the underlying bipartite graph, each once."""
    nodes = sorted({_row(i) for i, _ in o.edges} | {_col(j) for _, j in o.edges})
    order = {v: t for t, v in enumerate(nodes)}
    adj: dict = {v: [] for v in nodes}
    for (i, j) in o.edges:
        adj[_row(i)].append(_col(j))
        adj[_col(j)].append(_row(i))
    for root in nodes:
        path = [root]
        on_path = {root}

        def extend():
            v = path[-1]
            for w in adj[v]:
                if order[w] < order[root]:
                    continue
                if w == root and len(path) >= 3:
                    if order[path[1]] < order[path[-1]]:  # one traversal direction
                        yield list(path)
                elif w not in on_path:
                    path.append(w)
                    on_path.add(w)
                    yield from extend()
                    on_path.remove(w)
                    path.pop()

        yield from extend()


def has_alternating_cycle(o: Orientation, method: str = "main") -> list | None:
    """An alternating cycle as a vertex list, or None.

    ``oracle``: exhaustive simple-cycle enumeration with a direct alternation
    check (at most ``ORACLE_EDGE_CAP`` edges).  ``main``: reduction to
    perfect matchings in a port gadget per orientation class, solved by the
    blossom algorithm.  The two must agree; the test suite enforces it.
    """
    if method == "oracle":
        if len(o.edges) > ORACLE_EDGE_CAP:
            raise BudgetExceededError(
                f"cycle enumeration over {len(o.edges)} edges exceeds cap {ORACLE_EDGE_CAP}"
            )
        for cyc in _enumerate_simple_cycles(o):
            if _is_alternating(cyc, o):
                return cyc
        return None
    if method == "main":
        for cls in (True, False):
            cyc = _class_cycle_by_matching(o, cls)
            if cyc is not None:
                return cyc
        return None
    raise ValueError(f"unknown method {method!r}")


def _class_cycle_by_matching(o: Orientation, ltr_class: bool) -> list | None:
    """Find a cycle inside one orientation class via a matching gadget.

    An alternating cycle is exactly a cycle whose edges all lie in one
    orientation class.  Gadget: each touched vertex v becomes ports (v, 0),
    (v, 1) joined by a port edge; each class edge e = {u, v} becomes a
    middle pair (e, 0)-(e, 1) attached to both ports of u and of v.  Port
    plus middle edges form the canonical perfect matching; a perfect
    matching of positive weight (weight 1 on attachment edges) exists iff
    the class subgraph contains a cycle, and the symmetric difference with
    the canonical matching traces it.
    """
    cls_edges = [e for e in o.edges if (e in o.ltr) == ltr_class]
    if len(cls_edges) < 3:
        return None
    g = nx.Graph()
    canonical = set()
    for (i, j) in cls_edges:
        for v in (_row(i), _col(j)):
            if (v, 0) not in g:
                g.add_edge((v, 0), (v, 1), weight=0)
                canonical.add(((v, 0), (v, 1)))
    for e in cls_edges:
        u, v = _row(e[0]), _col(e[1])
        mid_u, mid_v = (("mid", e, 0)), (("mid", e, 1))
        g.add_edge(mid_u, mid_v, weight=0)
        canonical.add((mid_u, mid_v))
        for k in (0, 1):
            g.add_edge((u, k), mid_u, weight=1)
            g.add_edge(mid_v, (v, k), weight=1)
    matching = nx.max_weight_matching(g, maxcardinality=True)
    if 2 * len(matching) != g.number_of_nodes():
        raise AssertionError("gadget lost its perfect matching")
    mset = {frozenset(e) for e in matching}
    weight = sum(1 for e in mset if g.edges[tuple(e)]["weight"] == 1)
    if weight == 0:
        return None
    diff = mset ^ {frozenset(e) for e in canonical}
    nbr: dict = {}
    for e in diff:
        a, b = tuple(e)
        nbr.setdefault(a, []).append(b)
        nbr.setdefault(b, []).append(a)
    start = next(iter(nbr))
    walk = [start]
    prev = None
    while True:
        cur = walk[-1]
        nxt = next(x for x in nbr[cur] if x != prev)
        if nxt == start:
            break
        walk.append(nxt)
        prev = cur
    cycle = []
    for node in walk:
        if isinstance(node, tuple) and len(node) == 2 and node[0] != "mid":
            v = node[0]
            if not cycle or cycle[-1] != v:
                cycle.append(v)
    if cycle and cycle[0] == cycle[-1]:
        cycle.pop()
    return cycle


def verify_bernstein(o: Orientation, method: str = "main") -> bool:
    """True iff the orientation has no directed and no alternating cycle.

    A True verdict certifies independence in the (2, 2) bipartite rigidity
    matroid and in the dual of the matching tensor matroid in every
    characteristic.
    """
    return has_directed_cycle(o) is None and has_alternating_cycle(o, method) is None


class _RollbackDSU:
    """Union-find with undo (union by size, no path compression)."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.trail: list[tuple[int, int]] = []

    def find(self, x: int) -> int:
        p = self.parent
        while p[x] != x:
            x = p[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.trail.append((ra, rb))
        return True

    def mark(self) -> int:
        return len(self.trail)

    def rollback(self, mark: int):
        while len(self.trail) > mark:
            ra, rb = self.trail.pop()
            self.parent[rb] = rb
            self.size[ra] -= self.size[rb]


def _bfs_edge_order(edges: tuple) -> list:
    """Order edges so each one touches the already-ordered subgraph when
    possible; keeps cycle-closing assignments close together."""
    remaining = set(edges)
    adj: dict = {}
    for e in edges:
        adj.setdefault(("r", e[0]), []).append(e)
        adj.setdefault(("c", e[1]), []).append(e)
    order = []
    while remaining:
        seed = min(remaining)
        queue = [seed]
        remaining.discard(seed)
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            order.append(e)
            for v in (("r", e[0]), ("c", e[1])):
                for f in adj[v]:
                    if f in remaining:
                        remaining.discard(f)
                        queue.append(f)
    return order


def search_bernstein(mask: int, m: int, n: int) -> Orientation | None:
    """Exhaustive backtracking search for a valid orientation.

    Prunes on directed cycles and on monochromatic-class cycles among the
    assigned edges (both persist under extension, so pruning is sound and
    None is a certificate of nonexistence).  Budget: at most
    ``SEARCH_EDGE_CAP`` edges.
    """
    edges = _edges_of_mask(mask, m, n)
    ne = len(edges)
    if ne > SEARCH_EDGE_CAP:
        raise BudgetExceededError(f"{ne} edges exceeds orientation search cap {SEARCH_EDGE_CAP}")
    if ne == 0:
        return Orientation(m, n, (), frozenset())
    order = _bfs_edge_order(edges)
    nv = m + n
    dsu = {True: _RollbackDSU(nv), False: _RollbackDSU(nv)}
    succ: dict[int, set] = {v: set() for v in range(nv)}
    ltr: set = set()

    def reaches(src: int, dst: int) -> bool:
        seen = {src}
        todo = [src]
        while todo:
            v = todo.pop()
            if v == dst:
                return True
            for w in succ[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return False

    def assign(depth: int) -> bool:
        if depth == ne:
            return True
        i, j = order[depth]
        u, v = i, m + j
        for is_ltr in (True, False):
            head, tail = (v, u) if is_ltr else (u, v)
            if reaches(head, tail):  # new arc tail->head would close a directed cycle
                continue
            mk = dsu[is_ltr].mark()
            if not dsu[is_ltr].union(u, v):  # monochromatic-class cycle
                dsu[is_ltr].rollback(mk)
                continue
            succ[tail].add(head)
            if is_ltr:
                ltr.add((i, j))
            if assign(depth + 1):
                return True
            if is_ltr:
                ltr.discard((i, j))
            succ[tail].remove(head)
            dsu[is_ltr].rollback(mk)
        return False

    if assign(0):
        o = Orientation(m, n, edges, frozenset(ltr))
        if not verify_bernstein(o):
            raise AssertionError("search produced an orientation that fails verification")
        return o
    return None


# ---------------------------------------------------------------------------
# d-colorings


@dataclass(frozen=True)
class DColoring:
    """Total edge coloring with colors in range(d)."""

    m: int
    n: int
    d: int
    colors: tuple  # tuple of ((i, j), color)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("need d >= 1")
        for _, c in self.colors:
            if not 0 <= c < self.d:
                raise ValueError("color out of range")

    @classmethod
    def from_dict(cls, m: int, n: int, d: int, mapping: dict) -> "DColoring":
        return cls(m, n, d, tuple(sorted(mapping.items())))

    @property
    def edges(self) -> tuple:
        return tuple(e for e, _ in self.colors)

    def color_map(self) -> dict:
        return dict(self.colors)


@dataclass(frozen=True)
class LabelAssignment:
    """Vertex labels in Q^d with zero coordinate sum per vertex."""

    d: int
    labels: tuple  # tuple of (vertex, tuple of d Fractions)

    def label_map(self) -> dict:
        return dict(self.labels)

    def __post_init__(self):
        for _, vec in self.labels:
            if len(vec) != self.d:
                raise ValueError("label dimension mismatch")
            if sum(vec) != 0:
                raise ValueError("labels must have zero coordinate sum")


def _coloring_vertices(col: DColoring) -> list:
    verts = {_row(i) for (i, _), _ in col.colors} | {_col(j) for (_, j), _ in col.colors}
    return sorted(verts)


def monochromatic_cycle_free(col: DColoring) -> bool:
    dsus = [_RollbackDSU(col.m + col.n) for _ in range(col.d)]
    for (i, j), c in col.colors:
        if not dsus[c].union(i, col.m + j):
            return False
    return True


def check_label_conditions(col: DColoring, assignment: LabelAssignment) -> bool:
    """Direct exact evaluation of the zero-sum and strict dominance
    conditions, independent of how the labels were produced."""
    lab = assignment.label_map()
    for _, vec in assignment.labels:
        if sum(vec) != 0:
            return False
    for (i, j), c in col.colors:
        lu = lab.get(_row(i))
        lv = lab.get(_col(j))
        if lu is None or lv is None:
            return False
        for other in range(col.d):
            if other != c and not (lu[c] + lv[c] > lu[other] + lv[other]):
                return False
    return True


def _dominance_constraints(col: DColoring, vidx: dict, nvars: int) -> list[LinearConstraint]:
    """Strict dominance rows on unconstrained per-vertex color scores.

    The zero-sum normalization is deferred: dominance only involves score
    differences, which per-vertex constant shifts leave unchanged, so any
    solution can be recentred exactly afterwards.
    """
    d = col.d
    cons = []
    for (i, j), c in col.colors:
        u, v = vidx[_row(i)], vidx[_col(j)]
        for other in range(d):
            if other == c:
                continue
            coeffs = [Fraction(0)] * nvars
            coeffs[u * d + c] += 1
            coeffs[v * d + c] += 1
            coeffs[u * d + other] -= 1
            coeffs[v * d + other] -= 1
            cons.append(LinearConstraint(tuple(coeffs), ">", Fraction(0)))
    return cons


def _finish_assignment(col: DColoring, verts, vidx, point) -> LabelAssignment:
    """Recenter scores to zero sum per vertex, scale into [-1, 1], re-verify."""
    d = col.d
    labels = []
    scale = Fraction(1)
    rows = []
    for v in verts:
        vec = [point[vidx[v] * d + i] for i in range(d)]
        mean = sum(vec) / d
        vec = [x - mean for x in vec]
        rows.append((v, vec))
        scale = max(scale, *(abs(x) for x in vec))
    for v, vec in rows:
        labels.append((v, tuple(x / scale for x in vec)))
    assignment = LabelAssignment(d, tuple(labels))
    if not check_label_conditions(col, assignment):
        raise AssertionError("assignment failed direct re-evaluation")
    return assignment


def _two_color_potential_labels(col: DColoring, verts, vidx) -> LabelAssignment | None:
    """Constructive labels for d = 2 from a topological order.

    Color-0 edges point row-to-column, color-1 edges column-to-row; if that
    digraph is acyclic, scores +/-2^position (positive on column vertices)
    give strict dominance, because the head of every arc strictly
    outweighs its tail.  A directed cycle makes the system infeasible.
    """
    colors = col.color_map()
    m = col.m
    succ: dict = {v: [] for v in verts}
    indeg = {v: 0 for v in verts}
    for (i, j), c in colors.items():
        u, v = _row(i), _col(j)
        a, b = (u, v) if c == 0 else (v, u)
        succ[a].append(b)
        indeg[b] += 1
    order = [v for v in verts if indeg[v] == 0]
    qi = 0
    while qi < len(order):
        for w in succ[order[qi]]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
        qi += 1
    if len(order) != len(verts):
        return None
    pos = {v: t for t, v in enumerate(order)}
    point = [Fraction(0)] * (len(verts) * 2)
    for v in verts:
        f = Fraction(2) ** pos[v]
        if v[0] == "row":
            f = -f
        point[vidx[v] * 2] = f
        point[vidx[v] * 2 + 1] = -f
    return _finish_assignment(col, verts, vidx, point)


def _float_proposed_labels(col: DColoring, verts, vidx, nvars: int) -> LabelAssignment | None:
    """Float LP proposes a point; acceptance is decided by exact arithmetic.

    Returns None when no trustworthy proposal emerges (never certifies
    infeasibility); the caller falls back to the exact simplex.
    """
    try:
        import numpy as np
        from scipy.optimize import linprog
    except ImportError:
        return None
    cons = _dominance_constraints(col, vidx, nvars)
    if not cons:
        return _finish_assignment(col, verts, vidx, [Fraction(0)] * nvars)
    a_ub = np.zeros((len(cons) + 1, nvars + 1))
    b_ub = np.zeros(len(cons) + 1)
    for r, con in enumerate(cons):
        for k, cf in enumerate(con.coeffs):
            a_ub[r, k] = -float(cf)
        a_ub[r, nvars] = 1.0
    a_ub[-1, nvars] = 1.0  # t <= 1
    b_ub[-1] = 1.0
    cvec = np.zeros(nvars + 1)
    cvec[nvars] = -1.0
    res = linprog(cvec, A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * (nvars + 1), method="highs")
    if res.status != 0 or res.x is None or res.x[nvars] < 1e-6:
        return None
    denom = 1 << 20
    point = [Fraction(round(x * denom), denom) for x in res.x[:nvars]]
    try:
        return _finish_assignment(col, verts, vidx, point)
    except AssertionError:
        return None


def verify_d_bernstein(col: DColoring, method: str = "auto") -> LabelAssignment | None:
    """Decide the coloring certificate: forest colors plus exact labels.

    Checks that every color class is a forest, then decides strict
    feasibility of the label system exactly and returns a satisfying
    assignment (scaled into [-1, 1]) or None.  ``method='exact'`` uses the
    exact rational simplex alone; ``'auto'`` first tries cheap exact
    constructions (topological potentials for d = 2, a float-proposed and
    exactly re-verified point otherwise) and falls back to the exact
    simplex, which alone decides every None verdict.  Either way, any
    returned assignment has been re-checked against the defining
    conditions by direct exact evaluation.
    """
    if not monochromatic_cycle_free(col):
        return None
    verts = _coloring_vertices(col)
    vidx = {v: t for t, v in enumerate(verts)}
    d = col.d
    if d == 1 or not col.colors:
        assignment = LabelAssignment(d, tuple((v, (Fraction(0),) * d) for v in verts))
        if not check_label_conditions(col, assignment):
            raise AssertionError("trivial assignment failed direct re-evaluation")
        return assignment
    nvars = len(verts) * d
    if method == "auto":
        if d == 2:
            got = _two_color_potential_labels(col, verts, vidx)
            if got is not None:
                return got
        else:
            got = _float_proposed_labels(col, verts, vidx, nvars)
            if got is not None:
                return got
    point = strict_feasible_point(_dominance_constraints(col, vidx, nvars), nvars)
    if point is None:
        return None
    return _finish_assignment(col, verts, vidx, point)


def _pair_digraph_cycle(colors: dict, ci: int, cj: int, m: int) -> bool:
    """Directed cycle in the two-color subgraph (color ci row->col, cj
    col->row); its existence makes the label system infeasible."""
    succ: dict[int, list[int]] = {}
    for (i, j), c in colors.items():
        if c == ci:
            succ.setdefault(i, []).append(m + j)
            succ.setdefault(m + j, [])
        elif c == cj:
            succ.setdefault(m + j, []).append(i)
            succ.setdefault(i, [])
    state: dict[int, int] = {}

    def dfs(v: int) -> bool:
        state[v] = 1
        for w in succ[v]:
            s = state.get(w, 0)
            if s == 1 or (s == 0 and dfs(w)):
                return True
        state[v] = 2
        return False

    return any(state.get(v, 0) == 0 and dfs(v) for v in succ)


def search_d_bernstein(
    mask: int,
    m: int,
    n: int,
    d: int,
    lp_every: int = 0,
) -> tuple[DColoring, LabelAssignment] | None:
    """Exhaustive backtracking search for a d-coloring certificate.

    Prunes on monochromatic cycles, on directed cycles in every two-color
    subgraph (a sound necessary condition for label feasibility; for d = 2
    it is the whole feasibility condition), and optionally on LP
    infeasibility of the partial coloring every ``lp_every`` levels
    (0 disables, the default: the exact LP still gates every leaf).  Colors
    are canonicalized (edge k may only open color max+1), which is harmless
    since color permutations act on certificates.  None is a certified
    nonexistence within budget.
    """
    edges = _edges_of_mask(mask, m, n)
    ne = len(edges)
    if ne > COLOR_SEARCH_EDGE_CAP and d**ne > COLOR_SEARCH_LEAF_CAP:
        raise BudgetExceededError(
            f"coloring search over {ne} edges with d={d} exceeds budget"
        )
    if ne == 0:
        col = DColoring(m, n, d, ())
        return col, verify_d_bernstein(col)
    order = _bfs_edge_order(edges)
    dsus = [_RollbackDSU(m + n) for _ in range(d)]
    assigned: dict = {}

    def feasible_partial() -> bool:
        col = DColoring.from_dict(m, n, d, assigned)
        return verify_d_bernstein(col) is not None

    result: list = []

    def assign(depth: int, used: int) -> bool:
        if depth == ne:
            col = DColoring.from_dict(m, n, d, assigned)
            assignment = verify_d_bernstein(col)
            if assignment is not None:
                result.append((col, assignment))
                return True
            return False
        e = order[depth]
        i, j = e
        for c in range(min(used + 1, d)):
            mk = dsus[c].mark()
            if not dsus[c].union(i, m + j):
                dsus[c].rollback(mk)
                continue
            assigned[e] = c
            ok = True
            for other in range(min(used + 1, d)):
                if other != c and _pair_digraph_cycle(assigned, c, other, m):
                    ok = False
                    break
            if ok and lp_every and depth % lp_every == lp_every - 1 and depth < ne - 1:
                ok = feasible_partial()
            if ok and assign(depth + 1, max(used, c + 1)):
                return True
            del assigned[e]
            dsus[c].rollback(mk)
        return False

    if assign(0, 0):
        return result[0]
    return None


def orientation_to_coloring(o: Orientation) -> DColoring:
    """Orientation classes as a 2-coloring: 0 = row-to-column, 1 = inverse."""
    return DColoring.from_dict(
        o.m, o.n, 2, {e: (0 if e in o.ltr else 1) for e in o.edges}
    )


def coloring_to_orientation(col: DColoring) -> Orientation:
    if col.d != 2:
        raise ValueError("orientation translation needs exactly two colors")
    ltr = frozenset(e for e, c in col.colors if c == 0)
    return Orientation(col.m, col.n, tuple(e for e, _ in col.colors), ltr)
