"""Vertex certification for stochastic-array polytopes.

Three exact routes, all over rational arithmetic:

* a combinatorial criterion for half-integral members, reading bipartite
  structure off the graph whose nodes are the value-1/2 cells,
* a linear-algebra criterion for arbitrary members, via the rank of the
  constraint matrix restricted to the support,
* exhaustive enumeration of all vertices for small instances.

Both decision routes return a `VertexCertificate`; negative certificates
carry an exact witness pair (X, Y) of distinct members averaging to the
queried point, and every witness is re-verified before it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from stocharray.core import (
    HALF,
    Array3,
    PolytopeSpec,
    constraint_cell_groups,
    flat_index,
    is_member,
)
from stocharray.linalg import bareiss_echelon, kernel_vector_int, solve_unique

ONE = Fraction(1)


@dataclass(frozen=True)
class VertexCertificate:
    """Outcome of a vertex test.

    ``witness`` is None for positive certificates; otherwise it is a pair
    of distinct members (X, Y) with A = (X + Y) / 2.
    """

    is_vertex: bool
    method: str
    witness: Optional[tuple] = None

    def __post_init__(self):
        if self.method not in ("graph", "rank", "enumeration"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.is_vertex and self.witness is not None:
            raise ValueError("positive certificate cannot carry a witness")
        if not self.is_vertex and self.witness is None:
            raise ValueError("negative certificate requires a witness")


@dataclass(frozen=True)
class GraphComponent:
    """One connected component of a support graph.

    Exactly one of ``parts`` (a bipartition of the cells) and
    ``odd_cycle`` (a closed walk of odd length) is set.
    """

    cells: tuple
    is_bipartite: bool
    parts: Optional[tuple] = None
    odd_cycle: Optional[tuple] = None


MODES = ("line", "hyperplane")


@dataclass(frozen=True, eq=False)
class SupportGraph:
    """Graph on the value-1/2 cells of a half-integral member.

    Cells are adjacent when they share a constraint group: a line in
    "line" mode, a coordinate hyperplane in "hyperplane" mode.  Value-1
    cells exhaust their groups, are provably immovable, and are never
    included.
    """

    mode: str
    cells: tuple
    edges: frozenset
    components: tuple

    @property
    def is_connected(self) -> bool:
        return len(self.components) <= 1

    @property
    def has_bipartite_component(self) -> bool:
        return any(c.is_bipartite for c in self.components)


def _require_half_integral_member(A: Array3, spec: PolytopeSpec) -> None:
    if (A.n, A.d) != (spec.n, spec.d):
        raise ValueError("array shape does not match the polytope")
    if not is_member(A, spec):
        raise ValueError("array is not a member of the polytope")
    for c in A.support():
        if A[c] not in (HALF, ONE):
            raise ValueError(f"entry at {c} is {A[c]}, not in {{0, 1/2, 1}}")


def _mode_of(spec: PolytopeSpec) -> str:
    return "line" if spec.kind == "omega" else "hyperplane"


def build_support_graph(A: Array3, mode: str = "line") -> SupportGraph:
    """Adjacency structure of the 1/2-cells of a half-integral member.

    ``mode`` selects the adjacency relation ("line" or "hyperplane") and
    thereby the polytope family the array is validated against.  Every
    constraint group of a half-integral member carries either one
    value-1 cell or exactly two value-1/2 cells, so the edge set is read
    directly off the groups.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    spec = PolytopeSpec("omega" if mode == "line" else "sigma", A.n, A.d)
    _require_half_integral_member(A, spec)
    halves = tuple(c for c in A.support() if A[c] == HALF)
    half_set = frozenset(halves)
    edges = set()
    for group in constraint_cell_groups(spec):
        pair = [c for c in group if c in half_set]
        if len(pair) == 2:
            edges.add((min(pair), max(pair)))
        else:
            assert len(pair) == 0, "half-integral member with a lone 1/2 in a group"

    adj: dict = {c: [] for c in halves}
    for (u, v) in edges:
        adj[u].append(v)
        adj[v].append(u)

    components = []
    color: dict = {}
    for start in halves:
        if start in color:
            continue
        color[start] = 0
        parent = {start: None}
        queue = [start]
        comp = [start]
        conflict = None
        while queue:
            u = queue.pop()
            for v in adj[u]:
                if v not in color:
                    color[v] = 1 - color[u]
                    parent[v] = u
                    comp.append(v)
                    queue.append(v)
                elif color[v] == color[u] and conflict is None:
                    conflict = (u, v)
        comp.sort()
        if conflict is None:
            part0 = tuple(c for c in comp if color[c] == 0)
            part1 = tuple(c for c in comp if color[c] == 1)
            components.append(
                GraphComponent(tuple(comp), True, parts=(part0, part1))
            )
        else:
            walk = _odd_walk(parent, *conflict)
            components.append(GraphComponent(tuple(comp), False, odd_cycle=walk))
    return SupportGraph(mode, halves, frozenset(edges), tuple(components))


def _odd_walk(parent: dict, u, v) -> tuple:
    """Closed odd walk through the conflict edge (u, v), via tree paths."""

    def path_to_root(x):
        out = [x]
        while parent[x] is not None:
            x = parent[x]
            out.append(x)
        return out

    up, vp = path_to_root(u), path_to_root(v)
    walk = list(reversed(up)) + vp
    assert walk[0] == walk[-1] and len(walk) % 2 == 0, (
        "closed walk must start and end at the root with an odd edge count"
    )
    return tuple(walk)


def half_integral_certificate(A: Array3, spec: PolytopeSpec) -> VertexCertificate:
    """Vertex test for half-integral members via support-graph bipartiteness.

    The member is a vertex exactly when no component of its support graph
    is bipartite.  A bipartite component yields the witness directly:
    shifting its two parts by +1/4 and -1/4 preserves every group sum, so
    X = A + shift and Y = A - shift are distinct members averaging to A.
    """
    if (A.n, A.d) != (spec.n, spec.d):
        raise ValueError("array shape does not match the polytope")
    graph = build_support_graph(A, _mode_of(spec))
    for comp in graph.components:
        if comp.is_bipartite:
            delta = {}
            for c in comp.parts[0]:
                delta[c] = Fraction(1, 4)
            for c in comp.parts[1]:
                delta[c] = Fraction(-1, 4)
            X = _shift(A, delta, +1)
            Y = _shift(A, delta, -1)
            _check_witness(A, spec, X, Y)
            return VertexCertificate(False, "graph", witness=(X, Y))
    return VertexCertificate(True, "graph")


def is_vertex_half_integral(
    A: Array3, spec: Optional[PolytopeSpec] = None
) -> VertexCertificate:
    """Graph-criterion vertex test; defaults to the line-stochastic family."""
    if spec is None:
        spec = PolytopeSpec("omega", A.n, A.d)
    return half_integral_certificate(A, spec)


def _shift(A: Array3, delta: dict, sign: int) -> Array3:
    values = {c: A[c] for c in A.support()}
    for c, step in delta.items():
        values[c] = values.get(c, Fraction(0)) + sign * step
    return Array3.from_cells(A.n, A.d, values)


def _check_witness(A: Array3, spec: PolytopeSpec, X: Array3, Y: Array3) -> None:
    assert X != Y, "witness members coincide"
    assert is_member(X, spec) and is_member(Y, spec), "witness left the polytope"
    mid = (X + Y).scale(HALF)
    assert mid == A, "witness midpoint is not the queried point"


# ─── rank route ──────────────────────────────────────────────────────────────


def support_constraint_rows(A: Array3, spec: PolytopeSpec) -> tuple:
    """0/1 rows of the constraint matrix restricted to supp(A).

    Returns (rows, support); column j of each row corresponds to
    support[j] in lexicographic cell order.
    """
    support = A.support()
    col = {c: j for j, c in enumerate(support)}
    rows = []
    for group in constraint_cell_groups(spec):
        row = [0] * len(support)
        hit = False
        for c in group:
            j = col.get(c)
            if j is not None:
                row[j] = 1
                hit = True
        if hit:
            rows.append(row)
    return rows, support


def is_vertex_rank(A: Array3, spec: PolytopeSpec) -> VertexCertificate:
    """Vertex test for arbitrary members via support-restricted rank.

    A member is a vertex exactly when the constraint columns indexed by
    its support are linearly independent.  A kernel vector of those
    columns otherwise gives a feasible direction: every group sum is
    preserved, so only the box constraints limit the step, and half the
    largest feasible step produces the witness pair.
    """
    if (A.n, A.d) != (spec.n, spec.d):
        raise ValueError("array shape does not match the polytope")
    if not is_member(A, spec):
        raise ValueError("array is not a member of the polytope")
    rows, support = support_constraint_rows(A, spec)
    k = len(support)
    rank, _, _ = bareiss_echelon(rows)
    if rank == k:
        return VertexCertificate(True, "rank")
    v = kernel_vector_int(rows, k)
    assert v is not None, "rank deficit must yield a kernel vector"
    step = None
    for j, c in enumerate(support):
        if v[j] == 0:
            continue
        room = min(ONE - A[c], A[c]) / abs(v[j])
        assert room > 0, "kernel vector touches a saturated cell"
        step = room if step is None else min(step, room)
    assert step is not None and step > 0
    t = step / 2
    delta = {c: t * v[j] for j, c in enumerate(support) if v[j]}
    X = _shift(A, delta, +1)
    Y = _shift(A, delta, -1)
    _check_witness(A, spec, X, Y)
    return VertexCertificate(False, "rank", witness=(X, Y))


@lru_cache(maxsize=None)
def rank_of_constraints(spec: PolytopeSpec) -> int:
    """Rank of the full constraint matrix (all cells as columns)."""
    n_cols = spec.total_cells
    rows = []
    for group in constraint_cell_groups(spec):
        row = [0] * n_cols
        for c in group:
            row[flat_index(spec.n, spec.d, c)] = 1
        rows.append(row)
    rank, _, _ = bareiss_echelon(rows)
    return rank


def polytope_dimension(spec: PolytopeSpec) -> int:
    """Dimension of the polytope's affine hull: cells minus constraint rank."""
    return spec.total_cells - rank_of_constraints(spec)


# ─── exhaustive enumeration ──────────────────────────────────────────────────


def enumerate_vertices(spec: PolytopeSpec, max_cells: int = 32) -> list:
    """All vertices of a small instance, by exhaustive support search.

    Every vertex is the unique solution supported on some linearly
    independent set of constraint columns, so a depth-first scan over
    independent column subsets (attempting an exact solve whenever the
    chosen cells touch every constraint group) finds each vertex exactly
    once, at its own support.  Each reported array is re-checked with the
    rank criterion.
    """
    if spec.d > 2:
        raise ValueError("enumeration supports d in {1, 2} only")
    N = spec.total_cells
    if N > max_cells:
        raise ValueError(f"instance has {N} cells; enumeration capped at {max_cells}")
    groups = constraint_cell_groups(spec)
    m = len(groups)
    cells = sorted({c for g in groups for c in g})
    assert len(cells) == N
    col_of = {c: j for j, c in enumerate(cells)}
    # column j as a bitmask over the m groups
    col_mask = [0] * N
    for r, group in enumerate(groups):
        for c in group:
            col_mask[col_of[c]] |= 1 << r
    full = (1 << m) - 1
    # last column index that can still cover each group
    last_col = [max(col_of[c] for c in g) for g in groups]

    rows_int = [[1 if (col_mask[j] >> r) & 1 else 0 for j in range(N)] for r in range(m)]

    found = []
    chosen: list = []
    basis: list = []  # reduced column vectors, as (pivot_row, Fraction list)

    def independent_after_add(j: int) -> bool:
        vec = [Fraction(rows_int[r][j]) for r in range(m)]
        for pivot, bvec in basis:
            if vec[pivot]:
                f = vec[pivot] / bvec[pivot]
                for r in range(pivot, m):
                    vec[r] -= f * bvec[r]
        for r in range(m):
            if vec[r]:
                basis.append((r, vec))
                return True
        return False

    def attempt(covered: int) -> None:
        if covered != full:
            return
        sub = [[rows_int[r][j] for j in chosen] for r in range(m)]
        x = solve_unique(sub, [1] * m)
        if x is None or any(v <= 0 for v in x):
            return
        values = {cells[j]: x[i] for i, j in enumerate(chosen)}
        found.append(Array3.from_cells(spec.n, spec.d, values))

    def dfs(i: int, covered: int) -> None:
        if i == N:
            return
        r = 0
        mask = full & ~covered
        while mask:
            if mask & 1 and last_col[r] < i:
                return
            mask >>= 1
            r += 1
        if independent_after_add(i):
            chosen.append(i)
            attempt(covered | col_mask[i])
            dfs(i + 1, covered | col_mask[i])
            chosen.pop()
            basis.pop()
        dfs(i + 1, covered)

    dfs(0, 0)
    for A in found:
        cert = is_vertex_rank(A, spec)
        assert cert.is_vertex, "enumerated point failed the rank criterion"
    found.sort(key=lambda a: a.support())
    return found
