"""Combinatorial designs and graph tools feeding the vertex constructions.

Latin squares (random generation, exhaustive counting), rook cycles
through a grid (closed walks alternating row and column steps, canonical
up to rotation and reversal), double Latin squares built from two blocks
and a cyclic row relabeling, and bipartite matching / 2-factor
machinery.  Symbols and indices are 0-based internally.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence


class MatchingError(RuntimeError):
    """No matching / factor with the requested properties exists."""


# ─── Latin squares ───────────────────────────────────────────────────────────


class LatinSquare:
    """An order-t grid over symbols 0..t-1, each once per row and column."""

    __slots__ = ("grid",)

    def __init__(self, grid):
        rows = tuple(tuple(row) for row in grid)
        t = len(rows)
        full = frozenset(range(t))
        if t < 1:
            raise ValueError("order must be >= 1")
        for row in rows:
            if len(row) != t or frozenset(row) != full:
                raise ValueError("not a Latin square: bad row")
        for j in range(t):
            if frozenset(row[j] for row in rows) != full:
                raise ValueError("not a Latin square: bad column")
        object.__setattr__(self, "grid", rows)

    def __setattr__(self, name, value):
        raise AttributeError("LatinSquare is immutable")

    @property
    def order(self) -> int:
        return len(self.grid)

    @classmethod
    def cyclic(cls, t: int) -> "LatinSquare":
        return cls([[(i + j) % t for j in range(t)] for i in range(t)])

    def __eq__(self, other):
        return isinstance(other, LatinSquare) and self.grid == other.grid

    def __hash__(self):
        return hash(self.grid)

    def __repr__(self):
        return f"LatinSquare(order={self.order})"


def _fill_latin(t: int, choose, forbid=None):
    """Cell-by-cell backtracking fill; `choose` orders candidate symbols.

    Returns a grid or None.  ``forbid[i][j]`` optionally bans one symbol
    per cell (used to build squares discordant with a given one).
    """
    grid = [[-1] * t for _ in range(t)]
    row_free = [(1 << t) - 1 for _ in range(t)]
    col_free = [(1 << t) - 1 for _ in range(t)]

    def rec(pos: int) -> bool:
        if pos == t * t:
            return True
        i, j = divmod(pos, t)
        avail = row_free[i] & col_free[j]
        if forbid is not None:
            avail &= ~(1 << forbid[i][j])
        for s in choose(avail, pos):
            bit = 1 << s
            grid[i][j] = s
            row_free[i] ^= bit
            col_free[j] ^= bit
            if rec(pos + 1):
                return True
            row_free[i] ^= bit
            col_free[j] ^= bit
        grid[i][j] = -1
        return False

    return grid if rec(0) else None


def _bits(mask: int) -> list:
    out = []
    s = 0
    while mask:
        if mask & 1:
            out.append(s)
        mask >>= 1
        s += 1
    return out


def random_latin(t: int, seed: int) -> LatinSquare:
    """Uniformly seeded random Latin square of order t (same seed, same square)."""
    if t < 1:
        raise ValueError("order must be >= 1")
    rng = random.Random(seed)

    def choose(avail, _pos):
        symbols = _bits(avail)
        rng.shuffle(symbols)
        return symbols

    grid = _fill_latin(t, choose)
    assert grid is not None, "backtracking cannot exhaust: Latin squares always exist"
    return LatinSquare(grid)


def random_latin_discordant(base: LatinSquare, seed: int) -> LatinSquare:
    """A random Latin square differing from ``base`` in every cell."""
    t = base.order
    if t < 2:
        raise ValueError("no discordant square exists for order 1")
    rng = random.Random(seed)

    def choose(avail, _pos):
        symbols = _bits(avail)
        rng.shuffle(symbols)
        return symbols

    grid = _fill_latin(t, choose, forbid=[list(r) for r in base.grid])
    if grid is None:
        raise MatchingError("no discordant Latin square found")
    return LatinSquare(grid)


def iter_latin_squares(t: int) -> Iterator[LatinSquare]:
    """Exhaustively enumerate all order-t Latin squares (row-major backtracking)."""
    if t < 1:
        raise ValueError("order must be >= 1")
    grid = [[-1] * t for _ in range(t)]
    row_free = [(1 << t) - 1 for _ in range(t)]
    col_free = [(1 << t) - 1 for _ in range(t)]

    def rec(pos: int):
        if pos == t * t:
            yield LatinSquare([row[:] for row in grid])
            return
        i, j = divmod(pos, t)
        avail = row_free[i] & col_free[j]
        while avail:
            bit = avail & -avail
            avail ^= bit
            s = bit.bit_length() - 1
            grid[i][j] = s
            row_free[i] ^= bit
            col_free[j] ^= bit
            yield from rec(pos + 1)
            row_free[i] ^= bit
            col_free[j] ^= bit
        grid[i][j] = -1

    yield from rec(0)


def count_latin(t: int) -> int:
    """Exact number of order-t Latin squares by exhaustive backtracking (t <= 5)."""
    if not 1 <= t <= 5:
        raise ValueError("exhaustive count supported for 1 <= t <= 5 only")
    row_free = [(1 << t) - 1 for _ in range(t)]
    col_free = [(1 << t) - 1 for _ in range(t)]
    last = t * t - 1

    def rec(pos: int) -> int:
        i, j = divmod(pos, t)
        avail = row_free[i] & col_free[j]
        if pos == last:
            return 1 if avail else 0
        total = 0
        while avail:
            bit = avail & -avail
            avail ^= bit
            row_free[i] ^= bit
            col_free[j] ^= bit
            total += rec(pos + 1)
            row_free[i] ^= bit
            col_free[j] ^= bit
        return total

    return rec(0)


# ─── rook cycles (closed alternating row/column walks) ───────────────────────


class HCycle:
    """A closed rook cycle through 2n grid cells.

    Encoded by two permutations ``rows`` and ``cols`` of range(n): the cell
    sequence is (r0,c0), (r1,c0), (r1,c1), (r2,c1), ..., (r0, c_{n-1}).
    Two encodings describe the same cell set exactly when they differ by a
    simultaneous rotation or by reversal; `canonical` picks the
    lexicographic minimum over those 2n encodings.
    """

    __slots__ = ("rows", "cols")

    def __init__(self, rows: Sequence[int], cols: Sequence[int]):
        rows = tuple(rows)
        cols = tuple(cols)
        n = len(rows)
        if n < 2:
            raise ValueError("need n >= 2")
        if sorted(rows) != list(range(n)) or sorted(cols) != list(range(n)):
            raise ValueError("rows and cols must both be permutations of range(n)")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    def __setattr__(self, name, value):
        raise AttributeError("HCycle is immutable")

    @property
    def n(self) -> int:
        return len(self.rows)

    def cells(self) -> list:
        """The 2n cells in traversal order."""
        n = self.n
        out = []
        for t in range(n):
            out.append((self.rows[t], self.cols[t]))
            out.append((self.rows[(t + 1) % n], self.cols[t]))
        return out

    def variants(self) -> list:
        """All 2n encodings of this cell set (n rotations x 2 directions)."""
        n = self.n
        rev_rows = (self.rows[0],) + tuple(reversed(self.rows[1:]))
        rev_cols = tuple(reversed(self.cols))
        out = []
        for rows, cols in ((self.rows, self.cols), (rev_rows, rev_cols)):
            for t in range(n):
                out.append((rows[t:] + rows[:t], cols[t:] + cols[:t]))
        return out

    def canonical(self) -> "HCycle":
        rows, cols = min(self.variants())
        return HCycle(rows, cols)

    def __eq__(self, other):
        if not isinstance(other, HCycle) or other.n != self.n:
            return False
        return min(self.variants()) == min(other.variants())

    def __hash__(self):
        return hash(min(self.variants()))

    def __repr__(self):
        return f"HCycle(rows={self.rows}, cols={self.cols})"


def count_h_cycles(n: int) -> int:
    """Number of distinct rook cycles on an n x n grid: n! (n-1)! / 2."""
    if n < 2:
        raise ValueError("need n >= 2")
    return math.factorial(n) * math.factorial(n - 1) // 2


def iter_h_cycles(n: int) -> Iterator[HCycle]:
    """All distinct rook cycles, one canonical representative each.

    Exhaustive over n! (n-1)! encodings with the first row pinned to 0;
    intended for small n.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rest = list(range(1, n))
    seen = set()
    for rows_tail in itertools.permutations(rest):
        rows = (0,) + rows_tail
        for cols in itertools.permutations(range(n)):
            key = min(HCycle(rows, cols).variants())
            if key not in seen:
                seen.add(key)
                yield HCycle(*key)


def random_h_cycle(n: int, seed: int) -> HCycle:
    rng = random.Random(seed)
    rows = list(range(n))
    cols = list(range(n))
    rng.shuffle(rows)
    rng.shuffle(cols)
    return HCycle(rows, cols)


# ─── double Latin squares ────────────────────────────────────────────────────


class DoubleLatinSquare:
    """Order-n grid (n even) over symbols 0..n/2-1, each twice per row and column."""

    __slots__ = ("grid",)

    def __init__(self, grid):
        rows = tuple(tuple(row) for row in grid)
        n = len(rows)
        if n < 2 or n % 2:
            raise ValueError("order must be even and >= 2")
        t = n // 2
        for row in rows:
            if len(row) != n:
                raise ValueError("grid is not square")
            if any(row.count(s) != 2 for s in range(t)):
                raise ValueError("each symbol must appear exactly twice per row")
        for j in range(n):
            col = [row[j] for row in rows]
            if any(col.count(s) != 2 for s in range(t)):
                raise ValueError("each symbol must appear exactly twice per column")
        object.__setattr__(self, "grid", rows)

    def __setattr__(self, name, value):
        raise AttributeError("DoubleLatinSquare is immutable")

    @property
    def order(self) -> int:
        return len(self.grid)

    def symbol_cells(self, s: int) -> list:
        return [
            (i, j)
            for i in range(self.order)
            for j in range(self.order)
            if self.grid[i][j] == s
        ]

    def __eq__(self, other):
        return isinstance(other, DoubleLatinSquare) and self.grid == other.grid

    def __hash__(self):
        return hash(self.grid)

    def __repr__(self):
        return f"DoubleLatinSquare(order={self.order})"


def is_single_cycle(perm: Sequence[int]) -> bool:
    """True when the permutation is one cycle covering all its points."""
    t = len(perm)
    if sorted(perm) != list(range(t)):
        raise ValueError("not a permutation")
    seen = 1
    x = perm[0]
    while x != 0:
        x = perm[x]
        seen += 1
    return seen == t


def double_latin_from(A: LatinSquare, B: LatinSquare, sigma: Sequence[int]) -> DoubleLatinSquare:
    """Stack [[A, B], [sigma(A), B]] into an order-2t double Latin square.

    ``sigma`` must be a permutation of range(t) forming a single t-cycle
    (the identity is only allowed at t = 1); sigma(A) permutes A's rows.
    The result is always Hamiltonian: each symbol's 2n cells close into
    one rook cycle.
    """
    t = A.order
    if B.order != t:
        raise ValueError("blocks must have equal order")
    sigma = tuple(sigma)
    if len(sigma) != t:
        raise ValueError("sigma must act on range(t)")
    if not is_single_cycle(sigma):
        raise ValueError("sigma must be a single t-cycle")
    grid = [list(A.grid[i]) + list(B.grid[i]) for i in range(t)]
    grid += [list(A.grid[sigma[i]]) + list(B.grid[i]) for i in range(t)]
    return DoubleLatinSquare(grid)


def is_hamiltonian(X: DoubleLatinSquare) -> bool:
    """True when every symbol's 2n cells form a single rook cycle."""
    n = X.order
    for s in range(n // 2):
        if _cycle_length(X.symbol_cells(s)) != 2 * n:
            return False
    return True


def _cycle_length(cells: Sequence) -> int:
    """Length of the alternating row/column cycle containing cells[0].

    ``cells`` must have exactly two entries per used row and column, which
    makes the row-partner and column-partner of every cell unique.
    """
    row_mate = {}
    col_mate = {}
    by_row = {}
    by_col = {}
    for c in cells:
        by_row.setdefault(c[0], []).append(c)
        by_col.setdefault(c[1], []).append(c)
    for group, mate in ((by_row, row_mate), (by_col, col_mate)):
        for pair in group.values():
            if len(pair) != 2:
                raise ValueError("cell set does not have two cells per row/column")
            mate[pair[0]] = pair[1]
            mate[pair[1]] = pair[0]
    start = cells[0]
    cur, use_row, steps = start, True, 0
    while True:
        cur = row_mate[cur] if use_row else col_mate[cur]
        use_row = not use_row
        steps += 1
        if cur == start and use_row:
            return steps


def rook_cycle_order(cells: Sequence) -> list:
    """The cells of a single rook cycle listed in traversal order.

    Raises ValueError if the cells split into several cycles.
    """
    row_mate = {}
    col_mate = {}
    by_row = {}
    by_col = {}
    for c in cells:
        by_row.setdefault(c[0], []).append(c)
        by_col.setdefault(c[1], []).append(c)
    for group, mate in ((by_row, row_mate), (by_col, col_mate)):
        for pair in group.values():
            if len(pair) != 2:
                raise ValueError("cell set does not have two cells per row/column")
            mate[pair[0]] = pair[1]
            mate[pair[1]] = pair[0]
    start = min(cells)
    order = [start]
    cur, use_row = start, True
    while True:
        cur = row_mate[cur] if use_row else col_mate[cur]
        use_row = not use_row
        if cur == start and use_row:
            break
        order.append(cur)
    if len(order) != len(cells):
        raise ValueError("cells form more than one cycle")
    return order


# ─── bipartite graphs, matchings, 2-factors ──────────────────────────────────


@dataclass(frozen=True)
class BipartiteGraph:
    """Simple bipartite graph on left/right vertex sets {0..n_left-1}, {0..n_right-1}."""

    n_left: int
    n_right: int
    edges: frozenset

    def __post_init__(self):
        for (u, v) in self.edges:
            if not (0 <= u < self.n_left and 0 <= v < self.n_right):
                raise ValueError(f"edge out of range: {(u, v)}")

    @classmethod
    def from_edges(cls, n_left: int, n_right: int, edges) -> "BipartiteGraph":
        return cls(n_left, n_right, frozenset((u, v) for u, v in edges))

    @classmethod
    def from_matrix(cls, M) -> "BipartiteGraph":
        edges = [(u, v) for u, row in enumerate(M) for v, x in enumerate(row) if x]
        return cls.from_edges(len(M), len(M[0]) if M else 0, edges)

    @classmethod
    def complete(cls, n: int) -> "BipartiteGraph":
        return cls.from_edges(n, n, itertools.product(range(n), range(n)))

    def adjacency(self) -> list:
        adj = [[] for _ in range(self.n_left)]
        for (u, v) in sorted(self.edges):
            adj[u].append(v)
        return adj

    def without_edges(self, gone) -> "BipartiteGraph":
        return BipartiteGraph(self.n_left, self.n_right, self.edges - frozenset(gone))

    def is_regular(self, k: int) -> bool:
        degs_l = [0] * self.n_left
        degs_r = [0] * self.n_right
        for (u, v) in self.edges:
            degs_l[u] += 1
            degs_r[v] += 1
        return all(x == k for x in degs_l) and all(x == k for x in degs_r)


def perfect_matching(G: BipartiteGraph, order=None) -> dict:
    """A perfect matching as a left -> right dict (augmenting-path search).

    ``order`` optionally reorders left vertices and neighbor lists to
    diversify which matching is found.  Raises MatchingError when none
    exists; never returns a partial matching.
    """
    if G.n_left != G.n_right:
        raise MatchingError("sides differ in size")
    adj = G.adjacency()
    lefts = list(range(G.n_left))
    if order is not None:
        rng = random.Random(order)
        rng.shuffle(lefts)
        adj = [row[:] for row in adj]
        for row in adj:
            rng.shuffle(row)
    match_r = _kuhn(adj, lefts, G.n_right)
    if match_r is None:
        raise MatchingError("no perfect matching")
    return {u: v for v, u in match_r.items()}


def _kuhn(adj: list, lefts, n_right: int) -> dict | None:
    """Kuhn's algorithm; returns right -> left map covering all of ``lefts``."""
    match_r: dict = {}

    def try_augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or try_augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in lefts:
        if not try_augment(u, set()):
            return None
    return match_r


def extract_two_factor(G: BipartiteGraph, order=None) -> frozenset:
    """A 2-factor of a k-regular bipartite graph (k even), as an edge set.

    Two edge-disjoint perfect matchings are peeled off and united; a
    k-regular bipartite graph always contains a perfect matching, and
    removing one keeps the graph (k-1)-regular, so the second matching
    also exists.  ``order`` seeds the matching search order, varying
    which 2-factor comes out.
    """
    n = G.n_left
    if n != G.n_right or n < 2:
        raise ValueError("need equal sides of size >= 2")
    k, rem = divmod(len(G.edges), n)
    if rem or not G.is_regular(k):
        raise ValueError("graph is not regular")
    if k < 2 or k % 2:
        raise ValueError(f"need even regularity >= 2, got {k}")
    m1 = perfect_matching(G, order)
    m1_edges = frozenset(m1.items())
    m2 = perfect_matching(
        G.without_edges(m1_edges), None if order is None else order + 1
    )
    factor = m1_edges | frozenset(m2.items())
    assert _is_two_factor(factor, n), "peeled matchings do not form a 2-factor"
    return factor


def _is_two_factor(edges, n: int) -> bool:
    degs_l = [0] * n
    degs_r = [0] * n
    for (u, v) in edges:
        degs_l[u] += 1
        degs_r[v] += 1
    return all(x == 2 for x in degs_l) and all(x == 2 for x in degs_r)


def _path_endpoints(path_edges) -> tuple:
    """Validate that 3 edges form a simple path; return (ends_l, ends_r, mids)."""
    if len(path_edges) != 3:
        raise ValueError("path must consist of exactly 3 edges")
    count_l: dict = {}
    count_r: dict = {}
    for (u, v) in path_edges:
        count_l[u] = count_l.get(u, 0) + 1
        count_r[v] = count_r.get(v, 0) + 1
    if sorted(count_l.values()) != [1, 2] or sorted(count_r.values()) != [1, 2]:
        raise ValueError("edges do not form a simple 3-edge path")
    end_l = next(u for u, c in count_l.items() if c == 1)
    end_r = next(v for v, c in count_r.items() if c == 1)
    mid_l = next(u for u, c in count_l.items() if c == 2)
    mid_r = next(v for v, c in count_r.items() if c == 2)
    return end_l, end_r, mid_l, mid_r


def two_factor_containing_path(G: BipartiteGraph, path_edges) -> frozenset:
    """A 2-factor of G containing a given 3-edge path.

    G must be (n-2)-regular with sides of size n >= 6.  The primary
    route matches the existence proof: one perfect matching avoiding all
    four path vertices, then a second avoiding the two middle vertices and
    the first matching's edges.  When the second matching fails for the
    first matching found, other deterministic orderings are tried, and a
    complete degree-constrained search guarantees an answer whenever a
    2-factor through the path exists at all.
    """
    n = G.n_left
    if n != G.n_right or n < 6:
        raise ValueError("need equal sides of size >= 6")
    if not G.is_regular(n - 2):
        raise ValueError("graph is not (n-2)-regular")
    path_edges = frozenset(path_edges)
    if not path_edges <= G.edges:
        raise ValueError("path edges must belong to the graph")
    end_l, end_r, mid_l, mid_r = _path_endpoints(path_edges)

    factor = _factor_via_two_matchings(G, path_edges, end_l, end_r, mid_l, mid_r)
    if factor is None:
        factor = _factor_via_bmatching(G, path_edges, end_l, end_r, mid_l, mid_r)
    if factor is None:
        raise MatchingError("no 2-factor contains the given path")
    assert path_edges <= factor and _is_two_factor(factor, n)
    return factor


def _factor_via_two_matchings(G, path_edges, end_l, end_r, mid_l, mid_r):
    n = G.n_left
    sub_l = [u for u in range(n) if u not in (end_l, mid_l)]
    sub_r = [v for v in range(n) if v not in (end_r, mid_r)]
    pos_l = {u: i for i, u in enumerate(sub_l)}
    pos_r = {v: i for i, v in enumerate(sub_r)}
    inner = BipartiteGraph.from_edges(
        n - 2,
        n - 2,
        ((pos_l[u], pos_r[v]) for (u, v) in G.edges if u in pos_l and v in pos_r),
    )
    for attempt in range(8):
        try:
            phi = perfect_matching(inner, order=None if attempt == 0 else attempt)
        except MatchingError:
            return None
        phi_edges = frozenset((sub_l[u], sub_r[v]) for u, v in phi.items())
        outer_l = [u for u in range(n) if u != mid_l]
        outer_r = [v for v in range(n) if v != mid_r]
        opos_l = {u: i for i, u in enumerate(outer_l)}
        opos_r = {v: i for i, v in enumerate(outer_r)}
        outer = BipartiteGraph.from_edges(
            n - 1,
            n - 1,
            (
                (opos_l[u], opos_r[v])
                for (u, v) in G.edges - phi_edges - path_edges
                if u in opos_l and v in opos_r
            ),
        )
        try:
            psi = perfect_matching(outer)
        except MatchingError:
            continue
        psi_edges = frozenset((outer_l[u], outer_r[v]) for u, v in psi.items())
        return path_edges | phi_edges | psi_edges
    return None


def _factor_via_bmatching(G, path_edges, end_l, end_r, mid_l, mid_r):
    """Complete fallback: degree-constrained subgraph by augmenting paths.

    Looks for S within G minus the path's edges such that S + path has all
    degrees exactly 2; i.e. a b-matching with demand 1 at the path's
    endpoints, 0 at its middles, 2 elsewhere.
    """
    n = G.n_left
    need_l = [2] * n
    need_r = [2] * n
    for (u, v) in path_edges:
        need_l[u] -= 1
        need_r[v] -= 1
    adj = [[] for _ in range(n)]
    for (u, v) in sorted(G.edges - path_edges):
        adj[u].append(v)

    owners: dict = {v: [] for v in range(n)}
    chosen: set = set()
    used_r = [0] * n

    def try_augment(u, seen):
        for v in adj[u]:
            if v in seen or (u, v) in chosen:
                continue
            seen.add(v)
            if used_r[v] < need_r[v]:
                chosen.add((u, v))
                owners[v].append(u)
                used_r[v] += 1
                return True
            for u2 in list(owners[v]):
                chosen.discard((u2, v))
                owners[v].remove(u2)
                if try_augment(u2, seen):
                    chosen.add((u, v))
                    owners[v].append(u)
                    return True
                chosen.add((u2, v))
                owners[v].append(u2)
        return False

    for u in range(n):
        for _ in range(need_l[u]):
            if not try_augment(u, set()):
                return None
    return path_edges | frozenset(chosen)
