"""Seeded construction of fractional vertices of the hyperplane-stochastic family.

A rook cycle of 2n grid cells meets every row and column exactly twice.
Writing a symbol on each cell, with every symbol used exactly twice,
turns the cycle into an n x n x n half-integral member: put 1/2 at
(i, j, k) whenever cell (i, j) carries symbol k.  The support graph then
contains the rook cycle itself, so it is connected, and the first three
cells of the cycle get symbols (0, 1, 0), planting a triangle: the two
symbol-0 cells share a hyperplane on top of the two cycle edges.  One
odd component means the member is a vertex, and it is never a
permutation tuple since all entries are fractional.
"""

from __future__ import annotations

import math
import random
from typing import Mapping

from stocharray.core import HALF, Array3, PolytopeSpec, is_member
from stocharray.certify import (
    build_support_graph,
    half_integral_certificate,
    is_vertex_rank,
)
from stocharray.designs import HCycle, random_h_cycle


class SymbolMatrix:
    """Symbols written on 2n grid cells, two per row, column, and symbol."""

    __slots__ = ("n", "assignment")

    def __init__(self, n: int, assignment: Mapping):
        assignment = dict(assignment)
        if len(assignment) != 2 * n:
            raise ValueError("need exactly 2n labelled cells")
        rows = [0] * n
        cols = [0] * n
        syms = [0] * n
        for (i, j), s in assignment.items():
            if not (0 <= i < n and 0 <= j < n and 0 <= s < n):
                raise ValueError(f"cell or symbol out of range: {(i, j)} -> {s}")
            rows[i] += 1
            cols[j] += 1
            syms[s] += 1
        if rows != [2] * n or cols != [2] * n or syms != [2] * n:
            raise ValueError("each row, column, and symbol must be used exactly twice")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "assignment", assignment)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolMatrix is immutable")

    def to_array(self) -> Array3:
        return Array3.from_cells(
            self.n, 2, {(i, j, s): HALF for (i, j), s in self.assignment.items()}
        )


def symbol_matrix_to_array(M: SymbolMatrix) -> Array3:
    """Half-integral member with 1/2 at (i, j, k) whenever M labels (i, j) with k."""
    return M.to_array()


def count_symbol_fillings(n: int) -> int:
    """Fillings per rook cycle once the triangle is planted: (2n-3)!/2^(n-2).

    After symbols (0, 1, 0) occupy the first three cells, the remaining
    2n-3 cells receive the second copy of symbol 1 and both copies of
    each of the n-2 symbols 2..n-1, in any order.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    return math.factorial(2 * n - 3) // 2 ** (n - 2)


def build_symbol_matrix(H: HCycle, seed: int) -> SymbolMatrix:
    """Plant the (0, 1, 0) triangle on H's first cells, shuffle the rest."""
    n = H.n
    cells = H.cells()
    rng = random.Random(seed)
    fill = [1] + [s for s in range(2, n) for _ in range(2)]
    rng.shuffle(fill)
    assignment = {cells[0]: 0, cells[1]: 1, cells[2]: 0}
    assignment.update(zip(cells[3:], fill))
    return SymbolMatrix(n, assignment)


def construct_sigma_vertex(n: int, seed: int = 0) -> tuple:
    """Build a fractional vertex of the order-n hyperplane-stochastic polytope.

    Works for every n >= 2 and never fails; returns (array, certificate)
    with the rank-based certificate after checking that the graph
    criterion agrees.
    """
    if n < 2:
        raise ValueError("order must be >= 2")
    rng = random.Random(seed)
    H = random_h_cycle(n, rng.randrange(1 << 30))
    M = build_symbol_matrix(H, rng.randrange(1 << 30))
    A = M.to_array()
    spec = PolytopeSpec("sigma", n, 2)
    assert is_member(A, spec)
    graph = build_support_graph(A, "hyperplane")
    assert graph.is_connected and not graph.has_bipartite_component
    graph_cert = half_integral_certificate(A, spec)
    rank_cert = is_vertex_rank(A, spec)
    assert graph_cert.is_vertex and rank_cert.is_vertex, (
        "graph and rank certificates must both accept the construction"
    )
    return A, rank_cert


def tuple_to_array(perms) -> Array3:
    """The 0/1 member encoding a d-tuple of permutations.

    Cell (i, p1(i), ..., pd(i)) carries 1 for each i; these integral
    members are exactly the 0/1 points of the hyperplane-stochastic
    family, (n!)^d of them.
    """
    perms = tuple(tuple(p) for p in perms)
    if not perms:
        raise ValueError("need at least one permutation")
    n = len(perms[0])
    for p in perms:
        if sorted(p) != list(range(n)):
            raise ValueError("each component must be a permutation of range(n)")
    values = {(i,) + tuple(p[i] for p in perms): 1 for i in range(n)}
    return Array3.from_cells(n, len(perms), values)
