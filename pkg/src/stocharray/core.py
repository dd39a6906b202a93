"""Exact rational stochastic arrays.

A (d+1)-way array with side n is *line-stochastic* ("omega") when every
axis-parallel line sums to 1, and *hyperplane-stochastic* ("sigma") when
every coordinate hyperplane sums to 1.  For d = 1 the omega family is the
set of doubly stochastic matrices (the Birkhoff polytope); for d = 2 its
0/1 members correspond to Latin squares.

Entries are `fractions.Fraction` throughout; nothing in this module
rounds.  Arrays are 0-based in memory.  The JSON interchange format uses
positional nested lists, so the 1-based convention of the file-format
documentation only affects how cells are written about, never how they
are stored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

HALF = Fraction(1, 2)

KINDS = ("omega", "sigma")

Cell = tuple  # tuple[int, ...] of length d + 1


@dataclass(frozen=True)
class PolytopeSpec:
    """Identifies one polytope: family ``kind``, side ``n``, order ``d``.

    Members are (d+1)-way arrays; "omega" constrains lines, "sigma"
    constrains hyperplanes.
    """

    kind: str
    n: int
    d: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")

    @property
    def axes(self) -> int:
        return self.d + 1

    @property
    def total_cells(self) -> int:
        return self.n ** (self.d + 1)


class Array3:
    """Immutable dense (d+1)-way array of exact rationals with side n."""

    __slots__ = ("n", "d", "_entries")

    def __init__(self, n: int, d: int, entries: Sequence):
        if n < 1 or d < 1:
            raise ValueError("need n >= 1 and d >= 1")
        flat = tuple(v if isinstance(v, Fraction) else Fraction(v) for v in entries)
        if len(flat) != n ** (d + 1):
            raise ValueError(f"expected {n ** (d + 1)} entries, got {len(flat)}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_entries", flat)

    def __setattr__(self, name, value):
        raise AttributeError("Array3 is immutable")

    @classmethod
    def zeros(cls, n: int, d: int) -> "Array3":
        return cls(n, d, [0] * n ** (d + 1))

    @classmethod
    def from_cells(cls, n: int, d: int, values: Mapping[Cell, object]) -> "Array3":
        """Build from a cell -> value mapping; unmentioned cells are 0."""
        flat = [Fraction(0)] * n ** (d + 1)
        for cell, v in values.items():
            flat[flat_index(n, d, cell)] = Fraction(v)
        return cls(n, d, flat)

    @classmethod
    def from_nested(cls, nested) -> "Array3":
        """Build from nested lists, nested[i0][i1]...[id]; shape must be a cube."""
        shape = []
        probe = nested
        while isinstance(probe, (list, tuple)):
            shape.append(len(probe))
            if not probe:
                raise ValueError("empty axis in nested entries")
            probe = probe[0]
        if len(shape) < 2 or any(s != shape[0] for s in shape):
            raise ValueError(f"nested entries must form an n^(d+1) cube, got shape {shape}")
        n, d = shape[0], len(shape) - 1
        flat = []

        def walk(x, depth):
            if depth == len(shape):
                flat.append(x)
                return
            if not isinstance(x, (list, tuple)) or len(x) != n:
                raise ValueError("ragged nested entries")
            for y in x:
                walk(y, depth + 1)

        walk(nested, 0)
        return cls(n, d, flat)

    def index(self, cell: Cell) -> int:
        return flat_index(self.n, self.d, cell)

    def __getitem__(self, cell: Cell) -> Fraction:
        return self._entries[flat_index(self.n, self.d, cell)]

    @property
    def entries(self) -> tuple:
        return self._entries

    def cells(self) -> Iterator[Cell]:
        return itertools.product(range(self.n), repeat=self.d + 1)

    def support(self) -> list:
        """Cells with nonzero entry, in lexicographic order."""
        return [c for c in self.cells() if self._entries[self.index(c)] != 0]

    def nested(self) -> list:
        out = list(self._entries)
        for _ in range(self.d):
            out = [out[i : i + self.n] for i in range(0, len(out), self.n)]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, Array3)
            and self.n == other.n
            and self.d == other.d
            and self._entries == other._entries
        )

    def __hash__(self):
        return hash((self.n, self.d, self._entries))

    def __add__(self, other: "Array3") -> "Array3":
        self._check_same_shape(other)
        return Array3(self.n, self.d, [a + b for a, b in zip(self._entries, other._entries)])

    def __sub__(self, other: "Array3") -> "Array3":
        self._check_same_shape(other)
        return Array3(self.n, self.d, [a - b for a, b in zip(self._entries, other._entries)])

    def scale(self, factor) -> "Array3":
        f = Fraction(factor)
        return Array3(self.n, self.d, [f * a for a in self._entries])

    def _check_same_shape(self, other):
        if not isinstance(other, Array3) or self.n != other.n or self.d != other.d:
            raise ValueError("shape mismatch")

    def __repr__(self):
        return f"Array3(n={self.n}, d={self.d})"


def flat_index(n: int, d: int, cell: Cell) -> int:
    if len(cell) != d + 1:
        raise ValueError(f"cell must have {d + 1} coordinates, got {cell!r}")
    idx = 0
    for c in cell:
        if not 0 <= c < n:
            raise ValueError(f"coordinate out of range in {cell!r}")
        idx = idx * n + c
    return idx


# ─── lines and hyperplanes ───────────────────────────────────────────────────


def line_cells(n: int, d: int, axis: int, fixed: Sequence[int]) -> list:
    """Cells of the line along ``axis`` with the other coordinates ``fixed``.

    ``fixed`` lists the d frozen coordinates in axis order, skipping ``axis``.
    """
    if not 0 <= axis <= d:
        raise ValueError(f"axis out of range: {axis}")
    if len(fixed) != d:
        raise ValueError(f"need {d} fixed coordinates, got {len(fixed)}")
    cells = []
    for v in range(n):
        coords = list(fixed)
        coords.insert(axis, v)
        cells.append(tuple(coords))
    return cells


def iter_lines(n: int, d: int) -> Iterator[tuple]:
    """Yield (axis, fixed, cells) for all (d+1)*n^d axis-parallel lines."""
    for axis in range(d + 1):
        for fixed in itertools.product(range(n), repeat=d):
            yield axis, fixed, line_cells(n, d, axis, fixed)


def hyperplane_cells(n: int, d: int, axis: int, value: int) -> list:
    """Cells of the coordinate hyperplane ``axis = value``."""
    if not 0 <= axis <= d:
        raise ValueError(f"axis out of range: {axis}")
    if not 0 <= value < n:
        raise ValueError(f"value out of range: {value}")
    cells = []
    for rest in itertools.product(range(n), repeat=d):
        coords = list(rest)
        coords.insert(axis, value)
        cells.append(tuple(coords))
    return cells


def iter_hyperplanes(n: int, d: int) -> Iterator[tuple]:
    """Yield (axis, value, cells) for all (d+1)*n coordinate hyperplanes."""
    for axis in range(d + 1):
        for value in range(n):
            yield axis, value, hyperplane_cells(n, d, axis, value)


def constraint_cell_groups(spec: PolytopeSpec) -> list:
    """The unit-sum constraint groups of ``spec``: lines (omega) or hyperplanes (sigma).

    Returns a list of cell lists, in a fixed deterministic order.
    """
    if spec.kind == "omega":
        return [cells for _, _, cells in iter_lines(spec.n, spec.d)]
    return [cells for _, _, cells in iter_hyperplanes(spec.n, spec.d)]


# ─── membership and basic polytope facts ─────────────────────────────────────


def is_member(A: Array3, spec: PolytopeSpec) -> bool:
    """Exact membership test: nonnegative entries, every constraint sums to 1."""
    if A.n != spec.n or A.d != spec.d:
        raise ValueError(
            f"array shape (n={A.n}, d={A.d}) does not match spec (n={spec.n}, d={spec.d})"
        )
    if any(v < 0 for v in A.entries):
        return False
    one = Fraction(1)
    for cells in constraint_cell_groups(spec):
        if sum(A[c] for c in cells) != one:
            return False
    return True


def affine_dimension(spec: PolytopeSpec) -> int:
    """Affine dimension of the omega polytope: (n-1)^(d+1).

    The sigma family has no closed form here; use
    ``certify.rank_of_constraints`` and subtract from the cell count.
    """
    if spec.kind != "omega":
        raise ValueError("closed-form affine dimension applies to kind 'omega' only")
    return (spec.n - 1) ** (spec.d + 1)


def uniform_array(spec: PolytopeSpec) -> Array3:
    """The barycenter member: 1/n per line (omega) or 1/n^d per hyperplane (sigma)."""
    value = Fraction(1, spec.n) if spec.kind == "omega" else Fraction(1, spec.n ** spec.d)
    return Array3(spec.n, spec.d, [value] * spec.total_cells)


def latin_to_array(square) -> Array3:
    """Encode a Latin square L as the 0/1 member with A[i, j, L[i, j]] = 1."""
    n = square.order
    values = {}
    for i in range(n):
        for j in range(n):
            values[(i, j, square.grid[i][j])] = 1
    return Array3.from_cells(n, 2, values)


def array_to_latin(A: Array3):
    """Inverse of `latin_to_array`; raises if A is not a 0/1 line-stochastic cube."""
    from . import designs

    if A.d != 2:
        raise ValueError("array_to_latin needs a 3-way array")
    n = A.n
    grid = [[None] * n for _ in range(n)]
    for (i, j, k) in A.support():
        if A[(i, j, k)] != 1:
            raise ValueError("array has a non-0/1 entry")
        if grid[i][j] is not None:
            raise ValueError("two symbols in one cell")
        grid[i][j] = k
    if any(v is None for row in grid for v in row):
        raise ValueError("array does not cover every (i, j)")
    return designs.LatinSquare(grid)


# ─── JSON interchange ────────────────────────────────────────────────────────


def fraction_to_json(v: Fraction):
    """Exact JSON form: plain int when integral, lowest-terms "p/q" otherwise."""
    if v.denominator == 1:
        return int(v)
    return f"{v.numerator}/{v.denominator}"


def fraction_from_json(v) -> Fraction:
    if isinstance(v, bool):
        raise ValueError(f"not a rational entry: {v!r}")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        num, sep, den = v.partition("/")
        if sep and num.lstrip("-").isdigit() and den.isdigit() and int(den) != 0:
            return Fraction(int(num), int(den))
        raise ValueError(f"malformed rational string: {v!r}")
    raise ValueError(f"entries must be int or 'p/q' strings, got {type(v).__name__}")


def to_json_dict(spec: PolytopeSpec, A: Array3) -> dict:
    """Interchange dict: {"kind", "n", "d", "entries"} with exact entries."""
    if A.n != spec.n or A.d != spec.d:
        raise ValueError("array shape does not match spec")

    def encode(x):
        if isinstance(x, list):
            return [encode(y) for y in x]
        return fraction_to_json(x)

    return {"kind": spec.kind, "n": spec.n, "d": spec.d, "entries": encode(A.nested())}


def from_json_dict(obj: Mapping) -> tuple:
    """Parse an interchange dict; returns (PolytopeSpec, Array3)."""
    try:
        kind, n, d, entries = obj["kind"], obj["n"], obj["d"], obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"missing array field: {exc}") from None
    if not isinstance(n, int) or not isinstance(d, int):
        raise ValueError("n and d must be integers")
    spec = PolytopeSpec(kind, n, d)

    def decode(x):
        if isinstance(x, list):
            return [decode(y) for y in x]
        return fraction_from_json(x)

    A = Array3.from_nested(decode(entries))
    if A.n != n or A.d != d:
        raise ValueError("entries shape disagrees with declared n, d")
    return spec, A


# ─── known small vertices (used as fixtures and CLI demos) ───────────────────


def known_omega_vertex_order3() -> Array3:
    """The smallest line-stochastic vertex with entries {0, 1/2, 1} (n=3, d=2).

    Not the encoding of any Latin square: layer k=0 holds a single 1 and a
    2x2 block of halves, and the half-cells form one connected odd-cycled
    structure.  Layers below are A[., ., k].
    """
    h = HALF
    layers = [
        [[1, 0, 0], [0, h, h], [0, h, h]],
        [[0, h, h], [h, h, 0], [h, 0, h]],
        [[0, h, h], [h, 0, h], [h, h, 0]],
    ]
    return _from_layers(layers)


def known_sigma_vertex_order2() -> Array3:
    """The all-halves hyperplane-stochastic vertex of order n=2, d=2."""
    h = HALF
    layers = [
        [[h, 0], [0, h]],
        [[0, h], [h, 0]],
    ]
    return _from_layers(layers)


def _from_layers(layers) -> Array3:
    """Assemble A from layer matrices: A[i, j, k] = layers[k][i][j]."""
    n = len(layers)
    values = {}
    for k, layer in enumerate(layers):
        for i in range(n):
            for j in range(n):
                if layer[i][j]:
                    values[(i, j, k)] = layer[i][j]
    return Array3.from_cells(n, 2, values)
