"""Exact linear algebra on small matrices.

Rank and kernel computations use fraction-free Gaussian elimination
(Bareiss one-step rule) over Python integers, so intermediate values are
minors of the input and no rational arithmetic happens until a kernel
vector is back-substituted.  Solving uses plain Fraction elimination;
all callers work at sizes where that is instant.
"""

from __future__ import annotations

from fractions import Fraction


def bareiss_echelon(rows: list) -> tuple:
    """Fraction-free row echelon form of an integer matrix.

    Returns (rank, echelon, pivot_cols) where ``echelon`` is a list of
    integer rows (pivot rows first, in order) and ``pivot_cols[t]`` is the
    column of the t-th pivot.  The input is not modified.
    """
    M = [list(map(int, row)) for row in rows]
    m = len(M)
    ncols = len(M[0]) if m else 0
    r = 0
    prev = 1
    pivot_cols = []
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if M[i][c]:
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        p = M[r][c]
        Mr = M[r]
        for i in range(r + 1, m):
            Mi = M[i]
            f = Mi[c]
            if f:
                M[i] = [(a * p - f * b) // prev for a, b in zip(Mi, Mr)]
            elif p != prev:
                M[i] = [(a * p) // prev for a in Mi]
        prev = p
        pivot_cols.append(c)
        r += 1
        if r == m:
            break
    return r, M, pivot_cols


def rank_int(rows: list) -> int:
    """Exact rank of an integer matrix."""
    if not rows:
        return 0
    return bareiss_echelon(rows)[0]


def kernel_vector_int(rows: list, ncols: int) -> list | None:
    """One exact rational kernel vector of an integer matrix, or None.

    Returns a list of Fractions x with rows . x = 0 and x != 0 whenever the
    columns are linearly dependent; None when the kernel is trivial.
    """
    if ncols == 0:
        return None
    if not rows:
        out = [Fraction(0)] * ncols
        out[0] = Fraction(1)
        return out
    rank, M, pivot_cols = bareiss_echelon(rows)
    if rank == ncols:
        return None
    free = next(c for c in range(ncols) if c not in pivot_cols)
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for t in range(rank - 1, -1, -1):
        if pivot_cols[t] > free:
            continue
        row = M[t]
        s = sum(
            (
                Fraction(row[j]) * x[j]
                for j in range(pivot_cols[t] + 1, ncols)
                if row[j] and x[j]
            ),
            Fraction(0),
        )
        x[pivot_cols[t]] = -s / Fraction(row[pivot_cols[t]])
    assert any(x), "kernel vector vanished"
    for row in rows:
        assert sum(Fraction(a) * v for a, v in zip(row, x) if a and v) == 0, "not in kernel"
    return x


def solve_unique(rows: list, rhs: list) -> list | None:
    """Solve M x = rhs when M has full column rank; None if inconsistent.

    Raises ValueError when the columns are dependent (solution not unique).
    Entries may be ints or Fractions.
    """
    m = len(rows)
    ncols = len(rows[0]) if m else 0
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    r = 0
    pivot_cols = []
    for c in range(ncols):
        piv = next((i for i in range(r, m) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        p = aug[r][c]
        aug[r] = [v / p for v in aug[r]]
        top = aug[r]
        for i in range(m):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], top)]
        pivot_cols.append(c)
        r += 1
    if r < ncols:
        raise ValueError("columns are linearly dependent; solution not unique")
    for i in range(r, m):
        if aug[i][ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for t, c in enumerate(pivot_cols):
        x[c] = aug[t][ncols]
    return x
