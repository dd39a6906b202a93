"""Exact primal simplex over rational arithmetic.

Solves  maximize c.x  subject to  A x = b, x >= 0  with a dense tableau
of Fractions, a two-phase start (artificial variables driven out or
dropped as redundant rows), and Bland's rule throughout, so the solver
never cycles and never rounds.  Intended for the modest LP sizes this
package needs; no effort is spent on sparse representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class SimplexResult:
    status: str
    objective: Optional[Fraction]
    solution: Optional[tuple]
    pivots: int

    def __post_init__(self):
        if self.status not in ("optimal", "infeasible", "unbounded"):
            raise ValueError(f"unknown status {self.status!r}")


def solve_lp(rows, rhs, objective) -> SimplexResult:
    """Maximize objective . x subject to rows . x = rhs, x >= 0."""
    m = len(rows)
    if m == 0:
        raise ValueError("need at least one constraint")
    n = len(rows[0])
    if any(len(r) != n for r in rows) or len(rhs) != m or len(objective) != n:
        raise ValueError("inconsistent LP dimensions")

    # tableau columns: n structural, m artificial, then the right-hand side
    width = n + m + 1
    tableau = []
    for i, row in enumerate(rows):
        coeffs = [Fraction(v) for v in row]
        b = Fraction(rhs[i])
        if b < 0:
            coeffs = [-v for v in coeffs]
            b = -b
        line = coeffs + [ZERO] * m + [b]
        line[n + i] = ONE
        tableau.append(line)
    basis = [n + i for i in range(m)]
    pivots = 0

    def pivot(pr: int, pc: int) -> None:
        nonlocal pivots
        prow = tableau[pr]
        inv = ONE / prow[pc]
        if inv != ONE:
            tableau[pr] = prow = [v * inv for v in prow]
        hot = [j for j, v in enumerate(prow) if v]
        for i, row in enumerate(tableau):
            if i == pr:
                continue
            f = row[pc]
            if f:
                for j in hot:
                    row[j] -= f * prow[j]
        basis[pr] = pc
        pivots += 1

    def ratio_row(pc: int) -> Optional[int]:
        best = None
        for i in range(len(basis)):
            a = tableau[i][pc]
            if a > 0:
                key = (tableau[i][-1] / a, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        return None if best is None else best[1]

    # phase 1: drive the artificial total to zero; the cost row is kept
    # as an extra tableau row so pivots maintain it for free
    wrow = [ZERO] * width
    for row in tableau:
        for j in range(n):
            wrow[j] += row[j]
        wrow[-1] += row[-1]
    tableau.append(wrow)
    while True:
        pc = next((j for j in range(n) if tableau[m][j] > 0), None)
        if pc is None:
            break
        pr = ratio_row(pc)
        assert pr is not None, "phase-1 LP is bounded by construction"
        pivot(pr, pc)
    if tableau[m][-1] != 0:
        return SimplexResult("infeasible", None, None, pivots)
    tableau.pop()

    # leftover artificials sit at zero: pivot them out, or drop their
    # rows as redundant when no structural column is available
    for i in range(m - 1, -1, -1):
        if basis[i] < n:
            continue
        pc = next((j for j in range(n) if tableau[i][j] != 0), None)
        if pc is None:
            tableau.pop(i)
            basis.pop(i)
        else:
            pivot(i, pc)
    m_eff = len(basis)

    # phase 2 with an incrementally maintained reduced-cost row
    robj = [Fraction(v) for v in objective] + [ZERO] * (width - n)
    tableau.append(robj)
    for i in range(m_eff):
        f = robj[basis[i]]
        if f:
            row = tableau[i]
            for j in range(width):
                if row[j]:
                    robj[j] -= f * row[j]
    while True:
        pc = next((j for j in range(n) if tableau[m_eff][j] > 0), None)
        if pc is None:
            break
        pr = ratio_row(pc)
        if pr is None:
            return SimplexResult("unbounded", None, None, pivots)
        pivot(pr, pc)

    x = [ZERO] * n
    for i in range(m_eff):
        if basis[i] < n:
            x[basis[i]] = tableau[i][-1]
    value = -tableau[m_eff][-1]
    return SimplexResult("optimal", value, tuple(x), pivots)
