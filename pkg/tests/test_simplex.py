"""Exact rational simplex: known optima, statuses, and anti-cycling."""

import itertools
import random
from fractions import Fraction

import pytest

from stocharray.core import PolytopeSpec, constraint_cell_groups, flat_index
from stocharray.simplex import SimplexResult, solve_lp


def test_result_status_validation():
    SimplexResult("optimal", Fraction(0), (), 0)
    with pytest.raises(ValueError):
        SimplexResult("done", None, None, 0)


def test_single_variable():
    res = solve_lp([[1]], [5], [3])
    assert res.status == "optimal"
    assert res.objective == 15 and res.solution == (5,)


def test_known_two_variable_lp():
    # maximize x + 2y  s.t.  x + y = 4, y <= 3 via slack: y + s = 3
    res = solve_lp([[1, 1, 0], [0, 1, 1]], [4, 3], [1, 2, 0])
    assert res.status == "optimal"
    assert res.objective == 7
    assert res.solution[0] == 1 and res.solution[1] == 3


def test_fractional_exact_arithmetic():
    # maximize x  s.t.  3x + 7y = 1 with both nonnegative: x = 1/3
    res = solve_lp([[3, 7]], [1], [1, 0])
    assert res.status == "optimal"
    assert res.objective == Fraction(1, 3)
    assert res.solution == (Fraction(1, 3), Fraction(0))


def test_infeasible():
    res = solve_lp([[1, 1], [1, 1]], [1, 2], [1, 0])
    assert res.status == "infeasible"
    assert res.objective is None and res.solution is None
    # negative right-hand side with nonnegative row is also infeasible
    assert solve_lp([[1, 1]], [-1], [0, 0]).status == "infeasible"


def test_unbounded():
    res = solve_lp([[1, -1]], [0], [1, 1])
    assert res.status == "unbounded"
    assert res.objective is None


def test_redundant_rows_are_tolerated():
    res = solve_lp([[1, 1], [2, 2]], [3, 6], [1, 0])
    assert res.status == "optimal"
    assert res.objective == 3


def test_dimension_guards():
    with pytest.raises(ValueError):
        solve_lp([], [], [1])
    with pytest.raises(ValueError):
        solve_lp([[1, 2]], [1, 2], [1, 0])
    with pytest.raises(ValueError):
        solve_lp([[1, 2]], [1], [1])


def enumerate_basic_optimum(rows, rhs, objective):
    """Best basic feasible solution by brute force over column subsets."""
    m, n = len(rows), len(rows[0])
    best = None
    for cols in itertools.combinations(range(n), m):
        # solve the square system on these columns exactly
        mat = [[Fraction(rows[i][j]) for j in cols] + [Fraction(rhs[i])] for i in range(m)]
        piv = 0
        ok = True
        for c in range(m):
            sel = next((r for r in range(piv, m) if mat[r][c] != 0), None)
            if sel is None:
                ok = False
                break
            mat[piv], mat[sel] = mat[sel], mat[piv]
            inv = 1 / mat[piv][c]
            mat[piv] = [v * inv for v in mat[piv]]
            for r in range(m):
                if r != piv and mat[r][c] != 0:
                    f = mat[r][c]
                    mat[r] = [a - f * b for a, b in zip(mat[r], mat[piv])]
            piv += 1
        if not ok:
            continue
        x = [Fraction(0)] * n
        feasible = True
        for idx, c in enumerate(cols):
            if mat[idx][m] < 0:
                feasible = False
                break
            x[c] = mat[idx][m]
        if not feasible:
            continue
        val = sum(Fraction(objective[j]) * x[j] for j in range(n))
        if best is None or val > best:
            best = val
    return best


def test_degenerate_lp_with_bland_terminates():
    """A classical cycling-prone tableau: Bland's rule must still finish."""
    rows = [
        [Fraction(1, 4), -8, -1, 9, 1, 0, 0],
        [Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ]
    rhs = [0, 0, 1]
    objective = [Fraction(3, 4), -20, Fraction(1, 2), -6, 0, 0, 0]
    res = solve_lp(rows, rhs, objective)
    assert res.status == "optimal"
    assert res.objective == enumerate_basic_optimum(rows, rhs, objective)
    assert res.objective == Fraction(5, 4)


def doubly_stochastic_lp(n):
    spec = PolytopeSpec("omega", n, 1)
    rows = []
    for group in constraint_cell_groups(spec):
        row = [0] * spec.total_cells
        for c in group:
            row[flat_index(n, 1, c)] = 1
        rows.append(row)
    return rows, [1] * len(rows)


def test_assignment_lps_match_permutation_search():
    """LP optima over the doubly stochastic polytope are assignment optima."""
    rng = random.Random(77)
    for n in (2, 3):
        rows, rhs = doubly_stochastic_lp(n)
        for _ in range(6):
            c = [Fraction(rng.randrange(-50, 51), rng.randrange(1, 8)) for _ in range(n * n)]
            res = solve_lp(rows, rhs, c)
            assert res.status == "optimal"
            best = max(
                sum(c[flat_index(n, 1, (i, p[i]))] for i in range(n))
                for p in itertools.permutations(range(n))
            )
            assert res.objective == best
            assert sum(v for v in res.solution) == n
            assert all(v >= 0 for v in res.solution)


def test_solution_satisfies_constraints_exactly():
    rows = [[2, 1, 1, 0], [1, 3, 0, 1]]
    rhs = [4, 6]
    objective = [3, 5, 0, 0]
    res = solve_lp(rows, rhs, objective)
    assert res.status == "optimal"
    for row, b in zip(rows, rhs):
        assert sum(Fraction(a) * x for a, x in zip(row, res.solution)) == b
    assert res.objective == enumerate_basic_optimum(rows, rhs, objective)
    assert res.pivots >= 1
