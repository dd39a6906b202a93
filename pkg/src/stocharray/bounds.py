"""Exact permanents and counting bounds for designs and vertices.

The permanent routine is exact over integers or rationals; the named
bounds are classical inequalities (a factorial lower bound and a
row-sum-product upper bound for permanents of doubly stochastic or 0/1
matrices) plus log-scale estimates used to report how many distinct
outputs the seeded constructions can reach.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from stocharray.core import PolytopeSpec
from stocharray.designs import count_latin


def permanent(M) -> object:
    """Exact permanent by inclusion-exclusion over column subsets.

    Runs in O(2^n n) with Gray-code updates of the running row sums;
    capped at n = 20.  Integer matrices give an int, rational ones a
    Fraction.
    """
    rows = [list(r) for r in M]
    n = len(rows)
    if n == 0:
        return 1
    if any(len(r) != n for r in rows):
        raise ValueError("matrix must be square")
    if n > 20:
        raise ValueError("permanent capped at order 20")
    sums = [0] * n
    total = 0
    prev_gray = 0
    sign = 1 if n % 2 == 0 else -1
    for s in range(1, 1 << n):
        gray = s ^ (s >> 1)
        changed = (gray ^ prev_gray).bit_length() - 1
        if gray & (1 << changed):
            for i in range(n):
                sums[i] += rows[i][changed]
        else:
            for i in range(n):
                sums[i] -= rows[i][changed]
        prev_gray = gray
        prod = 1
        for x in sums:
            prod *= x
            if prod == 0:
                break
        total += prod if gray.bit_count() % 2 == 0 else -prod
    return sign * total


def factorial_lower_bound(n: int) -> Fraction:
    """n!/n^n: the minimum permanent over doubly stochastic order-n matrices."""
    if n < 1:
        raise ValueError("need n >= 1")
    return Fraction(math.factorial(n), n**n)


def rowsum_upper_bound(row_sums) -> mpmath.mpf:
    """Product of (r!)^(1/r) over the row sums, at 60 decimal digits.

    Bounds the permanent of any 0/1 matrix with the given row sums from
    above.  Rows with sum 0 contribute the factor 1 (and force permanent
    zero anyway).  Use `rowsum_bound_holds` for exact comparisons; this
    value is for display.
    """
    with mpmath.workdps(60):
        out = mpmath.mpf(1)
        for r in row_sums:
            if r < 0:
                raise ValueError("row sums must be nonnegative")
            if r:
                out *= mpmath.power(mpmath.factorial(r), mpmath.mpf(1) / r)
        return +out


def rowsum_bound_holds(value, row_sums) -> bool:
    """Exactly decide value <= prod (r!)^(1/r), avoiding any rounding.

    Both sides are raised to the lcm L of the nonzero row sums, turning
    the comparison into value^L <= prod (r!)^(L/r) over plain integers.
    """
    if value < 0:
        raise ValueError("value must be nonnegative")
    nonzero = [r for r in row_sums if r]
    if not nonzero:
        return value <= 1
    L = math.lcm(*nonzero)
    frac = Fraction(value)
    lhs = frac.numerator**L
    rhs_num = 1
    for r in nonzero:
        rhs_num *= math.factorial(r) ** (L // r)
    return lhs <= rhs_num * frac.denominator**L


def latin_count_log_asymptotic(n: int) -> float:
    """Leading term of the log of the order-n Latin square count: n^2 (ln n - 2)."""
    if n < 1:
        raise ValueError("need n >= 1")
    return n * n * (math.log(n) - 2)


def two_factor_log_lower_bound(k: int, n: int) -> float:
    """Log lower bound on the number of 2-factors of a k-regular bipartite graph.

    Peeling two matchings and applying the factorial permanent bound to
    each gives at least (k(k-1)/e^2)^n ordered pairs, and dividing by the
    at-most-2^n decompositions of each 2-factor costs another
    sqrt(2)^... per row: n * ln(k (k-1) / (e^2 sqrt(2))).  Small k can
    make the expression negative; it is then vacuous but still valid.
    """
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    return n * (math.log(k) + math.log(k - 1) - 2 - 0.5 * math.log(2))


def support_size_bound(spec: PolytopeSpec) -> int:
    """Largest possible vertex support: the constraint-matrix rank.

    Line-stochastic: n^(d+1) - (n-1)^(d+1).  Hyperplane-stochastic:
    (d+1)(n-1) + 1.  Matches `certify.rank_of_constraints` exactly.
    """
    n, d = spec.n, spec.d
    if spec.kind == "omega":
        return n ** (d + 1) - (n - 1) ** (d + 1)
    return (d + 1) * (n - 1) + 1


def log_of_int(x: int) -> float:
    """Natural log of a positive integer of any size."""
    if x <= 0:
        raise ValueError("need a positive integer")
    if x.bit_length() <= 900:
        return math.log(x)
    shift = x.bit_length() - 64
    return math.log(x >> shift) + shift * math.log(2)


def construction_count_report(n: int) -> dict:
    """How many distinct arrays the even-order fractional builder can reach.

    The top half is determined by the stacked double Latin square: two
    free order-n/2 blocks and one of (n/2 - 1)! single cycles, an exact
    count when n/2 <= 5 and an asymptotic log estimate beyond.  The
    bottom half ranges over at least the (n-1)! cyclic row orders of its
    first layer times 2-factor counts of shrinking even-regular graphs,
    reported as a summed log lower bound.  The total is the sum of the
    two log components; the log of the order-n Latin square count is
    included as the natural reference scale.
    """
    if n < 2 or n % 2:
        raise ValueError("the builder count needs even n >= 2")
    t = n // 2
    if t <= 5:
        top_count = math.factorial(t - 1) * count_latin(t) ** 2
        top_log = log_of_int(top_count)
        estimated = False
    else:
        top_count = None
        top_log = math.log(math.factorial(t - 1)) + 2 * latin_count_log_asymptotic(t)
        estimated = True
    later_log = sum(two_factor_log_lower_bound(k, n) for k in range(n - 4, 1, -2))
    bottom_log = math.log(math.factorial(n - 1)) + later_log
    return {
        "order": n,
        "top_half_count": top_count,
        "top_half_log_lower_bound": top_log,
        "top_half_estimated": estimated,
        "first_lower_layer_orderings": math.factorial(n - 1),
        "later_layers_log_lower_bound": later_log,
        "bottom_half_log_lower_bound": bottom_log,
        "total_log_lower_bound": top_log + bottom_log,
        "reference_log_scale": latin_count_log_asymptotic(n),
    }
