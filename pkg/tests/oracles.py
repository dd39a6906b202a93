"""Independent reference implementations used to cross-check the library.

Everything here is written against first principles (brute force or
textbook recursions) and deliberately shares no code with the package.
"""

import itertools
from fractions import Fraction


def oracle_count_latin(t: int) -> int:
    """Row-by-row completion count over whole permutations.

    Each row is a permutation of range(t) avoiding the symbols already
    placed in each column; counts are summed over the recursion tree.
    The library counts cell by cell, so the search shapes differ.
    """
    cols = [set() for _ in range(t)]

    def rec(row: int) -> int:
        if row == t:
            return 1
        total = 0
        for perm in itertools.permutations(range(t)):
            if any(perm[j] in cols[j] for j in range(t)):
                continue
            for j in range(t):
                cols[j].add(perm[j])
            total += rec(row + 1)
            for j in range(t):
                cols[j].remove(perm[j])
        return total

    return rec(0)


def oracle_permanent(M) -> Fraction:
    """Permanent as the literal sum over all permutations (n <= 6 or so)."""
    n = len(M)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        term = Fraction(1)
        for i in range(n):
            term *= Fraction(M[i][perm[i]])
        total += term
    return total
