"""Slow, independent reference computations for the tests.

Nothing here imports framelab: ranks come from Laplace-expanded minors and
null vectors from a separate Fraction elimination.
"""

from fractions import Fraction
from itertools import combinations

import numpy as np


def det(rows):
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        total += (-1) ** j * Fraction(rows[0][j]) * det(minor)
    return total


def minor_rank(rows, n):
    """Largest k with a nonzero k x k minor."""
    rows = [list(r) for r in rows]
    for k in range(min(len(rows), n), 0, -1):
        for ri in combinations(range(len(rows)), k):
            for ci in combinations(range(n), k):
                if det([[rows[i][j] for j in ci] for i in ri]) != 0:
                    return k
    return 0


def null_vector(rows, n):
    """A nonzero Fraction vector orthogonal to every row, or None."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        a[r] = [x / a[r][c] for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if not free:
        return None
    f = free[0]
    v = [Fraction(0)] * n
    v[f] = Fraction(1)
    for row, p in zip(a[:r], pivots):
        v[p] = -row[f]
    return v


def dot(a, b):
    return sum((Fraction(x) * Fraction(y) for x, y in zip(a, b)), Fraction(0))


def pr_witness_search(rows, n):
    """Exhaustive search over all 2^M splits for x != +-y with equal measurement moduli."""
    m = len(rows)
    for mask in range(1 << m):
        side = [rows[i] for i in range(m) if mask >> i & 1]
        rest = [rows[i] for i in range(m) if not mask >> i & 1]
        u = null_vector(side, n)
        v = null_vector(rest, n)
        if u is None or v is None:
            continue
        x = [a + b for a, b in zip(u, v)]
        y = [a - b for a, b in zip(u, v)]
        assert all(abs(dot(x, r)) == abs(dot(y, r)) for r in rows)
        assert any(c != 0 for c in u) and any(c != 0 for c in v)
        return x, y
    return None


def is_real_pr_witness(rows, x, y):
    """x, y have equal measurement moduli and differ by more than a sign."""
    x = [Fraction(c) for c in x]
    y = [Fraction(c) for c in y]
    same = all(abs(dot(x, r)) == abs(dot(y, r)) for r in rows)
    plus = all(a == b for a, b in zip(x, y))
    minus = all(a == -b for a, b in zip(x, y))
    return same and not plus and not minus


def exact_cp(rows, n):
    """Complement property by minors over every split."""
    m = len(rows)
    for mask in range(1 << m):
        side = [rows[i] for i in range(m) if mask >> i & 1]
        rest = [rows[i] for i in range(m) if not mask >> i & 1]
        if minor_rank(side, n) < n and minor_rank(rest, n) < n:
            return False
    return True


def random_integer_rows(rng, m, n, lo=-1000, hi=1000):
    rows = rng.integers(lo, hi + 1, size=(m, n))
    for i in range(m):
        while not rows[i].any():
            rows[i] = rng.integers(lo, hi + 1, size=n)
    return rows.tolist()


def parse_fraction(s):
    return Fraction(s) if isinstance(s, str) else Fraction(s)


def proj_sq_norm(p, x):
    x = np.asarray(x)
    return float(x @ p @ x)
