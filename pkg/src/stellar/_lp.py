"""Small exact simplex method over the rationals (Bland's rule).

Solves ``max c.x  s.t.  A x = b, x >= 0``. Meant for the tiny systems that
come up when checking how two simplexes meet; no attempt at speed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


class Infeasible(Exception):
    pass


class Unbounded(Exception):
    pass


def _pivot(T, basis, r, c):
    pv = T[r][c]
    T[r] = [x / pv for x in T[r]]
    for i in range(len(T)):
        if i != r and T[i][c] != 0:
            f = T[i][c]
            T[i] = [x - f * y for x, y in zip(T[i], T[r])]
    basis[r] = c


def _run(T, basis, ncols):
    # objective row is T[-1] holding reduced costs (minimisation form)
    while True:
        entering = next((j for j in range(ncols) if T[-1][j] < 0), None)
        if entering is None:
            return
        best = None
        for i in range(len(T) - 1):
            if T[i][entering] > 0:
                ratio = T[i][-1] / T[i][entering]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            raise Unbounded()
        _pivot(T, basis, best[1], entering)


def lp_max(c: Sequence, A: Sequence[Sequence], b: Sequence):
    """Return ``(optimum, x)`` for the standard-form program."""
    m, n = len(A), len(c)
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    # phase 1: artificials n..n+m-1
    T = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        for j in range(n + m + 1):
            if j < n or j == n + m:
                obj[j] -= T[i][j]
    T.append(obj)
    basis = [n + i for i in range(m)]
    _run(T, basis, n + m)
    if T[-1][-1] != 0:
        raise Infeasible()
    # drive remaining artificials out of the basis
    for i in range(m):
        if basis[i] >= n:
            j = next((j for j in range(n) if T[i][j] != 0), None)
            if j is not None:
                _pivot(T, basis, i, j)
    keep = [i for i in range(m) if basis[i] < n]
    T2 = [[T[i][j] for j in range(n)] + [T[i][-1]] for i in keep]
    basis2 = [basis[i] for i in keep]
    obj2 = [-Fraction(x) for x in c] + [Fraction(0)]
    for r, bj in enumerate(basis2):
        if obj2[bj] != 0:
            f = obj2[bj]
            obj2 = [x - f * y for x, y in zip(obj2, T2[r])]
    T2.append(obj2)
    _run(T2, basis2, n)
    x = [Fraction(0)] * n
    for r, bj in enumerate(basis2):
        x[bj] = T2[r][-1]
    return T2[-1][-1], x
