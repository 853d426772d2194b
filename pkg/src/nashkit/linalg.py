"""Exact linear algebra over Fraction matrices (lists of lists).

Plain fraction Gaussian elimination: at the matrix orders used here (at most
a few dozen rows) pivot growth is a non-issue and exactness is the point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def mat(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column indices."""
    m = [row[:] for row in m]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(m: Sequence[Sequence]) -> int:
    _, pivots = rref(mat(m))
    return len(pivots)


def det(m: Sequence[Sequence]) -> Fraction:
    m = mat(m)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            result = -result
        result *= m[c][c]
        inv = Fraction(1) / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return result


def kernel_basis(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right null space, one vector per free column."""
    m = mat(m)
    if not m:
        return [[Fraction(0)] * (ncols or 0)]
    ncols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve_square(m: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve a square system exactly; None when singular."""
    m = mat(m)
    n = len(m)
    b = [Fraction(x) for x in rhs]
    aug = [m[i] + [b[i]] for i in range(n)]
    red, pivots = rref(aug)
    if pivots and pivots[-1] == n:
        return None  # inconsistent
    if len(pivots) < n:
        return None  # singular
    return [red[i][n] for i in range(n)]
