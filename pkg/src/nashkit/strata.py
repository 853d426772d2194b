"""Exact membership tests and scheme-type classification for small formats.

For binary three-player games the locus of degenerate games is a sextic
hypersurface: the determinant of a structured 6x6 matrix in the twelve
payoff differences.  Sections on that hypersurface are classified by the
largest component of their solution scheme (point / line / conic / twisted
cubic / surface types), decided here by exact factorization analysis of the
three bilinear forms and cross-checked against the rank of the syzygy map.

Also here: the two-player discriminant rank tests, the quartic discriminant
of a pair of 2x2 bilinear forms, and the degree formula for the hypersurface
part of the boundary-format discriminant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from . import linalg
from .core import (
    Classification,
    Format,
    FormatError,
    Game,
    InternalInvariantViolation,
)
from .eqsystem import difference_coefficient

Mat2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


class SchemeType(Enum):
    """Largest component of the solution scheme of a (2,2,2) section."""

    FINITE = "finite"
    CUB = "cub"          # twisted cubic
    CON = "con"          # nonsingular plane conic
    LIN = "lin"          # line
    LL = "ll"            # singular plane conic (two meeting lines)
    CL = "cl"            # conic plus line
    LLL = "lll"          # three nonconcurrent lines
    THREE_L = "3l"       # three concurrent lines
    QL = "ql"            # quadric surface plus line
    SCR = "scr"          # rational normal scroll
    QQ = "qq"            # two quadric surfaces
    WHOLE = "whole"      # all three forms zero


# Rank of the syzygy map Phi for each type: 7 minus the projective span of
# the scheme in the Segre embedding.  Degree-3 degenerations (cl, lll, 3l)
# span a 3-space like the twisted cubic; a singular conic still spans a
# plane like a smooth one; FINITE and LIN share rank 6.
_EXPECTED_PHI_RANK = {
    SchemeType.WHOLE: 0,
    SchemeType.SCR: 2,
    SchemeType.QQ: 2,
    SchemeType.QL: 3,
    SchemeType.CUB: 4,
    SchemeType.CL: 4,
    SchemeType.LLL: 4,
    SchemeType.THREE_L: 4,
    SchemeType.CON: 5,
    SchemeType.LL: 5,
    SchemeType.LIN: 6,
    SchemeType.FINITE: 6,
}


@dataclass(frozen=True)
class Section222:
    """The three payoff-difference bilinear forms of a (2,2,2) game.

    ``a[i][r][c]`` is the coefficient of the degree-(1,1) monomial with
    first foreign index r+1 and second foreign index c+1 in form i+1
    (foreign groups in increasing player order).
    """

    a: tuple[Mat2, Mat2, Mat2]

    @classmethod
    def from_game(cls, game: Game) -> "Section222":
        if game.format.d != (2, 2, 2):
            raise FormatError("sections live over format (2,2,2)")
        mats = []
        for i in (1, 2, 3):
            mats.append(
                tuple(
                    tuple(difference_coefficient(game, i, 2, (r, c)) for c in (1, 2))
                    for r in (1, 2)
                )
            )
        return cls(tuple(mats))

    @classmethod
    def from_coefficients(cls, a1, a2, a3) -> "Section222":
        def conv(m):
            return tuple(tuple(Fraction(x) for x in row) for row in m)

        return cls((conv(a1), conv(a2), conv(a3)))

    def scaled(self, lam) -> "Section222":
        return Section222(
            tuple(tuple(tuple(Fraction(lam) * x for x in row) for row in m) for m in self.a)
        )


def theta_matrix(s: Section222) -> list[list[Fraction]]:
    """The structured symmetric-pattern 6x6 matrix with zero diagonal blocks."""
    a1, a2, a3 = s.a
    return linalg.mat(
        [
            [0, 0, a3[0][0], a3[0][1], a2[0][0], a2[0][1]],
            [0, 0, a3[1][0], a3[1][1], a2[1][0], a2[1][1]],
            [a3[0][0], a3[1][0], 0, 0, a1[0][0], a1[0][1]],
            [a3[0][1], a3[1][1], 0, 0, a1[1][0], a1[1][1]],
            [a2[0][0], a2[1][0], a1[0][0], a1[1][0], 0, 0],
            [a2[0][1], a2[1][1], a1[0][1], a1[1][1], 0, 0],
        ]
    )


def theta_det(s: Section222) -> Fraction:
    """Defining sextic of the degenerate locus; zero iff the scheme is
    nonreduced or positive-dimensional."""
    return linalg.det(theta_matrix(s))


def phi_matrix(s: Section222) -> list[list[Fraction]]:
    """6x8 matrix of (L, M, N) -> L f1 + M f2 + N f3 on monomial coordinates.

    Rows: the six products (variable of group g) * (form g).  Columns: the
    eight trilinear monomials in lexicographic index order.
    """
    a1, a2, a3 = s.a
    monos = [(i, j, k) for i in (1, 2) for j in (1, 2) for k in (1, 2)]
    rows = []
    for r in (1, 2):
        rows.append([a1[j - 1][k - 1] if i == r else Fraction(0) for (i, j, k) in monos])
    for r in (1, 2):
        rows.append([a2[i - 1][k - 1] if j == r else Fraction(0) for (i, j, k) in monos])
    for r in (1, 2):
        rows.append([a3[i - 1][j - 1] if k == r else Fraction(0) for (i, j, k) in monos])
    return rows


def phi_rank(s: Section222) -> int:
    return linalg.rank(phi_matrix(s))


# ---------------------------------------------------------------------------
# factorization helpers for 2x2 bilinear forms


def _is_zero(m: Mat2) -> bool:
    return all(x == 0 for row in m for x in row)


def _det2(m: Mat2) -> Fraction:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def _factors(m: Mat2) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]] | None:
    """Write a reducible form as (row factor) x (column factor), else None.

    A nonzero 2x2 coefficient matrix factors as an outer product exactly
    when its determinant vanishes; the row factor is a nonzero row of the
    transpose structure, scale-normalized by first nonzero entry.
    """
    if _is_zero(m) or _det2(m) != 0:
        return None
    # rank 1: rows are proportional; pick a nonzero row as the column factor
    row = m[0] if any(x != 0 for x in m[0]) else m[1]
    col_factor = tuple(row)
    # row factor: coefficients lambda_r with m[r] = lambda_r * row
    pivot = 0 if row[0] != 0 else 1
    row_factor = tuple(m[r][pivot] / row[pivot] for r in (0, 1))
    return row_factor, col_factor


def _parallel(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    return u[0] * v[1] - u[1] * v[0] == 0


@dataclass(frozen=True)
class ClassifyResult:
    scheme_type: SchemeType
    phi_rank: int
    theta: Fraction
    witness: dict


def _form_groups(i: int) -> tuple[int, int]:
    """Variable groups (ascending) of form i in a (2,2,2) section."""
    return tuple(g for g in (1, 2, 3) if g != i)


def classify(s: Section222) -> ClassifyResult:
    """Scheme type of a section by exact factorization case analysis.

    The factor-based result is cross-checked against the rank of the syzygy
    map; disagreement raises :class:`InternalInvariantViolation`.
    """
    a = s.a
    nonzero = [i for i in range(3) if not _is_zero(a[i])]
    factors = {i: _factors(a[i]) for i in range(3)}
    reducible = {i for i in range(3) if factors[i] is not None}
    rank = phi_rank(s)
    theta = theta_det(s)
    witness: dict = {
        "nonzero_forms": [i + 1 for i in nonzero],
        "reducible_forms": sorted(i + 1 for i in reducible),
    }

    def shared(i: int, j: int) -> bool:
        """Do reducible forms i and j share their common-group linear factor?"""
        fi, fj = factors[i], factors[j]
        gi, gj = _form_groups(i + 1), _form_groups(j + 1)
        common = set(gi) & set(gj)
        g = common.pop()
        ui = fi[gi.index(g)]
        uj = fj[gj.index(g)]
        return _parallel(ui, uj)

    if len(nonzero) == 0:
        kind = SchemeType.WHOLE
    elif len(nonzero) == 1:
        kind = SchemeType.QQ if nonzero[0] in reducible else SchemeType.SCR
    elif len(nonzero) == 2:
        i, j = nonzero
        red_i, red_j = i in reducible, j in reducible
        if red_i and red_j and shared(i, j):
            kind = SchemeType.QL
        elif red_i and red_j:
            kind = SchemeType.LLL
        elif red_i or red_j:
            kind = SchemeType.CL
        else:
            kind = SchemeType.CUB
    else:
        nred = len(reducible)
        if nred == 3:
            pairs = [(0, 1), (0, 2), (1, 2)]
            sharing = [p for p in pairs if shared(*p)]
            witness["sharing_pairs"] = [(p[0] + 1, p[1] + 1) for p in sharing]
            kind = {3: SchemeType.THREE_L, 2: SchemeType.LLL, 1: SchemeType.LL, 0: SchemeType.FINITE}[
                len(sharing)
            ]
        elif nred == 2:
            j, k = sorted(reducible)
            if shared(j, k):
                kind = SchemeType.CON
            else:
                i = ({0, 1, 2} - reducible).pop()
                kind = SchemeType.LIN if _line_through(s, i, j, k) else SchemeType.FINITE
        elif nred == 1:
            kind = SchemeType.FINITE
        else:
            # all irreducible: positive-dimensional only in the twisted-cubic case
            kind = SchemeType.CUB if rank <= 4 else SchemeType.FINITE
    expected = _EXPECTED_PHI_RANK[kind]
    if rank != expected:
        raise InternalInvariantViolation(
            f"classified {kind.value} but syzygy rank is {rank}, expected {expected}"
        )
    if kind is not SchemeType.FINITE and theta != 0:
        raise InternalInvariantViolation(
            f"positive-dimensional type {kind.value} with nonzero discriminant"
        )
    return ClassifyResult(kind, rank, theta, witness)


def _line_through(s: Section222, i: int, j: int, k: int) -> bool:
    """Does the scheme contain the line cut by the stray factors of forms j, k?

    With form i irreducible and forms j, k reducible without a shared
    factor, the only candidate line fixes the two groups foreign to form i
    at the zeros of the j/k factors living there; it lies in the scheme
    exactly when form i vanishes at that pair of points.
    """
    gi = _form_groups(i + 1)
    points = {}
    for f in (j, k):
        gf = _form_groups(f + 1)
        fac = _factors(s.a[f])
        for pos, g in enumerate(gf):
            if g in gi:
                u = fac[pos]
                if any(x != 0 for x in u):
                    points[g] = (u[1], -u[0])  # projective zero of the factor
    if set(points) != set(gi):
        return False
    p, q = points[gi[0]], points[gi[1]]
    val = sum(
        s.a[i][r][c] * p[r] * q[c] for r in (0, 1) for c in (0, 1)
    )
    return val == 0


def line_stratum_equations(s: Section222, i: int = 1) -> dict[str, Fraction]:
    """The two determinants and four cubics cutting the line stratum for i=1.

    Named Q1, Q2 (reducibility of the two foreign forms) and F11..F22 (form
    1 evaluated at the factor zeros read off rows of the foreign coefficient
    matrices); they cut the stratum set-theoretically away from the locus
    where a used row vanishes.
    """
    if i != 1:
        raise FormatError("equation set is published for the first component only")
    a1, a2, a3 = s.a
    out = {"Q1": _det2(a2), "Q2": _det2(a3)}
    for r2 in (0, 1):
        for r3 in (0, 1):
            p2 = (a3[r3][1], -a3[r3][0])  # zero of the group-2 factor of form 3
            p3 = (a2[r2][1], -a2[r2][0])  # zero of the group-3 factor of form 2
            val = sum(a1[r][c] * p2[r] * p3[c] for r in (0, 1) for c in (0, 1))
            out[f"F{r2 + 1}{r3 + 1}"] = val
    return out


def conic_stratum_minors(s: Section222, i: int) -> list[Fraction]:
    """Six 2x2 minors of the 2x4 matrix stacking the two foreign forms.

    The rows are indexed by the group-i variable; all minors vanish exactly
    when the two foreign forms share a linear factor in that group (the
    conic stratum condition).
    """
    if i not in (1, 2, 3):
        raise FormatError("player index must be 1, 2, or 3")
    others = [j for j in (1, 2, 3) if j != i]
    cols = []
    for f in others:
        gf = _form_groups(f)
        pos = gf.index(i)  # which axis of a[f] is the group-i variable
        m = s.a[f - 1]
        if pos == 0:
            cols.extend([(m[0][0], m[1][0]), (m[0][1], m[1][1])])
        else:
            cols.extend([(m[0][0], m[0][1]), (m[1][0], m[1][1])])
    minors = []
    for x in range(4):
        for y in range(x + 1, 4):
            minors.append(cols[x][0] * cols[y][1] - cols[x][1] * cols[y][0])
    return minors


# ---------------------------------------------------------------------------
# two-player and boundary-format tests


def two_player_discriminant(game: Game) -> tuple[int, int]:
    """Exact ranks of the two payoff-difference matrices of a square
    two-player game; the game is degenerate iff some rank is below d-1."""
    fmt = game.format
    if fmt.n != 2 or fmt.d[0] != fmt.d[1]:
        raise FormatError("needs a square two-player format")
    from .homotopy import _difference_rows

    return (
        linalg.rank(linalg.mat(_difference_rows(game, 1))),
        linalg.rank(linalg.mat(_difference_rows(game, 2))),
    )


def bilinear_pair_discriminant(b1: Sequence[Sequence], b2: Sequence[Sequence]) -> Fraction:
    """Discriminant of a pair of 2x2 bilinear forms in two variable pairs.

    Eliminating the second variable pair through b1 = 0 turns b2 = 0 into a
    binary quadratic; this is its discriminant, an irreducible quartic equal
    to the 2x2x2 hyperdeterminant of the stacked pair.  Negative values mean
    two conjugate nonreal solutions; zero means a double or degenerate
    solution.
    """
    c = [[Fraction(x) for x in row] for row in b1]
    d = [[Fraction(x) for x in row] for row in b2]
    A = c[0][1] * d[0][0] - c[0][0] * d[0][1]
    B = c[0][1] * d[1][0] + c[1][1] * d[0][0] - c[0][0] * d[1][1] - c[1][0] * d[0][1]
    C = c[1][1] * d[1][0] - c[1][0] * d[1][1]
    return B * B - 4 * A * C


def d1_degree(fmt: Format) -> int:
    """Degree of the hypersurface part of the boundary-format discriminant."""
    if fmt.classify() is not Classification.BOUNDARY:
        raise FormatError(f"format {fmt.d} is not of boundary type")
    m = fmt.max_player
    dn = fmt.d[m - 1]
    rest = [fmt.d[i] for i in range(fmt.n) if i != m - 1]
    coeff = math.factorial(dn - 1)
    for di in rest:
        coeff //= math.factorial(di - 1)
    correction = dn - 1 + sum((di - 1) * (dn - di - 1) for di in rest)
    return coeff * correction
