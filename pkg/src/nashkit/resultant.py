"""Resultant variety of beyond-boundary formats: profiles and membership.

When one player has strictly more strategies than the others jointly
support, a generic game has no totally mixed equilibrium; the games that do
admit one form an irreducible variety with explicit codimension and degree.
In codimension one its equation is the determinant of a structured square
matrix built from the big player's payoff differences; this module builds
that matrix exactly (numerically over a game, or symbolically over the raw
payoff symbols) and expands its determinant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import linalg
from .core import Classification, Format, FormatError, Game
from .eqsystem import difference_coefficient


@dataclass(frozen=True)
class ResultantProfile:
    """Codimension and degree of the resultant variety of a format."""

    format: Format
    codim: int
    degree: int


def resultant_profile(fmt: Format) -> ResultantProfile:
    if fmt.classify() is not Classification.BEYOND:
        raise FormatError(f"format {fmt.d} is not beyond boundary")
    m = fmt.max_player
    dn = fmt.d[m - 1]
    rest = [fmt.d[i] for i in range(fmt.n) if i != m - 1]
    codim = dn - 1 - sum(di - 1 for di in rest)
    degree = math.factorial(dn - 1) // math.factorial(codim)
    for di in rest:
        degree //= math.factorial(di - 1)
    return ResultantProfile(fmt, codim, degree)


# ---------------------------------------------------------------------------
# sparse integer polynomials in the payoff symbols of the big player


class SymPoly:
    """Sparse polynomial over Z in a fixed list of symbols (exponent tuples)."""

    __slots__ = ("nsyms", "terms")

    def __init__(self, nsyms: int, terms: dict | None = None):
        self.nsyms = nsyms
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if c != 0:
                    self.terms[e] = c

    @classmethod
    def zero(cls, nsyms: int) -> "SymPoly":
        return cls(nsyms)

    @classmethod
    def symbol(cls, nsyms: int, idx: int, coeff: int = 1) -> "SymPoly":
        e = [0] * nsyms
        e[idx] = 1
        return cls(nsyms, {tuple(e): coeff})

    def __add__(self, other: "SymPoly") -> "SymPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        return SymPoly(self.nsyms, terms)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + other.negate()

    def negate(self) -> "SymPoly":
        return SymPoly(self.nsyms, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if v:
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return SymPoly(self.nsyms, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def term_count(self) -> int:
        return len(self.terms)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        total = Fraction(0)
        for e, c in self.terms.items():
            t = Fraction(c)
            for idx, p in enumerate(e):
                for _ in range(p):
                    t *= values[idx]
            total += t
        return total


def _sym_det(matrix: list[list[SymPoly]]) -> SymPoly:
    """Exact determinant by Laplace expansion with memoized minors."""
    n = len(matrix)
    if n > 24:
        raise FormatError(f"symbolic determinant guarded at order 24, got {n}")
    nsyms = matrix[0][0].nsyms
    cache: dict[frozenset, SymPoly] = {}

    def minor(cols: frozenset) -> SymPoly:
        if not cols:
            return SymPoly(nsyms, {(0,) * nsyms: 1})
        got = cache.get(cols)
        if got is not None:
            return got
        r = n - len(cols)
        acc = SymPoly.zero(nsyms)
        sign = 1
        for c in sorted(cols):
            entry = matrix[r][c]
            if not entry.is_zero():
                sub = minor(cols - {c})
                piece = entry * sub
                acc = acc + (piece if sign > 0 else piece.negate())
            sign = -sign
        cache[cols] = acc
        return acc

    return minor(frozenset(range(n)))


# ---------------------------------------------------------------------------
# the determinantal matrix of the big player's subsystem


def _monomials(dim: int, degree: int) -> list[tuple[int, ...]]:
    """Exponent tuples of the given total degree, graded-lex descending."""
    if dim == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in _monomials(dim - 1, degree - first):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class PartialXMatrix:
    """Square matrix whose determinant cuts the codimension-1 resultant.

    Rows are indexed by the monomial basis of the product of per-group
    symmetric powers (exponents e_i + 1); columns by (equation copy k,
    monomial of the degree-e_i basis).  Entries are single payoff
    differences of the big player.
    """

    format: Format
    order: int
    row_monomials: tuple
    col_labels: tuple
    entries: tuple  # rows of Fractions (numeric) or SymPoly (symbolic)


def _partial_x_structure(fmt: Format):
    if fmt.classify() is not Classification.BEYOND:
        raise FormatError(f"format {fmt.d} is not beyond boundary")
    m = fmt.max_player
    dn = fmt.d[m - 1]
    small = [g for g in range(1, fmt.n + 1) if g != m]
    if dn - 1 != sum(fmt.d[g - 1] - 1 for g in small) + 1:
        raise FormatError("determinantal matrix exists only in codimension 1")
    e = []
    acc = 0
    for g in small:
        e.append(acc)
        acc += fmt.d[g - 1] - 1
    # row basis: product monomials of degree e_i + 1 per small group
    row_bases = [_monomials(fmt.d[g - 1], e[idx] + 1) for idx, g in enumerate(small)]
    col_bases = [_monomials(fmt.d[g - 1], e[idx]) for idx, g in enumerate(small)]
    rows = [tuple(combo) for combo in product(*row_bases)]
    cols = [(k, tuple(combo)) for k in range(2, dn + 1) for combo in product(*col_bases)]
    if len(rows) != len(cols):
        raise FormatError("internal: non-square determinantal layout")
    return m, small, rows, cols


def _entry_index(fmt: Format, small: Sequence[int], row: tuple, col: tuple) -> tuple | None:
    """Foreign index j such that (monomial of j) * (col monomial) = row monomial."""
    _k, col_mono = col
    j = []
    for g_idx, (rm, cm) in enumerate(zip(row, col_mono)):
        diff = tuple(a - b for a, b in zip(rm, cm))
        if any(x < 0 for x in diff) or sum(diff) != 1:
            return None
        j.append(diff.index(1) + 1)
    return tuple(j)


def build_partial_x(game: Game) -> PartialXMatrix:
    """Numeric determinantal matrix of a codimension-1 beyond-boundary game."""
    fmt = game.format
    m, small, rows, cols = _partial_x_structure(fmt)
    entries = []
    for row in rows:
        r = []
        for col in cols:
            j_small = _entry_index(fmt, small, row, col)
            if j_small is None:
                r.append(Fraction(0))
            else:
                r.append(difference_coefficient(game, m, col[0], j_small))
        entries.append(tuple(r))
    return PartialXMatrix(fmt, len(rows), tuple(rows), tuple(cols), tuple(entries))


def partial_x_det(game: Game) -> Fraction:
    """Exact resultant value of a codimension-1 game; zero iff solvable."""
    return linalg.det([list(r) for r in build_partial_x(game).entries])


def build_partial_x_symbolic(fmt: Format) -> PartialXMatrix:
    """Determinantal matrix over the big player's raw payoff symbols.

    Symbols are that player's payoff entries indexed by (foreign index,
    own strategy), flattened with the own strategy fastest; each matrix
    entry is a difference of two symbols.
    """
    m, small, rows, cols = _partial_x_structure(fmt)
    dn = fmt.d[m - 1]
    foreign_sizes = [fmt.d[g - 1] for g in small]
    nforeign = math.prod(foreign_sizes)
    nsyms = nforeign * dn

    def sym_id(j_small: tuple, k: int) -> int:
        pos = 0
        for size, j in zip(foreign_sizes, j_small):
            pos = pos * size + (j - 1)
        return pos * dn + (k - 1)

    entries = []
    for row in rows:
        r = []
        for col in cols:
            j_small = _entry_index(fmt, small, row, col)
            if j_small is None:
                r.append(SymPoly.zero(nsyms))
            else:
                k = col[0]
                r.append(
                    SymPoly.symbol(nsyms, sym_id(j_small, 1))
                    - SymPoly.symbol(nsyms, sym_id(j_small, k))
                )
        entries.append(tuple(r))
    return PartialXMatrix(fmt, len(rows), tuple(rows), tuple(cols), tuple(entries))


@dataclass(frozen=True)
class ExpansionStats:
    term_count: int
    total_degree: int
    poly: SymPoly


def nash_resultant_expand(fmt: Format) -> ExpansionStats:
    """Fully expanded resultant polynomial over the big player's symbols."""
    matrix = build_partial_x_symbolic(fmt)
    poly = _sym_det([list(r) for r in matrix.entries])
    return ExpansionStats(poly.term_count(), poly.total_degree(), poly)


# ---------------------------------------------------------------------------
# two-player criteria


@dataclass(frozen=True)
class TwoPlayerResultantTest:
    difference_rank: int
    ones_rank: int
    member_by_difference: bool
    member_by_ones: bool

    @property
    def member(self) -> bool:
        return self.member_by_difference


def two_player_resultant_tests(game: Game) -> TwoPlayerResultantTest:
    """Both membership criteria for two-player unbalanced games.

    The overdetermined system for the small player's mixed strategy is
    solvable iff the payoff-difference matrix of the big player drops rank,
    iff the big player's payoff matrix augmented with a row of ones drops
    below full row rank.  The two verdicts must agree.
    """
    fmt = game.format
    if fmt.n != 2 or not fmt.d[0] < fmt.d[1]:
        raise FormatError("needs a two-player format with d1 < d2")
    d1, d2 = fmt.d
    diff = [
        [difference_coefficient(game, 2, k, (j,)) for k in range(2, d2 + 1)]
        for j in range(1, d1 + 1)
    ]
    rank_diff = linalg.rank(diff)
    payoff = [[game.entry(2, (j, c)) for c in range(1, d2 + 1)] for j in range(1, d1 + 1)]
    payoff.append([Fraction(1)] * d2)
    rank_ones = linalg.rank(payoff)
    member_diff = rank_diff <= d1 - 1
    member_ones = rank_ones <= d1
    if member_diff != member_ones:
        raise FormatError("internal: membership criteria disagree")
    return TwoPlayerResultantTest(rank_diff, rank_ones, member_diff, member_ones)


# ---------------------------------------------------------------------------
# numeric membership heuristic for higher codimension


@dataclass(frozen=True)
class MembershipHeuristic:
    """Numeric (non-certified) membership verdict for a beyond-boundary game."""

    member: bool
    min_extra_residual: float
    heuristic: bool = True


def resultant_membership_heuristic(game: Game, seed: int = 0, tol: float = 1e-8) -> MembershipHeuristic:
    """Solve a square slice of the big player's subsystem and test the rest.

    The big player's equations alone determine solvability.  The first
    D' + 1 of them would be overdetermined, so the square subsystem of the
    first D' is solved by homotopy over the small factors and the remaining
    equations are evaluated at each of its finitely many solutions.  This is
    a heuristic: it can misjudge nongeneric games near the locus where the
    square slice itself degenerates.
    """
    import numpy as np

    from .homotopy import _FlatSystem, _normalize_point, _track_path, TrackerConfig

    fmt = game.format
    if fmt.classify() is not Classification.BEYOND:
        raise FormatError(f"format {fmt.d} is not beyond boundary")
    m = fmt.max_player
    small = [g for g in range(1, fmt.n + 1) if g != m]
    d_small = tuple(fmt.d[g - 1] for g in small)
    dn = fmt.d[m - 1]
    # pose the subsystem over an auxiliary format: one synthetic player with
    # D' + 1 strategies supplies D' equations living on the small factors
    Dp = sum(d - 1 for d in d_small)
    aux_fmt = Format(d_small + (Dp + 1,))
    flat = _FlatSystem(aux_fmt)
    aux_n = aux_fmt.n

    # coefficient arrays: only the synthetic player's equations are nonzero
    # slots; equations of the small players must be absent, so build a flat
    # system over just those equations instead
    class _SubSystem(_FlatSystem):
        def __init__(self):
            super().__init__(aux_fmt)
            keep = [idx for idx, (i, _k) in enumerate(self.eq_keys) if i == aux_n]
            self.eq_keys = [self.eq_keys[i] for i in keep]
            self.terms = [self.terms[i] for i in keep]
            self.dterms = [self.dterms[i] for i in keep]
            self.eq_foreign_indices = [self.eq_foreign_indices[i] for i in keep]
            self.D = len(self.eq_keys)
            # the synthetic group contributes no variables to any equation:
            # restrict the variable set to the small groups
            import types

            self.nvars = sum(d_small)
            self.group_offsets = self.group_offsets[: len(d_small) + 1]
            self.fmt = types.SimpleNamespace(d=d_small, n=len(d_small))

    sub = _SubSystem()

    def coeff_for(k: int, j_small: tuple) -> Fraction:
        j = list(j_small)
        j.insert(m - 1, 1)
        j1 = tuple(j)
        j[m - 1] = k
        return game.entry(m, j1) - game.entry(m, tuple(j))

    def coeff_array(k_values: Sequence[int]) -> np.ndarray:
        out = np.zeros(sub.nslots, dtype=complex)
        # slots laid out equation-major in sub.terms order
        for e_idx, (term_list, findices) in enumerate(zip(sub.terms, sub.eq_foreign_indices)):
            k = k_values[e_idx]
            for (slot, _vars), j_small in zip(term_list, findices):
                out[slot] = complex(coeff_for(k, j_small))
        return out

    # square slice: equations for k = 2..D'+1; extras: k = D'+2..dn
    square_ks = list(range(2, Dp + 2))
    extra_ks = list(range(Dp + 2, dn + 1))
    F = coeff_array(square_ks)

    # product start system over the small groups via generalized assignments
    from .counting import _assignments

    rng = np.random.default_rng((seed, 3))
    linear_forms = {}
    for e_idx in range(sub.D):
        for g_pos, g in enumerate(small):
            dk = fmt.d[g - 1]
            linear_forms[(e_idx, g_pos)] = rng.normal(size=dk) + 1j * rng.normal(size=dk)
    G = np.zeros(sub.nslots, dtype=complex)
    for e_idx, (term_list, findices) in enumerate(zip(sub.terms, sub.eq_foreign_indices)):
        for (slot, _vars), j_small in zip(term_list, findices):
            c = 1.0 + 0j
            for g_pos, jg in enumerate(j_small):
                c *= linear_forms[(e_idx, g_pos)][jg - 1]
            G[slot] = c

    starts = []
    elements = [("eq", e) for e in range(sub.D)]
    caps = [d - 1 for d in d_small]
    for choice in _assignments(len(d_small), elements, lambda el: None, caps, 10**6):
        groups = []
        ok = True
        for g_pos in range(len(d_small)):
            rows = [linear_forms[(e, g_pos)] for e, blk in enumerate(choice) if blk == g_pos + 1]
            mtx = np.array(rows, dtype=complex)
            _u, sv, vh = np.linalg.svd(mtx)
            if sv.size and sv[-1] < 1e-8 * sv[0]:
                ok = False
                break
            groups.append(tuple(complex(z) for z in vh[-1].conj()))
        if ok:
            starts.append(tuple(groups))

    gamma = complex(np.exp(1j * float(rng.uniform(0.2, 6.0))))
    cfg = TrackerConfig()
    best = float("inf")
    for pt in starts:
        end = _track_path(sub, G, F, gamma, pt, cfg)
        if not end.success:
            continue
        groups = _normalize_point(sub.groups_of(end.x))
        flat_pt = [z for grp in groups for z in grp]
        if max(abs(v) for v in sub.residuals(F.tolist(), flat_pt)) > tol:
            continue
        if not extra_ks:
            best = 0.0
            break
        worst = 0.0
        for e_idx, k in enumerate(extra_ks):
            # evaluate extra equation k at the point using the first
            # equation's term structure (all equations share support)
            s = 0j
            for (slot, vars_), j_small in zip(sub.terms[0], sub.eq_foreign_indices[0]):
                p = complex(coeff_for(k, j_small))
                for v in vars_:
                    p = p * flat_pt[v]
                s += p
            worst = max(worst, abs(s))
        best = min(best, worst)
    return MembershipHeuristic(member=best < tol, min_extra_residual=best)
