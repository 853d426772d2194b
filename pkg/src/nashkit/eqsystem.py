"""Equilibrium systems: payoff-difference equations, contractions, Jacobians.

For a game X the system consists of, for every player ``i`` and every
strategy ``k in 2..d_i``, the multilinear form whose coefficient on the
foreign monomial ``pi_{j_{-i}}`` is ``x^(i)_{(1, j_-i)} - x^(i)_{(k, j_-i)}``.
A point of the multiprojective space solves all D equations exactly when
every player is indifferent among their pure strategies, so its positive
real representatives are the totally mixed Nash equilibria.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .core import (
    ChartError,
    DomainError,
    Format,
    FormatError,
    Game,
    PayoffTensor,
    insert_index,
)
from .multipoly import MultiPoly


def contract(tensor: PayoffTensor, point_minus_i: Sequence[Sequence], i: int) -> list:
    """Contract a payoff tensor with one coordinate vector per foreign group.

    Component ``k`` of the result is ``sum_{j_-i} t_{(k, j_-i)} * pi_{j_-i}``;
    with probability vectors this is player i's payoff vector against the
    opponents' mixed profile.
    """
    fmt = tensor.format
    foreign = [g for g in range(1, fmt.n + 1) if g != i]
    if len(point_minus_i) != fmt.n - 1:
        raise FormatError(f"need {fmt.n - 1} coordinate vectors, got {len(point_minus_i)}")
    for vec, g in zip(point_minus_i, foreign):
        if len(vec) != fmt.d[g - 1]:
            raise FormatError(f"group {g} vector has wrong length")
    out = []
    ranges = [range(1, fmt.d[g - 1] + 1) for g in foreign]
    for k in range(1, fmt.d[i - 1] + 1):
        acc = None
        for j_minus in product(*ranges):
            term = tensor.entry(insert_index(j_minus, k, i))
            for vec, jm in zip(point_minus_i, j_minus):
                term = term * vec[jm - 1]
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def expected_payoff(game: Game, i: int, strategies: Sequence[Sequence]) -> Fraction:
    """Expected payoff of player ``i`` under exact mixed strategies."""
    fmt = game.format
    for vec, d in zip(strategies, fmt.d):
        if len(vec) != d:
            raise DomainError("strategy vector length mismatch")
        if sum(Fraction(x) for x in vec) != 1:
            raise DomainError("strategy vector must sum to 1")
    total = Fraction(0)
    for j in fmt.indices():
        prob = Fraction(1)
        for g, jg in enumerate(j):
            prob *= Fraction(strategies[g][jg - 1])
        total += prob * game.entry(i, j)
    return total


@dataclass(frozen=True)
class EquilibriumSystem:
    """The D payoff-difference equations of a game, indexed by (player, strategy)."""

    format: Format
    game: Game
    equations: dict  # (i, k) -> MultiPoly, k in 2..d_i

    @property
    def order(self) -> list[tuple[int, int]]:
        """Canonical equation order: by player, then strategy index."""
        return [(i, k) for i in range(1, self.format.n + 1) for k in range(2, self.format.d[i - 1] + 1)]

    def equation_list(self) -> list[MultiPoly]:
        return [self.equations[key] for key in self.order]

    def evaluate_all(self, point: Sequence[Sequence]) -> list:
        return [eq.evaluate(point) for eq in self.equation_list()]


def difference_coefficient(game: Game, i: int, k: int, j_minus: Sequence[int]) -> Fraction:
    """Coefficient of the foreign monomial ``pi_{j_-i}`` in equation (i, k)."""
    return game.entry(i, insert_index(j_minus, 1, i)) - game.entry(i, insert_index(j_minus, k, i))


def build_system(game: Game) -> EquilibriumSystem:
    fmt = game.format
    equations = {}
    for i in range(1, fmt.n + 1):
        foreign = [g for g in range(1, fmt.n + 1) if g != i]
        ranges = [range(1, fmt.d[g - 1] + 1) for g in foreign]
        for k in range(2, fmt.d[i - 1] + 1):
            terms = {}
            for j_minus in product(*ranges):
                c = difference_coefficient(game, i, k, j_minus)
                if c == 0:
                    continue
                exp = [0] * sum(fmt.d)
                for g, jg in zip(foreign, j_minus):
                    exp[MultiPoly.var_offset(fmt, g, jg)] = 1
                terms[tuple(exp)] = c
            equations[(i, k)] = MultiPoly(fmt, terms)
    return EquilibriumSystem(fmt, game, equations)


@dataclass(frozen=True)
class Chart:
    """Affine chart: per group one pivot coordinate scaled to 1."""

    format: Format
    pivots: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.pivots) != self.format.n:
            raise ChartError("need one pivot per group")
        for a, d in zip(self.pivots, self.format.d):
            if not 1 <= a <= d:
                raise ChartError(f"pivot {a} out of range 1..{d}")

    def affine_coords(self) -> list[tuple[int, int]]:
        """The D non-pivot coordinates, ordered by (group, index)."""
        return [
            (i, j)
            for i in range(1, self.format.n + 1)
            for j in range(1, self.format.d[i - 1] + 1)
            if j != self.pivots[i - 1]
        ]

    def normalize(self, point: Sequence[Sequence]) -> list[list]:
        """Scale each group so its pivot coordinate is exactly 1."""
        out = []
        for g, (vec, piv) in enumerate(zip(point, self.pivots), start=1):
            p = vec[piv - 1]
            if p == 0:
                raise ChartError(f"pivot coordinate {piv} of group {g} is zero")
            out.append([x / p for x in vec])
        return out


def jacobian_in_chart(system: EquilibriumSystem, chart: Chart, point: Sequence[Sequence]) -> list[list]:
    """D x D Jacobian of the system at the chart-normalized point.

    Row order follows the canonical equation order; columns follow the
    chart's affine coordinates.  Equation (i, k) has no group-i variables,
    so the (i, i) block vanishes identically.
    """
    normalized = chart.normalize(point)
    rows = []
    for key in system.order:
        eq = system.equations[key]
        row = []
        for (g, j) in chart.affine_coords():
            row.append(eq.partial_derivative(g, j).evaluate(normalized))
        rows.append(row)
    return rows
