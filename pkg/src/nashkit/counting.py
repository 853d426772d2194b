"""Expected number of totally mixed Nash equilibria, three independent ways.

``c(d)`` is computed (a) as one coefficient of a truncated product over the
multiprojective Chow ring, (b) by enumerating block derangements, and (c)
from the multivariate generating function via truncated series division.
The three routes share nothing but the answer, which the test suite pins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .core import CountLimitExceeded, Format, FormatError
from .multipoly import TruncatedSeries, elementary_symmetric, series_div_truncated

DEFAULT_LIMIT = 10**6


# ---------------------------------------------------------------------------
# Chow-ring coefficient


def c_chow(fmt: Format) -> int:
    """Coefficient of prod h_i^(d_i - 1) in prod (sum_{j != i} h_j)^(d_i - 1).

    Computed as a dense truncated product with per-variable caps d_i - 1;
    truncation is exact because only that single coefficient is queried.
    """
    n = fmt.n
    caps = tuple(d - 1 for d in fmt.d)
    poly = {(0,) * n: 1}
    for i in range(n):
        for _ in range(fmt.d[i] - 1):
            nxt: dict[tuple[int, ...], int] = {}
            for exp, c in poly.items():
                for j in range(n):
                    if j == i:
                        continue
                    if exp[j] + 1 > caps[j]:
                        continue
                    e = list(exp)
                    e[j] += 1
                    key = tuple(e)
                    nxt[key] = nxt.get(key, 0) + c
            poly = nxt
    return poly.get(caps, 0)


# ---------------------------------------------------------------------------
# Block derangements


@dataclass(frozen=True)
class BlockDerangement:
    """Assignment of every element (i, j) of F to a block k != i.

    F is the disjoint union of F_i = {(i, j) : j in [d_i - 1]}; block k must
    receive exactly d_k - 1 elements and nothing from F_k.
    """

    format: Format
    assignment: tuple[tuple[tuple[int, int], int], ...]

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.assignment)

    def blocks(self) -> list[set[tuple[int, int]]]:
        out: list[set[tuple[int, int]]] = [set() for _ in range(self.format.n)]
        for (i, j), k in self.assignment:
            out[k - 1].add((i, j))
        return out

    def validate(self) -> None:
        fmt = self.format
        elements = [(i, j) for i in range(1, fmt.n + 1) for j in range(1, fmt.d[i - 1])]
        assigned = self.as_dict()
        if sorted(assigned) != elements:
            raise FormatError("assignment must cover F exactly once")
        for (i, _), k in assigned.items():
            if k == i:
                raise FormatError(f"element of F_{i} assigned to its own block")
        for k in range(1, fmt.n + 1):
            size = sum(1 for v in assigned.values() if v == k)
            if size != fmt.d[k - 1] - 1:
                raise FormatError(f"block {k} has {size} elements, needs {fmt.d[k - 1] - 1}")


def _elements(fmt: Format) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, fmt.n + 1) for j in range(1, fmt.d[i - 1])]


def _assignments(
    n_blocks: int,
    elements: Sequence[tuple[int, int]],
    forbidden_block,
    capacities: Sequence[int],
    limit: int | None,
) -> Iterator[tuple[int, ...]]:
    """Capacity-pruned backtracking over block assignments, in lex order.

    ``forbidden_block(element)`` names the one block an element may not
    enter (or None).  Yields one block index per element.
    """
    caps = list(capacities)
    choice = [0] * len(elements)
    count = 0

    def rec(pos: int):
        nonlocal count
        if pos == len(elements):
            count += 1
            if limit is not None and count > limit:
                raise CountLimitExceeded(f"more than {limit} assignments")
            yield tuple(choice)
            return
        banned = forbidden_block(elements[pos])
        for k in range(1, n_blocks + 1):
            if k == banned or caps[k - 1] == 0:
                continue
            caps[k - 1] -= 1
            choice[pos] = k
            yield from rec(pos + 1)
            caps[k - 1] += 1

    yield from rec(0)


def enumerate_block_derangements(fmt: Format, limit: int = DEFAULT_LIMIT) -> list[BlockDerangement]:
    """All block derangements, in lexicographic order of the assignment map."""
    elements = _elements(fmt)
    out = []
    for choice in _assignments(
        fmt.n, elements, lambda el: el[0], [d - 1 for d in fmt.d], limit
    ):
        out.append(BlockDerangement(fmt, tuple(zip(elements, choice))))
    return out


def c_derangements(fmt: Format, limit: int = DEFAULT_LIMIT) -> int:
    """Exact block-derangement count via backtracking; errors past ``limit``."""
    elements = _elements(fmt)
    count = 0
    for _ in _assignments(fmt.n, elements, lambda el: el[0], [d - 1 for d in fmt.d], limit):
        count += 1
    return count


# ---------------------------------------------------------------------------
# Generating function


def c_genfun(fmt: Format) -> int:
    """Coefficient of x^d in x_1...x_n / sum_{i=0}^n (1 - i) e_i(x)."""
    n = fmt.n
    caps = tuple(fmt.d)
    num = TruncatedSeries.monomial(n, caps, (1,) * n)
    den = TruncatedSeries.zero(n, caps)
    for i in range(n + 1):
        e_i = elementary_symmetric(n, caps, i)
        den = den + TruncatedSeries(n, caps, {k: (1 - i) * v for k, v in e_i.terms.items()})
    series = series_div_truncated(num, den, caps)
    coeff = series.coefficient(fmt.d)
    return int(coeff)


# ---------------------------------------------------------------------------
# Diagonal asymptotic


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Value of the diagonal growth formula, possibly only as a logarithm."""

    log_value: float
    log_scale: bool

    @property
    def value(self) -> float:
        if self.log_scale:
            raise OverflowError("value overflows a double; use log_value")
        return math.exp(self.log_value)


def c_asymptotic(n: int, d: int) -> AsymptoticEstimate:
    """Leading-order growth of c(d, ..., d): sqrt(n) (n-1)^(nd-1) / (2n(n-2) pi d)^((n-1)/2)."""
    if n < 3:
        raise FormatError(f"asymptotic formula needs n >= 3, got {n}")
    if d < 2:
        raise FormatError(f"need d >= 2, got {d}")
    log_val = (
        0.5 * math.log(n)
        + (n * d - 1) * math.log(n - 1)
        - 0.5 * (n - 1) * math.log(2 * n * (n - 2) * math.pi * d)
    )
    return AsymptoticEstimate(log_val, log_scale=log_val > 709.0)
