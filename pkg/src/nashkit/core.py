"""Formats, multi-indices, payoff tensors, games, and exact JSON serialization.

A *format* is the vector of strategy counts ``d = (d_1, ..., d_n)`` of an
n-player game in normal form.  A *game* is one payoff tensor of that format
per player, with exact rational entries.  Payoff entries are addressed by
1-based multi-indices ``j = (j_1, ..., j_n)`` with ``1 <= j_i <= d_i`` and
stored flat in row-major order (``j_1`` slowest, ``j_n`` fastest).

All types here are immutable values; they can be shared freely across
threads.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence


class NashkitError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(NashkitError):
    """Malformed input document."""


class SchemaError(NashkitError):
    """Structurally valid JSON that violates the game schema."""


class FormatError(NashkitError):
    """Operation applied to a format outside its domain."""


class DomainError(NashkitError):
    """Numeric precondition violated (e.g. strategies not summing to 1)."""


class SeriesError(NashkitError):
    """Invalid truncated-series operation."""


class ChartError(NashkitError):
    """Point incompatible with the requested affine chart."""


class CountLimitExceeded(NashkitError):
    """Enumeration aborted because the running count passed the limit."""


class StartSystemError(NashkitError):
    """Could not build a valid start system after the retry budget."""


class SolveError(NashkitError):
    """Every continuation path failed."""


class InternalInvariantViolation(NashkitError):
    """Two independent computations of the same quantity disagree."""


class Classification(Enum):
    """Position of a format relative to the balanced/unbalanced boundary."""

    WITHIN = "within"
    BOUNDARY = "boundary"
    BEYOND = "beyond"


@dataclass(frozen=True)
class Format:
    """Strategy counts ``d = (d_1, ..., d_n)``, stored in the order given.

    Formats are never re-sorted: all derived quantities treat the entries as
    a multiset with a distinguished maximal entry, so player order is
    preserved end to end.
    """

    d: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "d", tuple(int(x) for x in self.d))
        if len(self.d) < 2:
            raise FormatError(f"need at least 2 players, got {len(self.d)}")
        if any(di < 2 for di in self.d):
            raise FormatError(f"every strategy count must be >= 2, got {self.d}")

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def D(self) -> int:
        """Total number of equilibrium equations, sum of (d_i - 1)."""
        return sum(di - 1 for di in self.d)

    @property
    def size(self) -> int:
        """Number of payoff entries per tensor, the product of the d_i."""
        return math.prod(self.d)

    @property
    def max_player(self) -> int:
        """1-based index of the first maximal entry."""
        return self.d.index(max(self.d)) + 1

    def classify(self) -> Classification:
        m = max(self.d)
        rest = self.D - (m - 1)
        if m - 1 < rest:
            return Classification.WITHIN
        if m - 1 == rest:
            return Classification.BOUNDARY
        return Classification.BEYOND

    def strides(self) -> tuple[int, ...]:
        out = [1] * self.n
        for i in range(self.n - 2, -1, -1):
            out[i] = out[i + 1] * self.d[i + 1]
        return tuple(out)

    def lin_index(self, j: Sequence[int]) -> int:
        """Flat position of multi-index ``j`` (1-based entries), last fastest."""
        if len(j) != self.n:
            raise FormatError(f"multi-index length {len(j)} != {self.n}")
        pos = 0
        for jk, dk, sk in zip(j, self.d, self.strides()):
            if not 1 <= jk <= dk:
                raise FormatError(f"index {jk} out of range 1..{dk}")
            pos += (jk - 1) * sk
        return pos

    def multi_index(self, pos: int) -> tuple[int, ...]:
        """Inverse of :meth:`lin_index`."""
        if not 0 <= pos < self.size:
            raise FormatError(f"flat index {pos} out of range 0..{self.size - 1}")
        out = []
        for sk in self.strides():
            out.append(pos // sk + 1)
            pos %= sk
        return tuple(out)

    def indices(self) -> Iterator[tuple[int, ...]]:
        """All multi-indices in flat order."""
        return product(*(range(1, di + 1) for di in self.d))

    def drop_format(self, i: int) -> "Format":
        """Format of the index set with player ``i`` (1-based) removed."""
        return Format(self.d[: i - 1] + self.d[i:])


def drop_index(j: Sequence[int], i: int) -> tuple[int, ...]:
    """Remove the i-th (1-based) entry, giving an index over the other players."""
    return tuple(j[: i - 1]) + tuple(j[i:])


def insert_index(j_minus: Sequence[int], k: int, i: int) -> tuple[int, ...]:
    """Insert ``k`` at position ``i`` (1-based); inverse of :func:`drop_index`."""
    return tuple(j_minus[: i - 1]) + (k,) + tuple(j_minus[i - 1:])


@dataclass(frozen=True)
class PayoffTensor:
    """One player's payoffs, flat in the format's row-major order."""

    format: Format
    coeffs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(Fraction(c) for c in self.coeffs)
        if len(coeffs) != self.format.size:
            raise SchemaError(
                f"payoff tensor needs {self.format.size} entries, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    def entry(self, j: Sequence[int]) -> Fraction:
        return self.coeffs[self.format.lin_index(j)]

    @classmethod
    def build(cls, fmt: Format, fn: Callable[[tuple[int, ...]], Fraction | int]) -> "PayoffTensor":
        return cls(fmt, tuple(Fraction(fn(j)) for j in fmt.indices()))

    @classmethod
    def zeros(cls, fmt: Format) -> "PayoffTensor":
        return cls(fmt, (Fraction(0),) * fmt.size)


@dataclass(frozen=True)
class Game:
    """An n-player game in normal form: one payoff tensor per player."""

    format: Format
    tensors: tuple[PayoffTensor, ...]

    def __post_init__(self) -> None:
        tensors = tuple(self.tensors)
        if len(tensors) != self.format.n:
            raise SchemaError(
                f"game of format {self.format.d} needs {self.format.n} tensors, "
                f"got {len(tensors)}"
            )
        for t in tensors:
            if t.format != self.format:
                raise SchemaError("all payoff tensors must share the game's format")
        object.__setattr__(self, "tensors", tensors)

    def entry(self, i: int, j: Sequence[int]) -> Fraction:
        """Payoff for player ``i`` (1-based) at strategy profile ``j``."""
        return self.tensors[i - 1].entry(j)


_RATIONAL_RE = re.compile(r"^-?\d+(/\d+)?$")


def _parse_rational(value: object) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"payoff entries must be integers or 'p/q' strings, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise SchemaError(f"not a rational literal: {value!r}")
        return Fraction(value)
    raise SchemaError(
        f"payoff entries must be integers or 'p/q' strings, got {type(value).__name__}"
    )


def _emit_rational(q: Fraction) -> int | str:
    # Fraction is stored reduced with positive denominator, so p/q is canonical.
    if q.denominator == 1 and abs(q.numerator) < 2**53:
        return q.numerator
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_game(text: str | bytes) -> Game:
    """Parse a game document: ``{"format": [...], "players": [{"payoffs": [...]}]}``."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top-level document must be a JSON object")
    if "format" not in doc or "players" not in doc:
        raise SchemaError("document needs 'format' and 'players' keys")
    fmt_raw = doc["format"]
    if not isinstance(fmt_raw, list) or not all(isinstance(x, int) for x in fmt_raw):
        raise SchemaError("'format' must be a list of integers")
    try:
        fmt = Format(tuple(fmt_raw))
    except FormatError as exc:
        raise SchemaError(str(exc)) from exc
    players = doc["players"]
    if not isinstance(players, list) or len(players) != fmt.n:
        raise SchemaError(f"'players' must list exactly {fmt.n} payoff tables")
    tensors = []
    for p in players:
        if not isinstance(p, dict) or "payoffs" not in p:
            raise SchemaError("each player entry must be an object with a 'payoffs' key")
        payoffs = p["payoffs"]
        if not isinstance(payoffs, list) or len(payoffs) != fmt.size:
            raise SchemaError(f"each 'payoffs' list must have {fmt.size} entries")
        tensors.append(PayoffTensor(fmt, tuple(_parse_rational(v) for v in payoffs)))
    return Game(fmt, tuple(tensors))


def serialize_game(game: Game) -> str:
    """Canonical JSON for a game; inverse of :func:`parse_game` bit-exactly."""
    doc = {
        "format": list(game.format.d),
        "players": [{"payoffs": [_emit_rational(c) for c in t.coeffs]} for t in game.tensors],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def random_game(fmt: Format, seed: int, height: int = 10) -> Game:
    """Seeded game with uniform integer payoffs in [-height, height]."""
    import random as _random

    if height < 1:
        raise DomainError(f"height must be >= 1, got {height}")
    rng = _random.Random(seed)
    tensors = tuple(
        PayoffTensor(fmt, tuple(Fraction(rng.randint(-height, height)) for _ in range(fmt.size)))
        for _ in range(fmt.n)
    )
    return Game(fmt, tensors)
