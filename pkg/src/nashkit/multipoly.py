"""Multihomogeneous polynomials with grouped variables, plus truncated series.

Variables come in ``n`` groups; group ``i`` has the ``d_i`` coordinates
``pi_1^(i), ..., pi_{d_i}^(i)`` of the i-th projective factor.  A
:class:`MultiPoly` stores a term map from dense exponent vectors (length
``sum(d_i)``, group-major variable order) to scalar coefficients.  Scalars
are either exact :class:`~fractions.Fraction` values or ``complex`` doubles;
the two kinds never mix silently.

:class:`TruncatedSeries` is an integer power series truncated at per-variable
degree caps, with the division needed to extract generating-function
coefficients.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping, Sequence

from .core import Format, FormatError, SeriesError

Exponents = tuple[int, ...]

RATIONAL = "rational"
COMPLEX = "complex"


@dataclass(frozen=True)
class VarGroup:
    """One block of projective coordinates: group ``index`` of arity ``arity``."""

    index: int
    arity: int

    def __post_init__(self) -> None:
        if self.arity < 2:
            raise FormatError(f"variable group arity must be >= 2, got {self.arity}")


def _scalar_kind(value) -> str:
    return RATIONAL if isinstance(value, (Fraction, int)) else COMPLEX


class MultiPoly:
    """Polynomial in grouped variables; immutable by convention."""

    __slots__ = ("format", "terms", "kind")

    def __init__(self, fmt: Format, terms: Mapping[Exponents, object], kind: str | None = None):
        self.format = fmt
        cleaned: dict[Exponents, object] = {}
        inferred = kind
        for exp, coeff in terms.items():
            if len(exp) != sum(fmt.d):
                raise FormatError(
                    f"exponent vector length {len(exp)} != {sum(fmt.d)} for format {fmt.d}"
                )
            if inferred is None:
                inferred = _scalar_kind(coeff)
            if inferred == RATIONAL:
                coeff = Fraction(coeff)
            else:
                coeff = complex(coeff)
            if coeff != 0:
                cleaned[tuple(exp)] = coeff
        self.terms = cleaned
        self.kind = inferred if inferred is not None else RATIONAL

    # -- construction ------------------------------------------------------

    @classmethod
    def zero(cls, fmt: Format, kind: str = RATIONAL) -> "MultiPoly":
        return cls(fmt, {}, kind)

    @classmethod
    def constant(cls, fmt: Format, c) -> "MultiPoly":
        nvars = sum(fmt.d)
        return cls(fmt, {(0,) * nvars: c})

    @classmethod
    def variable(cls, fmt: Format, group: int, j: int) -> "MultiPoly":
        """The coordinate ``pi_j^(group)`` (both arguments 1-based)."""
        if not 1 <= group <= fmt.n:
            raise FormatError(f"group {group} out of range 1..{fmt.n}")
        if not 1 <= j <= fmt.d[group - 1]:
            raise FormatError(f"variable {j} out of range 1..{fmt.d[group - 1]}")
        exp = [0] * sum(fmt.d)
        exp[cls.var_offset(fmt, group, j)] = 1
        return cls(fmt, {tuple(exp): Fraction(1)})

    @staticmethod
    def var_offset(fmt: Format, group: int, j: int) -> int:
        return sum(fmt.d[: group - 1]) + (j - 1)

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.format != other.format:
            raise FormatError("operands must share a format")
        if self.terms and other.terms and self.kind != other.kind:
            raise FormatError(f"scalar kinds differ: {self.kind} vs {other.kind}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, 0) + c
        kind = self.kind if self.terms else other.kind
        return MultiPoly(self.format, terms, kind)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.format, {e: -c for e, c in self.terms.items()}, self.kind)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms: dict[Exponents, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        kind = self.kind if self.terms else other.kind
        return MultiPoly(self.format, terms, kind)

    def scale(self, c) -> "MultiPoly":
        if c == 0:
            return MultiPoly.zero(self.format, self.kind)
        return MultiPoly(self.format, {e: co * c for e, co in self.terms.items()}, self.kind)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.format == other.format
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.format, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    # -- calculus, evaluation ----------------------------------------------

    def partial_derivative(self, group: int, j: int) -> "MultiPoly":
        v = self.var_offset(self.format, group, j)
        terms: dict[Exponents, object] = {}
        for exp, c in self.terms.items():
            if exp[v] == 0:
                continue
            e = list(exp)
            mult = e[v]
            e[v] -= 1
            key = tuple(e)
            terms[key] = terms.get(key, 0) + c * mult
        return MultiPoly(self.format, terms, self.kind)

    def evaluate(self, point: Sequence[Sequence]):
        """Value at per-group coordinate vectors.

        A rational polynomial evaluated at a complex point is converted on
        the fly; a complex polynomial only accepts numeric points.
        """
        fmt = self.format
        if len(point) != fmt.n or any(len(p) != d for p, d in zip(point, fmt.d)):
            raise FormatError("point shape does not match the format")
        flat = [x for grp in point for x in grp]
        complex_point = any(isinstance(x, complex) for x in flat)
        total = None
        for exp, c in self.terms.items():
            if complex_point and isinstance(c, Fraction):
                c = complex(c)
            term = c
            for v, e in enumerate(exp):
                for _ in range(e):
                    term = term * flat[v]
            total = term if total is None else total + term
        if total is None:
            if self.kind == COMPLEX or complex_point:
                return complex(0)
            return Fraction(0)
        return total

    def multidegree(self) -> tuple[int, ...] | None:
        """Per-group degrees when multihomogeneous, else None."""
        if not self.terms:
            return None
        offsets = [0]
        for d in self.format.d:
            offsets.append(offsets[-1] + d)
        degs = None
        for exp in self.terms:
            cur = tuple(sum(exp[offsets[i]: offsets[i + 1]]) for i in range(self.format.n))
            if degs is None:
                degs = cur
            elif degs != cur:
                return None
        return degs

    def to_complex(self) -> "MultiPoly":
        return MultiPoly(self.format, {e: complex(c) for e, c in self.terms.items()}, COMPLEX)

    # -- canonical printing --------------------------------------------------

    def canonical_str(self) -> str:
        """Deterministic text form: graded-lex descending term order."""
        if not self.terms:
            return "0"
        fmt = self.format
        names = []
        for i, d in enumerate(fmt.d, start=1):
            names.extend(f"p{i}_{j}" for j in range(1, d + 1))
        items = sorted(self.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)
        parts = []
        for exp, c in items:
            factors = []
            for v, e in enumerate(exp):
                if e == 1:
                    factors.append(names[v])
                elif e > 1:
                    factors.append(f"{names[v]}^{e}")
            mono = "*".join(factors)
            if isinstance(c, complex):
                coeff_str = repr(c)
                sign = "+"
            else:
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                coeff_str = "" if (mag == 1 and mono) else str(mag)
            body = "*".join(x for x in (coeff_str, mono) if x) or coeff_str or "1"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"MultiPoly({self.format.d}, {self.canonical_str()})"


class TruncatedSeries:
    """Multivariate integer series truncated at per-variable degree caps.

    Multiplication silently discards any monomial whose exponent exceeds a
    cap in some variable.  Coefficients are exact (int, or Fraction when a
    division by a non-unit constant term forces it).
    """

    __slots__ = ("nvars", "caps", "terms")

    def __init__(self, nvars: int, caps: Sequence[int], terms: Mapping[Exponents, object] | None = None):
        self.nvars = nvars
        self.caps = tuple(int(c) for c in caps)
        if len(self.caps) != nvars:
            raise SeriesError(f"need {nvars} caps, got {len(self.caps)}")
        self.terms: dict[Exponents, object] = {}
        if terms:
            for exp, c in terms.items():
                if len(exp) != nvars:
                    raise SeriesError("exponent length mismatch")
                if all(e <= cap for e, cap in zip(exp, self.caps)) and c != 0:
                    self.terms[tuple(exp)] = _normalize_int(c)

    @classmethod
    def zero(cls, nvars: int, caps: Sequence[int]) -> "TruncatedSeries":
        return cls(nvars, caps)

    @classmethod
    def one(cls, nvars: int, caps: Sequence[int]) -> "TruncatedSeries":
        return cls(nvars, caps, {(0,) * nvars: 1})

    @classmethod
    def monomial(cls, nvars: int, caps: Sequence[int], exp: Exponents, coeff=1) -> "TruncatedSeries":
        return cls(nvars, caps, {tuple(exp): coeff})

    def coefficient(self, exp: Exponents):
        return self.terms.get(tuple(exp), 0)

    def _like(self, terms) -> "TruncatedSeries":
        return TruncatedSeries(self.nvars, self.caps, terms)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return self._like(terms)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, 0) - c
        return self._like(terms)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        caps = self.caps
        terms: dict[Exponents, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if all(x <= cap for x, cap in zip(e, caps)):
                    terms[e] = terms.get(e, 0) + c1 * c2
        return self._like(terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TruncatedSeries)
            and self.caps == other.caps
            and self.terms == other.terms
        )

    def __repr__(self) -> str:
        items = sorted(self.terms.items())[:8]
        more = "..." if len(self.terms) > 8 else ""
        return f"TruncatedSeries(caps={self.caps}, {items}{more})"


def _normalize_int(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def elementary_symmetric(nvars: int, caps: Sequence[int], k: int) -> TruncatedSeries:
    """e_k(x_1, ..., x_nvars) as a truncated series."""
    from itertools import combinations

    terms = {}
    for subset in combinations(range(nvars), k):
        exp = [0] * nvars
        for v in subset:
            exp[v] = 1
        terms[tuple(exp)] = 1
    return TruncatedSeries(nvars, caps, terms)


def series_div_truncated(
    num: TruncatedSeries, den: TruncatedSeries, caps: Sequence[int] | None = None
) -> TruncatedSeries:
    """Truncated quotient: den * result == num below the caps.

    Coefficients are produced in graded order by forward propagation, so the
    cost scales with the number of nonzero result terms rather than the full
    cap box.
    """
    caps = tuple(caps) if caps is not None else num.caps
    nvars = num.nvars
    if den.nvars != nvars:
        raise SeriesError("numerator and denominator variable counts differ")
    zero_exp = (0,) * nvars
    den0 = den.terms.get(zero_exp, 0)
    if den0 == 0:
        raise SeriesError("denominator has zero constant term")
    den_rest = [(exp, c) for exp, c in den.terms.items() if exp != zero_exp]

    acc: dict[Exponents, object] = {
        exp: c for exp, c in num.terms.items() if all(e <= cp for e, cp in zip(exp, caps))
    }
    heap = [(sum(exp), exp) for exp in acc]
    heapq.heapify(heap)
    seen: set[Exponents] = set(exp for _, exp in heap)
    out: dict[Exponents, object] = {}
    while heap:
        _, exp = heapq.heappop(heap)
        val = acc.get(exp, 0)
        if val == 0:
            continue
        coeff = Fraction(val, den0) if den0 not in (1, -1) else val * den0
        coeff = _normalize_int(coeff)
        out[exp] = coeff
        for dexp, dc in den_rest:
            tgt = tuple(a + b for a, b in zip(exp, dexp))
            if any(e > cp for e, cp in zip(tgt, caps)):
                continue
            acc[tgt] = acc.get(tgt, 0) - coeff * dc
            if tgt not in seen:
                seen.add(tgt)
                heapq.heappush(heap, (sum(tgt), tgt))
    return TruncatedSeries(nvars, caps, out)
