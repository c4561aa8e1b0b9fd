"""Exact arithmetic for rational combinations of integer powers of e.

Weight values in this package are of the form ``q * e**m`` with ``q`` a
positive rational and ``m`` an integer, and norms are finite sums of such
terms.  Because ``e`` is transcendental, the numbers ``e**m`` are linearly
independent over the rationals, so equality of two such sums is decidable
by comparing coefficients, and the sign of a nonzero sum is decidable by
evaluating it in interval arithmetic at high enough precision.

:class:`ExpSum` implements the ring of these sums with exact operations.
Ordering comparisons evaluate the difference with outward-rounded interval
arithmetic (mpmath), doubling the working precision until the sign is
determined; a precision ceiling turns an undecided comparison into
:class:`InconclusiveComparison` instead of a silent wrong answer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Optional, Tuple, Union

import mpmath

Rational = Union[int, Fraction]

#: starting precision (bits) for sign determination
PREC_START = 64
#: precision ceiling (bits); beyond this a comparison is inconclusive
PREC_CEILING = 1 << 14


class InconclusiveComparison(Exception):
    """A certified comparison could not be decided within the precision ceiling."""


def _raw_mpf_to_fraction(t) -> Fraction:
    """Convert a raw mpmath (sign, man, exp, bc) tuple to an exact Fraction."""
    sign, man, exp, _ = t
    if man == 0 and exp != 0:
        raise OverflowError("non-finite interval endpoint")
    f = Fraction(int(man), 1) * (Fraction(2) ** int(exp))
    return -f if sign else f


@dataclass(frozen=True)
class CertifiedInterval:
    """Rational bounds ``lo <= true value <= hi`` produced by outward rounding."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, q: Rational) -> "CertifiedInterval":
        q = Fraction(q)
        return cls(q, q)

    def __add__(self, other: "CertifiedInterval") -> "CertifiedInterval":
        return CertifiedInterval(self.lo + other.lo, self.hi + other.hi)

    def __mul__(self, other: "CertifiedInterval") -> "CertifiedInterval":
        c = (self.lo * other.lo, self.lo * other.hi,
             self.hi * other.lo, self.hi * other.hi)
        return CertifiedInterval(min(c), max(c))

    def min_with(self, other: "CertifiedInterval") -> "CertifiedInterval":
        """Enclosure of min(x, y) for x in self, y in other."""
        return CertifiedInterval(min(self.lo, other.lo), min(self.hi, other.hi))

    def contains(self, q: Rational) -> bool:
        return self.lo <= q <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def nth_root(self, r: int, prec: int = 128) -> "CertifiedInterval":
        """Outward enclosure of the r-th root (requires lo >= 0)."""
        if r < 1:
            raise ValueError("root order must be >= 1")
        if self.lo < 0:
            raise ValueError("root of an interval reaching below zero")
        if self.hi == 0:
            return CertifiedInterval.point(0)
        lo_root = Fraction(0) if self.lo == 0 else _root_lo(self.lo, r, prec)
        return CertifiedInterval(lo_root, _root_hi(self.hi, r, prec))

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def _iv_fraction(q: Fraction, iv):
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def _iv_to_interval(x) -> CertifiedInterval:
    lo, hi = x._mpi_
    return CertifiedInterval(_raw_mpf_to_fraction(lo), _raw_mpf_to_fraction(hi))


def _with_iv_prec(prec: int):
    iv = mpmath.iv
    iv.prec = prec
    return iv


def _root_lo(q: Fraction, r: int, prec: int) -> Fraction:
    iv = _with_iv_prec(prec)
    x = iv.exp(iv.log(_iv_fraction(q, iv)) / iv.mpf(r))
    return _iv_to_interval(x).lo


def _root_hi(q: Fraction, r: int, prec: int) -> Fraction:
    iv = _with_iv_prec(prec)
    x = iv.exp(iv.log(_iv_fraction(q, iv)) / iv.mpf(r))
    return _iv_to_interval(x).hi


def exp_enclosure(m: Rational, prec: int = 128) -> CertifiedInterval:
    """Outward enclosure of e**m for rational m."""
    m = Fraction(m)
    iv = _with_iv_prec(prec)
    return _iv_to_interval(iv.exp(_iv_fraction(m, iv)))


_TERM_RE = re.compile(
    r"^\s*(?P<coeff>-?\d+(?:/\d+)?)?\s*\*?\s*(?:e\^(?P<exp>-?\d+))?\s*$"
)


class ExpSum:
    """Exact finite sum ``sum_m q_m * e**m`` (rational q_m, integer m)."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[int, Rational]] = None):
        canon: Dict[int, Fraction] = {}
        if terms:
            for m, q in terms.items():
                q = Fraction(q)
                if q:
                    canon[int(m)] = canon.get(int(m), Fraction(0)) + q
                    if not canon[int(m)]:
                        del canon[int(m)]
        self._terms = canon

    # -- constructors ------------------------------------------------------

    @classmethod
    def exp(cls, m: int, coeff: Rational = 1) -> "ExpSum":
        """The single term ``coeff * e**m``."""
        return cls({m: coeff})

    @classmethod
    def from_rational(cls, q: Rational) -> "ExpSum":
        return cls({0: q})

    # -- structure ---------------------------------------------------------

    @property
    def terms(self) -> Dict[int, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return all(m == 0 for m in self._terms)

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._terms.get(0, Fraction(0))

    def is_single_term(self) -> bool:
        return len(self._terms) == 1

    def single_term(self) -> Tuple[Fraction, int]:
        """Return (coefficient, exponent); requires exactly one term."""
        if len(self._terms) != 1:
            raise ValueError(f"{self} is not a single term")
        ((m, q),) = self._terms.items()
        return q, m

    # -- exact ring operations ---------------------------------------------

    def __add__(self, other: "ExpSumLike") -> "ExpSum":
        other = _coerce(other)
        out = dict(self._terms)
        for m, q in other._terms.items():
            s = out.get(m, Fraction(0)) + q
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return _raw(out)

    __radd__ = __add__

    def __neg__(self) -> "ExpSum":
        return _raw({m: -q for m, q in self._terms.items()})

    def __sub__(self, other: "ExpSumLike") -> "ExpSum":
        return self + (-_coerce(other))

    def __rsub__(self, other: "ExpSumLike") -> "ExpSum":
        return _coerce(other) + (-self)

    def __mul__(self, other: "ExpSumLike") -> "ExpSum":
        other = _coerce(other)
        out: Dict[int, Fraction] = {}
        for m1, q1 in self._terms.items():
            for m2, q2 in other._terms.items():
                m = m1 + m2
                s = out.get(m, Fraction(0)) + q1 * q2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return _raw(out)

    __rmul__ = __mul__

    def __truediv__(self, other: "ExpSumLike") -> "ExpSum":
        """Exact division by a rational or a single-term ExpSum."""
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero ExpSum")
        q, m = other.single_term()
        return _raw({mm - m: qq / q for mm, qq in self._terms.items()})

    def __pow__(self, k: int) -> "ExpSum":
        if k < 0:
            q, m = self.single_term()
            return ExpSum.exp(m * k, Fraction(1) / q ** (-k))
        out = ExpSum.from_rational(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExpSum.from_rational(other)
        if not isinstance(other, ExpSum):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # -- certified evaluation ------------------------------------------------

    def interval(self, prec: int = PREC_START) -> CertifiedInterval:
        """Outward enclosure of the value at the given working precision."""
        if not self._terms:
            return CertifiedInterval.point(0)
        iv = _with_iv_prec(prec)
        total = iv.mpf(0)
        for m, q in sorted(self._terms.items()):
            total += iv.exp(iv.mpf(m)) * _iv_fraction(q, iv)
        return _iv_to_interval(total)

    def sign(self, prec_ceiling: int = PREC_CEILING) -> int:
        """Certified sign (-1, 0, +1).

        Zero is exact (all coefficients vanish).  Otherwise the value is
        nonzero by linear independence of e-powers and the sign is found by
        escalating interval evaluation.
        """
        if not self._terms:
            return 0
        # a sum of same-sign terms never needs numeric evaluation
        if all(q > 0 for q in self._terms.values()):
            return 1
        if all(q < 0 for q in self._terms.values()):
            return -1
        prec = PREC_START
        while prec <= prec_ceiling:
            box = self.interval(prec)
            if box.lo > 0:
                return 1
            if box.hi < 0:
                return -1
            prec *= 2
        raise InconclusiveComparison(
            f"sign of {self} undecided at {prec_ceiling} bits")

    def compare(self, other: "ExpSumLike") -> int:
        return (self - _coerce(other)).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __abs__(self) -> "ExpSum":
        return self if self.is_zero() or self.sign() > 0 else -self

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- text form -----------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for m in sorted(self._terms, reverse=True):
            q = self._terms[m]
            if m == 0:
                body = str(q)
            elif q == 1:
                body = f"e^{m}"
            else:
                body = f"{q}*e^{m}"
            parts.append(body)
        out = parts[0]
        for body in parts[1:]:
            if body.startswith("-"):
                out += " - " + body[1:]
            else:
                out += " + " + body
        return out

    def __repr__(self) -> str:
        return f"ExpSum({self})"

    @classmethod
    def parse(cls, text: str) -> "ExpSum":
        """Inverse of str(); accepts e.g. '3/2*e^4 - e^2 + 7'."""
        text = text.strip()
        if text == "0":
            return cls()
        chunks = re.split(r"(?<=[^e^+\-*/ ])\s*([+-])\s*", text)
        # re.split keeps separators; rebuild signed term strings
        terms: Dict[int, Fraction] = {}
        pending_sign = 1
        for chunk in chunks:
            if chunk == "+":
                pending_sign = 1
                continue
            if chunk == "-":
                pending_sign = -1
                continue
            m = _TERM_RE.match(chunk)
            if not m or (m.group("coeff") is None and m.group("exp") is None):
                raise ValueError(f"cannot parse ExpSum term {chunk!r}")
            coeff = Fraction(m.group("coeff")) if m.group("coeff") else Fraction(1)
            exp = int(m.group("exp")) if m.group("exp") else 0
            coeff *= pending_sign
            terms[exp] = terms.get(exp, Fraction(0)) + coeff
            pending_sign = 1
        return cls(terms)


ExpSumLike = Union[ExpSum, int, Fraction]


def _coerce(x: ExpSumLike) -> ExpSum:
    if isinstance(x, ExpSum):
        return x
    if isinstance(x, (int, Fraction)):
        return ExpSum.from_rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to ExpSum")


def _raw(terms: Dict[int, Fraction]) -> ExpSum:
    out = ExpSum()
    out._terms = terms
    return out


ONE = ExpSum.from_rational(1)
ZERO = ExpSum()


class ExpRatio:
    """Exact quotient of two ExpSums with positive denominator.

    General ExpSums admit no exact division, so pairings of the form
    ``P / C`` are kept as numerator/denominator pairs; comparisons happen
    by cross-multiplication, which stays inside the ExpSum ring.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: ExpSumLike, den: ExpSumLike):
        self.num = _coerce(num)
        self.den = _coerce(den)
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    @classmethod
    def from_rational(cls, q: Rational) -> "ExpRatio":
        return cls(ExpSum.from_rational(q), ONE)

    def is_rational(self) -> bool:
        return self.num.is_rational() and self.den.is_rational()

    def as_rational(self) -> Fraction:
        return self.num.as_rational() / self.den.as_rational()

    def compare(self, other: Union["ExpRatio", Rational]) -> int:
        if not isinstance(other, ExpRatio):
            other = ExpRatio.from_rational(other)
        lhs = self.num * other.den
        rhs = other.num * self.den
        flip = self.den.sign() * other.den.sign()
        return (lhs - rhs).sign() * flip

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExpRatio.from_rational(other)
        if not isinstance(other, ExpRatio):
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        raise TypeError("ExpRatio is unhashable (no canonical form)")

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __abs__(self) -> "ExpRatio":
        num = abs(self.num)
        den = self.den if self.den.sign() > 0 else -self.den
        return ExpRatio(num, den)

    def __sub__(self, other: "ExpRatio") -> "ExpRatio":
        if not isinstance(other, ExpRatio):
            other = ExpRatio.from_rational(other)
        return ExpRatio(self.num * other.den - other.num * self.den,
                        self.den * other.den)

    def interval(self, prec: int = 128) -> CertifiedInterval:
        n = self.num.interval(prec)
        d = self.den.interval(prec)
        if d.lo <= 0 <= d.hi:
            raise InconclusiveComparison("denominator interval straddles zero")
        corners = (n.lo / d.lo, n.lo / d.hi, n.hi / d.lo, n.hi / d.hi)
        return CertifiedInterval(min(corners), max(corners))

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.as_rational())
        if self.den == ONE:
            return str(self.num)
        return f"({self.num}) / ({self.den})"

    def __repr__(self) -> str:
        return f"ExpRatio({self})"

    @classmethod
    def parse(cls, text: str) -> "ExpRatio":
        text = text.strip()
        m = re.match(r"^\((?P<num>.*)\)\s*/\s*\((?P<den>.*)\)$", text)
        if m:
            return cls(ExpSum.parse(m.group("num")), ExpSum.parse(m.group("den")))
        return cls(ExpSum.parse(text), ONE)
