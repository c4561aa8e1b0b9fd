"""Finite-support elements of the weighted convolution algebra on Z.

Coefficients are exact rationals (or single-term e-power values after
rescaling); convolution, norms and the submultiplicativity ratios are all
computed exactly, with certified intervals appearing only where genuine
roots of transcendental values are required.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .exactnum import CertifiedInterval, ExpSum
from .weights import ExpWordLengthWeight, Weight
from .wordlen import word_length_upper

Coeff = Union[Fraction, ExpSum]

DEFAULT_SUPPORT_CAP = 10 ** 6


class ResourceLimitError(Exception):
    """Support growth exceeded the configured cap."""


def _abs_coeff(c: Coeff) -> Coeff:
    return abs(c)


class FinSuppZ:
    """Finitely supported function Z -> Q (or Q-combinations of e-powers).

    Stored in canonical form: zero coefficients are absent, and equality is
    coefficient-wise.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Dict[int, Coeff]] = None):
        self._c: Dict[int, Coeff] = {}
        if coeffs:
            for n, q in coeffs.items():
                q = Fraction(q) if isinstance(q, int) else q
                if q:
                    self._c[int(n)] = q

    @classmethod
    def delta(cls, n: int, coeff: Coeff = Fraction(1)) -> "FinSuppZ":
        return cls({n: coeff})

    @classmethod
    def zero(cls) -> "FinSuppZ":
        return cls()

    def support(self) -> List[int]:
        return sorted(self._c)

    def items(self) -> Iterable[Tuple[int, Coeff]]:
        return self._c.items()

    def __getitem__(self, n: int) -> Coeff:
        return self._c.get(n, Fraction(0))

    def __len__(self) -> int:
        return len(self._c)

    def __bool__(self) -> bool:
        return bool(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FinSuppZ):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        raise TypeError("FinSuppZ is mutable-style; not hashable")

    def __add__(self, other: "FinSuppZ") -> "FinSuppZ":
        out = dict(self._c)
        for n, q in other._c.items():
            s = out.get(n, Fraction(0)) + q
            if s:
                out[n] = s
            else:
                out.pop(n, None)
        return _wrap(out)

    def __sub__(self, other: "FinSuppZ") -> "FinSuppZ":
        return self + (-other)

    def __neg__(self) -> "FinSuppZ":
        return _wrap({n: -q for n, q in self._c.items()})

    def scale(self, c: Coeff) -> "FinSuppZ":
        if not c:
            return FinSuppZ()
        return _wrap({n: q * c for n, q in self._c.items()})

    def __mul__(self, other: "FinSuppZ") -> "FinSuppZ":
        return convolve(self, other)

    def l1_norm(self) -> Coeff:
        total: Coeff = Fraction(0)
        for q in self._c.values():
            total = total + _abs_coeff(q)
        return total

    def __repr__(self):
        body = " + ".join(f"({q})d_{n}" for n, q in sorted(self._c.items()))
        return f"FinSuppZ({body or '0'})"


def _wrap(coeffs: Dict[int, Coeff]) -> FinSuppZ:
    out = FinSuppZ()
    out._c = coeffs
    return out


def convolve(f: FinSuppZ, g: FinSuppZ,
             support_cap: int = DEFAULT_SUPPORT_CAP) -> FinSuppZ:
    """(f*g)(n) = sum_m f(m) g(n-m), exact."""
    if len(f._c) * len(g._c) > 4 * support_cap:
        raise ResourceLimitError(
            f"convolution would touch {len(f._c) * len(g._c)} pairs")
    out: Dict[int, Coeff] = {}
    for a, qa in f._c.items():
        for b, qb in g._c.items():
            n = a + b
            s = out.get(n, Fraction(0)) + qa * qb
            if s:
                out[n] = s
            else:
                out.pop(n, None)
    if len(out) > support_cap:
        raise ResourceLimitError(f"support {len(out)} exceeds cap {support_cap}")
    return _wrap(out)


def weighted_norm(f: FinSuppZ, w: Weight) -> ExpSum:
    """sum over the support of |f(s)| * w(s), as an exact e-power sum."""
    total = ExpSum()
    for n, q in f.items():
        total = total + _abs_coeff(q) * w.eval(n)
    return total


def rescale(f: FinSuppZ, rho: ExpSum) -> FinSuppZ:
    """Coefficient rescaling T(f)(n) = rho**n * f(n).

    For gamma the rho-normalization of w this is an exact algebra map with
    ||T f||_gamma = ||f||_w; both identities are tested, not assumed.
    """
    out: Dict[int, Coeff] = {}
    for n, q in f.items():
        out[n] = q * (rho ** n)
    return _wrap(out)


def omega_ratio(w: Weight, ns: Sequence[int]) -> ExpSum:
    """w(n_1 + ... + n_r) / (w(n_1) ... w(n_r)), exact single-term value."""
    if not ns:
        raise ValueError("need at least one entry")
    value = w.eval(sum(ns))
    for n in ns:
        value = value / w.eval(n)
    return value


def power_norm_sequence(f: FinSuppZ, w: Weight, r_max: int,
                        support_cap: int = DEFAULT_SUPPORT_CAP,
                        prec: int = 128) -> List[CertifiedInterval]:
    """Certified enclosures of ||f^{*r}||_w ** (1/r), r = 1..r_max.

    Convolution powers are exact; only the r-th root is enclosed.
    """
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    out = []
    power = f
    for r in range(1, r_max + 1):
        if r > 1:
            power = convolve(power, f, support_cap)
        norm = weighted_norm(power, w)
        out.append(norm.interval(prec).nth_root(r, prec))
    return out


# ---------------------------------------------------------------------------
# decay profiles (finite surrogate for the ratio-root vanishing criterion)


@dataclass(frozen=True)
class DecayRow:
    """One profile row: over the sampled index tuples of length r, every
    ratio satisfies ratio**(1/r) <= e**(exponent/r)."""

    r: int
    j: Optional[int]
    exponent: int
    sample_count: int


def _j_for_r(r: int) -> Optional[int]:
    j = 1
    while (1 << (2 * j + 1)) <= r:
        if (1 << (2 * j + 1)) == r:
            return j
        j += 1
    return None


def _log_upper(w: Weight, n: int) -> int:
    """Integer u with value(n) <= e**u; exact log when nothing better."""
    if isinstance(w, ExpWordLengthWeight):
        return word_length_upper(n, w.schedule).length
    u = w.log_exponent(n)
    if u is None:
        raise ValueError(f"weight {w.describe()} has no integer-log form")
    return u


def decay_profile(w: Weight, seq: Callable[[int], int], r_list: Sequence[int],
                  k_grid: Sequence[int], samples: int = 200, seed: int = 7,
                  eta_upper: Optional[Callable[[Sequence[int], Sequence[int]], int]] = None
                  ) -> List[DecayRow]:
    """Per r: a certified exponent bound over sampled index tuples.

    For each sampled tuple (k_1..k_r) from the grid the ratio
    ``w(sum n_k) / prod w(n_k)`` is bounded above by ``e**m`` with
    ``m = log-upper(sum) - sum of exact logs``; the row records the max m.
    ``eta_upper(ks, ns)`` may supply a sharper certified numerator bound
    (e.g. from a telescoping representation).
    """
    rng = random.Random(seed)
    grid = list(k_grid)
    if not grid:
        raise ValueError("empty index grid")
    rows = []
    for r in r_list:
        worst: Optional[int] = None
        for _ in range(samples):
            ks = [rng.choice(grid) for _ in range(r)]
            ns = [seq(k) for k in ks]
            denom = 0
            for n in ns:
                ln = w.log_exponent(n)
                if ln is None:
                    raise ValueError(
                        f"weight {w.describe()} has no integer-log form")
                denom += ln
            if eta_upper is not None:
                num = eta_upper(ks, ns)
            else:
                num = _log_upper(w, sum(ns))
            m = num - denom
            worst = m if worst is None else max(worst, m)
        rows.append(DecayRow(r=r, j=_j_for_r(r), exponent=worst,
                             sample_count=samples))
    return rows
