"""Finite-support convolution algebra over the direct sum of countably many
copies of Z, with the coordinate projections, averaged point masses, and the
ladder recursion used as a finite surrogate for iterated weak-* limits.

Group elements are finitely supported integer sequences indexed from 1.
Everything is exact rational arithmetic.  The ladder surrogate assigns
strictly increasing staircase indices to convolution factors the further
right (= the deeper inside the iterated limit) they sit; products of ladder
elements are evaluated through a tensor decomposition so that staircase
indices in the thousands stay cheap even though the expanded support would
have hundreds of millions of points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .l1z import DEFAULT_SUPPORT_CAP, FinSuppZ, ResourceLimitError

GElem = Tuple[Tuple[int, int], ...]

E: GElem = ()  # identity: empty support


def gelem(values: Dict[int, int] | Iterable[Tuple[int, int]]) -> GElem:
    """Canonical group element from coordinate -> value (coords are 1-based)."""
    if isinstance(values, dict):
        items = values.items()
    else:
        items = values
    out = []
    for coord, v in items:
        if coord < 1:
            raise ValueError("coordinates are 1-based")
        if v:
            out.append((int(coord), int(v)))
    out.sort()
    if len({c for c, _ in out}) != len(out):
        raise ValueError("duplicate coordinate")
    return tuple(out)


def gadd(s: GElem, t: GElem) -> GElem:
    out = dict(s)
    for coord, v in t:
        nv = out.get(coord, 0) + v
        if nv:
            out[coord] = nv
        else:
            out.pop(coord, None)
    return tuple(sorted(out.items()))


def gproj_drop(s: GElem, i: int) -> GElem:
    """Zero out coordinate i."""
    return tuple(p for p in s if p[0] != i)


class FinSuppG:
    """Finitely supported function on the direct sum, rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Optional[Dict[GElem, Fraction]] = None):
        self._c: Dict[GElem, Fraction] = {}
        if coeffs:
            for s, q in coeffs.items():
                q = Fraction(q)
                if q:
                    self._c[s] = q

    @classmethod
    def delta(cls, s: GElem, coeff: Fraction = Fraction(1)) -> "FinSuppG":
        return cls({s: coeff})

    @classmethod
    def zero(cls) -> "FinSuppG":
        return cls()

    def support(self) -> List[GElem]:
        return sorted(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, s: GElem) -> Fraction:
        return self._c.get(s, Fraction(0))

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if not isinstance(other, FinSuppG):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        raise TypeError("unhashable")

    def __add__(self, other: "FinSuppG") -> "FinSuppG":
        out = dict(self._c)
        for s, q in other._c.items():
            v = out.get(s, Fraction(0)) + q
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return _wrap(out)

    def __sub__(self, other: "FinSuppG") -> "FinSuppG":
        return self + (-other)

    def __neg__(self) -> "FinSuppG":
        return _wrap({s: -q for s, q in self._c.items()})

    def scale(self, c: Fraction) -> "FinSuppG":
        c = Fraction(c)
        if not c:
            return FinSuppG()
        return _wrap({s: q * c for s, q in self._c.items()})

    def __mul__(self, other: "FinSuppG") -> "FinSuppG":
        return convolve_g(self, other)

    def l1_norm(self) -> Fraction:
        return sum((abs(q) for q in self._c.values()), Fraction(0))

    def as_pairs(self) -> List[Tuple[List[List[int]], str]]:
        """Wire form: (coordinate-vector, rational) pairs in canonical
        (lexicographic) support order."""
        return [([[c, v] for c, v in s], str(q))
                for s, q in sorted(self._c.items())]

    @classmethod
    def from_pairs(cls, pairs) -> "FinSuppG":
        out: Dict[GElem, Fraction] = {}
        for vec, q in pairs:
            s = gelem([(int(c), int(v)) for c, v in vec])
            out[s] = out.get(s, Fraction(0)) + Fraction(q)
        return cls(out)

    def __repr__(self):
        return f"FinSuppG({len(self._c)} points)"


def _wrap(coeffs: Dict[GElem, Fraction]) -> FinSuppG:
    out = FinSuppG()
    out._c = coeffs
    return out


def convolve_g(f: FinSuppG, g: FinSuppG,
               support_cap: int = DEFAULT_SUPPORT_CAP) -> FinSuppG:
    if len(f._c) * len(g._c) > 4 * support_cap:
        raise ResourceLimitError(
            f"convolution would touch {len(f._c) * len(g._c)} pairs")
    out: Dict[GElem, Fraction] = {}
    for s, qa in f._c.items():
        for t, qb in g._c.items():
            u = gadd(s, t)
            v = out.get(u, Fraction(0)) + qa * qb
            if v:
                out[u] = v
            else:
                out.pop(u, None)
    if len(out) > support_cap:
        raise ResourceLimitError(f"support {len(out)} exceeds cap {support_cap}")
    return _wrap(out)


def pi_i(f: FinSuppG, i: int) -> FinSuppG:
    """Pushforward along deletion of coordinate i; collapsing masses add."""
    if i < 1:
        raise ValueError("coordinates are 1-based")
    out: Dict[GElem, Fraction] = {}
    for s, q in f.items():
        u = gproj_drop(s, i)
        v = out.get(u, Fraction(0)) + q
        if v:
            out[u] = v
        else:
            out.pop(u, None)
    return _wrap(out)


def iota_i(f: FinSuppZ, i: int) -> FinSuppG:
    """Embed a Z-supported element into coordinate i (isometric)."""
    if i < 1:
        raise ValueError("coordinates are 1-based")
    out: Dict[GElem, Fraction] = {}
    for n, q in f.items():
        out[gelem({i: n})] = Fraction(q)
    return _wrap(out)


def make_M(j: int, k: int) -> FinSuppG:
    """Averaged forward point masses (1/k) sum_{i=1..k} delta at i*e_j."""
    if j < 1 or k < 1:
        raise ValueError("need j, k >= 1")
    q = Fraction(1, k)
    return _wrap({gelem({j: i}): q for i in range(1, k + 1)})


def make_sigma(j: int, k: int) -> FinSuppG:
    """Averaged odd difference (1/k) sum_{i=1..k} (delta_{i e_j} - delta_{-i e_j})."""
    if j < 1 or k < 1:
        raise ValueError("need j, k >= 1")
    q = Fraction(1, k)
    out: Dict[GElem, Fraction] = {}
    for i in range(1, k + 1):
        out[gelem({j: i})] = q
        out[gelem({j: -i})] = -q
    return _wrap(out)


def h_pair(f: FinSuppG) -> Fraction:
    """Pair with the indicator of the positive cone (all coordinates >= 0)."""
    total = Fraction(0)
    for s, q in f.items():
        if all(v > 0 for _, v in s):
            total += q
    return total


def check_5_12(f: FinSuppG, g: FinSuppZ, i: int) -> bool:
    """Exactly test the positive-cone splitting identity
    <pi_i(f) * iota_i(g), h> = <pi_i(f), h> <iota_i(g), h>."""
    pf = pi_i(f, i)
    ig = iota_i(g, i)
    return h_pair(convolve_g(pf, ig)) == h_pair(pf) * h_pair(ig)


def defect_5_10(j: int, k: int, s: GElem) -> Fraction:
    """l1 distance between delta_s * M_{j,k} and its coordinate-j projection
    acting instead; 2*|s_j|/k for small shifts along coordinate j, 0 off it."""
    M = make_M(j, k)
    lhs = convolve_g(FinSuppG.delta(s), M)
    rhs = convolve_g(FinSuppG.delta(gproj_drop(s, j)), M)
    return (lhs - rhs).l1_norm()


# ---------------------------------------------------------------------------
# staircase ladder surrogate


@dataclass(frozen=True)
class StaircaseSchedule:
    """Index assignment for iterated-limit surrogates.

    The factor at (1-based) position i of a product receives index
    base * growth**(i-1); rightmost factors, which play the inner limit
    variables, therefore get the largest indices.  ``r`` optionally caps how
    many factor positions may be consumed.
    """

    base: int
    growth: int
    r: Optional[int] = None

    def __post_init__(self):
        if self.base < 1:
            raise ValueError("base must be >= 1")
        if self.growth < 2:
            raise ValueError("growth must be >= 2")
        if self.r is not None and self.r < 1:
            raise ValueError("factor count must be >= 1")

    def index(self, position: int) -> int:
        if position < 1:
            raise ValueError("positions are 1-based")
        if self.r is not None and position > self.r:
            raise ValueError(
                f"position {position} exceeds factor count {self.r}")
        return self.base * self.growth ** (position - 1)

    def shift(self, count: int = 1) -> "StaircaseSchedule":
        """The staircase starting ``count`` positions further in.

        Deleting the outermost level of a depth-j ladder leaves the
        depth-(j-1) ladder whose levels sit one position later; this is the
        schedule that makes the projection identity exact.
        """
        return StaircaseSchedule(base=self.base * self.growth ** count,
                                 growth=self.growth,
                                 r=None if self.r is None else self.r - count)


def ladder_indices(j: int, sched: StaircaseSchedule,
                   occurrence: int = 1) -> Dict[int, int]:
    """Staircase index for each ladder level of one factor occurrence.

    Occurrence o of a depth-j ladder element occupies factor positions
    (o-1)*j+1 .. o*j; level j is the outermost limit (leftmost position)
    and level 1 the innermost, so level ell sits at position
    (o-1)*j + (j - ell + 1).
    """
    off = (occurrence - 1) * j
    return {ell: sched.index(off + j - ell + 1) for ell in range(1, j + 1)}


# tensor terms: coefficient plus one integer-valued line per coordinate


class _Line:
    """Integer-valued finitely supported function on Z (one coordinate)."""

    __slots__ = ("offset", "arr", "l1")

    def __init__(self, offset: int, arr: np.ndarray, l1: int):
        self.offset = offset
        self.arr = arr
        self.l1 = l1

    @classmethod
    def delta0(cls) -> "_Line":
        return cls(0, np.array([1], dtype=np.int64), 1)

    @classmethod
    def block(cls, k: int, signed: bool) -> "_Line":
        if signed:
            arr = np.zeros(2 * k + 1, dtype=np.int64)
            arr[:k] = -1
            arr[k + 1:] = 1
            return cls(-k, arr, 2 * k)
        return cls(1, np.ones(k, dtype=np.int64), k)

    def conv(self, other: "_Line") -> "_Line":
        bound = self.l1 * other.l1
        a, b = self.arr, other.arr
        if bound >= (1 << 62) and a.dtype != object:
            a = a.astype(object)
            b = b.astype(object)
        out = np.convolve(a, b)
        return _Line(self.offset + other.offset, out, bound)

    def h1(self) -> int:
        lo = max(0, -self.offset)
        return int(self.arr[lo:].sum())

    def total(self) -> int:
        return int(self.arr.sum())

    def points(self) -> List[Tuple[int, int]]:
        return [(self.offset + i, int(v))
                for i, v in enumerate(self.arr) if v]


_Tensor = List[Tuple[Fraction, Dict[int, _Line]]]


def _tensor_sigma(j: int, k: int) -> _Tensor:
    return [(Fraction(1, k), {j: _Line.block(k, signed=True)})]


def _tensor_M(j: int, k: int) -> _Tensor:
    return [(Fraction(1, k), {j: _Line.block(k, signed=False)})]


def _tensor_convolve(a: _Tensor, b: _Tensor) -> _Tensor:
    out: _Tensor = []
    for qa, fa in a:
        for qb, fb in b:
            factors = dict(fa)
            for coord, line in fb.items():
                factors[coord] = factors[coord].conv(line) \
                    if coord in factors else line
            out.append((qa * qb, factors))
    return out


def _tensor_ladder(j: int, sched: StaircaseSchedule, occurrence: int) -> _Tensor:
    ks = ladder_indices(j, sched, occurrence)
    lam = _tensor_sigma(1, ks[1])
    for ell in range(2, j + 1):
        lam = _tensor_convolve(_tensor_M(ell, ks[ell]), lam) \
            + _tensor_sigma(ell, ks[ell])
    return lam


def _tensor_h(t: _Tensor) -> Fraction:
    total = Fraction(0)
    for q, factors in t:
        prod = 1
        for line in factors.values():
            prod *= line.h1()
            if not prod:
                break
        total += q * prod
    return total


def _tensor_expand(t: _Tensor, support_cap: int) -> FinSuppG:
    out: Dict[GElem, Fraction] = {}
    for q, factors in t:
        coords = sorted(factors)
        pointlists = [factors[c].points() for c in coords]
        size = 1
        for pl in pointlists:
            size *= len(pl)
        if size > 4 * support_cap:
            raise ResourceLimitError(
                f"ladder expansion would touch {size} points")
        for combo in itertools.product(*pointlists):
            s = gelem({c: p for c, (p, _) in zip(coords, combo)})
            v = q
            for _, mult in combo:
                v *= mult
            w = out.get(s, Fraction(0)) + v
            if w:
                out[s] = w
            else:
                out.pop(s, None)
        if len(out) > support_cap:
            raise ResourceLimitError(
                f"support {len(out)} exceeds cap {support_cap}")
    return _wrap(out)


def build_ladder(j: int, sched: StaircaseSchedule,
                 support_cap: int = DEFAULT_SUPPORT_CAP) -> FinSuppG:
    """The depth-j ladder surrogate as an explicit element.

    Level 1 is the plain averaged difference; level ell convolves the
    averaged forward masses of coordinate ell onto the previous level and
    adds the coordinate-ell difference, staircase indices throughout.
    """
    if j < 1:
        raise ValueError("j must be >= 1")
    return _tensor_expand(_tensor_ladder(j, sched, occurrence=1), support_cap)


def ladder_powers(j: int, sched: StaircaseSchedule, p: int,
                  prefer_exact_expand: bool = False,
                  support_cap: int = DEFAULT_SUPPORT_CAP) -> Fraction:
    """Exact positive-cone pairing of the p-th convolution power.

    Each of the p factor occurrences gets its own (disjoint, increasing)
    block of staircase positions, approximating distinct net variables per
    factor; the pairing is evaluated on the tensor decomposition.
    """
    if j < 1 or p < 1:
        raise ValueError("need j, p >= 1")
    total = _tensor_ladder(j, sched, occurrence=1)
    for o in range(2, p + 1):
        total = _tensor_convolve(total, _tensor_ladder(j, sched, occurrence=o))
    if prefer_exact_expand:
        return h_pair(_tensor_expand(total, support_cap))
    return _tensor_h(total)
