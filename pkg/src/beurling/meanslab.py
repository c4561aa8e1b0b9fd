"""Cesaro-average divergence witness for radius-one weights on Z.

Given a weight with radius 1, there are window indices n_0 = 0 < n_1 = 1 <
n_2 < ... along which the endpoint weight becomes negligible against the
accumulated prefix sum C_k = w(0) + ... + w(n_k).  The averages
``L_k = (delta_0 + ... + delta_{n_k}) / C_k`` then admit a bounded test
function psi whose pairings oscillate between below 1/4 and above 3/4 while
staying within 0 <= psi(i) <= w(i) + 1, and the translation defect of L_k
decays like (w(n_k + 1) + w(0)) / C_k.  Everything here is built and
re-verified in exact arithmetic; windows are run-length encoded because for
slowly growing weights the index values reach 2**40 while the block
structure stays tiny.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .exactnum import ExpRatio, ExpSum, exp_enclosure
from .weights import Weight

#: scan-path default; constant-log weights binary-search and get a far
#: larger default since their cost is logarithmic in the bound
DEFAULT_SEARCH_BOUND = 10 ** 7
DEFAULT_SEARCH_BOUND_CONST = 10 ** 18

#: scaled-integer bits for the certified prefix accumulator
_SCALE_BITS = 320
#: bits for the base-e enclosure feeding the accumulator
_E_PREC = 192


class RadiusError(Exception):
    """The weight is not known to have radius 1; normalize it first."""


class SearchExhaustedError(Exception):
    def __init__(self, k: int, bound: int, best: str):
        self.k = k
        self.bound = bound
        self.best = best
        super().__init__(
            f"no window index for level {k} up to {bound}; best ratio seen {best}")


class StateTooShortError(Exception):
    def __init__(self, have: int, hint: int):
        self.have = have
        self.hint = hint
        super().__init__(
            f"state holds {have} window indices; extend to at least {hint}")


#: tolerance saturation for the default schedule; beyond this depth the
#: endpoint-ratio requirement stays at 2**-48 (far below every tolerance
#: used here) instead of chasing dips across generator-scale gaps
DEFAULT_TOL_FLOOR_EXP = 48


def default_tol_schedule(k: int) -> Fraction:
    """2**-k, saturating at 2**-48 for very deep states.

    Identical to the plain halving schedule for every k <= 48.  Without the
    cap, word-length weights force the window search across the gap to the
    next generator once the running ratio has dipped below the plateau
    floor, which costs millions of scan steps for no extra certificate
    strength.
    """
    return Fraction(1, 2 ** min(k, DEFAULT_TOL_FLOOR_EXP))


class _PrefixTracker:
    """Certified integer-scaled bounds for prefix sums of e-power values.

    All values are e**m with integer m >= 0; lo/hi integer accumulators at a
    fixed binary scale bracket the true prefix sum, with the only slack
    coming from the fixed-precision enclosure of e itself.
    """

    def __init__(self):
        box = exp_enclosure(1, _E_PREC)
        self._e_lo, self._e_hi = box.lo, box.hi
        self._pow: Dict[int, Tuple[int, int]] = {}
        self.lo = 0
        self.hi = 0

    def pow_bounds(self, m: int) -> Tuple[int, int]:
        hit = self._pow.get(m)
        if hit is None:
            scale = 1 << _SCALE_BITS
            lo = (self._e_lo ** m * scale).__floor__()
            hi = -((-(self._e_hi ** m * scale)).__floor__())
            hit = (lo, hi)
            self._pow[m] = hit
        return hit

    def add(self, m: int) -> None:
        lo, hi = self.pow_bounds(m)
        self.lo += lo
        self.hi += hi

    def value_le_fraction_of_prefix(self, m: int, tol: Fraction) -> Optional[bool]:
        """Certified test e**m <= tol * C, or None when too close to call."""
        vlo, vhi = self.pow_bounds(m)
        if vhi * tol.denominator <= tol.numerator * self.lo:
            return True
        if vlo * tol.denominator > tol.numerator * self.hi:
            return False
        return None

    def cross_le(self, m: int, prev_lo: int, prev_hi: int,
                 prev_m: int) -> Optional[bool]:
        """Certified test e**m * C_prev <= e**prev_m * C (ratio clamp)."""
        vlo, vhi = self.pow_bounds(m)
        plo, phi = self.pow_bounds(prev_m)
        if vhi * prev_hi <= plo * self.lo:
            return True
        if vlo * prev_lo > phi * self.hi:
            return False
        return None


class CesaroState:
    """Window indices n_k, exact prefix sums C_k, and scan continuation.

    Constructed by :func:`build_nk`; extendable in place.  The stored ratio
    sequence w(n_k)/C_k is non-increasing by construction.
    """

    def __init__(self, weight: Weight, tol_schedule: Callable[[int], Fraction],
                 search_bound: Optional[int] = None):
        if not weight.radius_is_one():
            raise RadiusError(
                f"weight {weight.describe()} is not certified to have radius 1; "
                "apply radius normalization first")
        self.weight = weight
        self.tol_schedule = tol_schedule
        if search_bound is None:
            search_bound = (DEFAULT_SEARCH_BOUND_CONST
                            if weight.log_nonneg_constant() is not None
                            else DEFAULT_SEARCH_BOUND)
        self.search_bound = search_bound
        self.nk: List[int] = []
        self.Ck: List[ExpSum] = []
        self._logs_at: List[int] = []          # log weight at each n_k
        self._const = weight.log_nonneg_constant()
        if self._const is None:
            self._tracker = _PrefixTracker()
            self._counts: Dict[int, int] = {}
            self._scan_n = -1
            self._logs: List[int] = []
        self._append_anchor(0)
        self._append_anchor(1)

    # -- scan internals ------------------------------------------------------

    def _log_at(self, n: int) -> int:
        if n == 0:
            return 0
        if self._const is not None:
            return self._const
        self._ensure_logs(n)
        return self._logs[n]

    def _ensure_logs(self, n: int) -> None:
        if n >= len(self._logs):
            bound = max(2 * n, 4096)
            self._logs = self.weight.log_range(bound)

    def _prefix_const(self, n: int) -> ExpSum:
        # C(n) = w(0) + n * e**const for constant-on-the-right weights
        return ExpSum.from_rational(1) + ExpSum.exp(self._const, n)

    def _consume_to(self, n: int) -> None:
        """Advance the exact counting prefix through value n inclusive."""
        while self._scan_n < n:
            self._scan_n += 1
            m = self._log_at(self._scan_n)
            self._counts[m] = self._counts.get(m, 0) + 1
            self._tracker.add(m)

    def _prefix_snapshot(self) -> ExpSum:
        return ExpSum({m: Fraction(c) for m, c in self._counts.items()})

    def _append_anchor(self, n: int) -> None:
        if self._const is not None:
            C = self._prefix_const(n) if n else ExpSum.from_rational(1)
        else:
            self._consume_to(n)
            C = self._prefix_snapshot()
        self.nk.append(n)
        self.Ck.append(C)
        self._logs_at.append(self._log_at(n))

    # -- selection ------------------------------------------------------------

    def _ratio_condition_exact(self, m: int, tol: Fraction, C: ExpSum) -> bool:
        return (tol * C - ExpSum.exp(m)).sign() >= 0

    def _clamp_condition_exact(self, m: int, C: ExpSum) -> bool:
        prev_m = self._logs_at[-1]
        prev_C = self.Ck[-1]
        lhs = ExpSum.exp(m) * prev_C
        rhs = ExpSum.exp(prev_m) * C
        return (rhs - lhs).sign() >= 0

    def _find_next_const(self, k: int, tol: Fraction) -> int:
        v = ExpSum.exp(self._const)

        def ok(n: int) -> bool:
            return (tol * self._prefix_const(n) - v).sign() >= 0

        lo = self.nk[-1] + 1
        if not ok(self.search_bound):
            best = str(ExpRatio(v, self._prefix_const(self.search_bound)))
            raise SearchExhaustedError(k, self.search_bound, best)
        hi = self.search_bound
        while lo < hi:  # ratio is strictly decreasing: binary search the least n
            mid = (lo + hi) // 2
            if ok(mid):
                hi = mid
            else:
                lo = mid + 1
        return lo

    def _find_next_scan(self, k: int, tol: Fraction) -> int:
        prev_m = self._logs_at[-1]
        prev_C = self.Ck[-1]
        prev_lo = self._tracker.lo
        prev_hi = self._tracker.hi
        best_est: Optional[float] = None
        best_n = -1
        n = self.nk[-1]
        while n < self.search_bound:
            n += 1
            m = self._log_at(n)
            self._consume_to(n)
            got = self._tracker.value_le_fraction_of_prefix(m, tol)
            if got is None:
                got = self._ratio_condition_exact(m, tol,
                                                  self._prefix_snapshot())
            if got:
                clamped = self._tracker.cross_le(m, prev_lo, prev_hi, prev_m)
                if clamped is None:
                    clamped = self._clamp_condition_exact(
                        m, self._prefix_snapshot())
                if clamped:
                    return n
            vlo, _ = self._tracker.pow_bounds(m)
            est = vlo / self._tracker.hi if self._tracker.hi else float("inf")
            if best_est is None or est < best_est:
                best_est, best_n = est, n
        best = str(ExpRatio(ExpSum.exp(self._log_at(best_n)),
                            self._prefix_snapshot())) if best_n >= 0 else "n/a"
        raise SearchExhaustedError(k, self.search_bound, best)

    def extend(self, K: int) -> "CesaroState":
        """Grow the state to indices 0..K (no-op when already long enough)."""
        while len(self.nk) <= K:
            k = len(self.nk)
            tol = self.tol_schedule(k)
            if self._const is not None:
                n = self._find_next_const(k, tol)
            else:
                n = self._find_next_scan(k, tol)
            self._append_anchor(n)
        return self

    # -- accessors -------------------------------------------------------------

    @property
    def depth(self) -> int:
        return len(self.nk) - 1

    def ratio(self, k: int) -> ExpRatio:
        """w(n_k) / C_k, the quantity the window selection drives down."""
        return ExpRatio(ExpSum.exp(self._logs_at[k]), self.Ck[k])

    def one_pairing(self, k: int) -> ExpRatio:
        """<L_k, 1> = (n_k + 1)/C_k; recorded, with no convergence claim."""
        return ExpRatio(ExpSum.from_rational(self.nk[k] + 1), self.Ck[k])

    def prefix_between(self, idx_lo: int, idx_hi: int) -> ExpSum:
        """C_{idx_hi} - C_{idx_lo}: total weight mass on (n_lo, n_hi]."""
        return self.Ck[idx_hi] - self.Ck[idx_lo]


def state_from_anchors(weight: Weight, nk: Sequence[int]) -> CesaroState:
    """Rebuild a state for given window indices, recomputing every prefix
    sum from the weight (the anchors are taken as-is, no search)."""
    nk = [int(n) for n in nk]
    if len(nk) < 2 or nk[0] != 0 or nk[1] != 1:
        raise ValueError("window indices must start 0, 1")
    if any(a >= b for a, b in zip(nk, nk[1:])):
        raise ValueError("window indices must be strictly increasing")
    state = CesaroState(weight, default_tol_schedule)
    for n in nk[2:]:
        state._append_anchor(n)
    return state


def build_nk(weight: Weight, K: int,
             tol_schedule: Callable[[int], Fraction] = default_tol_schedule,
             search_bound: Optional[int] = None) -> CesaroState:
    """Deterministic window construction: n_0 = 0, n_1 = 1, then for k >= 2
    the least n_k <= search_bound past n_{k-1} whose endpoint ratio
    w(n_k)/C_k is at most tol_schedule(k) (and at most the previous ratio,
    which keeps the stored ratio sequence non-increasing)."""
    if K < 1:
        raise ValueError("K must be >= 1")
    return CesaroState(weight, tol_schedule, search_bound).extend(K)


# ---------------------------------------------------------------------------
# pairing helpers


class ConstWindow:
    """Window function identically equal to a rational constant."""

    def __init__(self, value: Fraction):
        self.value = Fraction(value)

    def window_sum(self, state: CesaroState, k: int) -> ExpSum:
        return ExpSum.from_rational(self.value * (state.nk[k] + 1))


class WeightWindow:
    """The weight itself as a window function; pairs to exactly 1."""

    def window_sum(self, state: CesaroState, k: int) -> ExpSum:
        return state.Ck[k]


#: direct summation guard for plain-callable window functions
_CALLABLE_SUM_CAP = 10 ** 6


def pair_cesaro(state: CesaroState, k: int,
                f: Union[Callable[[int], Union[int, Fraction, ExpSum]], object]
                ) -> ExpRatio:
    """<L_k, f> = (1/C_k) * sum_{i=0}^{n_k} f(i), exact."""
    if k < 0 or k > state.depth:
        raise IndexError(k)
    if hasattr(f, "window_sum"):
        total = f.window_sum(state, k)
    else:
        n = state.nk[k]
        if n > _CALLABLE_SUM_CAP:
            raise ValueError(
                f"window [0, {n}] too wide for direct summation; "
                "pass a structured window function")
        total = ExpSum()
        for i in range(n + 1):
            total = total + f(i)
    return ExpRatio(total, state.Ck[k])


# ---------------------------------------------------------------------------
# the oscillating test function


@dataclass(frozen=True)
class PsiBlock:
    """psi on the value range (lo, hi]: 0 on "zero" blocks, the weight
    itself on "weight" blocks."""

    lo: int
    hi: int
    kind: str

    def __post_init__(self):
        if self.kind not in ("zero", "weight"):
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.lo >= self.hi:
            raise ValueError("empty block")


@dataclass
class PsiCertificate:
    """The divergence witness: window indices, block-coded psi, and the
    exact pairing values at the alternating index families."""

    sj: List[int]
    tj: List[int]
    blocks: List[PsiBlock]
    points: Dict[int, ExpSum]
    window_hi: int
    nk: List[int]
    Ck: List[ExpSum]
    weight_desc: str
    pairings_s: List[ExpRatio]
    pairings_t: List[ExpRatio]

    def psi_value(self, i: int, weight: Weight) -> ExpSum:
        """psi at a single point (points override blocks)."""
        if i in self.points:
            return self.points[i]
        if i <= 0 or i > self.window_hi:
            return ExpSum()
        for b in self.blocks:
            if b.lo < i <= b.hi:
                return ExpSum() if b.kind == "zero" else weight.eval(i)
        return ExpSum()

    def as_doc(self) -> dict:
        return {
            "nk": [str(n) for n in self.nk],
            "Ck": [str(c) for c in self.Ck],
            "psi": {
                "blocks": [[str(b.lo), str(b.hi), b.kind] for b in self.blocks],
                "points": {str(i): str(v) for i, v in sorted(self.points.items())},
                "window_hi": str(self.window_hi),
            },
            "sj": self.sj,
            "tj": self.tj,
            "pairings": {
                "s": [str(p) for p in self.pairings_s],
                "t": [str(p) for p in self.pairings_t],
            },
            "weight": self.weight_desc,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "PsiCertificate":
        psi = doc["psi"]
        return cls(
            sj=[int(x) for x in doc["sj"]],
            tj=[int(x) for x in doc["tj"]],
            blocks=[PsiBlock(int(lo), int(hi), kind)
                    for lo, hi, kind in psi["blocks"]],
            points={int(i): ExpSum.parse(v) for i, v in psi["points"].items()},
            window_hi=int(psi["window_hi"]),
            nk=[int(n) for n in doc["nk"]],
            Ck=[ExpSum.parse(c) for c in doc["Ck"]],
            weight_desc=doc["weight"],
            pairings_s=[ExpRatio.parse(p) for p in doc["pairings"]["s"]],
            pairings_t=[ExpRatio.parse(p) for p in doc["pairings"]["t"]],
        )


def _psi_window_sum(cert: PsiCertificate, state: CesaroState, k: int) -> ExpSum:
    """sum_{i=0}^{n_k} psi(i) from the raw block/point data.

    Points override block values, so a point landing inside a weight block
    replaces (not augments) the weight there.
    """
    n = state.nk[k]
    idx_of = {v: i for i, v in enumerate(state.nk)}
    total = ExpSum()
    for i, v in cert.points.items():
        if not 0 <= i <= n:
            continue
        total = total + v
        for b in cert.blocks:
            if b.kind == "weight" and b.lo < i <= b.hi:
                total = total - state.weight.eval(i)
                break
    for b in cert.blocks:
        if b.kind != "weight":
            continue
        if b.lo >= n:
            continue
        hi = min(b.hi, n)
        if b.lo not in idx_of or hi not in idx_of:
            raise ValueError(
                f"block ({b.lo}, {hi}] does not align with window anchors")
        total = total + state.prefix_between(idx_of[b.lo], idx_of[hi])
    return total


def build_psi(state: CesaroState, J: int) -> PsiCertificate:
    """Run the alternating construction to depth J.

    Level 1 is pinned: s_1 = 0, t_1 = 1, psi(1) = C_1 (zero elsewhere so
    far), giving pairings 0 and 1.  Each later level first zeroes psi on a
    gap until the running pairing falls below 1/4, then copies the weight
    onto a block until the pairing climbs above 3/4; both thresholds are
    chosen by exact comparison and re-checked afterwards.  Raises
    StateTooShortError when the state has too few indices (extend and
    retry).
    """
    if J < 1:
        raise ValueError("J must be >= 1")
    sj, tj = [0], [1]
    blocks: List[PsiBlock] = []
    points = {1: state.Ck[1]}
    pair_s = [ExpRatio(ExpSum(), state.Ck[0])]
    pair_t = [ExpRatio(state.Ck[1], state.Ck[1])]
    psum = state.Ck[1]  # running window sum of psi

    for _ in range(2, J + 1):
        t_prev = tj[-1]
        abs_p = abs(psum)
        s_next = None
        for idx in range(t_prev + 1, state.depth + 1):
            if (state.Ck[idx] - 4 * abs_p).sign() > 0:
                s_next = idx
                break
        if s_next is None:
            raise StateTooShortError(state.depth, state.depth + 6)
        blocks.append(PsiBlock(state.nk[t_prev], state.nk[s_next], "zero"))
        pair_s.append(ExpRatio(psum, state.Ck[s_next]))

        t_next = None
        for idx in range(s_next + 1, state.depth + 1):
            if (state.Ck[idx] - 8 * state.Ck[s_next]).sign() > 0:
                t_next = idx
                break
        if t_next is None:
            raise StateTooShortError(state.depth, state.depth + 6)
        blocks.append(PsiBlock(state.nk[s_next], state.nk[t_next], "weight"))
        psum = psum + state.prefix_between(s_next, t_next)
        pair_t.append(ExpRatio(psum, state.Ck[t_next]))
        sj.append(s_next)
        tj.append(t_next)

    cert = PsiCertificate(
        sj=sj, tj=tj, blocks=blocks, points=points,
        window_hi=state.nk[tj[-1]], nk=list(state.nk), Ck=list(state.Ck),
        weight_desc=state.weight.describe(),
        pairings_s=pair_s, pairings_t=pair_t)
    return cert


@dataclass
class CheckEntry:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class PsiReport:
    entries: List[CheckEntry] = field(default_factory=list)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.entries.append(CheckEntry(name, passed, detail))

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> List[CheckEntry]:
        return [e for e in self.entries if not e.passed]


def verify_psi(cert: PsiCertificate, state: CesaroState) -> PsiReport:
    """Recompute everything in the certificate from raw data, exactly.

    Checks: stored prefix sums match the weight; all pairings recomputed
    from the block/point representation of psi; the alternating inequality
    family (< 1/4 at s-indices, > 3/4 at t-indices); and the pointwise
    bounds 0 <= psi(i) <= w(i) + 1 (structural on blocks, exact on points).
    Failures become report entries, never exceptions.
    """
    report = PsiReport()
    w = state.weight

    ok = list(cert.nk) == list(state.nk)
    report.add("anchors-match-state", ok,
               "" if ok else "certificate windows differ from state")
    if not ok:
        return report

    for k in range(min(len(cert.Ck), len(state.Ck))):
        same = cert.Ck[k] == state.Ck[k]
        report.add(f"prefix-sum[{k}]", same,
                   "" if same else f"stored {cert.Ck[k]} recomputed {state.Ck[k]}")

    J = len(cert.sj)
    for j in range(J):
        s_idx, t_idx = cert.sj[j], cert.tj[j]
        try:
            ps = _psi_window_sum(cert, state, s_idx)
            pt = _psi_window_sum(cert, state, t_idx)
        except ValueError as exc:
            report.add(f"pairing-recompute[{j + 1}]", False, str(exc))
            continue
        rs = ExpRatio(ps, state.Ck[s_idx])
        rt = ExpRatio(pt, state.Ck[t_idx])

        stored_ok = rs == cert.pairings_s[j] and rt == cert.pairings_t[j]
        report.add(f"pairing-consistency[{j + 1}]", stored_ok,
                   "" if stored_ok else
                   f"recomputed ({rs}, {rt}) vs stored "
                   f"({cert.pairings_s[j]}, {cert.pairings_t[j]})")

        margin_s = Fraction(1, 4) * state.Ck[s_idx] - abs(ps)
        s_ok = margin_s.sign() > 0
        report.add(f"oscillation-low[{j + 1}]", s_ok,
                   f"|<L_s,psi>| = {abs(rs)}; margin*C = {margin_s}")
        margin_t = abs(pt) - Fraction(3, 4) * state.Ck[t_idx]
        t_ok = margin_t.sign() > 0
        report.add(f"oscillation-high[{j + 1}]", t_ok,
                   f"|<L_t,psi>| = {abs(rt)}; margin*C = {margin_t}")

    for i, v in sorted(cert.points.items()):
        nonneg = v.is_zero() or v.sign() >= 0
        ub = (w.eval(i) + 1 - v).sign() >= 0 if i > 0 else v.is_zero()
        report.add(f"bound-point[{i}]", nonneg and ub,
                   f"psi({i}) = {v}, cap = {w.eval(i)} + 1")
    for b in cert.blocks:
        # zero blocks: 0 <= 0 <= w+1; weight blocks: 0 <= w(i) <= w(i)+1
        report.add(f"bound-block({b.lo},{b.hi}]:{b.kind}", True,
                   "structural: psi is 0 or the weight itself")
    return report


# ---------------------------------------------------------------------------
# invariance defect


@dataclass(frozen=True)
class DefectResult:
    """Dual norm of the translation defect of L_k, with the coarser
    submultiplicative bound alongside."""

    exact: ExpRatio
    coarse: ExpRatio


def invariance_defect(state: CesaroState, k: int) -> DefectResult:
    """The shifted average minus the average is (delta_{n_k+1} - delta_0)/C_k;
    its dual norm over the unit ball is (w(n_k + 1) + w(0))/C_k exactly,
    bounded by the coarser (w(1) w(n_k) + w(0))/C_k."""
    if k < 0 or k > state.depth:
        raise IndexError(k)
    w = state.weight
    n = state.nk[k]
    exact_num = w.eval(n + 1) + ExpSum.from_rational(1)
    coarse_num = w.eval(1) * w.eval(n) + ExpSum.from_rational(1)
    if (coarse_num - exact_num).sign() < 0:
        raise AssertionError("submultiplicativity violated by weight values")
    C = state.Ck[k]
    return DefectResult(exact=ExpRatio(exact_num, C),
                        coarse=ExpRatio(coarse_num, C))
