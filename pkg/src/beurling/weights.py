"""Weight functions on Z: construction, exact evaluation, radius handling.

A weight is submultiplicative, is 1 at the origin, and takes values >= 1.
The built-ins all have values of the form ``e**m`` with integer m, so
submultiplicativity checks reduce to integer comparisons of exponents;
everything else goes through the certified comparison machinery of
:mod:`beurling.exactnum`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactnum import (CertifiedInterval, ExpSum, InconclusiveComparison,
                       exp_enclosure)
from .wordlen import (DEFAULT_LENGTH_CAP, BudgetExceededError,
                      GeneratorSchedule, word_length_exact, word_lengths_upto)


class Weight:
    """Base weight interface; subclasses are pure evaluators."""

    kind: str = "abstract"

    def eval(self, n: int) -> ExpSum:
        raise NotImplementedError

    def log_exponent(self, n: int) -> Optional[int]:
        """m such that the value at n is exactly e**m, when that form holds."""
        return None

    def log_range(self, bound: int) -> Optional[List[int]]:
        """Bulk [log value(0), ..., log value(bound)], when integer logs exist."""
        if self.log_exponent(0) is None:
            return None
        return [self.log_exponent(i) for i in range(bound + 1)]

    def radius(self) -> Optional[ExpSum]:
        """Closed-form weight radius (inf of n-th root values), if known."""
        return None

    def radius_is_one(self) -> bool:
        r = self.radius()
        return r is not None and r == ExpSum.from_rational(1)

    def log_nonneg_constant(self) -> Optional[int]:
        """m with value(n) = e**m for every n >= 1, when constant there.

        Constant-on-the-right weights admit closed-form prefix sums, which
        lets searches over Cesaro windows skip the linear scan.
        """
        return None

    def check_geq_one(self, ns: Iterable[int]) -> List[int]:
        """On-demand spot check that values stay >= 1; returns violations."""
        bad = []
        for n in ns:
            if (self.eval(n) - 1).sign() < 0:
                bad.append(n)
        return bad

    def describe(self) -> str:
        return self.kind

    def __repr__(self):
        return f"<weight {self.describe()}>"


class TrivialWeight(Weight):
    kind = "trivial"

    def eval(self, n: int) -> ExpSum:
        return ExpSum.from_rational(1)

    def log_exponent(self, n: int) -> int:
        return 0

    def log_range(self, bound: int) -> List[int]:
        return [0] * (bound + 1)

    def radius(self) -> ExpSum:
        return ExpSum.from_rational(1)

    def log_nonneg_constant(self) -> int:
        return 0


class ExpWordLengthWeight(Weight):
    """value(n) = e ** (word length of n), for a generator schedule.

    Word lengths come from the exact solver; a breadth-first bulk table
    (grown geometrically) serves range queries, and the two are
    interchangeable because the solver is oracle-checked.
    """

    kind = "exp-wordlength"

    def __init__(self, schedule: GeneratorSchedule,
                 length_cap: int = DEFAULT_LENGTH_CAP):
        self.schedule = schedule
        self.length_cap = length_cap
        self._bulk: List[int] = [0]
        self._cache: Dict[int, int] = {}

    def eta(self, n: int) -> int:
        """Exact word length; raises BudgetExceededError past the cap."""
        m = abs(n)
        if m < len(self._bulk):
            v = self._bulk[m]
            if v >= 0:
                return v
        v = self._cache.get(m)
        if v is None:
            v = word_length_exact(m, self.schedule, self.length_cap).length
            self._cache[m] = v
        return v

    def eta_range(self, bound: int) -> List[int]:
        if bound >= len(self._bulk):
            grow = max(bound, 2 * (len(self._bulk) - 1), 1024)
            self._bulk = word_lengths_upto(self.schedule, grow,
                                           budget=4 * self.length_cap)
        out = self._bulk[:bound + 1]
        if any(v < 0 for v in out):
            raise BudgetExceededError(out.index(-1), 4 * self.length_cap,
                                      "bulk word-length sweep exhausted")
        return out

    def eval(self, n: int) -> ExpSum:
        return ExpSum.exp(self.eta(n))

    def log_exponent(self, n: int) -> int:
        return self.eta(n)

    def log_range(self, bound: int) -> List[int]:
        return self.eta_range(bound)

    def radius(self) -> Optional[ExpSum]:
        # squares-of-two: arbitrarily large generators have word length 1,
        # so the n-th root values dip to e**(1/g) and the infimum is 1.
        if self.schedule.kind == "squares2":
            return ExpSum.from_rational(1)
        # the unit schedule gives the absolute-value exponent, radius e
        if self.schedule.kind == "unit":
            return ExpSum.exp(1)
        return None

    def describe(self) -> str:
        return f"exp-{self.schedule.describe()}"


class ExpAbsoluteWeight(Weight):
    """value(n) = e**|n| (radius e; useful to exercise normalization)."""

    kind = "exp-absolute"

    def eval(self, n: int) -> ExpSum:
        return ExpSum.exp(abs(n))

    def log_exponent(self, n: int) -> int:
        return abs(n)

    def log_range(self, bound: int) -> List[int]:
        return list(range(bound + 1))

    def radius(self) -> ExpSum:
        return ExpSum.exp(1)


class NormalizedWeight(Weight):
    """Rescaled weight value(n) = base(n) / rho**n for an exact rho > 0."""

    kind = "normalized"

    def __init__(self, base: Weight, rho: ExpSum):
        coeff, _ = rho.single_term()
        if coeff <= 0:
            raise ValueError(f"invalid rho {rho}: must be positive")
        self.base = base
        self.rho = rho

    def eval(self, n: int) -> ExpSum:
        return self.base.eval(n) / (self.rho ** n)

    def log_exponent(self, n: int) -> Optional[int]:
        b = self.base.log_exponent(n)
        coeff, m = self.rho.single_term()
        if b is None or coeff != 1:
            return None
        return b - m * n

    def log_range(self, bound: int) -> Optional[List[int]]:
        b = self.base.log_range(bound)
        coeff, m = self.rho.single_term()
        if b is None or coeff != 1:
            return None
        return [v - m * i for i, v in enumerate(b)]

    def radius(self) -> Optional[ExpSum]:
        r = self.base.radius()
        return None if r is None else r / self.rho

    def log_nonneg_constant(self) -> Optional[int]:
        if isinstance(self.base, ExpAbsoluteWeight) and self.rho == ExpSum.exp(1):
            return 0
        return None

    def describe(self) -> str:
        return f"normalized({self.base.describe()}, {self.rho})"


def weight_exp_wordlength(schedule: GeneratorSchedule,
                          length_cap: int = DEFAULT_LENGTH_CAP
                          ) -> ExpWordLengthWeight:
    return ExpWordLengthWeight(schedule, length_cap)


def radius_normalize(w: Weight, rho: ExpSum) -> Weight:
    """Divide out rho**n; rho = 1 returns the weight unchanged."""
    if rho == ExpSum.from_rational(1):
        return w
    return NormalizedWeight(w, rho)


def rho_upper(w: Weight, N: int, prec: int = 128) -> CertifiedInterval:
    """Certified enclosure of min over 1 <= n <= N of value(n)**(1/n).

    This upper-bounds the weight radius (the infimum over all n equals the
    limit).  Exploration aid only: built-ins carry their radius in closed
    form.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    logs = w.log_range(N)
    if logs is not None:
        best = min(Fraction(logs[n], n) for n in range(1, N + 1))
        return exp_enclosure(best, prec)
    out: Optional[CertifiedInterval] = None
    for n in range(1, N + 1):
        v = w.eval(n).interval(prec).nth_root(n, prec)
        out = v if out is None else out.min_with(v)
    return out


@dataclass
class SubmultReport:
    """Outcome of submultiplicativity spot checks.

    ``violations`` are certified failures; ``inconclusive`` pairs hit the
    precision ceiling and are reported distinctly, never as pass or fail.
    """

    checked: int = 0
    violations: List[Tuple[int, int]] = field(default_factory=list)
    inconclusive: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.inconclusive


def check_submultiplicative(w: Weight,
                            pairs: Iterable[Tuple[int, int]]) -> SubmultReport:
    """Verify value(m+n) <= value(m)*value(n) for every pair, exactly."""
    report = SubmultReport()
    for m, n in pairs:
        report.checked += 1
        lm, ln, lmn = w.log_exponent(m), w.log_exponent(n), w.log_exponent(m + n)
        if lm is not None and ln is not None and lmn is not None:
            if lmn > lm + ln:
                report.violations.append((m, n))
            continue
        diff = w.eval(m) * w.eval(n) - w.eval(m + n)
        try:
            if diff.sign() < 0:
                report.violations.append((m, n))
        except InconclusiveComparison:
            report.inconclusive.append((m, n))
    return report
