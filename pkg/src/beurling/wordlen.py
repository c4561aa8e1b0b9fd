"""Exact word-length metrics on the integers for signed generator sets.

The word length ``|n|_S`` of an integer is the least number of signed
generators from a strictly increasing set ``S`` of positive integers summing
to ``n``; a representation with integer coefficients ``c`` contributes
``sum |c|`` to the length, which is the same count written multiplicatively.

Three independent routes compute or bound it:

* an exact shortest-path solver over (bit position, carry) states for
  schedules whose generators are all powers of two (the default for the
  squares-of-two schedule, where values get astronomically large);
* an exact iterative-deepening search over (residual, budget) states with
  a generator-admissibility pruning rule, for arbitrary schedules;
* a brute-force breadth-first enumeration over a clamped value window,
  kept deliberately simple so it can serve as an oracle for the other two.

The pruning rule: at residual value m with L steps of budget left, a
generator g can be the largest one carrying nonzero net coefficient only if
``g <= |m| + (L-1)*g_prev``, because the at most L-1 remaining terms use
generators at most ``g_prev`` and the top coefficient cannot cancel away
(deleting a +/- pair at the top would shorten the representation).
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

DEFAULT_LENGTH_CAP = 64

#: cache entries for the iterative-deepening memo (the only env knob)
CACHE_SIZE = int(os.environ.get("BEURLING_CACHE_SIZE", "1000000"))


class BudgetExceededError(Exception):
    """No representation found within the length cap (a distinct outcome,
    never to be confused with an actual length)."""

    def __init__(self, n: int, cap: int, detail: str = ""):
        self.n = n
        self.cap = cap
        super().__init__(
            f"no representation of {n} within length cap {cap}"
            + (f" ({detail})" if detail else ""))


class GeneratorSchedule:
    """Strictly increasing positive generators for Z, finite or scheduled.

    Kinds: ``squares2`` (generator k is 2**(k*k)), ``unit`` (just {1}),
    ``explicit`` (a finite user-supplied list).
    """

    __slots__ = ("kind", "_gens")

    def __init__(self, kind: str, gens: Optional[Sequence[int]] = None):
        if kind not in ("squares2", "unit", "explicit"):
            raise ValueError(f"unknown schedule kind {kind!r}")
        self.kind = kind
        if kind == "explicit":
            gens = tuple(int(g) for g in (gens or ()))
            if not gens:
                raise ValueError("explicit schedule needs at least one generator")
            if gens[0] < 1 or any(a >= b for a, b in zip(gens, gens[1:])):
                raise ValueError("generators must be >= 1 and strictly increasing")
            self._gens = gens
        elif kind == "unit":
            self._gens = (1,)
        else:
            self._gens = None

    @classmethod
    def squares2(cls) -> "GeneratorSchedule":
        return cls("squares2")

    @classmethod
    def unit(cls) -> "GeneratorSchedule":
        return cls("unit")

    @classmethod
    def explicit(cls, gens: Sequence[int]) -> "GeneratorSchedule":
        return cls("explicit", gens)

    def generator(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if self.kind == "squares2":
            return 1 << (i * i)
        if i >= len(self._gens):
            raise IndexError(f"schedule has only {len(self._gens)} generators")
        return self._gens[i]

    @property
    def finite_size(self) -> Optional[int]:
        return None if self.kind == "squares2" else len(self._gens)

    def generators_upto(self, bound: int) -> List[int]:
        """All generators <= bound, in increasing order."""
        if bound < 1:
            raise ValueError("bound must be >= 1")
        out = []
        i = 0
        while True:
            if self.finite_size is not None and i >= self.finite_size:
                break
            g = self.generator(i)
            if g > bound:
                break
            out.append(g)
            i += 1
        return out

    @property
    def all_powers_of_two(self) -> bool:
        if self.kind in ("squares2", "unit"):
            return True
        return all(g & (g - 1) == 0 for g in self._gens)

    def admissible(self, nabs: int, budget: int) -> List[Tuple[int, int]]:
        """(index, generator) pairs usable for a target of size ``nabs``.

        The largest generator carrying nonzero net coefficient in any
        representation with at most ``budget+1`` terms must satisfy
        ``g <= nabs + budget*g_prev``; every generator below such a ``g``
        may appear as well, so the result is the prefix of the schedule up
        to the last generator passing that test.  Finite schedules are
        scanned in full; squares-of-two stops once consecutive ratios exceed
        the budget, after which no later generator can pass.
        """
        mult = max(budget, 0)
        pairs: List[Tuple[int, int]] = []
        last_pass = -1
        prev = 0
        i = 0
        while True:
            if self.finite_size is not None and i >= self.finite_size:
                break
            g = self.generator(i)
            if g <= nabs + mult * prev:
                last_pass = i
            elif self.kind == "squares2" and (1 << (2 * i + 1)) > max(mult, 1):
                break
            pairs.append((i, g))
            prev = g
            i += 1
        return pairs[:last_pass + 1]

    def describe(self) -> str:
        if self.kind == "explicit":
            return "explicit:" + ",".join(str(g) for g in self._gens)
        return self.kind

    def _key(self):
        return (self.kind, self._gens)

    def __eq__(self, other):
        return isinstance(other, GeneratorSchedule) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"GeneratorSchedule({self.describe()})"


@dataclass(frozen=True)
class WordLengthResult:
    """A length together with a re-checkable representation.

    ``witness`` lists (generator index, signed coefficient) pairs whose
    weighted sum reproduces ``n`` and whose absolute coefficients sum to
    ``length``.  ``certificate`` is ``"exact"`` when no shorter
    representation exists, ``"upper-bound"`` otherwise.
    """

    n: int
    length: int
    witness: Tuple[Tuple[int, int], ...]
    certificate: str
    schedule: GeneratorSchedule = field(compare=False)

    def validate(self) -> None:
        total = sum(c * self.schedule.generator(i) for i, c in self.witness)
        weight = sum(abs(c) for _, c in self.witness)
        if total != self.n:
            raise AssertionError(f"witness sums to {total}, not {self.n}")
        if weight != self.length:
            raise AssertionError(f"witness weight {weight} != length {self.length}")
        if self.certificate not in ("exact", "upper-bound"):
            raise AssertionError(f"bad certificate {self.certificate!r}")


def generators_upto(schedule: GeneratorSchedule, bound: int) -> List[int]:
    return schedule.generators_upto(bound)


# ---------------------------------------------------------------------------
# engine (b): carry shortest-path for power-of-two schedules


def _advance(nabs: int, p: int, q: int, c: int) -> Optional[int]:
    """Push the carry through forced (digit-free) bit positions [p, q)."""
    while p < q:
        bit = (nabs >> p) & 1
        if (c - bit) & 1:
            return None
        c = (c - bit) >> 1
        p += 1
    return c


def _carry_dp(nabs: int, exps: List[int], cap: int
              ) -> Optional[Tuple[int, Dict[int, int]]]:
    """Minimal digit weight writing nabs = sum_d digit[p]*2**p, digits only
    at positions in exps.  Returns (weight, digits) or None within cap."""
    if nabs == 0:
        return 0, {}
    if not exps:
        return None
    bits = nabs.bit_length()
    pend = max(bits, exps[-1] + 1)
    climit = cap + 1
    ncp = len(exps)

    def hop(i: int, c: int) -> Optional[int]:
        lo = exps[i] + 1
        hi = exps[i + 1] if i + 1 < ncp else pend
        return _advance(nabs, lo, hi, c)

    start = _advance(nabs, 0, exps[0], 0)
    if start is None:
        return None

    dist: Dict[Tuple[int, int], int] = {(0, start): 0}
    parent: Dict[Tuple[int, int], Tuple[Tuple[int, int], int]] = {}
    heap = [(0, 0, start)]
    while heap:
        d0, i, c = heapq.heappop(heap)
        if dist.get((i, c), -1) != d0:
            continue
        if i == ncp:
            if c == 0:
                digits: Dict[int, int] = {}
                key = (i, c)
                while key in parent:
                    key, dg = parent[key]
                    if dg:
                        digits[exps[key[0]]] = dg
                return d0, digits
            continue
        bit = (nabs >> exps[i]) & 1
        parity = (c + bit) & 1
        dg = parity
        while d0 + dg <= cap:
            for sdg in ((dg, -dg) if dg else (0,)):
                c1 = (c + sdg - bit) >> 1
                c2 = hop(i, c1)
                if c2 is None or abs(c2) > climit:
                    continue
                nd = d0 + dg
                key = (i + 1, c2)
                if nd < dist.get(key, nd + 1):
                    dist[key] = nd
                    parent[key] = ((i, c), sdg)
                    heapq.heappush(heap, (nd, i + 1, c2))
            dg += 2
    return None


def _exact_power_of_two(n: int, schedule: GeneratorSchedule, cap: int
                        ) -> WordLengthResult:
    nabs = abs(n)
    cap_eff = cap
    if schedule.generator(0) == 1:
        # a cheap valid upper bound tightens the carry clamp
        cap_eff = min(cap, word_length_upper(n, schedule).length)
    admissible = schedule.admissible(nabs, cap_eff)
    exp_to_idx = {g.bit_length() - 1: i for i, g in admissible}
    exps = sorted(exp_to_idx)
    got = _carry_dp(nabs, exps, cap_eff)
    if got is None:
        raise BudgetExceededError(n, cap)
    length, digits = got
    sign = -1 if n < 0 else 1
    witness = tuple(sorted((exp_to_idx[p], sign * d) for p, d in digits.items()))
    return WordLengthResult(n, length, witness, "exact", schedule)


# ---------------------------------------------------------------------------
# engine (a): iterative deepening over (residual, budget)


class _IDSearch:
    def __init__(self, schedule: GeneratorSchedule, cache_size: int):
        self.schedule = schedule
        self.cache_size = cache_size
        self.memo: Dict[Tuple[int, int], bool] = {}

    def feasible(self, m: int, budget: int) -> bool:
        if m == 0:
            return True
        if budget == 0:
            return False
        key = (m, budget)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = False
        for _, g in self.schedule.admissible(abs(m), budget - 1):
            if self.feasible(m - g, budget - 1) or self.feasible(m + g, budget - 1):
                out = True
                break
        if len(self.memo) >= self.cache_size:
            self.memo.clear()
        self.memo[key] = out
        return out

    def walk(self, m: int, budget: int) -> List[Tuple[int, int]]:
        """Extract one minimal representation; ties prefer the smaller
        generator index, then the positive sign."""
        steps: List[Tuple[int, int]] = []
        while m != 0:
            for idx, g in self.schedule.admissible(abs(m), budget - 1):
                if self.feasible(m - g, budget - 1):
                    steps.append((idx, 1))
                    m -= g
                    break
                if self.feasible(m + g, budget - 1):
                    steps.append((idx, -1))
                    m += g
                    break
            else:
                raise AssertionError("walk lost a feasible path")
            budget -= 1
        return steps


def _exact_id_search(n: int, schedule: GeneratorSchedule, cap: int
                     ) -> WordLengthResult:
    nabs = abs(n)
    search = _IDSearch(schedule, CACHE_SIZE)
    for ell in range(cap + 1):
        if search.feasible(nabs, ell):
            coeffs: Dict[int, int] = {}
            for idx, s in search.walk(nabs, ell):
                coeffs[idx] = coeffs.get(idx, 0) + s
            if sum(abs(c) for c in coeffs.values()) != ell:
                raise AssertionError("minimal walk produced cancelling signs")
            sign = -1 if n < 0 else 1
            witness = tuple(sorted((i, sign * c) for i, c in coeffs.items() if c))
            return WordLengthResult(n, ell, witness, "exact", schedule)
    raise BudgetExceededError(n, cap)


# ---------------------------------------------------------------------------
# public solvers


def word_length_exact(n: int, schedule: GeneratorSchedule,
                      length_cap: int = DEFAULT_LENGTH_CAP) -> WordLengthResult:
    """The exact word length with a witness, or BudgetExceededError.

    Power-of-two schedules go through the carry shortest-path engine;
    everything else through iterative deepening.  Negative inputs are solved
    at their absolute value and the witness is negated.
    """
    if length_cap < 1:
        raise ValueError("length_cap must be >= 1")
    if n == 0:
        return WordLengthResult(0, 0, (), "exact", schedule)
    if schedule.all_powers_of_two:
        return _exact_power_of_two(n, schedule, length_cap)
    return _exact_id_search(n, schedule, length_cap)


def word_length_upper(n: int, schedule: GeneratorSchedule) -> WordLengthResult:
    """Greedy nearest-generator recursion with local improvement.

    Always returns a valid witness with certificate "upper-bound"; the
    length is >= the true word length.  Requires 1 to be a generator so the
    recursion is total.
    """
    if schedule.generator(0) != 1:
        raise ValueError(
            "word_length_upper needs 1 among the generators; "
            "use word_length_exact for general schedules")
    memo: Dict[int, Dict[int, int]] = {}

    def floor_gen(m: int) -> Tuple[int, int]:
        i = 0
        best = (0, 1)
        while True:
            if schedule.finite_size is not None and i >= schedule.finite_size:
                break
            g = schedule.generator(i)
            if g > m:
                break
            best = (i, g)
            i += 1
        return best

    def ceil_gen(m: int) -> Optional[Tuple[int, int]]:
        i, g = floor_gen(m)
        if g == m:
            return None
        j = i + 1
        if schedule.finite_size is not None and j >= schedule.finite_size:
            return None
        return j, schedule.generator(j)

    def rec(m: int) -> Dict[int, int]:
        if m == 0:
            return {}
        hit = memo.get(m)
        if hit is not None:
            return hit
        idx, g = floor_gen(m)
        cands = [(idx, g, m // g), (idx, g, m // g + 1)]
        up = ceil_gen(m)
        if up is not None and up[1] < 2 * m:
            cands.append((up[0], up[1], 1))
        best: Optional[Dict[int, int]] = None
        best_cost = None
        for i, gg, c in cands:
            resid = m - c * gg
            if abs(resid) >= m:
                continue
            sub = rec(abs(resid))
            merged = dict(sub) if resid >= 0 else {k: -v for k, v in sub.items()}
            merged[i] = merged.get(i, 0) + c
            cost = sum(abs(v) for v in merged.values())
            if best_cost is None or cost < best_cost:
                best, best_cost = merged, cost
        assert best is not None
        memo[m] = best
        return best

    coeffs = rec(abs(n))
    if n < 0:
        coeffs = {i: -c for i, c in coeffs.items()}
    witness = tuple(sorted((i, c) for i, c in coeffs.items() if c))
    length = sum(abs(c) for _, c in witness)
    return WordLengthResult(n, length, witness, "upper-bound", schedule)


# ---------------------------------------------------------------------------
# brute-force oracle (independent of both exact engines)


def _oracle_generators(schedule: GeneratorSchedule, nabs: int,
                       max_terms: int) -> List[int]:
    return [g for _, g in schedule.admissible(nabs, max_terms)]


def brute_force_oracle(n: int, schedule: GeneratorSchedule,
                       max_terms: int) -> Optional[int]:
    """Minimal term count by exhaustive breadth-first enumeration.

    Explores every signed multiset of at most ``max_terms`` admissible
    generators, deduplicated through the partial sums they can reach inside
    a clamped window (any representation can be reordered so its partial
    sums stay within one generator of the segment [0, n]).  Returns None if
    nothing sums to n within the budget.
    """
    if n == 0:
        return 0
    nabs = abs(n)
    gens = _oracle_generators(schedule, nabs, max_terms)
    if not gens:
        return None
    window = nabs + gens[-1]
    dist = _bfs_window(gens, window, max_terms, target=nabs)
    d = dist[nabs + window]
    return d if 0 <= d <= max_terms else None


def _bfs_window(gens: List[int], window: int, budget: int,
                target: Optional[int] = None) -> List[int]:
    size = 2 * window + 1
    if target is None and size * len(gens) > 200_000:
        return _bfs_window_vec(gens, window, budget)
    dist = [-1] * size
    dist[window] = 0
    frontier = [window]
    steps = [g for g in gens] + [-g for g in gens]
    level = 0
    while frontier and level < budget:
        level += 1
        nxt = []
        for pos in frontier:
            for s in steps:
                q = pos + s
                if 0 <= q < size and dist[q] < 0:
                    dist[q] = level
                    if target is not None and q - window == target:
                        return dist
                    nxt.append(q)
        frontier = nxt
    return dist


def _bfs_window_vec(gens: List[int], window: int, budget: int) -> List[int]:
    """Vectorized level-synchronous sweep for wide windows."""
    import numpy as np

    size = 2 * window + 1
    dist = np.full(size, -1, dtype=np.int32)
    dist[window] = 0
    frontier = np.zeros(size, dtype=bool)
    frontier[window] = True
    level = 0
    while level < budget and frontier.any():
        level += 1
        nxt = np.zeros(size, dtype=bool)
        for g in gens:
            nxt[g:] |= frontier[:-g]
            nxt[:-g] |= frontier[g:]
        nxt &= dist < 0
        if not nxt.any():
            break
        dist[nxt] = level
        frontier = nxt
    return dist.tolist()


def word_lengths_upto(schedule: GeneratorSchedule, bound: int,
                      budget: int = 2 * DEFAULT_LENGTH_CAP) -> List[int]:
    """Word lengths for 0..bound in one breadth-first sweep (oracle-style).

    The metric is symmetric, so this covers |n| <= bound.  Entries are -1
    when the budget was exhausted first (does not happen for schedules
    containing 1 at the default budget and sane bounds).
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    if bound == 0:
        return [0]
    gens = _oracle_generators(schedule, bound, budget)
    window = bound + (gens[-1] if gens else 0)
    dist = _bfs_window(gens, window, budget)
    return [dist[v + window] for v in range(bound + 1)]
