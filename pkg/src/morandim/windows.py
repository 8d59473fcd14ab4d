"""Extremal-window search over run-compressed sequences.

The dimension formulas are extrema of ratios of log-sums over contiguous
index windows, subject to a size threshold on the denominator.  Windows
are identified by (k, n): the index range [k, k+n].

Three window functionals appear:

* ``balanced``     num = log(q_k...q_{k+n}),      den = log(b_k...b_{k+n})
* ``assouad_net``  num = log(q_k...q_{k+n}),      den = log(q_k b_{k+1}...b_{k+n})
* ``lower_net``    num = log(q_{k+1}...q_{k+n} / q_{k+n}),
                   den = log(b_{k+1}...b_{k+n} / q_{k+n})

A brute-force enumerator provides the oracle; the compressed search
restricts endpoints to run boundaries (plus one period of interior
offsets and threshold-crossing ends), which is where extrema of
mediant-structured ratios live.  Values and witnesses are selected with
exact ledger comparisons, so the two paths agree exactly, including the
tie-break: smallest k, then smallest n.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Tuple

from .logarithmic import LogRatio, LogValue, PairSums


class NoFeasibleWindowError(ValueError):
    """No window satisfies the denominator threshold at this depth."""


@dataclass(frozen=True, order=True)
class Window:
    """The index range [k, k+n]; k >= 1, n >= 0."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 1 or self.n < 0:
            raise ValueError("window needs k >= 1, n >= 0")

    @property
    def end(self) -> int:
        return self.k + self.n


@dataclass(frozen=True)
class Threshold:
    """A feasibility bound: window passes when den >= value/divisor.

    ``value`` is a LogValue; ``divisor`` permits half scales such as
    sqrt(lambda(I)) without leaving exact arithmetic.
    """

    value: LogValue
    divisor: int = 1

    @staticmethod
    def of_int(n: int) -> "Threshold":
        if n < 1:
            raise ValueError("integer threshold must be >= 1")
        return Threshold(LogValue.of_int(n))

    @staticmethod
    def sqrt_of(lv: LogValue) -> "Threshold":
        return Threshold(lv, 2)

    def accepts(self, den: LogValue) -> bool:
        return (den.scaled(self.divisor) - self.value).sign() >= 0

    def __float__(self) -> float:
        return float(self.value) / self.divisor

    def describe(self) -> str:
        l2 = self.value.log2() / self.divisor
        return f"2^{l2:.6g}"


# ---------------------------------------------------------------------------
# Window functionals
# ---------------------------------------------------------------------------

class Functional:
    name = "abstract"
    min_n = 0

    def num_den(self, ps: PairSums, k: int, e: int) -> Tuple[LogValue, LogValue]:
        raise NotImplementedError


class Balanced(Functional):
    """log(q-product) over log(b-product) on [k, e]."""

    name = "balanced"
    min_n = 0

    def num_den(self, ps, k, e):
        return ps.q_sum(k, e), ps.b_sum(k, e)


class AssouadNet(Functional):
    """Numerator keeps q_k; denominator swaps b_k for q_k."""

    name = "assouad_net"
    min_n = 0

    def num_den(self, ps, k, e):
        return ps.q_sum(k, e), ps.q_at(k) + ps.b_sum(k + 1, e)


class LowerNet(Functional):
    """Both sides divided by the final q; needs n >= 1."""

    name = "lower_net"
    min_n = 1

    def num_den(self, ps, k, e):
        tail_q = ps.q_at(e)
        return ps.q_sum(k + 1, e) - tail_q, ps.b_sum(k + 1, e) - tail_q


BALANCED = Balanced()
ASSOUAD_NET = AssouadNet()
LOWER_NET = LowerNet()


# ---------------------------------------------------------------------------
# Exact extremum bookkeeping
# ---------------------------------------------------------------------------

class _Best:
    """Tracks the extremal ratio with the (k, n)-minimal witness."""

    def __init__(self, sense: int):
        self.sense = sense  # +1 max, -1 min
        self.ratio: Optional[LogRatio] = None
        self.window: Optional[Window] = None

    def offer(self, ratio: LogRatio, window: Window) -> None:
        if self.ratio is None:
            self.ratio, self.window = ratio, window
            return
        c = ratio.cmp(self.ratio)
        if c * self.sense > 0 or (c == 0 and window < self.window):
            self.ratio, self.window = ratio, window


def _evaluate(functional: Functional, ps: PairSums, k: int, e: int) -> LogRatio:
    num, den = functional.num_den(ps, k, e)
    return LogRatio(num, den)


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

def brute_force_extremum(
    ps: PairSums,
    depth: int,
    threshold: Threshold,
    sense: int,
    functional: Functional = BALANCED,
    n_max: Optional[int] = None,
) -> Tuple[LogRatio, Window]:
    """Exhaustive exact search; the oracle the compressed path must match."""
    best = _Best(sense)
    for k in range(1, depth + 1):
        for e in range(k + functional.min_n, depth + 1):
            if n_max is not None and e - k > n_max:
                break
            num, den = functional.num_den(ps, k, e)
            if den.sign() <= 0 or not threshold.accepts(den):
                continue
            best.offer(LogRatio(num, den), Window(k, e - k))
    if best.ratio is None:
        raise NoFeasibleWindowError(
            f"no feasible window at depth {depth} for threshold {threshold.describe()}"
        )
    return best.ratio, best.window


# ---------------------------------------------------------------------------
# Candidate generation for the compressed search
# ---------------------------------------------------------------------------

def _joint_period(qseg, bseg) -> int:
    import math as _m

    pq = qseg.period if qseg.pattern is not None else 1
    pb = bseg.period if bseg.pattern is not None else 1
    return pq * pb // _m.gcd(pq, pb)


def candidate_positions(ps: PairSums, depth: int, spread: int = 1) -> List[int]:
    """Run-boundary indices plus ``spread`` joint periods of interior offsets."""
    pos = set()
    for lo, hi, qseg, bseg in ps.ranges:
        period = _joint_period(qseg, bseg)
        reach = min(hi - lo + 1, spread * period + period)
        for i in range(lo, lo + reach):
            pos.add(i)
        for i in range(max(lo, hi - reach + 1), hi + 1):
            pos.add(i)
    pos.add(1)
    pos.add(depth)
    return sorted(p for p in pos if 1 <= p <= depth)


def _min_feasible_end(
    ps: PairSums, functional: Functional, threshold: Threshold, k: int, depth: int
) -> Optional[int]:
    """Smallest e >= k + min_n with den(k, e) meeting the threshold, else None."""
    lo, hi = k + functional.min_n, depth
    if lo > depth:
        return None
    den_hi = functional.num_den(ps, k, hi)[1]
    if den_hi.sign() <= 0 or not threshold.accepts(den_hi):
        return None
    # den is nondecreasing in e for all three functionals (appending log b >= 0,
    # and for lower_net the swap of the tail q can only be checked exactly).
    while lo < hi:
        mid = (lo + hi) // 2
        den = functional.num_den(ps, k, mid)[1]
        if den.sign() > 0 and threshold.accepts(den):
            hi = mid
        else:
            lo = mid + 1
    return lo


def compressed_extremum(
    ps: PairSums,
    depth: int,
    threshold: Threshold,
    sense: int,
    functional: Functional = BALANCED,
    spread: int = 2,
) -> Tuple[LogRatio, Window]:
    """Extremum over feasible windows using run-boundary candidates.

    Endpoint candidates are run boundaries with ``spread`` periods of
    offsets; for every start candidate the threshold-crossing end is added.
    The extremum over each candidate box is attained at these points by
    mediant monotonicity; the final selection is exact.
    """
    starts = candidate_positions(ps, depth, spread)
    ends = starts
    best = _Best(sense)

    # Float prefilter over the candidate grid keeps exact comparisons rare.
    fq = {0: 0.0}
    fb = {0: 0.0}
    for p in starts:
        fq[p] = float(ps.q_prefix(p))
        fb[p] = float(ps.b_prefix(p))
    fthr = float(threshold)

    tight = set()
    pairs: List[Tuple[int, int]] = []
    for k in starts:
        e0 = _min_feasible_end(ps, functional, threshold, k, depth)
        if e0 is None:
            continue
        tight.add((k, e0))
        pairs.append((k, e0))
        i0 = bisect.bisect_left(ends, max(e0, k + functional.min_n))
        for e in ends[i0:]:
            pairs.append((k, e))

    if not pairs:
        raise NoFeasibleWindowError(
            f"no feasible window at depth {depth} for threshold {threshold.describe()}"
        )

    # Rank by float ratio, keep a generous band, then decide exactly.
    scored = []
    for k, e in pairs:
        num_f, den_f = _float_num_den(functional, ps, fq, fb, k, e)
        if den_f <= 0:
            continue
        if (k, e) not in tight and den_f < fthr * (1 - 1e-9) - 1e-12:
            continue  # clearly infeasible and not a threshold-tight pair
        scored.append((k, e, num_f / den_f))
    if not scored:
        raise NoFeasibleWindowError("all candidate windows degenerate")
    target = max(v for _, _, v in scored) if sense > 0 else min(v for _, _, v in scored)
    band = 1e-9 * max(1.0, abs(target))
    for k, e, v in scored:
        if (v - target) * sense < -band:
            continue
        num, den = functional.num_den(ps, k, e)
        if den.sign() <= 0 or not threshold.accepts(den):
            continue
        best.offer(LogRatio(num, den), Window(k, e - k))
    if best.ratio is None:
        raise NoFeasibleWindowError("candidate windows all failed exact feasibility")
    return best.ratio, best.window


def _float_num_den(functional, ps, fq, fb, k, e):
    if isinstance(functional, Balanced):
        return fq[e] - fq[k - 1], fb[e] - fb[k - 1]
    if isinstance(functional, AssouadNet):
        qk = float(ps.q_at(k))
        return fq[e] - fq[k - 1], qk + (fb[e] - fb[k])
    qe = float(ps.q_at(e))
    return fq[e] - fq[k] - qe, fb[e] - fb[k] - qe


# ---------------------------------------------------------------------------
# Suffix-window extrema (the bounded dimension forms)
# ---------------------------------------------------------------------------

def suffix_extremum(
    ps: PairSums, depth: int, n_min: int, sense: int
) -> Tuple[LogRatio, Window, List[Tuple[int, LogRatio]]]:
    """Extremum of the balanced ratio over windows [k, depth], depth - k >= n_min.

    Returns (ratio, witness, trace) where trace[j] = (n, running extremum over
    windows of length > n); the trace is exactly monotone by construction.
    """
    if n_min < 0 or n_min >= depth:
        raise ValueError("need 0 <= n_min < depth")
    cands = [k for k in candidate_positions(ps, depth, 2) if k <= depth - n_min]
    if depth - n_min not in cands:
        cands.append(depth - n_min)
    cands = sorted(set(cands))
    best = _Best(sense)
    trace: List[Tuple[int, LogRatio]] = []
    # Sweep k upward (window length downward); the running extremum gives a
    # trace over n that is monotone by construction.
    for k in cands:
        ratio = LogRatio(ps.q_sum(k, depth), ps.b_sum(k, depth))
        best.offer(ratio, Window(k, depth - k))
        trace.append((depth - k, best.ratio))
    trace.sort(key=lambda t: t[0])
    return best.ratio, best.window, trace


# ---------------------------------------------------------------------------
# Prefix-ratio traces (Hausdorff / packing)
# ---------------------------------------------------------------------------

def prefix_ratio(ps: PairSums, n: int) -> LogRatio:
    return LogRatio(ps.q_prefix(n), ps.b_prefix(n))


def prefix_sample_points(ps: PairSums, lo: int, hi: int) -> List[int]:
    """Points where prefix-ratio extrema over [lo, hi] can occur.

    Within a uniform segment the prefix ratio is monotone along each phase
    class of whole periods, so segment ends plus one period of offsets at
    each end suffice; geometric segments are unimodal, handled by a local
    crossing scan.
    """
    pts = {lo, hi}
    for rlo, rhi, qseg, bseg in ps.ranges:
        a, b = max(rlo, lo), min(rhi, hi)
        if a > b:
            continue
        period = _joint_period(qseg, bseg)
        reach = min(b - a + 1, 2 * period)
        pts.update(range(a, a + reach))
        pts.update(range(max(a, b - reach + 1), b + 1))
        if qseg.geom_base is not None or bseg.geom_base is not None:
            pts.update(_unimodal_crossings(ps, a, b))
    return sorted(p for p in pts if lo <= p <= hi)


def _unimodal_crossings(ps: PairSums, a: int, b: int) -> Iterable[int]:
    """Indices where the per-index ratio crosses the running prefix ratio."""
    out = []
    lo, hi = a, b
    for _ in range(60):  # bisection on the crossing of two monotone curves
        if hi - lo <= 2:
            break
        mid = (lo + hi) // 2
        pr = float(prefix_ratio(ps, mid))
        local = float(ps.q_at(mid)) / float(ps.b_at(mid))
        if local >= pr:
            lo = mid
        else:
            hi = mid
    out.extend(range(max(a, lo - 2), min(b, hi + 2) + 1))
    return out


def prefix_extrema(
    ps: PairSums, lo: int, hi: int
) -> Tuple[LogRatio, int, LogRatio, int]:
    """(min ratio, argmin, max ratio, argmax) of prefix ratios over [lo, hi]."""
    lo = max(lo, 1)
    best_min = None
    best_max = None
    arg_min = arg_max = lo
    for n in prefix_sample_points(ps, lo, hi):
        r = prefix_ratio(ps, n)
        if best_min is None or r.cmp(best_min) < 0:
            best_min, arg_min = r, n
        if best_max is None or r.cmp(best_max) > 0:
            best_max, arg_max = r, n
    return best_min, arg_min, best_max, arg_max


def threshold_grid(final: Threshold, steps: int = 10) -> List[Threshold]:
    """A geometric ladder of thresholds ending at ``final``."""
    bits = max(float(final.value) / final.divisor, 0.0) / __import__("math").log(2)
    grid: List[Threshold] = []
    seen = set()
    for j in range(1, steps):
        b = max(1, int(round(bits * j / steps)))
        if b not in seen:
            seen.add(b)
            grid.append(Threshold(LogValue.of_int(2, b)))
    grid.append(final)
    return grid
