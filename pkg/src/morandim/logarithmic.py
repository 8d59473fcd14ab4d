"""Exact logarithms of giant integer products.

Every quantity this library compares is a sum of logarithms of integers,
often with multiplicities far beyond 10^20.  Such a sum is stored as a
prime-exponent ledger ``{p: e_p}`` so that

* addition/subtraction of log-sums is exact integer arithmetic,
* a sum is zero exactly when its ledger is empty (unique factorization),
* a ratio of two sums is rational exactly when the ledgers are
  proportional, in which case it reduces to a ``Fraction``.

Numeric values are produced on demand with mpmath at escalating precision;
comparisons fall back to exact big-integer tests only when exponents are
small enough to make that cheap.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional

import mpmath

_BASE_PREC = 128
_MAX_PREC = 1 << 16
_BIGINT_BIT_CAP = 4_000_000


@lru_cache(maxsize=None)
def factorize(n: int) -> tuple:
    """Prime factorization of n >= 1 as a sorted tuple of (prime, exponent)."""
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    out = []
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if m > 1:
        out.append((m, 1))
    return tuple(out)


@lru_cache(maxsize=None)
def _log_prime(p: int, prec: int):
    with mpmath.workprec(prec):
        return mpmath.log(p)


class LogValue:
    """An exact log-sum Sum_p e_p * log(p) with integer exponents e_p."""

    __slots__ = ("ledger", "_float")

    def __init__(self, ledger: Optional[Dict[int, int]] = None):
        self.ledger: Dict[int, int] = {}
        if ledger:
            for p, e in ledger.items():
                if e:
                    self.ledger[p] = e
        self._float = None

    # -- constructors -----------------------------------------------------

    @staticmethod
    def of_int(n: int, multiplicity: int = 1) -> "LogValue":
        """multiplicity * log(n)."""
        lv = LogValue()
        if multiplicity == 0 or n == 1:
            return lv
        for p, e in factorize(n):
            lv.ledger[p] = lv.ledger.get(p, 0) + e * multiplicity
            if lv.ledger[p] == 0:
                del lv.ledger[p]
        return lv

    @staticmethod
    def zero() -> "LogValue":
        return LogValue()

    def copy(self) -> "LogValue":
        lv = LogValue()
        lv.ledger = dict(self.ledger)
        return lv

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "LogValue") -> "LogValue":
        lv = self.copy()
        lv._float = None
        for p, e in other.ledger.items():
            ne = lv.ledger.get(p, 0) + e
            if ne:
                lv.ledger[p] = ne
            else:
                lv.ledger.pop(p, None)
        return lv

    def __sub__(self, other: "LogValue") -> "LogValue":
        lv = self.copy()
        lv._float = None
        for p, e in other.ledger.items():
            ne = lv.ledger.get(p, 0) - e
            if ne:
                lv.ledger[p] = ne
            else:
                lv.ledger.pop(p, None)
        return lv

    def scaled(self, k: int) -> "LogValue":
        if k == 0:
            return LogValue()
        lv = LogValue()
        lv.ledger = {p: e * k for p, e in self.ledger.items()}
        return lv

    # -- predicates and numerics -------------------------------------------

    def is_zero(self) -> bool:
        return not self.ledger

    def sign(self) -> int:
        """Exact sign.  Zero only for the empty ledger (unique factorization)."""
        if not self.ledger:
            return 0
        signs = {1 if e > 0 else -1 for e in self.ledger.values()}
        if signs == {1}:
            return 1
        if signs == {-1}:
            return -1
        # Mixed signs: the value is provably nonzero, locate its sign.
        bits = sum(abs(e) * p.bit_length() for p, e in self.ledger.items())
        if bits <= _BIGINT_BIT_CAP:
            pos = 1
            neg = 1
            for p, e in self.ledger.items():
                if e > 0:
                    pos *= p**e
                else:
                    neg *= p ** (-e)
            return (pos > neg) - (pos < neg)
        prec = _BASE_PREC
        while prec <= _MAX_PREC:
            val, err = self._mpf_with_error(prec)
            if abs(val) > err:
                return 1 if val > 0 else -1
            prec *= 2
        raise ArithmeticError("could not resolve sign of log combination")

    def _mpf_with_error(self, prec: int):
        with mpmath.workprec(prec):
            total = mpmath.mpf(0)
            magnitude = mpmath.mpf(0)
            for p, e in self.ledger.items():
                term = _log_prime(p, prec) * e
                total += term
                magnitude += abs(term)
            err = (magnitude + abs(total)) * mpmath.mpf(2) ** (4 - prec)
            return total, err

    def mpf(self, prec: int = _BASE_PREC):
        return self._mpf_with_error(prec)[0]

    def __float__(self) -> float:
        if self._float is None:
            self._float = sum(e * math.log(p) for p, e in self.ledger.items())
        return self._float

    def log2(self) -> float:
        """Value in units of log 2."""
        return float(self) / math.log(2)

    def key(self) -> tuple:
        return tuple(sorted(self.ledger.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, LogValue) and self.ledger == other.ledger

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.ledger:
            return "LogValue(0)"
        parts = "+".join(f"{e}*log{p}" for p, e in sorted(self.ledger.items()))
        return f"LogValue({parts})"

    def proportion_to(self, other: "LogValue") -> Optional[Fraction]:
        """Rational r with self = r * other, if one exists (other nonzero)."""
        if other.is_zero():
            return None
        if self.is_zero():
            return Fraction(0)
        if set(self.ledger) != set(other.ledger):
            return None
        p0 = next(iter(other.ledger))
        r = Fraction(self.ledger[p0], other.ledger[p0])
        for p, e in other.ledger.items():
            if Fraction(self.ledger[p], e) != r:
                return None
        return r


class LogRatio:
    """A ratio of two log-sums, compared exactly whenever possible."""

    __slots__ = ("num", "den", "_fraction", "_fraction_known")

    def __init__(self, num: LogValue, den: LogValue):
        if den.sign() <= 0:
            raise ZeroDivisionError("LogRatio denominator must be positive")
        self.num = num
        self.den = den
        self._fraction = None
        self._fraction_known = False

    def exact_fraction(self) -> Optional[Fraction]:
        if not self._fraction_known:
            self._fraction = self.num.proportion_to(self.den)
            self._fraction_known = True
        return self._fraction

    def __float__(self) -> float:
        f = self.exact_fraction()
        if f is not None:
            return float(f)
        return float(self.num) / float(self.den)

    def as_exact_str(self) -> Optional[str]:
        f = self.exact_fraction()
        if f is None:
            return None
        return f"{f.numerator}/{f.denominator}"

    def cmp_fraction(self, frac: Fraction) -> int:
        """Exact sign of (self - frac)."""
        lhs = self.num.scaled(frac.denominator) - self.den.scaled(frac.numerator)
        return lhs.sign()

    def cmp(self, other: "LogRatio") -> int:
        f1, f2 = self.exact_fraction(), other.exact_fraction()
        if f1 is not None and f2 is not None:
            return (f1 > f2) - (f1 < f2)
        if f1 is not None:
            return -other.cmp_fraction(f1)
        if f2 is not None:
            return self.cmp_fraction(f2)
        # Both irrational.  Equal ratios from integer ledgers arise only via
        # proportional (num, den) pairs, which is decidable exactly.
        s = other.num.proportion_to(self.num)
        if s is not None and other.den.proportion_to(self.den) == s:
            return 0
        return _cmp_cross(self.num, self.den, other.num, other.den)

    def __repr__(self):
        f = self.exact_fraction()
        if f is not None:
            return f"LogRatio({f})"
        return f"LogRatio(~{float(self):.12g})"


def _cmp_cross(n1: LogValue, d1: LogValue, n2: LogValue, d2: LogValue) -> int:
    """Sign of n1*d2 - n2*d1 for positive denominators, via escalating precision."""
    prec = _BASE_PREC
    while prec <= _MAX_PREC:
        with mpmath.workprec(prec):
            a, ea = n1._mpf_with_error(prec)
            b, eb = d1._mpf_with_error(prec)
            c, ec = n2._mpf_with_error(prec)
            d, ed = d2._mpf_with_error(prec)
            diff = a * d - c * b
            err = abs(a) * ed + abs(d) * ea + abs(c) * eb + abs(b) * ec + ea * ed + eb * ec
            if abs(diff) > err:
                return 1 if diff > 0 else -1
        prec *= 2
    return 0  # unresolvable at 64k bits: treat as a tie


# ---------------------------------------------------------------------------
# Closed-form log-sums over a (q, b) pair
# ---------------------------------------------------------------------------


def _cycle_ledgers(pattern) -> list:
    """Cumulative ledgers of a pattern: C[t] = log(pattern[0]*...*pattern[t-1])."""
    cum = [LogValue.zero()]
    for v in pattern:
        cum.append(cum[-1] + LogValue.of_int(v))
    return cum


class _SegmentSums:
    """Closed-form partial sums of log-terms over one uniform segment."""

    def __init__(self, seg):
        self.seg = seg
        if seg.pattern is not None:
            self.cum = _cycle_ledgers(seg.pattern)
            self.period_total = self.cum[-1]
            self.base_log = None
        else:
            self.cum = None
            self.period_total = None
            self.base_log = LogValue.of_int(seg.geom_base)

    def range_sum(self, x: int, y: int) -> LogValue:
        """Sum of log-terms over [x, y] within the segment (inclusive)."""
        seg = self.seg
        if y < x:
            return LogValue.zero()
        if seg.pattern is not None:
            P = len(seg.pattern)
            o = (x - seg.start) % P
            n = y - x + 1
            full, rem = divmod(n, P)
            total = self.period_total.scaled(full) if full else LogValue.zero()
            if rem:
                hi = o + rem
                if hi <= P:
                    total = total + (self.cum[hi] - self.cum[o])
                else:
                    total = total + (self.cum[P] - self.cum[o]) + self.cum[hi - P]
            return total
        # geometric: exponents form an arithmetic progression
        e_lo = seg.geom_exp0 + (x - seg.start)
        e_hi = seg.geom_exp0 + (y - seg.start)
        count = e_hi - e_lo + 1
        exp_total = (e_lo + e_hi) * count // 2
        return self.base_log.scaled(exp_total)

    def term_log(self, i: int) -> LogValue:
        seg = self.seg
        if seg.pattern is not None:
            return LogValue.of_int(seg.value_at(i))
        return self.base_log.scaled(seg.geom_exp0 + (i - seg.start))


class PairSums:
    """Exact log-sums for both sequences of a Moran spec over [1, depth]."""

    def __init__(self, spec, depth: int):
        self.spec = spec
        self.depth = depth
        self.ranges = spec.joint_segments(depth)
        self._qs = []
        self._bs = []
        self._q_prefix = [LogValue.zero()]  # prefix up to each range end
        self._b_prefix = [LogValue.zero()]
        for lo, hi, qseg, bseg in self.ranges:
            qsum = _SegmentSums(qseg)
            bsum = _SegmentSums(bseg)
            self._qs.append(qsum)
            self._bs.append(bsum)
            self._q_prefix.append(self._q_prefix[-1] + qsum.range_sum(lo, hi))
            self._b_prefix.append(self._b_prefix[-1] + bsum.range_sum(lo, hi))
        self._bounds = [r[0] for r in self.ranges]

    def _locate(self, i: int) -> int:
        import bisect

        return bisect.bisect_right(self._bounds, i) - 1

    def q_prefix(self, i: int) -> LogValue:
        """log(q_1 * ... * q_i); i = 0 gives zero."""
        return self._prefix(i, self._q_prefix, self._qs)

    def b_prefix(self, i: int) -> LogValue:
        return self._prefix(i, self._b_prefix, self._bs)

    def _prefix(self, i, prefixes, sums) -> LogValue:
        if i <= 0:
            return LogValue.zero()
        if i > self.depth:
            raise IndexError(f"prefix {i} beyond engine depth {self.depth}")
        r = self._locate(i)
        lo, hi, _, _ = self.ranges[r]
        if i == hi:
            return prefixes[r + 1]
        return prefixes[r] + sums[r].range_sum(lo, i)

    def q_sum(self, i: int, j: int) -> LogValue:
        """log(q_i * ... * q_j), empty when j < i."""
        if j < i:
            return LogValue.zero()
        return self.q_prefix(j) - self.q_prefix(i - 1)

    def b_sum(self, i: int, j: int) -> LogValue:
        if j < i:
            return LogValue.zero()
        return self.b_prefix(j) - self.b_prefix(i - 1)

    def q_at(self, i: int) -> LogValue:
        r = self._locate(i)
        return self._qs[r].term_log(i)

    def b_at(self, i: int) -> LogValue:
        r = self._locate(i)
        return self._bs[r].term_log(i)


def log_product(seq_spec, lo: int, hi: int) -> LogValue:
    """Exact log of term(lo) * ... * term(hi), computed per run rather than per index."""
    if hi < lo:
        raise ValueError("log_product needs a nonempty index interval")
    seq_spec.check_index(hi)
    total = LogValue.zero()
    for seg in seq_spec.segments(hi):
        x, y = max(seg.start, lo), min(seg.end, hi)
        if x <= y:
            total = total + _SegmentSums(seg).range_sum(x, y)
    return total
