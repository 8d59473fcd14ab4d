"""Compressed models for the integer sequences that parameterize a Moran measure.

A Moran measure on [0,1] is driven by two integer sequences: subdivision
counts ``b_n`` and kept-digit counts ``q_n`` with ``2 <= q_n < b_n``.  The
constructions studied here routinely need prefixes of astronomical length
(block schedules reach beyond 10^20 indices), so sequences are never stored
term by term.  Every spec kind below supports closed-form evaluation:

* ``Constant``   -- one value for every index.
* ``Explicit``   -- a finite list with a hard horizon.
* ``Geometric``  -- term(n) = base**n, total for all n >= 1.
* ``Blocks``     -- a list of sections (plain runs, truncated cycles,
                    geometric ramps) with an optional infinite cyclic tail.
* ``Synthesized``-- a Blocks spec tagged with the parameters of the word
                    construction that produced it.

All types are immutable; arithmetic on indices uses Python integers, so
index ranges of 10^22 are as cheap as 10^2.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional, Union


class HorizonError(IndexError):
    """An index beyond the evaluable horizon of a finite sequence."""


class SpecValidationError(ValueError):
    """A sequence pair violates the standing hypothesis 2 <= q_n < b_n."""


# ---------------------------------------------------------------------------
# Sections: the building blocks of a compressed sequence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Run:
    """``count`` copies of ``value``."""

    value: int
    count: int

    def __post_init__(self):
        if self.value < 2:
            raise SpecValidationError(f"run value {self.value} < 2")
        if self.count < 1:
            raise SpecValidationError(f"run count {self.count} < 1")

    @property
    def length(self) -> int:
        return self.count

    def value_at(self, offset: int) -> int:
        return self.value


@dataclass(frozen=True)
class Cycle:
    """``length`` symbols drawn cyclically from ``pattern`` starting at phase 0."""

    pattern: tuple
    length: int

    def __post_init__(self):
        if not self.pattern:
            raise SpecValidationError("empty cycle pattern")
        if any(v < 2 for v in self.pattern):
            raise SpecValidationError("cycle values must be >= 2")
        if self.length < 1:
            raise SpecValidationError("cycle length < 1")

    def value_at(self, offset: int) -> int:
        return self.pattern[offset % len(self.pattern)]


@dataclass(frozen=True)
class GeomRun:
    """Values base**start_exp, base**(start_exp+1), ... for ``count`` indices."""

    base: int
    count: int
    start_exp: int = 1

    def __post_init__(self):
        if self.base < 2:
            raise SpecValidationError(f"geometric base {self.base} < 2")
        if self.count < 1 or self.start_exp < 1:
            raise SpecValidationError("geometric run needs count >= 1, start_exp >= 1")

    @property
    def length(self) -> int:
        return self.count

    def value_at(self, offset: int) -> int:
        return self.base ** (self.start_exp + offset)


Section = Union[Run, Cycle, GeomRun]


# ---------------------------------------------------------------------------
# Segments: the uniform view used by the evaluation engines
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    """A contiguous index range on which the sequence has uniform structure.

    Either ``pattern`` is set (value_at(i) = pattern[(i - start) % P]) or
    ``geom_base`` is set (value_at(i) = geom_base ** (geom_exp0 + i - start)).
    ``start``/``end`` are 1-based and inclusive.
    """

    start: int
    end: int
    pattern: Optional[tuple] = None
    geom_base: Optional[int] = None
    geom_exp0: int = 1

    def __post_init__(self):
        if (self.pattern is None) == (self.geom_base is None):
            raise ValueError("segment needs exactly one of pattern / geom_base")
        if self.end < self.start:
            raise ValueError("empty segment")

    @property
    def period(self) -> int:
        return len(self.pattern) if self.pattern is not None else 1

    def value_at(self, index: int) -> int:
        off = index - self.start
        if self.pattern is not None:
            return self.pattern[off % len(self.pattern)]
        return self.geom_base ** (self.geom_exp0 + off)


# ---------------------------------------------------------------------------
# Sequence specs
# ---------------------------------------------------------------------------

class SequenceSpec:
    """Interface shared by all sequence kinds."""

    kind: str = "abstract"

    def term(self, n: int) -> int:
        """The n-th term, 1-based.  Pure; raises HorizonError past the horizon."""
        if n < 1:
            raise HorizonError(f"index {n} < 1")
        return self._term(n)

    def _term(self, n: int) -> int:
        raise NotImplementedError

    def horizon(self) -> Optional[int]:
        """Largest evaluable index, or None when the spec is total."""
        raise NotImplementedError

    def is_bounded(self) -> bool:
        """Whether the value set is bounded, decided from the kind alone."""
        raise NotImplementedError

    def value_bounds(self) -> tuple:
        """(min, max) over the horizon; max is None for unbounded kinds."""
        raise NotImplementedError

    def segments(self, limit: int) -> list:
        """Uniform segments covering [1, limit]."""
        raise NotImplementedError

    def check_index(self, n: int) -> None:
        h = self.horizon()
        if h is not None and n > h:
            raise HorizonError(f"index {n} beyond horizon {h}")

    def to_json_dict(self) -> dict:
        raise NotImplementedError

    # Convenience used by tests and the round-trip invariant.
    def prefix(self, length: int) -> list:
        return [self.term(i) for i in range(1, length + 1)]


@dataclass(frozen=True)
class Constant(SequenceSpec):
    value: int
    kind: str = field(default="constant", init=False, repr=False)

    def __post_init__(self):
        if self.value < 2:
            raise SpecValidationError(f"constant value {self.value} < 2")

    def _term(self, n: int) -> int:
        return self.value

    def horizon(self) -> Optional[int]:
        return None

    def is_bounded(self) -> bool:
        return True

    def value_bounds(self) -> tuple:
        return (self.value, self.value)

    def segments(self, limit: int) -> list:
        return [Segment(1, limit, pattern=(self.value,))]

    def to_json_dict(self) -> dict:
        return {"kind": "constant", "value": str(self.value)}


@dataclass(frozen=True)
class Explicit(SequenceSpec):
    values: tuple
    kind: str = field(default="explicit", init=False, repr=False)

    def __post_init__(self):
        if not self.values:
            raise SpecValidationError("explicit spec needs at least one value")
        if any(v < 2 for v in self.values):
            raise SpecValidationError("explicit values must be >= 2")

    def _term(self, n: int) -> int:
        if n > len(self.values):
            raise HorizonError(f"index {n} beyond horizon {len(self.values)}")
        return self.values[n - 1]

    def horizon(self) -> Optional[int]:
        return len(self.values)

    def is_bounded(self) -> bool:
        return True

    def value_bounds(self) -> tuple:
        return (min(self.values), max(self.values))

    def segments(self, limit: int) -> list:
        self.check_index(limit)
        segs = []
        i = 1
        while i <= limit:
            v = self.values[i - 1]
            j = i
            while j < limit and self.values[j] == v:
                j += 1
            segs.append(Segment(i, j, pattern=(v,)))
            i = j + 1
        return segs

    def to_json_dict(self) -> dict:
        return {"kind": "explicit", "values": [str(v) for v in self.values]}


@dataclass(frozen=True)
class Geometric(SequenceSpec):
    base: int
    kind: str = field(default="geometric", init=False, repr=False)

    def __post_init__(self):
        if self.base < 2:
            raise SpecValidationError(f"geometric base {self.base} < 2")

    def _term(self, n: int) -> int:
        return self.base ** n

    def horizon(self) -> Optional[int]:
        return None

    def is_bounded(self) -> bool:
        return False

    def value_bounds(self) -> tuple:
        return (self.base, None)

    def segments(self, limit: int) -> list:
        return [Segment(1, limit, geom_base=self.base, geom_exp0=1)]

    def to_json_dict(self) -> dict:
        return {"kind": "geometric", "base": str(self.base)}


@dataclass(frozen=True)
class Blocks(SequenceSpec):
    """A concatenation of sections, optionally followed by an infinite cyclic tail."""

    sections: tuple
    tail: Optional[tuple] = None
    kind: str = field(default="blocks", init=False, repr=False)

    def __post_init__(self):
        if not self.sections and self.tail is None:
            raise SpecValidationError("blocks spec needs sections or a tail")
        if self.tail is not None:
            if not self.tail:
                raise SpecValidationError("empty cyclic tail")
            if any(v < 2 for v in self.tail):
                raise SpecValidationError("tail values must be >= 2")

    def _section_starts(self) -> list:
        starts = []
        pos = 1
        for s in self.sections:
            starts.append(pos)
            pos += s.length
        return starts

    @property
    def _body_length(self) -> int:
        return sum(s.length for s in self.sections)

    def _term(self, n: int) -> int:
        pos = 1
        for s in self.sections:
            if n < pos + s.length:
                return s.value_at(n - pos)
            pos += s.length
        if self.tail is not None:
            return self.tail[(n - pos) % len(self.tail)]
        raise HorizonError(f"index {n} beyond horizon {pos - 1}")

    def horizon(self) -> Optional[int]:
        return None if self.tail is not None else self._body_length

    def is_bounded(self) -> bool:
        # Finite horizon is bounded by inspection; an infinite cyclic tail is
        # bounded by its pattern.
        return True

    def value_bounds(self) -> tuple:
        lo, hi = None, None
        for s in self.sections:
            if isinstance(s, Run):
                vals = (s.value, s.value)
            elif isinstance(s, Cycle):
                reach = s.pattern[: min(len(s.pattern), s.length)]
                vals = (min(reach), max(reach))
            else:
                vals = (s.value_at(0), s.value_at(s.count - 1))
            lo = vals[0] if lo is None else min(lo, vals[0])
            hi = vals[1] if hi is None else max(hi, vals[1])
        if self.tail is not None:
            tmin, tmax = min(self.tail), max(self.tail)
            lo = tmin if lo is None else min(lo, tmin)
            hi = tmax if hi is None else max(hi, tmax)
        return (lo, hi)

    def segments(self, limit: int) -> list:
        self.check_index(limit)
        segs = []
        pos = 1
        for s in self.sections:
            if pos > limit:
                break
            end = min(pos + s.length - 1, limit)
            if isinstance(s, Run):
                segs.append(Segment(pos, end, pattern=(s.value,)))
            elif isinstance(s, Cycle):
                segs.append(Segment(pos, end, pattern=tuple(s.pattern)))
            else:
                segs.append(Segment(pos, end, geom_base=s.base, geom_exp0=s.start_exp))
            pos += s.length
        if self.tail is not None and pos <= limit:
            segs.append(Segment(pos, limit, pattern=tuple(self.tail)))
        return segs

    def eventually_cyclic(self) -> bool:
        return self.tail is not None

    def to_json_dict(self) -> dict:
        out = {"kind": "blocks", "sections": [section_to_json(s) for s in self.sections]}
        if self.tail is not None:
            out["tail"] = [str(v) for v in self.tail]
        return out


@dataclass(frozen=True)
class Synthesized(SequenceSpec):
    """A Blocks spec carrying the word-construction parameters that produced it."""

    resolved: Blocks
    alpha0: int = 0
    alpha1: int = 0
    beta: int = 0
    gamma: Optional[Fraction] = None
    kind: str = field(default="synthesized", init=False, repr=False)

    def _term(self, n: int) -> int:
        return self.resolved.term(n)

    def horizon(self) -> Optional[int]:
        return self.resolved.horizon()

    def is_bounded(self) -> bool:
        return self.resolved.is_bounded()

    def value_bounds(self) -> tuple:
        return self.resolved.value_bounds()

    def segments(self, limit: int) -> list:
        return self.resolved.segments(limit)

    def eventually_cyclic(self) -> bool:
        return self.resolved.eventually_cyclic()

    def to_json_dict(self) -> dict:
        out = self.resolved.to_json_dict()
        out["kind"] = "synthesized"
        out["alpha0"] = str(self.alpha0)
        out["alpha1"] = str(self.alpha1)
        out["beta"] = str(self.beta)
        if self.gamma is not None:
            out["gamma"] = f"{self.gamma.numerator}/{self.gamma.denominator}"
        return out


# ---------------------------------------------------------------------------
# Run-length utilities
# ---------------------------------------------------------------------------

def compress(values) -> Blocks:
    """Run-length compress an explicit list of terms into a Blocks spec."""
    vals = list(values)
    if not vals:
        raise SpecValidationError("cannot compress an empty sequence")
    sections = []
    i = 0
    while i < len(vals):
        j = i
        while j + 1 < len(vals) and vals[j + 1] == vals[i]:
            j += 1
        sections.append(Run(vals[i], j - i + 1))
        i = j + 1
    return Blocks(tuple(sections))


def equivalent(a: SequenceSpec, b: SequenceSpec, upto: int) -> bool:
    """Term-by-term equality over [1, upto]."""
    return all(a.term(i) == b.term(i) for i in range(1, upto + 1))


def minimal_period(pattern) -> tuple:
    """Shortest pattern generating the same cyclic sequence."""
    pat = tuple(pattern)
    n = len(pat)
    for p in range(1, n + 1):
        if n % p == 0 and pat == pat[:p] * (n // p):
            return pat[:p]
    return pat


# ---------------------------------------------------------------------------
# Moran spec: the (b, q) pair
# ---------------------------------------------------------------------------

_VALIDATION_SCAN_CAP = 100_000


@dataclass(frozen=True)
class MoranSpec:
    """A pair of sequences with 2 <= q_n < b_n, defining a Moran measure."""

    b: SequenceSpec
    q: SequenceSpec
    label: str = ""

    def __post_init__(self):
        self.validate()

    @property
    def q_bounded(self) -> bool:
        return self.q.is_bounded()

    @property
    def b_bounded(self) -> bool:
        return self.b.is_bounded()

    def horizon(self) -> Optional[int]:
        hq, hb = self.q.horizon(), self.b.horizon()
        if hq is None:
            return hb
        if hb is None:
            return hq
        return min(hq, hb)

    def validate(self) -> None:
        """Check 2 <= q_n < b_n on the evaluable horizon.

        Periodic structure is exploited: only one full joint period per
        segment pair is scanned, plus the dominance crossover for geometric
        sections, so validation cost is independent of the horizon.
        """
        h = self.horizon()
        if h is None:
            self._validate_tails()
        limit = h if h is not None else _VALIDATION_SCAN_CAP
        qsegs = self.q.segments(limit)
        bsegs = self.b.segments(limit)
        for lo, hi, qseg, bseg in _joint_ranges(qsegs, bsegs):
            for n in _critical_indices(lo, hi, qseg, bseg):
                qv, bv = qseg.value_at(n), bseg.value_at(n)
                if not (2 <= qv < bv):
                    raise SpecValidationError(
                        f"need 2 <= q_n < b_n; got q_{n}={_fmt_val(qv)}, b_{n}={_fmt_val(bv)}"
                    )

    def _validate_tails(self) -> None:
        q_geom = isinstance(self.q, Geometric)
        b_geom = isinstance(self.b, Geometric)
        if q_geom and not b_geom:
            raise SpecValidationError("geometric q against bounded b violates q_n < b_n eventually")
        if q_geom and b_geom and self.q.base >= self.b.base:
            raise SpecValidationError("geometric q needs a strictly larger geometric b base")
        # bounded q against geometric b: b is monotone, so the scanned window
        # already contained the tightest index.

    def joint_segments(self, limit: int) -> list:
        """Aligned (lo, hi, qseg, bseg) ranges covering [1, limit]."""
        return _joint_ranges(self.q.segments(limit), self.b.segments(limit))

    def canonical_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))

    def spec_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]

    def to_json_dict(self) -> dict:
        return {
            "b": self.b.to_json_dict(),
            "q": self.q.to_json_dict(),
            "label": self.label,
        }


def _fmt_val(v: int) -> str:
    return str(v) if v.bit_length() <= 64 else f"~2^{v.bit_length() - 1}"


def _joint_ranges(qsegs: list, bsegs: list) -> list:
    """Intersect two segment covers into aligned ranges."""
    out = []
    qi = bi = 0
    while qi < len(qsegs) and bi < len(bsegs):
        qs, bs = qsegs[qi], bsegs[bi]
        lo = max(qs.start, bs.start)
        hi = min(qs.end, bs.end)
        if lo <= hi:
            out.append((lo, hi, qs, bs))
        if qs.end <= hi:
            qi += 1
        if bs.end <= hi:
            bi += 1
    return out


def _critical_indices(lo: int, hi: int, qseg: Segment, bseg: Segment) -> Iterator[int]:
    """Indices in [lo, hi] whose check implies the check of the whole range."""
    q_per = qseg.period if qseg.pattern is not None else None
    b_per = bseg.period if bseg.pattern is not None else None
    if q_per is not None and b_per is not None:
        period = q_per * b_per // gcd(q_per, b_per)
        yield from range(lo, min(hi, lo + period - 1) + 1)
        return
    if q_per is not None and bseg.geom_base is not None:
        # b is strictly increasing: once b > max(q pattern) the rest holds.
        qmax = max(qseg.pattern)
        n = lo
        while n <= hi:
            yield n
            if bseg.value_at(n) > qmax:
                # one more period of q to be safe about the q side (q >= 2 always holds)
                break
            n += 1
        return
    if qseg.geom_base is not None and b_per is not None:
        # q strictly increasing against bounded b: the last index is tightest.
        span = min(hi - lo + 1, b_per * 2)
        yield from range(hi - span + 1, hi + 1)
        yield lo
        return
    # both geometric: endpoints suffice (ratio is monotone)
    yield lo
    yield hi


# ---------------------------------------------------------------------------
# JSON (de)serialization
# ---------------------------------------------------------------------------

def section_to_json(s: Section) -> dict:
    if isinstance(s, Run):
        return {"type": "run", "value": str(s.value), "count": str(s.count)}
    if isinstance(s, Cycle):
        return {"type": "cycle", "pattern": [str(v) for v in s.pattern], "length": str(s.length)}
    return {
        "type": "geometric_run",
        "base": str(s.base),
        "count": str(s.count),
        "start_exp": str(s.start_exp),
    }


def _as_int(x) -> int:
    return int(x)


def section_from_json(d: dict) -> Section:
    t = d["type"]
    if t == "run":
        return Run(_as_int(d["value"]), _as_int(d["count"]))
    if t == "cycle":
        return Cycle(tuple(_as_int(v) for v in d["pattern"]), _as_int(d["length"]))
    if t == "geometric_run":
        return GeomRun(_as_int(d["base"]), _as_int(d["count"]), _as_int(d.get("start_exp", 1)))
    raise ValueError(f"unknown section type {t!r}")


def sequence_from_json(d: dict) -> SequenceSpec:
    kind = d["kind"]
    if kind == "constant":
        return Constant(_as_int(d["value"]))
    if kind == "explicit":
        return Explicit(tuple(_as_int(v) for v in d["values"]))
    if kind == "geometric":
        return Geometric(_as_int(d["base"]))
    if kind in ("blocks", "synthesized"):
        sections = tuple(section_from_json(s) for s in d.get("sections", []))
        tail = tuple(_as_int(v) for v in d["tail"]) if "tail" in d else None
        blocks = Blocks(sections, tail)
        if kind == "blocks":
            return blocks
        gamma = None
        if "gamma" in d:
            num, _, den = d["gamma"].partition("/")
            gamma = Fraction(int(num), int(den or "1"))
        return Synthesized(
            blocks,
            alpha0=_as_int(d.get("alpha0", 0)),
            alpha1=_as_int(d.get("alpha1", 0)),
            beta=_as_int(d.get("beta", 0)),
            gamma=gamma,
        )
    raise ValueError(f"unknown sequence kind {kind!r}")


def moran_from_json(d: dict) -> MoranSpec:
    return MoranSpec(
        b=sequence_from_json(d["b"]),
        q=sequence_from_json(d["q"]),
        label=d.get("label", ""),
    )


def moran_from_json_str(s: str) -> MoranSpec:
    return moran_from_json(json.loads(s))
