"""Sequence model: term evaluation, horizons, compression round-trips, JSON."""

import json
import random

import pytest

from morandim.sequences import (
    Blocks,
    Constant,
    Cycle,
    Explicit,
    GeomRun,
    Geometric,
    HorizonError,
    MoranSpec,
    Run,
    SpecValidationError,
    compress,
    equivalent,
    minimal_period,
    moran_from_json,
    sequence_from_json,
)


def test_geometric_term():
    assert Geometric(4).term(3) == 64


def test_constant_huge_index():
    assert Constant(2).term(10**9) == 2


def test_explicit_out_of_horizon():
    spec = Explicit((3, 5))
    assert spec.term(2) == 5
    with pytest.raises(HorizonError):
        spec.term(3)


def test_blocks_term_and_tail():
    spec = Blocks((Run(2, 3), Run(8, 2)), tail=(5, 7))
    assert spec.prefix(8) == [2, 2, 2, 8, 8, 5, 7, 5]
    assert spec.horizon() is None


def test_geom_run_values():
    spec = Blocks((GeomRun(3, 4),))
    assert spec.prefix(4) == [3, 9, 27, 81]
    assert spec.horizon() == 4


def test_cycle_section():
    spec = Blocks((Cycle((16, 16, 2), 7),))
    assert spec.prefix(7) == [16, 16, 2, 16, 16, 2, 16]


def test_compress_round_trip():
    rng = random.Random(7)
    values = [rng.choice([2, 2, 3, 5]) for _ in range(60)]
    spec = compress(values)
    assert equivalent(spec, Explicit(tuple(values)), 60)
    # recompressing the expansion reproduces an equivalent spec
    again = compress(spec.prefix(60))
    assert equivalent(spec, again, 60)


def test_minimal_period():
    assert minimal_period((2, 8, 2, 8)) == (2, 8)
    assert minimal_period((2, 8, 8)) == (2, 8, 8)


def test_segments_cover_blocks():
    spec = Blocks((Run(4, 5), Cycle((2, 3), 6)), tail=(9,))
    segs = spec.segments(20)
    covered = []
    for s in segs:
        covered.extend(range(s.start, s.end + 1))
        for i in range(s.start, s.end + 1):
            assert s.value_at(i) == spec.term(i)
    assert covered == list(range(1, 21))


def test_moran_validation_accepts_baseline():
    spec = MoranSpec(b=Constant(4), q=Constant(2), label="cantor-2-4")
    assert spec.q_bounded and spec.b_bounded


def test_moran_validation_rejects_q_ge_b():
    with pytest.raises(SpecValidationError):
        MoranSpec(b=Constant(4), q=Constant(4))


def test_moran_validation_rejects_geometric_q_bounded_b():
    with pytest.raises(SpecValidationError):
        MoranSpec(b=Constant(100), q=Geometric(2))


def test_moran_validation_geometric_pair():
    MoranSpec(b=Geometric(4), q=Geometric(2))  # 2^n < 4^n for all n
    with pytest.raises(SpecValidationError):
        MoranSpec(b=Geometric(2), q=Geometric(2))


def test_moran_cyclic_vs_constant_validation():
    MoranSpec(b=Constant(16), q=Blocks((), tail=(2, 8)))
    with pytest.raises(SpecValidationError):
        MoranSpec(b=Constant(8), q=Blocks((), tail=(2, 8)))


def test_geometric_b_bounded_q_validation():
    MoranSpec(b=Geometric(4), q=Constant(2), label="growing-scale")
    # first index has b=3 > q=2, and b only grows
    MoranSpec(b=Geometric(3), q=Constant(2))


def test_unboundedness_flags():
    assert not Geometric(4).is_bounded()
    assert Blocks((), tail=(2, 8)).is_bounded()
    assert Explicit((2, 3)).is_bounded()


def test_json_round_trip():
    spec = MoranSpec(
        b=Blocks((Run(16, 3), GeomRun(9, 2)), tail=(32,)),
        q=Blocks((Cycle((2, 8), 5),), tail=(2,)),
        label="mixed",
    )
    blob = spec.canonical_json()
    back = moran_from_json(json.loads(blob))
    assert back.canonical_json() == blob
    assert equivalent(back.q, spec.q, 30)
    assert equivalent(back.b, spec.b, 5)


def test_json_accepts_bare_integers():
    seq = sequence_from_json({"kind": "geometric", "base": 4})
    assert seq.term(2) == 16
    seq2 = sequence_from_json({"kind": "constant", "value": "7"})
    assert seq2.term(1) == 7


def test_spec_hash_stable():
    a = MoranSpec(b=Constant(4), q=Constant(2))
    b = MoranSpec(b=Constant(4), q=Constant(2))
    assert a.spec_hash() == b.spec_hash()
