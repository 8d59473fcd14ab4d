"""Exact log-ledger arithmetic and closed-form product sums."""

import math
import random
from fractions import Fraction

import pytest

from morandim.logarithmic import LogRatio, LogValue, PairSums, factorize, log_product
from morandim.sequences import Blocks, Constant, Geometric, MoranSpec, Run, compress


def test_factorize():
    assert factorize(1) == ()
    assert factorize(12) == ((2, 2), (3, 1))
    assert factorize(37) == ((37, 1),)


def test_logvalue_cancellation_is_structural():
    v = LogValue.of_int(4) - LogValue.of_int(2, 2)  # log4 - 2log2
    assert v.is_zero() and v.sign() == 0


def test_logvalue_sign_mixed():
    v = LogValue.of_int(3) - LogValue.of_int(2)  # log3 - log2 > 0
    assert v.sign() == 1
    w = LogValue.of_int(8) - LogValue.of_int(9)
    assert w.sign() == -1


def test_logvalue_huge_multiplicities():
    big = 10**21
    v = LogValue.of_int(32, big)
    assert v.ledger == {2: 5 * big}
    assert v.log2() == pytest.approx(5e21, rel=1e-12)


def test_logratio_exact_fraction():
    r = LogRatio(LogValue.of_int(16), LogValue.of_int(64))
    assert r.exact_fraction() == Fraction(2, 3)
    r2 = LogRatio(LogValue.of_int(6, 2), LogValue.of_int(6, 5))
    assert r2.exact_fraction() == Fraction(2, 5)
    r3 = LogRatio(LogValue.of_int(2), LogValue.of_int(3))
    assert r3.exact_fraction() is None


def test_logratio_cmp_rational_vs_irrational():
    half = LogRatio(LogValue.of_int(2), LogValue.of_int(4))
    l23 = LogRatio(LogValue.of_int(2), LogValue.of_int(3))  # 0.6309...
    assert half.cmp(l23) == -1
    assert l23.cmp(half) == 1
    assert half.cmp(LogRatio(LogValue.of_int(3), LogValue.of_int(9))) == 0


def test_logratio_cmp_proportional_irrational_pairs():
    r1 = LogRatio(LogValue.of_int(2), LogValue.of_int(3))
    r2 = LogRatio(LogValue.of_int(2, 2), LogValue.of_int(3, 2))
    assert r1.cmp(r2) == 0


def test_logratio_cmp_two_irrationals():
    r1 = LogRatio(LogValue.of_int(2), LogValue.of_int(3))   # ~0.6309
    r2 = LogRatio(LogValue.of_int(3), LogValue.of_int(5))   # ~0.6826
    assert r1.cmp(r2) == -1


def test_log_product_geometric_closed_form():
    # product of 4^1..4^n is 2^(n(n+1))
    for n in (1, 5, 40):
        lv = log_product(Geometric(4), 1, n)
        assert lv.ledger == {2: n * (n + 1)}


def test_log_product_constant_run():
    lv = log_product(Constant(2), 5, 9)
    assert lv.ledger == {2: 5}


def test_log_product_blocks_example():
    spec = Blocks((Run(2, 3), Run(8, 2)))
    lv = log_product(spec, 1, 5)
    assert lv.ledger == {2: 9}  # 3*log2 + 2*log8 = 9*log2


def test_log_product_merge_split():
    spec = Blocks((Run(2, 4), Run(12, 3), Run(5, 6)), tail=(7, 11))
    whole = log_product(spec, 1, 20)
    for cut in range(1, 20):
        merged = log_product(spec, 1, cut) + log_product(spec, cut + 1, 20)
        assert merged == whole


def test_log_product_matches_brute_force():
    rng = random.Random(11)
    values = [rng.randint(2, 16) for _ in range(200)]
    spec = compress(values)
    for _ in range(50):
        i = rng.randint(1, 200)
        j = rng.randint(i, 200)
        lv = log_product(spec, i, j)
        brute = sum(math.log(v) for v in values[i - 1 : j])
        assert float(lv) == pytest.approx(brute, rel=1e-12, abs=1e-12)


def test_pair_sums_prefixes():
    spec = MoranSpec(b=Constant(16), q=Blocks((), tail=(2, 8)))
    ps = PairSums(spec, 100)
    assert ps.q_sum(1, 4).ledger == {2: 8}  # 2*8*2*8
    assert ps.b_sum(3, 5).ledger == {2: 12}
    assert ps.q_at(2).ledger == {2: 3}
    assert ps.q_sum(5, 4).is_zero()


def test_pair_sums_geometric_b():
    spec = MoranSpec(b=Geometric(4), q=Constant(2))
    ps = PairSums(spec, 50)
    # b_2*...*b_5 = 4^(2+3+4+5)
    assert ps.b_sum(2, 5).ledger == {2: 2 * 14}
    assert ps.q_prefix(20).ledger == {2: 20}
