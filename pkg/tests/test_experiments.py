import math
import random

import pytest

from conftest import multiplicative_order
from ffdecomp.errors import BadIndex, DuplicateShift, ZeroSetOnly
from ffdecomp.experiments import (
    bourgain_report,
    gd_low_value,
    growth_exponent_report,
    interval_mult_report,
    interval_set,
    lstar,
    n_count_report,
    packing_bound_harness,
    primitive_root_max_part,
    primitive_root_min_part,
    sarkozy_max_part,
    sarkozy_min_part,
    shkvyu_report,
    subgroup_ratio_report,
    w_identity_report,
    wsum_instances,
)
from ffdecomp.fpcore import make_field, subgroup
from ffdecomp.setalg import FpSet


def fpset(p, *elems):
    return FpSet.from_elements(p, elems)


def test_w_identity_closed_cases():
    rep = w_identity_report(7, 2, fpset(7, 3, 5))
    assert rep.extras["W"] == 2
    assert rep.extras["R"] == pytest.approx(0.5)
    assert rep.hypothesis_ok and rep.ok
    assert not rep.extras["W_vanishes"]

    rep = w_identity_report(7, 2, fpset(7, 0))
    assert rep.extras["W"] == 0 and rep.extras["W_vanishes"]
    assert rep.ok

    rep = w_identity_report(13, 3, fpset(13, 2))
    assert rep.ok and rep.hypothesis_ok


def test_w_identity_direct_count_oracle():
    # W = d * #{u in G_d : u - b not in G_d for all b}
    rng = random.Random(17)
    for _ in range(40):
        p = rng.choice((7, 13, 31))
        fld = make_field(p)
        from ffdecomp.fpcore import divisors

        d = rng.choice([d for d in divisors(p - 1) if d >= 2])
        b = fpset(p, *rng.sample(range(p), rng.randint(1, 4)))
        g = set(subgroup(fld, d).elements)
        expect = d * sum(
            1 for u in g if all((u - x) % p not in g for x in b)
        )
        rep = w_identity_report(p, d, b)
        assert rep.extras["W"] == expect
        # the direct and complex routes agree even without the split hypothesis
        assert rep.ok or not rep.hypothesis_ok
        if rep.hypothesis_ok:
            assert rep.extras["formula_gap"] == 0.0


def test_w_identity_formula_needs_collision_free_b():
    # 2 is a residue mod 7, so one translate hits zero and the split
    # carries a known gap; the report flags it instead of asserting
    rep = w_identity_report(7, 2, fpset(7, 2, 3))
    assert rep.hypothesis_ok is False


def test_wsum_instances_are_collision_free():
    for inst in wsum_instances(30, seed=5):
        g = subgroup(make_field(inst["p"]), inst["d"]).elements
        assert inst["B"].bits & g.bits == 0


def test_n_count_examples():
    rep = n_count_report(7, 2, fpset(7, 3))
    assert rep.extras["N"] == 1 and rep.ok
    rep = n_count_report(7, 2, fpset(7, 0))
    assert rep.extras["N"] == 3 and rep.ok
    rep = n_count_report(13, 3, fpset(13, 1, 2))
    assert rep.ok
    # direct count oracle
    rng = random.Random(23)
    for _ in range(30):
        p = rng.choice((7, 13, 31))
        from ffdecomp.fpcore import divisors

        d = rng.choice([d for d in divisors(p - 1) if d >= 2])
        b = fpset(p, *rng.sample(range(p), rng.randint(1, 4)))
        g = set(subgroup(make_field(p), d).elements)
        expect = sum(1 for u in g if all((u - x) % p in g for x in b))
        rep = n_count_report(p, d, b)
        assert rep.extras["N"] == expect and rep.ok


def test_lstar_and_gd_low():
    assert lstar(101, 3) == 2
    assert lstar(7, 3) == 0  # degenerate regime: sqrt(p) < d
    with pytest.raises(BadIndex):
        lstar(101, 2)
    assert gd_low_value(101, 2) == pytest.approx(
        2 * math.sqrt(101) * math.log(2) / (4 * math.log(101))
    )
    with pytest.raises(BadIndex):
        gd_low_value(101, 1)


def test_display_formulas_finite():
    for p in (5, 7, 101, 499):
        for v in (
            sarkozy_min_part(p),
            sarkozy_max_part(p),
            primitive_root_min_part(p),
            primitive_root_max_part(p),
        ):
            assert v > 0 and math.isfinite(v)


def test_shkvyu_example_and_oracle():
    # independent subgroup + intersection oracle
    p, d, m = 61, 15, 2
    g = sorted({pow(x, d, p) for x in range(1, p)})
    assert len(g) == 4
    inter = set(g)
    for b in (1, 2):
        inter &= {(x + b) % p for x in g}
    rep = shkvyu_report(p, d, [1, 2])
    assert rep.lhs == len(inter)
    order = len(g)
    assert rep.extras["hypothesis_value"] == pytest.approx(
        4 * (m - 1) * order * (order ** (1 / 3) + 1)
    )
    assert rep.rhs == pytest.approx(4 * m * (order ** (1 / 3) + 1) ** m)
    assert rep.hypothesis_ok and rep.ok

    rep = shkvyu_report(13, 3, [1, 2])  # p too small for the hypothesis
    assert rep.hypothesis_ok is False and rep.ok is None

    with pytest.raises(DuplicateShift):
        shkvyu_report(61, 15, [1, 1])
    with pytest.raises(ValueError):
        shkvyu_report(61, 15, [0, 1])
    with pytest.raises(ValueError):
        shkvyu_report(61, 15, [1])


def test_growth_examples():
    rep = growth_exponent_report(13, 3)
    assert rep.extras["grown_size"] == 9
    assert rep.extras["e"] == pytest.approx(math.log(9) / math.log(4))
    rep = growth_exponent_report(7, 3)
    assert rep.extras["grown_size"] == 3
    assert rep.extras["e"] == pytest.approx(math.log(3) / math.log(2))
    assert rep.extras["zero_in_shift"]  # -1 = 6 is a cube mod 7
    with pytest.raises(BadIndex):
        growth_exponent_report(7, 6)  # G has a single element


def test_packing_harness_examples():
    rep = packing_bound_harness(7, 2)
    assert rep.lhs == 3 and rep.rhs == 7 and rep.ok
    assert rep.extras["char_sum_equals_product"]
    assert set(rep.extras["karatsuba_ratios"]) == {"nu1", "nu2", "nu3"}
    rep = packing_bound_harness(13, 2)
    assert rep.lhs <= 13 and rep.ok
    with pytest.raises(BadIndex):
        packing_bound_harness(7, 1)


def test_subgroup_ratio_report():
    rep = subgroup_ratio_report(13, 3)
    ratios = rep.extras["ratios"]
    assert all(math.isfinite(v) and v >= 0 for v in ratios.values())
    assert rep.ok is None  # report-only


def test_interval_examples():
    rep = interval_mult_report(7, 0, 6, fpset(7, 1, 6), fpset(7, 1, 2, 3))
    assert rep.extras["J"] == 6 and rep.extras["is_decomposition"] and rep.ok
    rep = interval_mult_report(7, 0, 3, fpset(7, 1), fpset(7, 1))
    assert rep.extras["J"] == 1
    assert rep.extras["main_term"] == pytest.approx(3 / 7)
    rep = interval_mult_report(11, 0, 5, fpset(11, 1, 10), fpset(11, 1, 2))
    assert rep.ok  # direct and frequency-side counts agree
    with pytest.raises(ValueError):
        interval_mult_report(7, 0, 3, fpset(7, 0, 1), fpset(7, 1))


def test_interval_set():
    assert interval_set(7, 0, 6).elements() == [1, 2, 3, 4, 5, 6]
    assert interval_set(7, 4, 5).elements() == [0, 1, 5, 6, 2] or interval_set(
        7, 4, 5
    ).elements() == sorted({(4 + i) % 7 for i in range(1, 6)})
    with pytest.raises(ValueError):
        interval_set(7, 0, 8)


def test_bourgain_examples():
    rep = bourgain_report(7, fpset(7, 1), fpset(7, 1))
    assert rep.lhs == 1 and rep.rhs == 0.5 and rep.ok
    rep = bourgain_report(31, fpset(31, 1, 2), fpset(31, 1, 3))
    assert rep.extras["product_set_size"] == 4
    assert rep.lhs > 2 and rep.ok
    with pytest.raises(ZeroSetOnly):
        bourgain_report(7, fpset(7, 0), fpset(7, 1, 2))
    with pytest.raises(ValueError):
        bourgain_report(7, FpSet.empty(7), fpset(7, 1))
