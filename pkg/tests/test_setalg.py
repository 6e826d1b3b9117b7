import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import naive_affine, naive_productset, naive_sumset
from ffdecomp.errors import DuplicateShift, MixedModulus
from ffdecomp.fpcore import make_field
from ffdecomp.setalg import (
    FpSet,
    affine,
    format_set,
    growth_product,
    intersect_shifts,
    iterated_sumset,
    parse_set,
    productset,
    sumset,
)

PRIMES = (5, 7, 11, 13, 17, 23)


def fpset(p, *elems):
    return FpSet.from_elements(p, elems)


def test_sumset_examples():
    assert sumset(fpset(7, 1, 2), fpset(7, 0, 3)) == fpset(7, 1, 2, 4, 5)
    assert sumset(FpSet.empty(7), fpset(7, 1, 2)) == FpSet.empty(7)
    assert sumset(fpset(13, 1, 5, 8, 12), fpset(13, 0)) == fpset(13, 1, 5, 8, 12)


def test_productset_examples():
    assert productset(fpset(7, 1, 6), fpset(7, 1, 2, 3)) == fpset(7, 1, 2, 3, 4, 5, 6)
    assert productset(fpset(7, 0), fpset(7, 1, 2)) == fpset(7, 0)
    full = fpset(7, 2, 3, 5)
    assert productset(fpset(7, 1), full) == full


def test_affine_examples():
    assert affine(fpset(7, 1, 2, 4), 3, 0) == fpset(7, 3, 6, 5)
    a = fpset(7, 2, 5, 6)
    assert affine(a, 1, 0) == a
    assert affine(fpset(7, 1, 2), 0, 5) == fpset(7, 5)


def test_iterated_sumset_examples():
    assert iterated_sumset(fpset(7, 0, 1), 3) == fpset(7, 0, 1, 2, 3)
    a = fpset(7, 2, 3)
    assert iterated_sumset(a, 1) == a
    assert iterated_sumset(fpset(7, 0), 5) == fpset(7, 0)
    with pytest.raises(ValueError):
        iterated_sumset(a, 0)


def test_iterated_sumset_matches_repeated_sumset():
    import random

    rng = random.Random(3)
    for _ in range(60):
        p = rng.choice(PRIMES)
        a = FpSet(p, rng.getrandbits(p) & ((1 << p) - 1) or 1)
        k = rng.randint(1, 9)
        expected = a
        for _ in range(k - 1):
            expected = sumset(expected, a)
        assert iterated_sumset(a, k) == expected


def test_intersect_shifts_examples():
    g = fpset(7, 1, 2, 4)
    assert intersect_shifts(g, [3]) == fpset(7, 0, 4, 5)
    assert intersect_shifts(g, [3, 5]) == fpset(7, 0)
    assert intersect_shifts(FpSet.empty(7), [1, 2]) == FpSet.empty(7)
    with pytest.raises(DuplicateShift):
        intersect_shifts(g, [1, 1])
    with pytest.raises(ValueError):
        intersect_shifts(g, [])


def test_growth_product_examples():
    grown = growth_product(fpset(13, 1, 5, 8, 12), 1)
    assert grown.elements() == [0, 2, 3, 4, 6, 7, 9, 10, 11]
    assert len(grown) == 9
    assert growth_product(fpset(7, 1), 1) == fpset(7, 2)
    # b = 0 degenerates to plain A*A
    a = fpset(7, 1, 2, 4)
    assert growth_product(a, 0) == productset(a, a)


def test_growth_product_conjugation_identity_explicit():
    # both sides computed here, independent of the internal assertion
    import random

    rng = random.Random(11)
    for _ in range(100):
        p = rng.choice(PRIMES)
        a = FpSet(p, rng.getrandbits(p) & ((1 << p) - 1))
        b = rng.randint(1, p - 1)
        direct = productset(a, affine(a, 1, b))
        binv = pow(b, -1, p)
        scaled = affine(a, binv, 0)
        conjugated = affine(productset(scaled, affine(scaled, 1, 1)), b * b % p, 0)
        assert direct == conjugated
        assert growth_product(a, b) == direct


def test_mixed_modulus_rejected():
    with pytest.raises(MixedModulus):
        sumset(fpset(7, 1), fpset(11, 1))
    with pytest.raises(MixedModulus):
        productset(fpset(7, 1), fpset(11, 1))


def test_set_basics():
    s = fpset(7, 5, 1)
    assert len(s) == 2
    assert list(s) == [1, 5]
    assert 5 in s and 2 not in s
    assert s.translate(2) == fpset(7, 3, 0)
    with pytest.raises(ValueError):
        FpSet(7, 1 << 7)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_sumset_productset_match_naive_oracle(data):
    p = data.draw(st.sampled_from(PRIMES))
    mask = (1 << p) - 1
    a = FpSet(p, data.draw(st.integers(0, mask)))
    b = FpSet(p, data.draw(st.integers(0, mask)))
    assert set(sumset(a, b)) == naive_sumset(a, b)
    assert set(productset(a, b)) == naive_productset(a, b)
    assert sumset(a, b) == sumset(b, a)
    assert productset(a, b) == productset(b, a)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_affine_matches_naive_oracle(data):
    p = data.draw(st.sampled_from(PRIMES))
    a = FpSet(p, data.draw(st.integers(0, (1 << p) - 1)))
    lam = data.draw(st.integers(0, p - 1))
    mu = data.draw(st.integers(0, p - 1))
    assert set(affine(a, lam, mu)) == naive_affine(a, lam, mu)
    if lam != 0:
        inv = pow(lam, -1, p)
        assert affine(affine(a, lam, mu), inv, (-inv * mu) % p) == a


def test_productset_dlog_path_matches_schoolbook():
    import random

    rng = random.Random(5)
    for _ in range(80):
        p = rng.choice(PRIMES)
        fld = make_field(p)
        a = FpSet(p, rng.getrandbits(p) & ((1 << p) - 1))
        b = FpSet(p, rng.getrandbits(p) & ((1 << p) - 1))
        assert productset(a, b, fld) == productset(a, b)


def test_cardinality_bounds():
    import random

    rng = random.Random(9)
    for _ in range(300):
        p = rng.choice(PRIMES)
        a = FpSet(p, rng.getrandbits(p) & ((1 << p) - 1))
        b = FpSet(p, rng.getrandbits(p) & ((1 << p) - 1))
        s = sumset(a, b)
        assert len(s) <= min(p, len(a) * len(b))
        if a.bits and b.bits:
            assert len(s) >= max(len(a), len(b))


def test_literal_roundtrip():
    assert parse_set("7:{1,2,4}") == fpset(7, 1, 2, 4)
    assert parse_set("11:{}") == FpSet.empty(11)
    s = fpset(13, 12, 0, 5)
    assert parse_set(format_set(s)) == s
    assert format_set(s) == "13:{0,5,12}"
    for bad in ("7", "x:{1}", "7:{a}", "7:[1]"):
        with pytest.raises(ValueError):
            parse_set(bad)
