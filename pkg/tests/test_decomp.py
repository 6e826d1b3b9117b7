import random

import pytest

from conftest import (
    naive_sumset,
    oracle_decomposition_exists,
    oracle_max_packing,
    oracle_self_exists,
)
from ffdecomp.decomp import (
    DecompQuery,
    find_additive_decompositions,
    find_self_decomposition,
    max_companion,
    max_packing,
    run_query,
)
from ffdecomp.errors import EmptyB
from ffdecomp.fpcore import divisors, make_field, primes_up_to, subgroup
from ffdecomp.setalg import FpSet


def fpset(p, *elems):
    return FpSet.from_elements(p, elems)


def qr(p):
    return subgroup(make_field(p), 2).elements


def test_max_companion_examples():
    s = fpset(7, 1, 2, 4)
    assert max_companion(s, fpset(7, 0, 3)) == fpset(7, 1)
    assert max_companion(s, fpset(7, 0)) == s
    assert max_companion(s, fpset(7, 0, 1, 3)) == fpset(7, 1)
    with pytest.raises(EmptyB):
        max_companion(s, FpSet.empty(7))


def test_decomposition_examples():
    r = run_query(DecompQuery(S=qr(7), mode="decomposition", subgroup_d=2))
    assert r.status == "exhausted_none" and not r.witnesses

    r = run_query(DecompQuery(S=fpset(7, 1, 2, 4, 5), mode="decomposition"))
    assert r.status == "found"
    a, b = r.witnesses[0]
    assert a == fpset(7, 1, 4) and b == fpset(7, 0, 1)
    assert naive_sumset(a, b) == {1, 2, 4, 5}

    r = run_query(DecompQuery(S=fpset(11, 3), mode="decomposition"))
    assert r.status == "exhausted_none"


def test_decomposition_min_size_one_is_trivial():
    s = fpset(7, 1, 3)
    r = run_query(DecompQuery(S=s, mode="decomposition", min_size=1))
    assert r.status == "found"
    a, b = r.witnesses[0]
    assert a == s and b == fpset(7, 0)


def test_self_decomposition_examples():
    r = run_query(DecompQuery(S=qr(7), mode="self_decomposition", subgroup_d=2))
    assert r.status == "exhausted_none"

    r = run_query(DecompQuery(S=fpset(7, 0, 1, 2), mode="self_decomposition"))
    assert r.status == "found"
    assert r.witnesses[0][0] == fpset(7, 0, 1)

    r = run_query(DecompQuery(S=fpset(7, 1), mode="self_decomposition"))
    assert r.status == "found"
    assert r.witnesses[0][0] == fpset(7, 4)


def test_packing_examples():
    r = run_query(DecompQuery(S=qr(7), mode="packing", min_size=1, subgroup_d=2))
    assert r.status == "found" and r.extras["product"] == 3

    r = run_query(DecompQuery(S=FpSet.nonzero(7), mode="packing", min_size=1))
    assert r.extras["product"] == 12 == oracle_max_packing(FpSet.nonzero(7))
    a, b = r.witnesses[0]
    assert len(a) * len(b) == 12
    assert naive_sumset(a, b) <= set(range(1, 7))

    r = run_query(DecompQuery(S=fpset(11, 1), mode="packing", min_size=1))
    assert r.extras["product"] == 1
    assert r.witnesses[0][0] == fpset(11, 1) and r.witnesses[0][1] == fpset(11, 0)


def test_engine_matches_bruteforce_on_random_targets():
    rng = random.Random(99)
    for _ in range(40):
        p = rng.choice((5, 7, 11))
        bits = rng.getrandbits(p) & ((1 << p) - 1)
        s = FpSet(p, bits or 1)
        r = run_query(DecompQuery(S=s, mode="decomposition"))
        assert (r.status == "found") == oracle_decomposition_exists(s), s
        r = run_query(DecompQuery(S=s, mode="self_decomposition"))
        assert (r.status == "found") == oracle_self_exists(s), s
        r = run_query(DecompQuery(S=s, mode="packing", min_size=1))
        assert r.extras["product"] == oracle_max_packing(s), s


def test_engine_matches_bruteforce_on_subgroups():
    # exercises the multiplicative symmetry quotient against the
    # no-assumptions oracle on every subgroup target up to p = 13
    for p in primes_up_to(13):
        if p < 5:
            continue
        for d in divisors(p - 1):
            if d < 2:
                continue
            s = subgroup(make_field(p), d).elements
            r = run_query(DecompQuery(S=s, mode="decomposition", subgroup_d=d))
            assert (r.status == "found") == oracle_decomposition_exists(s), (p, d)
            r = run_query(DecompQuery(S=s, mode="self_decomposition", subgroup_d=d))
            assert (r.status == "found") == oracle_self_exists(s), (p, d)
            r = run_query(DecompQuery(S=s, mode="packing", min_size=1, subgroup_d=d))
            assert r.extras["product"] == oracle_max_packing(s), (p, d)


def test_found_witnesses_verify():
    rng = random.Random(5)
    hits = 0
    for _ in range(60):
        p = rng.choice((7, 11, 13))
        a = FpSet(p, rng.getrandbits(p) & ((1 << p) - 1) or 1)
        b_elems = rng.sample(range(p), rng.randint(2, 3))
        b = FpSet.from_elements(p, b_elems)
        s = FpSet.from_elements(p, naive_sumset(a, b))
        if len(a) < 2:
            continue
        r = run_query(DecompQuery(S=s, mode="decomposition"))
        assert r.status == "found", (s, a, b)
        wa, wb = r.witnesses[0]
        assert naive_sumset(wa, wb) == set(s)
        assert min(len(wa), len(wb)) >= 2
        hits += 1
    assert hits > 30


def test_budget_exceeded_status():
    s = qr(31)
    r = run_query(DecompQuery(S=s, mode="decomposition", node_budget=5))
    assert r.status == "budget_exceeded"
    assert r.nodes_explored <= 5
    r = run_query(DecompQuery(S=s, mode="packing", min_size=1, node_budget=5))
    assert r.status == "budget_exceeded"


def test_query_validation():
    s = qr(7)
    with pytest.raises(ValueError):
        DecompQuery(S=s, mode="bogus")
    with pytest.raises(ValueError):
        DecompQuery(S=s, mode="decomposition", min_size=0)
    with pytest.raises(ValueError):
        DecompQuery(S=s, mode="decomposition", node_budget=0)
    with pytest.raises(ValueError):
        run_query(DecompQuery(S=FpSet.empty(7), mode="decomposition"))
    with pytest.raises(ValueError):
        find_self_decomposition(DecompQuery(S=s, mode="decomposition"))
    with pytest.raises(ValueError):
        find_additive_decompositions(DecompQuery(S=s, mode="packing"))
    with pytest.raises(ValueError):
        max_packing(DecompQuery(S=s, mode="decomposition"))
    with pytest.raises(ValueError):
        # declared subgroup does not match the set
        run_query(DecompQuery(S=fpset(7, 1, 3), mode="decomposition", subgroup_d=2))


def test_worker_partitioning_is_deterministic():
    targets = [
        (qr(13), "decomposition", 2),
        (qr(13), "self_decomposition", 2),
        (subgroup(make_field(13), 3).elements, "decomposition", 3),
        (fpset(13, 1, 2, 4, 5, 8), "decomposition", None),
        (qr(17), "packing", 2),
    ]
    for s, mode, d in targets:
        seq = run_query(DecompQuery(S=s, mode=mode, min_size=1 if mode == "packing" else 2, subgroup_d=d))
        par = run_query(
            DecompQuery(S=s, mode=mode, min_size=1 if mode == "packing" else 2, subgroup_d=d),
            workers=3,
        )
        assert seq.status == par.status, (s, mode)
        assert seq.witnesses == par.witnesses, (s, mode)
        assert seq.extras.get("product") == par.extras.get("product")


def test_report_serialization():
    r = run_query(DecompQuery(S=fpset(7, 1, 2, 4, 5), mode="decomposition"))
    d = r.to_dict()
    assert d["type"] == "decomp" and d["status"] == "found"
    assert d["witnesses"] == [{"A": [1, 4], "B": [0, 1]}]
    assert isinstance(d["nodes_explored"], int) and d["elapsed"] >= 0
