"""Extended naturals with one infinity, fiber profiles, and the symbolic
packing conditions that decide D and J at the profile level."""

import itertools

import pytest

from invsemi import (
    OMEGA,
    BudgetError,
    Context,
    DimensionError,
    ExtNat,
    FiberProfile,
    Transformation,
    as_extnat,
    cover_is_valid,
    d_condition,
    format_profile,
    j_condition,
    matching_is_valid,
    n_value,
    parse_profile,
    profile_of,
)

P = parse_profile


def test_extnat_arithmetic():
    assert ExtNat(2) + ExtNat(3) == ExtNat(5)
    assert OMEGA + ExtNat(5) == OMEGA
    assert ExtNat(5) + OMEGA == OMEGA
    assert OMEGA + OMEGA == OMEGA
    assert 1 + ExtNat(1) == ExtNat(2)


def test_extnat_order():
    assert ExtNat(3) < OMEGA
    assert not OMEGA < OMEGA
    assert OMEGA <= OMEGA
    assert OMEGA > ExtNat(10**9)
    assert sorted([OMEGA, ExtNat(2), ExtNat(0)]) == [ExtNat(0), ExtNat(2), OMEGA]


def test_as_extnat():
    assert as_extnat(3) == ExtNat(3)
    assert as_extnat(OMEGA) is OMEGA
    with pytest.raises(ValueError):
        as_extnat(-1)


def test_profile_validation():
    P("[1 1]")
    with pytest.raises(ValueError):
        FiberProfile(sizes=(ExtNat(0),), rest_ones=False)  # fibers are nonempty


def test_profile_parse_format_roundtrip():
    for text in ("[1]", "[w 1 1]", "[w w]+rest1", "[2 1]"):
        assert format_profile(P(text)) == text
    with pytest.raises(ValueError):
        P("[x]")
    with pytest.raises(ValueError):
        P("")


def test_d_condition_absent_on_separating_pair():
    # one big fiber against two big fibers: no size-preserving bijection
    assert d_condition(P("[w 1 1]"), P("[w w 1]")) is None
    assert d_condition(P("[w w 1]"), P("[w 1 1]")) is None


def test_d_condition_identity_and_transposition():
    assert d_condition(P("[1 1]"), P("[1 1]")) == {0: 0, 1: 1}
    m = d_condition(P("[2 1 1]"), P("[1 2 1]"))
    assert m == {0: 1, 1: 0, 2: 2}
    assert matching_is_valid(P("[2 1 1]"), P("[1 2 1]"), m)


def test_d_condition_cardinality_mismatch():
    with pytest.raises(DimensionError):
        d_condition(P("[1 1]"), P("[1 1 1]"))
    with pytest.raises(DimensionError):
        d_condition(P("[1 1]"), P("[1 1]+rest1"))


def test_d_condition_rest_tail():
    # the infinite tails of size-1 fibers absorb each other one-to-one
    m = d_condition(P("[w 1]+rest1"), P("[1 w]+rest1"))
    assert m == {0: 1, 1: 0}
    assert d_condition(P("[w w]+rest1"), P("[w]+rest1")) is None


def test_j_condition_reflexive_singletons():
    cov = j_condition(P("[1 1]"), P("[1 1]"))
    assert cov is not None
    assert cov.blocks == (frozenset({0}), frozenset({1}))
    assert cover_is_valid(P("[1 1]"), P("[1 1]"), cov)


def test_j_condition_present_both_ways_on_separating_pair():
    p, q = P("[w 1 1]"), P("[w w 1]")
    for a, b in ((p, q), (q, p)):
        cov = j_condition(a, b)
        assert cov is not None
        assert cover_is_valid(a, b, cov)


def test_j_condition_absent():
    # some block would have to sum to 2 against capacity 1
    assert j_condition(P("[1 1 1]"), P("[2 1]")) is None
    # equal totals, still unpackable
    assert j_condition(P("[3 1]"), P("[2 2]")) is None


def test_j_condition_greedy_equal_totals():
    cov = j_condition(P("[2 2]"), P("[2 1 1]"))
    assert cov is not None
    assert cover_is_valid(P("[2 2]"), P("[2 1 1]"), cov)


def test_j_condition_rest_routing():
    p, q = P("[w]+rest1"), P("[w w]+rest1")
    cov = j_condition(p, q)
    assert cov is not None and cov.rest_to_rest
    assert cover_is_valid(p, q, cov)
    # no rest on p: q's tail must land inside an omega entry
    p2 = P("[w]")
    cov2 = j_condition(p2, P("[w]+rest1"))
    assert cov2 is not None and cov2.rest_to_block == 0
    assert cover_is_valid(p2, P("[w]+rest1"), cov2)
    # nothing can absorb an infinite tail of ones
    assert j_condition(P("[1 1]"), P("[1]+rest1")) is None


def test_j_condition_budget():
    with pytest.raises(BudgetError):
        j_condition(P("[1 1 1 1 1 1 1 1 1]"), P("[1 1 1 1 1 1 1 1 1]"))


def test_d_implies_j_at_profile_level():
    pool = [P("[1 1]"), P("[2 1]"), P("[1 2]"), P("[w 1]"), P("[w w]")]
    for p, q in itertools.product(pool, repeat=2):
        if len(p.sizes) != len(q.sizes):
            continue
        if d_condition(p, q) is not None:
            assert j_condition(p, q) is not None
            assert j_condition(q, p) is not None


def test_finite_equal_totals_j_iff_d():
    # with all entries finite and equal totals, mutual packing collapses to
    # a size-preserving bijection
    pool = [P("[2 1 1]"), P("[1 2 1]"), P("[1 1 2]"), P("[3 1]"), P("[2 2]")]
    for p, q in itertools.product(pool, repeat=2):
        if sum(s.value for s in p.sizes) != sum(s.value for s in q.sizes):
            continue
        both = j_condition(p, q) is not None and j_condition(q, p) is not None
        if len(p.sizes) != len(q.sizes):
            continue
        assert both == (d_condition(p, q) is not None)


def test_separating_pairs_j_yes_d_no():
    pairs = [
        (P("[w 1 1]"), P("[w w 1]")),
        (P("[w]+rest1"), P("[w w]+rest1")),
        (P("[w w]+rest1"), P("[w]+rest1")),
    ]
    for p, q in pairs:
        assert j_condition(p, q) is not None
        assert j_condition(q, p) is not None
        assert d_condition(p, q) is None


def test_n_value():
    assert n_value(P("[w 1 1]"), OMEGA) == ExtNat(2)
    assert n_value(P("[w w]"), OMEGA) == ExtNat(0)
    assert n_value(P("[1 1]"), ExtNat(2)) == ExtNat(2)
    # the tail contributes infinitely many small fibers
    assert n_value(P("[w]+rest1"), OMEGA) == OMEGA


def test_profile_of():
    c31 = Context(3, (0, 1))
    assert format_profile(profile_of(c31, Transformation((0, 1, 0)))) == "[1 1]"
    c4 = Context(4, (0, 1, 2))
    assert format_profile(profile_of(c4, Transformation((0, 1, 2, 3)))) == "[1 1 1]"
    c5 = Context(5, (0,))
    assert format_profile(profile_of(c5, Transformation((0, 0, 0, 0, 0)))) == "[1]"


def test_profile_of_rejects_nonmember():
    from invsemi import DomainError

    with pytest.raises(DomainError):
        profile_of(Context(3, (0, 1)), Transformation((0, 0, 2)))


def test_profile_of_all_ones_every_member():
    # finite degeneracy: members restrict to permutations of Y
    from invsemi import enumerate_family

    for n in (1, 2, 3, 4):
        for r in range(1, n + 1):
            ctx = Context(n, tuple(range(r)))
            for f in enumerate_family(ctx):
                prof = profile_of(ctx, f)
                assert all(s == ExtNat(1) for s in prof.sizes)
                assert not prof.rest_ones
