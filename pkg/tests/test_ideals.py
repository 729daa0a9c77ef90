"""Two-sided ideals: down-set closure, enumeration, threshold sets, kernel."""

import itertools

import pytest

from invsemi import (
    Context,
    DomainError,
    OMEGA,
    compose,
    identity,
    image_deficit,
    n_value,
    parse_profile,
    parse_transformation,
)
from invsemi.ideals import ideals_all, is_ideal, j_classes, j_of_f, j_st, kernel
from invsemi.extnat import j_condition
from invsemi.semigroup import eggbox, enumerate_family

T = parse_transformation
C31 = Context(3, (0, 1))
BOTTOM4 = ["[0 1 0]", "[0 1 1]", "[1 0 0]", "[1 0 1]"]


def test_j_of_f_frozen():
    got = [str(f) for f in j_of_f(C31, [T("[0 1 0]")])]
    assert got == BOTTOM4
    # generated by the identity, or by everything: the whole family
    assert len(j_of_f(C31, [identity(3)])) == 6
    assert len(j_of_f(C31, enumerate_family(C31).elements)) == 6


def test_j_of_f_contains_generators():
    elems = enumerate_family(C31).elements
    for f in elems:
        assert f.images in j_of_f(C31, [f]).as_set()


def test_j_of_f_rejects_bad_input():
    with pytest.raises(ValueError):
        j_of_f(C31, [])
    with pytest.raises(DomainError):
        j_of_f(C31, [T("[0 0 2]")])


def test_is_ideal_frozen():
    assert is_ideal(C31, [T(s) for s in BOTTOM4])
    assert not is_ideal(C31, [identity(3)])
    assert is_ideal(C31, enumerate_family(C31).elements)


def test_down_set_is_ideal_every_subset_n3():
    elems = enumerate_family(C31).elements
    m = len(elems)
    for mask in range(1, 1 << m):
        subset = [elems[i] for i in range(m) if mask >> i & 1]
        down = j_of_f(C31, subset)
        assert is_ideal(C31, down.members)
        if is_ideal(C31, subset):
            assert down.as_set() == {f.images for f in subset}


def test_j_of_f_equals_triple_product_closure():
    # independent oracle: the union of principal ideals, by raw products
    elems = enumerate_family(C31).elements
    for f in elems:
        down = j_of_f(C31, [f])
        raw = {
            compose(h, compose(f, h2)).images
            for h in elems
            for h2 in elems
        }
        assert down.as_set() == frozenset(raw)


def test_ideals_all_frozen_counts():
    assert [len(i) for i in ideals_all(C31)] == [4, 6]
    assert [len(i) for i in ideals_all(Context(4, (0, 1)))] == [8, 28, 32]
    assert [len(i) for i in ideals_all(Context(2, (0, 1)))] == [2]


def test_ideal_count_is_chain_length():
    for n in (1, 2, 3, 4):
        for r in range(1, n + 1):
            ctx = Context(n, tuple(range(r)))
            found = ideals_all(ctx)
            assert len(found) == n - r + 1
            sets = [i.as_set() for i in found]
            for a, b in zip(sets, sets[1:]):
                assert a < b
            # each one is exactly a deficit threshold set
            for t, ideal in enumerate(found):
                want = {
                    f.images
                    for f in enumerate_family(ctx)
                    if image_deficit(ctx, f) <= t
                }
                assert ideal.as_set() == want


def test_every_ideal_is_its_own_down_set():
    for ideal in ideals_all(C31):
        assert j_of_f(C31, ideal.members).as_set() == ideal.as_set()
        assert is_ideal(C31, ideal.members)


def test_j_st_frozen():
    got = [str(f) for f in j_st(C31, 2, 0)]
    assert got == BOTTOM4
    assert len(j_st(C31, 2, 1)) == 6
    empty = j_st(C31, 0, 0)
    assert len(empty) == 0
    assert empty.warning is not None
    # an empty set is not an ideal; the degenerate cut reports that
    assert "not an ideal" in empty.warning


def test_j_st_range_check():
    with pytest.raises(ValueError):
        j_st(C31, 2, 5)
    with pytest.raises(ValueError):
        j_st(C31, 2, -1)


def test_j_st_accepts_omega_threshold():
    assert len(j_st(C31, OMEGA, 1)) == 6


def test_kernel_frozen():
    assert [str(f) for f in kernel(C31)] == BOTTOM4
    # a group is its own kernel
    assert len(kernel(Context(2, (0, 1)))) == 2
    # |Y| = 1 leaves only the constant map
    assert [str(f) for f in kernel(Context(4, (0,)))] == ["[0 0 0 0]"]


def test_kernel_is_least_ideal_and_closed_form():
    for n in (1, 2, 3, 4):
        for r in range(1, n + 1):
            ctx = Context(n, tuple(range(r)))
            bottom = kernel(ctx)
            found = ideals_all(ctx)
            assert bottom.as_set() == found[0].as_set()
            for ideal in found:
                assert bottom.as_set() <= ideal.as_set()
            want = {
                f.images for f in enumerate_family(ctx) if f.image() == ctx.y_frozen
            }
            assert bottom.as_set() == want


def test_kernel_is_bottom_egg_box_class():
    for ys in ((0,), (0, 1)):
        ctx = Context(3, ys)
        box = eggbox(ctx)
        members = {
            e.images
            for row in box.d_classes[-1].cells
            for cell in row
            for e in cell.elements
        }
        assert members == set(kernel(ctx).as_set())


def test_kernel_is_single_j_class():
    classes = j_classes(C31)
    bottom = kernel(C31).as_set()
    assert any({f.images for f in cls} == set(bottom) for cls in classes)


def test_profile_level_kernel_shadow():
    # a profile with no small fiber packs every profile: each block takes
    # one index and an omega capacity absorbs any finite or omega load
    targets = [
        parse_profile("[1 1]"),
        parse_profile("[2 1]"),
        parse_profile("[w 1 1]"),
        parse_profile("[w w]"),
    ]
    for q in targets:
        p = parse_profile("[" + " ".join(["w"] * len(q.sizes)) + "]")
        assert n_value(p, OMEGA) == 0
        assert j_condition(p, q) is not None
