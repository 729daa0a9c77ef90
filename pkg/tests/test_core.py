"""Transformations, composition, membership flags, kernels, transversals."""

import itertools
import random

import pytest

from invsemi import (
    Context,
    DomainError,
    Transformation,
    classify,
    compose,
    identity,
    image_deficit,
    kernel_partition,
    parse_transformation,
    parse_y,
    partitions_equal,
    refines,
    restrict_to_y,
    transformation_from_json,
    transformation_to_json,
    transversals,
)

T = parse_transformation
C31 = Context(3, (0, 1))


def test_transformation_validation():
    Transformation((0, 1, 2))
    with pytest.raises(DomainError):
        Transformation((0, 3))
    with pytest.raises(DomainError):
        Transformation((0, -1))
    with pytest.raises(DomainError):
        Transformation(())


def test_context_validation():
    assert Context(3, (1, 0)).y_set == (0, 1)  # normalized sorted
    assert Context(4, (2,)).x_minus_y == (0, 1, 3)
    with pytest.raises(DomainError):
        Context(3, ())
    with pytest.raises(DomainError):
        Context(3, (3,))
    with pytest.raises(DomainError):
        Context(0, (0,))


def test_compose_left_to_right():
    # x(fg) = (xf)g
    assert compose(T("[1 0 2]"), T("[0 1 0]")).images == (1, 0, 0)
    f = T("[0 1 0]")
    assert compose(identity(3), f).images == f.images
    assert compose(f, identity(3)).images == f.images
    assert compose(f, f).images == f.images  # idempotent


def test_compose_dimension_mismatch():
    from invsemi import DimensionError

    with pytest.raises(DimensionError):
        compose(T("[0 1]"), T("[0 1 2]"))


def test_classify_flags():
    fl = classify(C31, T("[0 1 0]"))
    assert (fl.in_tbar, fl.in_omegabar, fl.in_sbar, fl.in_fix) == (True, True, True, True)
    assert not fl.is_unit_of_omegabar

    fl = classify(C31, T("[1 0 2]"))
    assert not fl.in_fix
    assert fl.in_sbar
    assert fl.is_unit_of_omegabar

    fl = classify(C31, T("[0 0 2]"))
    assert fl.in_tbar
    assert not fl.in_omegabar


def test_classify_chain_exhaustive():
    # fix => sbar => omegabar => tbar on every map, n <= 3, every Y
    for n in (1, 2, 3):
        for r in range(1, n + 1):
            for ys in itertools.combinations(range(n), r):
                ctx = Context(n, ys)
                for imgs in itertools.product(range(n), repeat=n):
                    fl = classify(ctx, Transformation(imgs))
                    assert not fl.in_fix or fl.in_sbar
                    assert not fl.in_sbar or fl.in_omegabar
                    assert not fl.in_omegabar or fl.in_tbar


def test_restrict_to_y():
    assert restrict_to_y(C31, T("[1 0 0]")).images == (1, 0)
    assert restrict_to_y(C31, T("[0 1 2]")).images == (0, 1)
    # re-indexing by sorted position of Y
    assert restrict_to_y(Context(4, (1, 3)), T("[0 3 2 1]")).images == (1, 0)
    with pytest.raises(DomainError):
        restrict_to_y(C31, T("[2 1 0]"))  # 0 leaves Y


def test_kernel_partition():
    kp = kernel_partition(T("[0 1 0]"))
    assert kp.block_sets() == frozenset({frozenset({0, 2}), frozenset({1})})
    kp = kernel_partition(identity(3))
    assert kp.block_sets() == frozenset({frozenset({0}), frozenset({1}), frozenset({2})})
    # sub-collection of fibers over the points of Xf inside the query set
    kp = kernel_partition(T("[1 0 1]"))
    assert set(kp.fibers_over({0, 1})) == {frozenset({1}), frozenset({0, 2})}


def test_transversals_frozen():
    assert [sorted(t) for t in transversals(T("[0 1 0]"))] == [[0, 1], [1, 2]]
    assert [sorted(t) for t in transversals(T("[0 1 0]"), {0, 1})] == [[0, 1]]
    # one block cannot hold two required points
    assert list(transversals(T("[0 0 0]"), {0, 1})) == []


def test_transversal_cardinality():
    # every transversal meets each fiber once, so |T| = |Xf|
    for imgs in itertools.product(range(3), repeat=3):
        f = Transformation(imgs)
        for t in transversals(f):
            assert len(t) == len(f.image())


def test_injective_iff_surjective_finite():
    for n in (1, 2, 3):
        for imgs in itertools.product(range(n), repeat=n):
            f = Transformation(imgs)
            injective = len(set(imgs)) == n
            surjective = f.image() == frozenset(range(n))
            assert injective == surjective


def test_refines():
    assert refines([{0}, {2}], [{0, 2}, {1}])
    assert not refines([{0, 1}], [{0}, {1}])
    for imgs in itertools.product(range(3), repeat=3):
        blocks = kernel_partition(Transformation(imgs)).block_sets()
        assert refines(blocks, blocks)
        assert partitions_equal(blocks, blocks)


def test_parse_format_roundtrip():
    for text in ("[0]", "[1 0 0]", "[0 1 2 3]"):
        assert str(T(text)) == text
    with pytest.raises(ValueError):
        T("1 0 0")
    with pytest.raises(ValueError):
        T("[a b]")
    with pytest.raises(DomainError):
        T("[0 9]")


def test_json_mirror():
    f = T("[1 0 0]")
    obj = transformation_to_json(f)
    assert obj == {"n": 3, "images": [1, 0, 0]}
    assert transformation_from_json(obj).images == f.images
    assert transformation_from_json('{"n": 3, "images": [1, 0, 0]}').images == f.images


def test_parse_y():
    assert parse_y("0,1") == (0, 1)
    assert parse_y("2") == (2,)
    with pytest.raises(ValueError):
        parse_y("0,x")


def test_image_deficit():
    assert image_deficit(C31, T("[0 1 0]")) == 0
    assert image_deficit(C31, T("[0 1 2]")) == 1


def test_associativity_exhaustive_small():
    ctx = Context(3, (0,))
    from invsemi import enumerate_family

    elems = enumerate_family(ctx, "omegabar").elements
    for f, g, h in itertools.product(elems, repeat=3):
        assert compose(compose(f, g), h).images == compose(f, compose(g, h)).images


def test_associativity_random_n6():
    # composition is associative on 10^4 random triples of self-maps of 6 points
    rng = random.Random(20260815)
    for _ in range(10_000):
        f, g, h = (
            Transformation(tuple(rng.randrange(6) for _ in range(6))) for _ in range(3)
        )
        assert compose(compose(f, g), h).images == compose(f, compose(g, h)).images
