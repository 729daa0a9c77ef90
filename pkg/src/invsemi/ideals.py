"""Two-sided ideals of the Y-onto-Y family.

The down-set of any nonempty subset under two-sided divisibility is an
ideal, every ideal arises that way, and all of them can be listed by brute
force over down-sets of J-classes.  The threshold sets j_st carve members by
two numbers: how many fibers over Y are smaller than Y itself, and how many
image points fall outside Y.  Over a finite Y the first threshold is
degenerate (every fiber of a bijection on Y is a singleton), which j_st
reports through a warning instead of pretending the cut is interesting.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Context, Transformation, classify, compose, image_deficit
from .errors import DomainError
from .extnat import ExtNat, as_extnat, n_value, profile_of
from .semigroup import enumerate_family, j_below_holds, j_related


@dataclass(frozen=True, slots=True)
class IdealSet:
    """A subset of the family, sorted, with optional provenance and warning."""

    ctx: Context
    members: tuple[Transformation, ...]
    generator_hint: tuple[Transformation, ...] | None = None
    warning: str | None = None

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def as_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(f.images for f in self.members)


def _checked_subset(ctx: Context, subset) -> tuple[Transformation, ...]:
    fs = tuple(subset)
    if not fs:
        raise ValueError("need a nonempty subset")
    for f in fs:
        if not classify(ctx, f).in_omegabar:
            raise DomainError(f"{f} does not carry Y onto Y in context {ctx}")
    return tuple(sorted(fs, key=lambda f: f.images))


def j_of_f(ctx: Context, subset, budget: int | None = None) -> IdealSet:
    """The divisibility down-set of a nonempty subset: all f below some g."""
    gens = _checked_subset(ctx, subset)
    members = tuple(
        f
        for f in enumerate_family(ctx, "omegabar", budget).elements
        if any(j_below_holds(ctx, f, g) for g in gens)
    )
    return IdealSet(ctx=ctx, members=members, generator_hint=gens)


def is_ideal(ctx: Context, subset, budget: int | None = None) -> bool:
    """Definitional check: h f h2 stays inside, for all members h, h2."""
    fs = _checked_subset(ctx, subset)
    inside = {f.images for f in fs}
    elems = enumerate_family(ctx, "omegabar", budget).elements
    for f in fs:
        for h in elems:
            hf = compose(h, f)
            for h2 in elems:
                if compose(hf, h2).images not in inside:
                    return False
    return True


def j_classes(ctx: Context, budget: int | None = None) -> tuple[tuple[Transformation, ...], ...]:
    """Partition of the family under mutual two-sided divisibility."""
    reps: list[Transformation] = []
    classes: list[list[Transformation]] = []
    for f in enumerate_family(ctx, "omegabar", budget).elements:
        for i, rep in enumerate(reps):
            if j_related(ctx, f, rep):
                classes[i].append(f)
                break
        else:
            reps.append(f)
            classes.append([f])
    return tuple(tuple(c) for c in classes)


def ideals_all(ctx: Context, budget: int | None = None) -> tuple[IdealSet, ...]:
    """Every ideal, by brute force over down-sets of J-classes, smallest first."""
    classes = j_classes(ctx, budget)
    reps = [c[0] for c in classes]
    k = len(classes)
    below = [[j_below_holds(ctx, reps[i], reps[j]) for j in range(k)] for i in range(k)]
    out: list[IdealSet] = []
    for mask in range(1, 1 << k):
        chosen = [i for i in range(k) if mask >> i & 1]
        closed = all(
            i in chosen
            for j in chosen
            for i in range(k)
            if below[i][j]
        )
        if not closed:
            continue
        members = tuple(
            sorted((f for i in chosen for f in classes[i]), key=lambda f: f.images)
        )
        out.append(IdealSet(ctx=ctx, members=members))
    out.sort(key=lambda s: (len(s.members), [f.images for f in s.members]))
    return tuple(out)


def j_st(ctx: Context, s: "ExtNat | int", t: int, budget: int | None = None) -> IdealSet:
    """Members with at most s small fibers over Y and image deficit at most t."""
    s_val = as_extnat(s)
    if not isinstance(t, int) or not 0 <= t <= ctx.n - len(ctx.y_set):
        raise ValueError(f"deficit threshold t must lie in 0..{ctx.n - len(ctx.y_set)}, got {t!r}")
    ambient = ExtNat(len(ctx.y_set))
    members = tuple(
        f
        for f in enumerate_family(ctx, "omegabar", budget).elements
        if n_value(profile_of(ctx, f), ambient) <= s_val and image_deficit(ctx, f) <= t
    )
    warning = None
    if not members:
        warning = (
            "empty threshold set: over a finite Y every fiber of a member is a "
            "singleton, so the small-fiber count is |Y| for |Y| >= 2 and the "
            "threshold s admits nothing below that; an empty set is not an ideal"
        )
    return IdealSet(ctx=ctx, members=members, warning=warning)


def kernel(ctx: Context, budget: int | None = None) -> IdealSet:
    """The least ideal, computed as the intersection of all of them."""
    all_ideals = ideals_all(ctx, budget)
    if not all_ideals:
        raise DomainError("no ideals found; the family should always have at least one")
    common = set(all_ideals[0].as_set())
    for ideal in all_ideals[1:]:
        common &= ideal.as_set()
    members = tuple(
        sorted((Transformation(t) for t in common), key=lambda f: f.images)
    )
    return IdealSet(ctx=ctx, members=members)
