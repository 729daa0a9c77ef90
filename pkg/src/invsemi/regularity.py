"""Regular and unit-regular elements, with brute-force cross-checks built in.

An element f is regular when f g f = f for some g in the same family, and
unit-regular when the middle factor can be chosen invertible.  Both notions
admit short structural tests here: regularity within the Y-onto-Y family is
exactly bijectivity on Y (automatic over a finite Y), and unit-regularity is
witnessed by a transversal of ker(f) that contains Y and misses exactly as
many points as the image does.  The report type carries both the structural
verdicts and the searched witnesses, and refuses to disagree with itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Context, Transformation, classify, compose, transversals
from .errors import DomainError
from .semigroup import SemigroupEnum, enumerate_family, units


@dataclass(frozen=True, slots=True)
class RegularityReport:
    is_regular: bool
    is_unit_regular: bool
    witness_pre_inverse: Transformation | None
    witness_unit: Transformation | None
    certifying_transversal: frozenset[int] | None

    def __post_init__(self) -> None:
        assert not self.is_unit_regular or self.is_regular
        assert (self.witness_unit is not None) == self.is_unit_regular
        assert (self.certifying_transversal is not None) == self.is_unit_regular


def pre_inverses(
    ctx: Context,
    f: Transformation,
    family: str = "omegabar",
    budget: int | None = None,
    enum: SemigroupEnum | None = None,
) -> tuple[Transformation, ...]:
    """All g in the family with f g f = f, in lexicographic order.

    Pure brute force over the enumerated family; pass ``enum`` to reuse an
    enumeration across many calls.
    """
    if enum is None:
        enum = enumerate_family(ctx, family, budget)
    elif enum.ctx != ctx or (family != enum.family):
        raise DomainError("supplied enumeration does not match the requested family")
    flags = classify(ctx, f)
    member = {
        "tbar": flags.in_tbar,
        "omegabar": flags.in_omegabar,
        "sbar": flags.in_sbar,
        "fix": flags.in_fix,
    }[enum.family]
    if not member:
        raise DomainError(f"{f} is not in family {enum.family!r} over {ctx}")
    return tuple(g for g in enum.elements if compose(f, compose(g, f)).images == f.images)


def is_regular(ctx: Context, f: Transformation) -> bool:
    """Structural test: regular in the Y-onto-Y family iff injective on Y."""
    flags = classify(ctx, f)
    if not flags.in_omegabar:
        raise DomainError(f"{f} does not carry Y onto Y in context {ctx}")
    return flags.in_sbar


def is_regular_oracle(ctx: Context, f: Transformation, budget: int | None = None) -> bool:
    """Definitional test: some member g satisfies f g f = f."""
    flags = classify(ctx, f)
    if not flags.in_omegabar:
        raise DomainError(f"{f} does not carry Y onto Y in context {ctx}")
    for g in enumerate_family(ctx, "omegabar", budget).elements:
        if compose(f, compose(g, f)).images == f.images:
            return True
    return False


def is_unit_regular(ctx: Context, f: Transformation, budget: int | None = None) -> RegularityReport:
    """Full report: structural transversal test against unit search, combined.

    The structural side looks for a transversal of ker(f) containing Y whose
    complement has the size of the image's complement; the search side scans
    the unit group for u with f u f = f.  The two verdicts are asserted equal
    before anything is returned.
    """
    flags = classify(ctx, f)
    if not flags.in_omegabar:
        raise DomainError(f"{f} does not carry Y onto Y in context {ctx}")

    deficit_total = ctx.n - len(f.image())  # |X \ Xf|
    certificate = None
    for t in transversals(f, require_superset=ctx.y_frozen):
        if ctx.n - len(t) == deficit_total:
            certificate = t
            break

    unit_witness = None
    for u in units(ctx):
        if compose(f, compose(u, f)).images == f.images:
            unit_witness = u
            break

    assert (certificate is None) == (unit_witness is None), (
        "structural transversal test and unit search disagree"
    )

    pre = None
    for g in enumerate_family(ctx, "omegabar", budget).elements:
        if compose(f, compose(g, f)).images == f.images:
            pre = g
            break

    return RegularityReport(
        is_regular=flags.in_sbar,
        is_unit_regular=unit_witness is not None,
        witness_pre_inverse=pre,
        witness_unit=unit_witness,
        certifying_transversal=certificate,
    )


def regular_elements(ctx: Context, budget: int | None = None) -> tuple[Transformation, ...]:
    """Members regular in the structural sense, in lexicographic order."""
    return tuple(
        f for f in enumerate_family(ctx, "omegabar", budget).elements if is_regular(ctx, f)
    )
