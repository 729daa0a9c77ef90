"""Total maps of {0..n-1}, composed left to right, with a distinguished subset Y.

A transformation f is stored as its tuple of images, so ``x f = f.images[x]``.
Composition is left to right throughout: ``x (f g) = (x f) g``.  The subset Y
singles out four nested families of maps, from the loosest to the tightest:

    tbar      Yf is contained in Y
    omegabar  Yf = Y            (Y is carried onto itself)
    sbar      f restricted to Y is a bijection of Y
    fix       f restricted to Y is the identity on Y

On a finite ambient set, sbar and omegabar coincide; both flags are still
computed independently so the coincidence can be checked, not assumed.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .errors import DimensionError, DomainError

# Internal test hook: verification harnesses flip this to check that a broken
# composition is actually caught.  Never set it in library code.
_MUTATION: str | None = None


def _set_mutation(name: str | None) -> None:
    global _MUTATION
    _MUTATION = name


@dataclass(frozen=True, slots=True)
class Transformation:
    """A total self-map of {0..n-1}, stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        imgs = tuple(self.images)
        object.__setattr__(self, "images", imgs)
        n = len(imgs)
        if n == 0:
            raise DomainError("transformation needs a nonempty domain")
        for v in imgs:
            if not isinstance(v, int) or not 0 <= v < n:
                raise DomainError(f"image value {v!r} outside 0..{n - 1}")

    @property
    def n(self) -> int:
        return len(self.images)

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def image(self) -> frozenset[int]:
        """The image set Xf."""
        return frozenset(self.images)

    def is_bijection(self) -> bool:
        return len(set(self.images)) == self.n

    def __str__(self) -> str:
        return format_transformation(self)


def identity(n: int) -> Transformation:
    return Transformation(tuple(range(n)))


@dataclass(frozen=True, slots=True)
class Context:
    """Ambient set {0..n-1} together with the distinguished nonempty subset Y."""

    n: int
    y_set: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise DomainError(f"ambient size must be a positive int, got {self.n!r}")
        ys = tuple(sorted(set(self.y_set)))
        object.__setattr__(self, "y_set", ys)
        if not ys:
            raise DomainError("Y must be nonempty")
        for y in ys:
            if not isinstance(y, int) or not 0 <= y < self.n:
                raise DomainError(f"Y element {y!r} outside 0..{self.n - 1}")

    @property
    def y_frozen(self) -> frozenset[int]:
        return frozenset(self.y_set)

    @property
    def x_minus_y(self) -> tuple[int, ...]:
        ys = set(self.y_set)
        return tuple(x for x in range(self.n) if x not in ys)

    def __str__(self) -> str:
        return f"n={self.n} Y={{{','.join(map(str, self.y_set))}}}"


@dataclass(frozen=True, slots=True)
class MembershipFlags:
    """Which of the four nested families a map belongs to, plus unit-ness.

    The chain fix => sbar => omegabar => tbar always holds; it is asserted
    here so a bad computation fails loudly rather than propagating.
    """

    in_tbar: bool
    in_omegabar: bool
    in_sbar: bool
    in_fix: bool
    is_unit_of_omegabar: bool

    def __post_init__(self) -> None:
        assert not self.in_fix or self.in_sbar
        assert not self.in_sbar or self.in_omegabar
        assert not self.in_omegabar or self.in_tbar
        assert not self.is_unit_of_omegabar or self.in_omegabar


@dataclass(frozen=True, slots=True)
class KernelPartition:
    """The fibers of a transformation: blocks sorted by least element.

    ``block_images[i]`` is the common image of ``blocks[i]``, so the partition
    can answer which fibers sit over any query set of image points.
    """

    blocks: tuple[frozenset[int], ...]
    block_images: tuple[int, ...]

    def fibers_over(self, points: frozenset[int] | set[int]) -> tuple[frozenset[int], ...]:
        """The sub-collection of fibers whose image point lies in ``points``."""
        pts = set(points)
        return tuple(b for b, v in zip(self.blocks, self.block_images) if v in pts)

    def block_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(self.blocks)


def compose(f: Transformation, g: Transformation) -> Transformation:
    """Left-to-right product: x (f g) = (x f) g."""
    if f.n != g.n:
        raise DimensionError(f"cannot compose maps on {f.n} and {g.n} points")
    if _MUTATION == "flip-compose":
        return Transformation(tuple(f.images[v] for v in g.images))
    return Transformation(tuple(g.images[v] for v in f.images))


def classify(ctx: Context, f: Transformation) -> MembershipFlags:
    """Membership of f in each of the four families over ctx."""
    if f.n != ctx.n:
        raise DimensionError(f"map on {f.n} points in a context with n={ctx.n}")
    ys = ctx.y_set
    vals = [f.images[y] for y in ys]
    yset = ctx.y_frozen
    in_tbar = all(v in yset for v in vals)
    injective_on_y = len(set(vals)) == len(ys)
    in_sbar = in_tbar and injective_on_y
    in_omegabar = in_tbar and set(vals) == set(ys)
    in_fix = all(f.images[y] == y for y in ys)
    is_unit = in_omegabar and f.is_bijection()
    return MembershipFlags(
        in_tbar=in_tbar,
        in_omegabar=in_omegabar,
        in_sbar=in_sbar,
        in_fix=in_fix,
        is_unit_of_omegabar=is_unit,
    )


def restrict_to_y(ctx: Context, f: Transformation) -> Transformation:
    """f restricted to Y, reindexed along sorted(Y) -> 0..|Y|-1.

    Requires Yf to be contained in Y; otherwise the restriction is not a
    self-map of Y and a DomainError is raised.
    """
    if f.n != ctx.n:
        raise DimensionError(f"map on {f.n} points in a context with n={ctx.n}")
    ys = ctx.y_set
    pos = {y: i for i, y in enumerate(ys)}
    out = []
    for y in ys:
        v = f.images[y]
        if v not in pos:
            raise DomainError(f"point {y} leaves Y (image {v}); restriction undefined")
        out.append(pos[v])
    return Transformation(tuple(out))


def kernel_partition(f: Transformation) -> KernelPartition:
    """The partition of the domain into fibers of f."""
    by_image: dict[int, list[int]] = {}
    for x, v in enumerate(f.images):
        by_image.setdefault(v, []).append(x)
    pairs = sorted(((frozenset(xs), v) for v, xs in by_image.items()), key=lambda p: min(p[0]))
    return KernelPartition(
        blocks=tuple(b for b, _ in pairs),
        block_images=tuple(v for _, v in pairs),
    )


def transversals(
    f: Transformation, require_superset: frozenset[int] | set[int] = frozenset()
) -> "itertools.chain[frozenset[int]]":
    """All transversals of ker(f): one point per fiber, in lexicographic order.

    ``require_superset`` restricts the stream to transversals containing the
    given points; a fiber holding two required points kills the stream.
    Order is lexicographic on the sorted tuple of chosen points.
    """
    req = set(require_superset)
    part = kernel_partition(f)
    choices: list[list[int]] = []
    for block in part.blocks:
        hit = sorted(block & req)
        if len(hit) > 1:
            return itertools.chain(())  # two required points share a fiber
        choices.append(hit if hit else sorted(block))
    found = [frozenset(pick) for pick in itertools.product(*choices)]
    found.sort(key=lambda t: tuple(sorted(t)))
    return itertools.chain(found)


def refines(
    finer: tuple[frozenset[int], ...] | list[frozenset[int]],
    coarser: tuple[frozenset[int], ...] | list[frozenset[int]],
) -> bool:
    """True when every block of ``finer`` sits inside some block of ``coarser``."""
    return all(any(a <= b for b in coarser) for a in finer)


def partitions_equal(
    a: tuple[frozenset[int], ...] | list[frozenset[int]],
    b: tuple[frozenset[int], ...] | list[frozenset[int]],
) -> bool:
    """Mutual refinement; for collections of disjoint blocks this is set equality."""
    return refines(a, b) and refines(b, a)


# --- text and JSON forms ---------------------------------------------------
# Bracket form for maps: "[1 0 0]".  Y on the command line: "0,1".


def format_transformation(f: Transformation) -> str:
    return "[" + " ".join(str(v) for v in f.images) + "]"


def parse_transformation(text: str) -> Transformation:
    s = text.strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"expected bracket form like '[1 0 0]', got {text!r}")
    body = s[1:-1].replace(",", " ").split()
    if not body:
        raise ValueError("empty transformation literal")
    try:
        imgs = tuple(int(tok) for tok in body)
    except ValueError:
        raise ValueError(f"non-integer entry in {text!r}") from None
    return Transformation(imgs)


def transformation_to_json(f: Transformation) -> dict:
    return {"n": f.n, "images": list(f.images)}


def transformation_from_json(obj: dict | str) -> Transformation:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "images" not in obj:
        raise ValueError("expected an object with an 'images' field")
    imgs = tuple(obj["images"])
    f = Transformation(imgs)
    if "n" in obj and obj["n"] != f.n:
        raise DimensionError(f"declared n={obj['n']} but {len(imgs)} images given")
    return f


def parse_y(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted({int(tok) for tok in text.replace(",", " ").split()}))
    except ValueError:
        raise ValueError(f"expected comma-separated integers for Y, got {text!r}") from None


def image_deficit(ctx: Context, f: Transformation) -> int:
    """|Xf \\ Y|, the number of image points outside Y."""
    if f.n != ctx.n:
        raise DimensionError(f"map on {f.n} points in a context with n={ctx.n}")
    return len(f.image() - ctx.y_frozen)
