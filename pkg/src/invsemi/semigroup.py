"""Enumeration and Green's structure of the families over a fixed (X, Y).

Every relation here comes in two independent flavors.  The characterization
predicates (l_related and friends) decide membership from images, kernels
and fiber profiles alone, in time polynomial in n.  The GreenOracle decides
the same questions straight from the definitions, by exhaustive divisibility
search over the enumerated semigroup.  They are kept separate on purpose:
tests compare them and neither side is allowed to peek at the other.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass

from .core import (
    Context,
    Transformation,
    classify,
    compose,
    identity,
    image_deficit,
    kernel_partition,
    partitions_equal,
)
from .errors import BudgetError, DomainError
from .extnat import d_condition, j_condition, profile_of

FAMILIES = ("tbar", "omegabar", "sbar", "fix")
RELATIONS = ("L", "R", "H", "D", "J")

DEFAULT_ENUM_BUDGET = 6
DEFAULT_ORACLE_BUDGET = 5
BUDGET_ENV = "INVSEMI_BUDGET"


def _resolve_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    env = os.environ.get(BUDGET_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_ENUM_BUDGET


@dataclass(frozen=True, slots=True)
class SemigroupEnum:
    """All members of one family over one context, in lexicographic order."""

    ctx: Context
    family: str
    elements: tuple[Transformation, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def as_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(f.images for f in self.elements)


def enumerate_family(ctx: Context, family: str = "omegabar", budget: int | None = None) -> SemigroupEnum:
    """Enumerate a family in lexicographic order of image tuples.

    Generation walks per-position candidate lists rather than filtering all
    n^n maps: positions in Y only ever map into Y, and the two bijective-on-Y
    families additionally require the Y positions to take distinct values.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    limit = _resolve_budget(budget)
    if ctx.n > limit:
        raise BudgetError(f"n={ctx.n} exceeds enumeration budget {limit}")
    ys = ctx.y_set
    yset = ctx.y_frozen
    per_pos: list[tuple[int, ...]] = []
    for x in range(ctx.n):
        if x in yset:
            per_pos.append((x,) if family == "fix" else ys)
        else:
            per_pos.append(tuple(range(ctx.n)))
    need_distinct = family in ("sbar", "omegabar")
    out: list[Transformation] = []
    for imgs in itertools.product(*per_pos):
        if need_distinct and len({imgs[y] for y in ys}) != len(ys):
            continue
        out.append(Transformation(imgs))
    return SemigroupEnum(ctx=ctx, family=family, elements=tuple(out))


def units(ctx: Context) -> tuple[Transformation, ...]:
    """The invertible members: bijections of X carrying Y onto Y, sorted."""
    ys, rest = ctx.y_set, ctx.x_minus_y
    out = []
    for perm_y in itertools.permutations(ys):
        for perm_rest in itertools.permutations(rest):
            imgs = [0] * ctx.n
            for src, dst in zip(ys, perm_y):
                imgs[src] = dst
            for src, dst in zip(rest, perm_rest):
                imgs[src] = dst
            out.append(Transformation(tuple(imgs)))
    out.sort(key=lambda f: f.images)
    return tuple(out)


def _require_member(ctx: Context, f: Transformation) -> None:
    if not classify(ctx, f).in_omegabar:
        raise DomainError(f"{f} does not carry Y onto Y in context {ctx}")


def _fibers_over_y(ctx: Context, f: Transformation) -> tuple[frozenset[int], ...]:
    return kernel_partition(f).fibers_over(ctx.y_frozen)


# --- characterization predicates --------------------------------------------


def l_related(ctx: Context, f: Transformation, g: Transformation) -> bool:
    """Same image set and, point by point over Y, same fiber size on Y."""
    _require_member(ctx, f)
    _require_member(ctx, g)
    return f.image() == g.image() and profile_of(ctx, f).sizes == profile_of(ctx, g).sizes


def r_related(ctx: Context, f: Transformation, g: Transformation) -> bool:
    """Same kernel, and the same fibers sitting over Y."""
    _require_member(ctx, f)
    _require_member(ctx, g)
    pf, pg = kernel_partition(f), kernel_partition(g)
    return partitions_equal(pf.blocks, pg.blocks) and partitions_equal(
        pf.fibers_over(ctx.y_frozen), pg.fibers_over(ctx.y_frozen)
    )


def h_related(ctx: Context, f: Transformation, g: Transformation) -> bool:
    return l_related(ctx, f, g) and r_related(ctx, f, g)


def d_related(ctx: Context, f: Transformation, g: Transformation) -> bool:
    """Equal image deficit and a size-preserving bijection of fiber indices."""
    _require_member(ctx, f)
    _require_member(ctx, g)
    if image_deficit(ctx, f) != image_deficit(ctx, g):
        return False
    return d_condition(profile_of(ctx, f), profile_of(ctx, g)) is not None


def j_related(ctx: Context, f: Transformation, g: Transformation) -> bool:
    """Equal image deficit and fiber profiles packing into each other."""
    _require_member(ctx, f)
    _require_member(ctx, g)
    if image_deficit(ctx, f) != image_deficit(ctx, g):
        return False
    pf, pg = profile_of(ctx, f), profile_of(ctx, g)
    return j_condition(pf, pg) is not None and j_condition(pg, pf) is not None


_RELATED = {"L": l_related, "R": r_related, "H": h_related, "D": d_related, "J": j_related}


def green_related(ctx: Context, rel: str, f: Transformation, g: Transformation) -> bool:
    if rel not in _RELATED:
        raise ValueError(f"unknown relation {rel!r}; expected one of {RELATIONS}")
    return _RELATED[rel](ctx, f, g)


# --- one-sided divisibility witnesses ----------------------------------------


def l_below_witness(ctx: Context, f: Transformation, g: Transformation) -> Transformation | None:
    """Lexicographically least h in the family with (h then g) = f, or None.

    Exists iff Xf is inside Xg and every fiber of f over Y is at least as
    large as g's fiber over the same point.
    """
    _require_member(ctx, f)
    _require_member(ctx, g)
    if not f.image() <= g.image():
        return None
    pf, pg = profile_of(ctx, f), profile_of(ctx, g)
    if not all(a >= b for a, b in zip(pf.sizes, pg.sizes)):
        return None
    yset = ctx.y_frozen
    fiber_g: dict[int, list[int]] = {}
    for x, v in enumerate(g.images):
        fiber_g.setdefault(v, []).append(x)  # ascending x, so lists are sorted
    imgs = []
    for x in range(ctx.n):
        target = f.images[x]
        if x in yset:
            # g is a bijection on Y, so exactly one preimage inside Y
            imgs.append(next(z for z in fiber_g[target] if z in yset))
        else:
            imgs.append(fiber_g[target][0])
    h = Transformation(tuple(imgs))
    assert compose(h, g).images == f.images, "witness failed recomposition"
    assert classify(ctx, h).in_omegabar
    return h


def r_below_witness(ctx: Context, f: Transformation, g: Transformation) -> Transformation | None:
    """Lexicographically least h in the family with (g then h) = f, or None.

    Exists iff the fibers of g refine the fibers of f, both globally and in
    the sub-collections sitting over Y.
    """
    _require_member(ctx, f)
    _require_member(ctx, g)
    pf, pg = kernel_partition(f), kernel_partition(g)
    yset = ctx.y_frozen
    if not refines_blocks(pg.blocks, pf.blocks):
        return None
    if not refines_blocks(pg.fibers_over(yset), pf.fibers_over(yset)):
        return None
    imgs = [0] * ctx.n  # points outside Xg are free; 0 is the least choice
    for block, v in zip(pg.blocks, pg.block_images):
        imgs[v] = f.images[min(block)]  # f is constant on each g-fiber
    h = Transformation(tuple(imgs))
    assert compose(g, h).images == f.images, "witness failed recomposition"
    assert classify(ctx, h).in_omegabar
    return h


def refines_blocks(finer, coarser) -> bool:
    return all(any(a <= b for b in coarser) for a in finer)


def j_below_holds(ctx: Context, f: Transformation, g: Transformation) -> bool:
    """Two-sided divisibility test alone, no witness construction."""
    _require_member(ctx, f)
    _require_member(ctx, g)
    if image_deficit(ctx, f) > image_deficit(ctx, g):
        return False
    return j_condition(profile_of(ctx, f), profile_of(ctx, g)) is not None


def j_below_witness(
    ctx: Context, f: Transformation, g: Transformation
) -> tuple[Transformation, Transformation] | None:
    """A deterministic pair (h, h2) with (h then g then h2) = f, or None.

    Exists iff f's image deficit is at most g's and g's fiber profile packs
    into f's fiber capacities.  Equal arguments short-circuit to the identity
    pair.  The construction picks least preimages throughout, so equal inputs
    give equal witnesses, but the pair as a whole is not the lex-least one.
    """
    _require_member(ctx, f)
    _require_member(ctx, g)
    if f.images == g.images:
        e = identity(ctx.n)
        return e, e
    if not j_below_holds(ctx, f, g):
        return None
    ys, yset = ctx.y_set, ctx.y_frozen
    ginv_y = {g.images[y]: y for y in ys}
    beta = {y: ginv_y[f.images[y]] for y in ys}
    f_off = sorted(f.image() - yset)
    g_off = sorted(g.image() - yset)
    psi = {y: y for y in ys}
    psi.update(dict(zip(f_off, g_off)))
    psi_back = {c: b for b, c in zip(f_off, g_off)}
    fiber_f: dict[int, list[int]] = {}
    for x, v in enumerate(f.images):
        fiber_f.setdefault(v, []).append(x)
    fiber_g: dict[int, list[int]] = {}
    for x, v in enumerate(g.images):
        fiber_g.setdefault(v, []).append(x)

    h_imgs = []
    for x in range(ctx.n):
        v = f.images[x]
        if x in yset:
            h_imgs.append(beta[x])
        elif v in yset:
            # route through the least Y-point of the same f-fiber
            x2 = next(z for z in fiber_f[v] if z in yset)
            h_imgs.append(beta[x2])
        else:
            h_imgs.append(fiber_g[psi[v]][0])
    h2_imgs = []
    for z in range(ctx.n):
        if z in yset:
            h2_imgs.append(z)
        else:
            h2_imgs.append(psi_back.get(z, 0))
    h, h2 = Transformation(tuple(h_imgs)), Transformation(tuple(h2_imgs))
    assert compose(h, compose(g, h2)).images == f.images, "witness failed recomposition"
    assert classify(ctx, h).in_omegabar and classify(ctx, h2).in_omegabar
    return h, h2


# --- definitional oracle ------------------------------------------------------


class GreenOracle:
    """Green's relations from the definitions, by exhaustive product search.

    All left products h*g and right products g*h over the whole enumerated
    semigroup are computed once and kept as index sets; relation queries are
    then set lookups (plus one scan over middles for the two-sided cases).
    The identity is a member, so plain product sets already contain each
    element itself and no formal unit needs adjoining.
    """

    def __init__(self, ctx: Context, budget: int = DEFAULT_ORACLE_BUDGET):
        if ctx.n > budget:
            raise BudgetError(f"n={ctx.n} exceeds oracle budget {budget}")
        self.ctx = ctx
        self.elements = enumerate_family(ctx, "omegabar").elements
        self._index = {f.images: i for i, f in enumerate(self.elements)}
        self._left: list[frozenset[int]] | None = None
        self._right: list[frozenset[int]] | None = None

    def _id(self, f: Transformation) -> int:
        try:
            return self._index[f.images]
        except KeyError:
            raise DomainError(f"{f} is not a member over {self.ctx}") from None

    def _products(self) -> tuple[list[frozenset[int]], list[frozenset[int]]]:
        if self._left is None:
            elems, index = self.elements, self._index
            left, right = [], []
            for g in elems:
                left.append(frozenset(index[compose(h, g).images] for h in elems))
                right.append(frozenset(index[compose(g, h).images] for h in elems))
            self._left, self._right = left, right
        return self._left, self._right

    def l_below(self, f: Transformation, g: Transformation) -> bool:
        left, _ = self._products()
        return self._id(f) in left[self._id(g)]

    def r_below(self, f: Transformation, g: Transformation) -> bool:
        _, right = self._products()
        return self._id(f) in right[self._id(g)]

    def j_below(self, f: Transformation, g: Transformation) -> bool:
        left, right = self._products()
        fi = self._id(f)
        return any(fi in right[c] for c in left[self._id(g)])

    def l_related(self, f: Transformation, g: Transformation) -> bool:
        return self.l_below(f, g) and self.l_below(g, f)

    def r_related(self, f: Transformation, g: Transformation) -> bool:
        return self.r_below(f, g) and self.r_below(g, f)

    def h_related(self, f: Transformation, g: Transformation) -> bool:
        return self.l_related(f, g) and self.r_related(f, g)

    def d_related(self, f: Transformation, g: Transformation) -> bool:
        # middle element w with f L w and w R g
        left, right = self._products()
        fi, gi = self._id(f), self._id(g)
        for w in range(len(self.elements)):
            if fi in left[w] and w in left[fi] and w in right[gi] and gi in right[w]:
                return True
        return False

    def j_related(self, f: Transformation, g: Transformation) -> bool:
        return self.j_below(f, g) and self.j_below(g, f)

    def related(self, rel: str, f: Transformation, g: Transformation) -> bool:
        if rel not in RELATIONS:
            raise ValueError(f"unknown relation {rel!r}; expected one of {RELATIONS}")
        return getattr(self, f"{rel.lower()}_related")(f, g)


def green_oracle(ctx: Context, budget: int = DEFAULT_ORACLE_BUDGET) -> GreenOracle:
    return GreenOracle(ctx, budget=budget)


# --- egg-box structure --------------------------------------------------------


@dataclass(frozen=True, slots=True)
class HCell:
    elements: tuple[Transformation, ...]
    has_idempotent: bool


@dataclass(frozen=True, slots=True)
class DClassGrid:
    """One D-class laid out as R-classes (rows) by L-classes (columns)."""

    deficit: int
    cells: tuple[tuple[HCell, ...], ...]

    @property
    def size(self) -> int:
        return sum(len(c.elements) for row in self.cells for c in row)


@dataclass(frozen=True, slots=True)
class EggBox:
    ctx: Context
    d_classes: tuple[DClassGrid, ...]
    # strict comparabilities (i, j): class i sits below class j in the
    # two-sided divisibility order on D-class representatives
    j_below_pairs: tuple[tuple[int, int], ...]


def eggbox(ctx: Context, budget: int | None = None) -> EggBox:
    """Group the family into D-classes and lay each out as an R-by-L grid."""
    elems = enumerate_family(ctx, "omegabar", budget).elements
    yset = ctx.y_frozen

    def d_key(f: Transformation):
        prof = profile_of(ctx, f)
        multiset = tuple(sorted((s.value for s in prof.sizes), key=lambda v: (v is None, v)))
        return image_deficit(ctx, f), multiset

    def r_key(f: Transformation):
        part = kernel_partition(f)
        blocks = tuple(tuple(sorted(b)) for b in part.blocks)
        over_y = tuple(tuple(sorted(b)) for b in part.fibers_over(yset))
        return blocks, over_y

    def l_key(f: Transformation):
        return tuple(sorted(f.image())), profile_of(ctx, f).sizes

    by_d: dict[tuple, list[Transformation]] = {}
    for f in elems:
        by_d.setdefault(d_key(f), []).append(f)

    grids: list[DClassGrid] = []
    for key in sorted(by_d, key=lambda k: (-k[0], k[1])):
        members = by_d[key]
        rows: dict[tuple, list[Transformation]] = {}
        cols: dict[tuple, list[Transformation]] = {}
        for f in members:
            rows.setdefault(r_key(f), []).append(f)
            cols.setdefault(l_key(f), []).append(f)
        row_order = sorted(rows, key=lambda k: min(f.images for f in rows[k]))
        col_order = sorted(cols, key=lambda k: min(f.images for f in cols[k]))
        cells = []
        for rk in row_order:
            row_cells = []
            for ck in col_order:
                cell = tuple(sorted((f for f in rows[rk] if l_key(f) == ck), key=lambda f: f.images))
                assert cell, "every R-by-L intersection inside a D-class is nonempty"
                idem = any(compose(e, e).images == e.images for e in cell)
                row_cells.append(HCell(elements=cell, has_idempotent=idem))
            cells.append(tuple(row_cells))
        grids.append(DClassGrid(deficit=key[0], cells=tuple(cells)))

    reps = [grid.cells[0][0].elements[0] for grid in grids]
    pairs = []
    for i, j in itertools.permutations(range(len(grids)), 2):
        if j_below_witness(ctx, reps[i], reps[j]) is not None:
            pairs.append((i, j))
    return EggBox(ctx=ctx, d_classes=tuple(grids), j_below_pairs=tuple(pairs))


def eggbox_text(box: EggBox) -> str:
    lines = [f"egg-box over {box.ctx}"]
    for i, grid in enumerate(box.d_classes):
        nrows = len(grid.cells)
        ncols = len(grid.cells[0]) if nrows else 0
        lines.append(
            f"D-class {i}: image-deficit={grid.deficit} size={grid.size} grid={nrows}x{ncols}"
        )
        for row in grid.cells:
            lines.append(
                "  " + " ".join(f"{len(c.elements)}{'*' if c.has_idempotent else ''}" for c in row)
            )
    below = sorted(box.j_below_pairs)
    if below:
        lines.append("order: " + " ".join(f"D{i}<=D{j}" for i, j in below))
    return "\n".join(lines) + "\n"


def eggbox_dot(box: EggBox) -> str:
    out = ["digraph eggbox {", "  compound=true;", "  node [shape=box];"]
    for i, grid in enumerate(box.d_classes):
        out.append(f"  subgraph cluster_{i} {{")
        out.append(f'    label="D{i} deficit={grid.deficit}";')
        for r, row in enumerate(grid.cells):
            for c, cell in enumerate(row):
                star = "*" if cell.has_idempotent else ""
                out.append(f'    d{i}_r{r}_c{c} [label="{len(cell.elements)}{star}"];')
        out.append("  }")
    # one representative edge per covering pair, cluster to cluster
    strict = set(box.j_below_pairs)
    covers = [
        (i, j)
        for i, j in sorted(strict)
        if not any((i, k) in strict and (k, j) in strict for k in range(len(box.d_classes)))
    ]
    for i, j in covers:
        out.append(f"  d{i}_r0_c0 -> d{j}_r0_c0 [ltail=cluster_{i}, lhead=cluster_{j}];")
    out.append("}")
    return "\n".join(out) + "\n"


def eggbox_json(box: EggBox) -> dict:
    return {
        "n": box.ctx.n,
        "y": list(box.ctx.y_set),
        "d_classes": [
            {
                "deficit": grid.deficit,
                "size": grid.size,
                "cells": [
                    [
                        {
                            "elements": [str(e) for e in cell.elements],
                            "idempotent": cell.has_idempotent,
                        }
                        for cell in row
                    ]
                    for row in grid.cells
                ],
            }
            for grid in box.d_classes
        ],
        "order_pairs": [list(p) for p in sorted(box.j_below_pairs)],
    }
