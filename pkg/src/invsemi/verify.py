"""Self-verification harness: every structural claim against brute force.

Each check has a stable label and runs either once (fixed corpora for the
symbolic calculus and the parsers) or per context, sweeping all (n, Y)
configurations up to the configured bound in ascending order, so the first
counterexample reported is a minimal one.  Characterizations are always
compared against independent definitional computations; neither side is
derived from the other.

Reports are plain data with a schema number and no timestamps, machine
state, or ordering that depends on parallelism: two runs with the same
configuration produce byte-identical output.  Context shards may run in a
process pool; results are merged in configuration order regardless of
completion order.

Setting INVSEMI_MUTATE=flip-compose reverses the composition order before
the run, which must make the relation checks fail; it exists so the harness
itself can be tested.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import random
from dataclasses import dataclass
from multiprocessing import get_context as _mp_context

from . import core
from .core import (
    Context,
    Transformation,
    classify,
    compose,
    identity,
    image_deficit,
    kernel_partition,
    parse_transformation,
    transformation_from_json,
    transformation_to_json,
    transversals,
)
from .errors import BudgetError, DimensionError
from .extnat import (
    OMEGA,
    ExtNat,
    cover_is_valid,
    d_condition,
    j_condition,
    matching_is_valid,
    n_value,
    parse_profile,
    profile_of,
)
from .ideals import ideals_all, is_ideal, j_of_f, j_st, kernel
from .regularity import is_regular, is_regular_oracle, is_unit_regular, pre_inverses
from .semigroup import (
    GreenOracle,
    enumerate_family,
    eggbox,
    green_related,
    j_below_witness,
    l_below_witness,
    r_below_witness,
    units,
)

REPORT_SCHEMA = 1

# sampling sizes for configurations too big to sweep exhaustively
SAMPLE_PAIRS = 512
SAMPLE_TRIPLES = 400
SAMPLE_WITNESS_PAIRS = 300
SAMPLE_SUBSETS = 6
SAMPLE_ELEMENTS = 120
EXHAUSTIVE_MAPS_LIMIT = 200_000


@dataclass(frozen=True, slots=True)
class VerifyConfig:
    max_n: int = 4
    sample_n5: bool = False
    seed: int = 0
    jobs: int = 1
    report_path: str | None = None


def _apply_env_mutation() -> None:
    name = os.environ.get("INVSEMI_MUTATE") or None
    if name is not None and name != "flip-compose":
        raise ValueError(f"unknown mutation {name!r}; only 'flip-compose' is understood")
    core._set_mutation(name)


def _contexts(cfg: VerifyConfig) -> list[tuple[int, tuple[int, ...]]]:
    out = []
    for n in range(1, cfg.max_n + 1):
        for r in range(1, n + 1):
            for ys in itertools.combinations(range(n), r):
                out.append((n, ys))
    if cfg.sample_n5 and cfg.max_n < 5:
        out.append((5, (0,)))
        out.append((5, (0, 1)))
    return out


class _CtxData:
    """Per-context lazy cache so checks in one shard share the heavy objects."""

    def __init__(self, ctx: Context):
        self.ctx = ctx
        self._enums: dict[str, tuple[Transformation, ...]] = {}
        self._oracle: GreenOracle | None = None
        self._ideals = None
        self._eggbox = None

    def enum(self, family: str = "omegabar") -> tuple[Transformation, ...]:
        if family not in self._enums:
            self._enums[family] = enumerate_family(self.ctx, family).elements
        return self._enums[family]

    def oracle(self) -> GreenOracle:
        if self._oracle is None:
            self._oracle = GreenOracle(self.ctx)
        return self._oracle

    def ideals(self):
        if self._ideals is None:
            self._ideals = ideals_all(self.ctx)
        return self._ideals

    def eggbox(self):
        if self._eggbox is None:
            self._eggbox = eggbox(self.ctx)
        return self._eggbox


def _ex(data: _CtxData, **kv) -> dict:
    out = {"n": data.ctx.n, "y": ",".join(map(str, data.ctx.y_set))}
    out.update({k: str(v) for k, v in kv.items()})
    return out


def _sample_pairs(rng: random.Random, elems, count: int):
    m = len(elems)
    for _ in range(count):
        yield elems[rng.randrange(m)], elems[rng.randrange(m)]


def _pair_iter(data: _CtxData, rng: random.Random, exhaustive_up_to: int, count: int):
    elems = data.enum()
    if data.ctx.n <= exhaustive_up_to:
        return itertools.product(elems, repeat=2)
    return _sample_pairs(rng, elems, count)


# --- context-scoped checks ---------------------------------------------------


def _check_count_family(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    n, k = ctx.n, len(ctx.y_set)
    expected = {
        "omegabar": math.factorial(k) * n ** (n - k),
        "sbar": math.factorial(k) * n ** (n - k),
        "tbar": k**k * n ** (n - k),
        "fix": n ** (n - k),
    }
    checked = 0
    listed: dict[str, tuple[Transformation, ...]] = {}
    for family, want in expected.items():
        elems = data.enum(family)
        listed[family] = elems
        checked += len(elems)
        if len(elems) != want:
            return checked, _ex(data, family=family, got=len(elems), want=want)
        if list(elems) != sorted(elems, key=lambda f: f.images):
            return checked, _ex(data, family=family, detail="not in lexicographic order")
        if len({f.images for f in elems}) != len(elems):
            return checked, _ex(data, family=family, detail="duplicate elements")
    # full completeness oracle: filter every map of X
    if n**n <= EXHAUSTIVE_MAPS_LIMIT:
        seen: dict[str, set[tuple[int, ...]]] = {fam: set() for fam in expected}
        for imgs in itertools.product(range(n), repeat=n):
            f = Transformation(imgs)
            flags = classify(ctx, f)
            checked += 1
            if flags.in_tbar:
                seen["tbar"].add(imgs)
            if flags.in_omegabar:
                seen["omegabar"].add(imgs)
            if flags.in_sbar:
                seen["sbar"].add(imgs)
            if flags.in_fix:
                seen["fix"].add(imgs)
        for family in expected:
            if seen[family] != {f.images for f in listed[family]}:
                return checked, _ex(data, family=family, detail="enumeration misses or adds maps")
    # chain of families as sets
    sets = {fam: {f.images for f in listed[fam]} for fam in expected}
    if not (sets["fix"] <= sets["sbar"] <= sets["omegabar"] <= sets["tbar"]):
        return checked, _ex(data, detail="family chain violated")
    return checked, None


def _check_count_units(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    n, k = ctx.n, len(ctx.y_set)
    us = units(ctx)
    checked = len(us)
    if len(us) != math.factorial(k) * math.factorial(n - k):
        return checked, _ex(data, got=len(us), want=math.factorial(k) * math.factorial(n - k))
    member = {f.images for f in data.enum()}
    ident = identity(n)
    for u in us:
        if u.images not in member:
            return checked, _ex(data, unit=u, detail="unit not a member")
        inv = next(
            (v for v in us if compose(u, v).images == ident.images and compose(v, u).images == ident.images),
            None,
        )
        if inv is None:
            return checked, _ex(data, unit=u, detail="no two-sided inverse among units")
    bijections = {f.images for f in data.enum() if f.is_bijection()}
    if bijections != {u.images for u in us}:
        return checked, _ex(data, detail="units differ from bijective members")
    return checked, None


def _check_assoc(data: _CtxData, rng: random.Random):
    elems = data.enum()
    checked = 0
    if data.ctx.n <= 3:
        triples = itertools.product(elems, repeat=3)
    else:
        m = len(elems)
        triples = (
            (elems[rng.randrange(m)], elems[rng.randrange(m)], elems[rng.randrange(m)])
            for _ in range(SAMPLE_TRIPLES)
        )
    for f, g, h in triples:
        checked += 1
        if compose(compose(f, g), h).images != compose(f, compose(g, h)).images:
            return checked, _ex(data, f=f, g=g, h=h, detail="associativity broken")
    return checked, None


def _check_closure(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    flag = {
        "tbar": lambda fl: fl.in_tbar,
        "omegabar": lambda fl: fl.in_omegabar,
        "sbar": lambda fl: fl.in_sbar,
        "fix": lambda fl: fl.in_fix,
    }
    checked = 0
    for family, getter in flag.items():
        elems = data.enum(family)
        if ctx.n <= 3:
            pairs = itertools.product(elems, repeat=2)
        else:
            pairs = _sample_pairs(rng, elems, SAMPLE_PAIRS)
        for f, g in pairs:
            checked += 1
            if not getter(classify(ctx, compose(f, g))):
                return checked, _ex(data, family=family, f=f, g=g, detail="product left the family")
    return checked, None


def _check_membership(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    n = ctx.n
    ys, yset = ctx.y_set, set(ctx.y_set)
    checked = 0
    if n**n <= EXHAUSTIVE_MAPS_LIMIT:
        maps = itertools.product(range(n), repeat=n)
    else:
        maps = (tuple(rng.randrange(n) for _ in range(n)) for _ in range(20_000))
    for imgs in maps:
        f = Transformation(imgs)
        flags = classify(ctx, f)
        vals = [imgs[y] for y in ys]
        want_tbar = all(v in yset for v in vals)
        want_omega = want_tbar and set(vals) == yset
        want_sbar = want_tbar and len(set(vals)) == len(ys)
        want_fix = all(imgs[y] == y for y in ys)
        want_unit = want_omega and len(set(imgs)) == n
        checked += 1
        got = (flags.in_tbar, flags.in_omegabar, flags.in_sbar, flags.in_fix, flags.is_unit_of_omegabar)
        if got != (want_tbar, want_omega, want_sbar, want_fix, want_unit):
            return checked, _ex(data, f=f, got=got, want=(want_tbar, want_omega, want_sbar, want_fix, want_unit))
        # over a finite Y, injective-on-Y and onto-Y agree inside tbar
        if flags.in_sbar != flags.in_omegabar:
            return checked, _ex(data, f=f, detail="finite coincidence of sbar and omegabar broken")
    return checked, None


def _check_restriction(data: _CtxData, rng: random.Random):
    from .core import restrict_to_y

    ctx = data.ctx
    elems = data.enum("tbar")
    checked = 0
    if ctx.n <= 3:
        pairs = itertools.product(elems, repeat=2)
    else:
        pairs = _sample_pairs(rng, elems, SAMPLE_PAIRS)
    for f, g in pairs:
        checked += 1
        lhs = restrict_to_y(ctx, compose(f, g))
        rhs = compose(restrict_to_y(ctx, f), restrict_to_y(ctx, g))
        if lhs.images != rhs.images:
            return checked, _ex(data, f=f, g=g, detail="restriction is not multiplicative")
    for f in data.enum("omegabar"):
        checked += 1
        if not restrict_to_y(ctx, f).is_bijection():
            return checked, _ex(data, f=f, detail="member restricts to a non-bijection")
    for f in data.enum("fix"):
        checked += 1
        if restrict_to_y(ctx, f).images != identity(len(ctx.y_set)).images:
            return checked, _ex(data, f=f, detail="fixing member does not restrict to identity")
    return checked, None


def _check_transversals(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    n = ctx.n
    elems = data.enum()
    if ctx.n >= 5:
        elems = tuple(elems[rng.randrange(len(elems))] for _ in range(40))
    checked = 0
    for f in elems:
        part = kernel_partition(f)
        blocks = part.blocks
        all_subsets = [
            frozenset(s)
            for r in range(n + 1)
            for s in itertools.combinations(range(n), r)
        ]
        want_plain = sorted(
            (t for t in all_subsets if all(len(t & b) == 1 for b in blocks)),
            key=lambda t: tuple(sorted(t)),
        )
        got_plain = list(transversals(f))
        checked += 1
        if got_plain != want_plain:
            return checked, _ex(data, f=f, detail="transversal stream differs from subset filter")
        want_y = [t for t in want_plain if ctx.y_frozen <= t]
        got_y = list(transversals(f, require_superset=ctx.y_frozen))
        checked += 1
        if got_y != want_y:
            return checked, _ex(data, f=f, detail="Y-constrained transversal stream wrong")
        if len(got_plain) and len(set(len(t) for t in got_plain)) != 1:
            return checked, _ex(data, f=f, detail="transversal sizes vary")
        if got_plain and len(got_plain[0]) != len(f.image()):
            return checked, _ex(data, f=f, detail="transversal size differs from image size")
    return checked, None


def _check_profile_concrete(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    k = len(ctx.y_set)
    checked = 0
    for f in data.enum():
        prof = profile_of(ctx, f)
        checked += 1
        if len(prof.sizes) != k or any(s != ExtNat(1) for s in prof.sizes) or prof.rest_ones:
            return checked, _ex(data, f=f, profile=prof, detail="member profile must be all ones")
        want = ExtNat(k if k >= 2 else 0)
        if n_value(prof, ExtNat(k)) != want:
            return checked, _ex(data, f=f, detail="small-fiber count degenerate value wrong")
    return checked, None


def _make_green_check(rel: str):
    def run(data: _CtxData, rng: random.Random):
        ctx = data.ctx
        oracle = data.oracle()
        checked = 0
        for f, g in _pair_iter(data, rng, 4, SAMPLE_PAIRS):
            want = oracle.related(rel, f, g)
            got = green_related(ctx, rel, f, g)
            checked += 1
            if want != got:
                return checked, _ex(data, rel=rel, f=f, g=g, char=got, oracle=want)
        return checked, None

    return run


def _check_d_eq_j(data: _CtxData, rng: random.Random):
    from .semigroup import d_related, j_related

    checked = 0
    for f, g in _pair_iter(data, rng, 4, SAMPLE_PAIRS):
        checked += 1
        if d_related(data.ctx, f, g) != j_related(data.ctx, f, g):
            return checked, _ex(data, f=f, g=g, detail="finite D and J disagree")
    return checked, None


def _check_d_compositions(data: _CtxData, rng: random.Random):
    """The two one-sided compositions that define D agree, on the oracle side."""
    oracle = data.oracle()
    elems = data.enum()
    checked = 0
    if data.ctx.n <= 3:
        pairs = itertools.product(elems, repeat=2)
    else:
        pairs = _sample_pairs(rng, elems, SAMPLE_PAIRS // 4)
    for f, g in pairs:
        left_then_right = oracle.d_related(f, g)
        right_then_left = any(
            oracle.r_related(f, w) and oracle.l_related(w, g) for w in elems
        )
        checked += 1
        if left_then_right != right_then_left:
            return checked, _ex(data, f=f, g=g, detail="L-then-R and R-then-L compositions differ")
    return checked, None


def _make_witness_check(side: str):
    def run(data: _CtxData, rng: random.Random):
        ctx = data.ctx
        oracle = data.oracle()
        elems = data.enum()
        checked = 0
        if ctx.n <= 3:
            pairs = itertools.product(elems, repeat=2)
        else:
            pairs = _sample_pairs(rng, elems, SAMPLE_WITNESS_PAIRS)
        for f, g in pairs:
            checked += 1
            if side == "L":
                w = l_below_witness(ctx, f, g)
                if (w is None) != (not oracle.l_below(f, g)):
                    return checked, _ex(data, f=f, g=g, detail="L witness presence vs oracle")
                if w is not None:
                    if compose(w, g).images != f.images:
                        return checked, _ex(data, f=f, g=g, w=w, detail="L witness recomposition")
                    first = next(
                        (h for h in elems if compose(h, g).images == f.images), None
                    )
                    if first is None or w.images != first.images:
                        return checked, _ex(data, f=f, g=g, w=w, detail="L witness not lex-least")
            elif side == "R":
                w = r_below_witness(ctx, f, g)
                if (w is None) != (not oracle.r_below(f, g)):
                    return checked, _ex(data, f=f, g=g, detail="R witness presence vs oracle")
                if w is not None:
                    if compose(g, w).images != f.images:
                        return checked, _ex(data, f=f, g=g, w=w, detail="R witness recomposition")
                    first = next(
                        (h for h in elems if compose(g, h).images == f.images), None
                    )
                    if first is None or w.images != first.images:
                        return checked, _ex(data, f=f, g=g, w=w, detail="R witness not lex-least")
            else:
                pair = j_below_witness(ctx, f, g)
                if (pair is None) != (not oracle.j_below(f, g)):
                    return checked, _ex(data, f=f, g=g, detail="J witness presence vs oracle")
                if pair is not None:
                    h, h2 = pair
                    if compose(h, compose(g, h2)).images != f.images:
                        return checked, _ex(data, f=f, g=g, detail="J witness recomposition")
                    fl1, fl2 = classify(ctx, h), classify(ctx, h2)
                    if not (fl1.in_omegabar and fl2.in_omegabar):
                        return checked, _ex(data, f=f, g=g, detail="J witness left the family")
        return checked, None

    return run


def _check_reg_char(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    elems = data.enum()
    if ctx.n >= 5:
        elems = tuple(elems[rng.randrange(len(elems))] for _ in range(SAMPLE_ELEMENTS))
    checked = 0
    for f in elems:
        checked += 1
        if is_regular(ctx, f) != is_regular_oracle(ctx, f):
            return checked, _ex(data, f=f, detail="regularity characterization vs search")
    return checked, None


def _check_unit_regular(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    elems = data.enum()
    if ctx.n >= 5:
        elems = tuple(elems[rng.randrange(len(elems))] for _ in range(60))
    checked = 0
    for f in elems:
        rep = is_unit_regular(ctx, f)
        checked += 1
        if not (rep.is_regular and rep.is_unit_regular):
            return checked, _ex(data, f=f, detail="finite member not unit-regular")
        u = rep.witness_unit
        if compose(f, compose(u, f)).images != f.images:
            return checked, _ex(data, f=f, u=u, detail="unit witness recomposition")
        if not classify(ctx, u).is_unit_of_omegabar:
            return checked, _ex(data, f=f, u=u, detail="witness is not a unit")
        t = rep.certifying_transversal
        blocks = kernel_partition(f).blocks
        if not (
            ctx.y_frozen <= t
            and all(len(t & b) == 1 for b in blocks)
            and ctx.n - len(t) == ctx.n - len(f.image())
        ):
            return checked, _ex(data, f=f, t=sorted(t), detail="certificate is not a fitting transversal")
        p = rep.witness_pre_inverse
        if p is None or compose(f, compose(p, f)).images != f.images:
            return checked, _ex(data, f=f, detail="pre-inverse witness recomposition")
    return checked, None


def _check_pre_inverse(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    enum_tbar = enumerate_family(ctx, "tbar")

    def pick(family):
        elems = data.enum(family)
        if ctx.n <= 4:
            return elems
        return tuple(elems[rng.randrange(len(elems))] for _ in range(40))

    checked = 0
    for f in pick("sbar"):
        for g in pre_inverses(ctx, f, "tbar", enum=enum_tbar):
            checked += 1
            if not classify(ctx, g).in_sbar:
                return checked, _ex(data, f=f, g=g, detail="pre-inverse escaped sbar")
    for f in pick("fix"):
        for g in pre_inverses(ctx, f, "tbar", enum=enum_tbar):
            checked += 1
            if not classify(ctx, g).in_fix:
                return checked, _ex(data, f=f, g=g, detail="pre-inverse escaped fix")
    return checked, None


def _absorption_sampled(ideal_set, elems, rng, trials: int = 1500) -> bool:
    # randomized stand-in for is_ideal; the full scan is cubic in the family
    # size, which is prohibitive from n = 5 up
    members = ideal_set.members
    have = ideal_set.as_set()
    m = len(elems)
    for _ in range(trials):
        f = members[rng.randrange(len(members))]
        h = elems[rng.randrange(m)]
        h2 = elems[rng.randrange(m)]
        if compose(h, compose(f, h2)).images not in have:
            return False
    return True


def _check_ideal_down_sets(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    elems = data.enum()
    m = len(elems)
    checked = 0
    if ctx.n <= 3:
        subset_masks = range(1, 1 << m)
    else:
        # small random generating sets; their down-sets are already most of
        # the family, so a handful keeps the definitional check affordable
        subset_masks = (
            sum(1 << i for i in rng.sample(range(m), rng.randrange(1, 3)))
            for _ in range(SAMPLE_SUBSETS)
        )
    for mask in subset_masks:
        subset = [elems[i] for i in range(m) if mask >> i & 1]
        down = j_of_f(ctx, subset)
        checked += 1
        if ctx.n <= 4:
            ok = is_ideal(ctx, down.members)
        else:
            ok = _absorption_sampled(down, elems, rng)
        if not ok:
            return checked, _ex(data, subset=[str(f) for f in subset], detail="down-set is not an ideal")
        if ctx.n <= 4 and is_ideal(ctx, subset) and down.as_set() != {f.images for f in subset}:
            return checked, _ex(data, subset=[str(f) for f in subset], detail="ideal not equal to its down-set")
    return checked, None


def _check_ideal_enumerate(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    found = data.ideals()
    n, k = ctx.n, len(ctx.y_set)
    checked = len(found)
    if len(found) != n - k + 1:
        return checked, _ex(data, got=len(found), want=n - k + 1, detail="ideal count")
    sets = [i.as_set() for i in found]
    for a, b in zip(sets, sets[1:]):
        if not a <= b:
            return checked, _ex(data, detail="ideals do not form a chain")
    for ideal in found:
        if ctx.n >= 5 and len(ideal.members) > 150:
            # the fixed-point scan is quadratic in the family; the two small
            # ideals still get it, bigger ones are covered at n <= 4
            continue
        if j_of_f(ctx, ideal.members).as_set() != ideal.as_set():
            return checked, _ex(data, detail="ideal is not its own down-set")
        if ctx.n <= 3 and not is_ideal(ctx, ideal.members):
            return checked, _ex(data, detail="listed ideal fails definitional check")
        checked += 1
    return checked, None


def _check_ideal_thresholds(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    n, k = ctx.n, len(ctx.y_set)
    checked = 0
    for t in range(0, n - k + 1):
        cut = j_st(ctx, k, t)
        want = {f.images for f in data.enum() if image_deficit(ctx, f) <= t}
        checked += 1
        if cut.as_set() != want or cut.warning is not None:
            return checked, _ex(data, t=t, detail="deficit threshold set wrong")
    full = j_st(ctx, k, n - k)
    checked += 1
    if full.as_set() != {f.images for f in data.enum()}:
        return checked, _ex(data, detail="full threshold set is not everything")
    if k >= 2:
        empty = j_st(ctx, k - 1, n - k)
        checked += 1
        if empty.members or empty.warning is None:
            return checked, _ex(data, detail="degenerate threshold should be empty with warning")
    if n > k:
        mid = j_st(ctx, k, 0)
        checked += 1
        if ctx.n <= 4:
            ok = is_ideal(ctx, mid.members)
        else:
            ok = _absorption_sampled(mid, data.enum(), rng)
        if not ok:
            return checked, _ex(data, detail="bottom threshold set is not an ideal")
    return checked, None


def _check_kernel(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    bottom = kernel(ctx)
    found = data.ideals()
    checked = 1
    if bottom.as_set() != found[0].as_set():
        return checked, _ex(data, detail="kernel differs from the least ideal")
    want = {f.images for f in data.enum() if f.image() == ctx.y_frozen}
    checked += 1
    if bottom.as_set() != want:
        return checked, _ex(data, detail="kernel differs from the image-equals-Y members")
    box = data.eggbox()
    bottom_class = box.d_classes[-1]
    members = {
        e.images for row in bottom_class.cells for cell in row for e in cell.elements
    }
    checked += 1
    if members != bottom.as_set():
        return checked, _ex(data, detail="kernel differs from the bottom D-class")
    return checked, None


def _check_eggbox(data: _CtxData, rng: random.Random):
    ctx = data.ctx
    box = data.eggbox()
    n, k = ctx.n, len(ctx.y_set)
    checked = 1
    if len(box.d_classes) != n - k + 1:
        return checked, _ex(data, got=len(box.d_classes), want=n - k + 1, detail="D-class count")
    total = sum(grid.size for grid in box.d_classes)
    if total != len(data.enum()):
        return checked, _ex(data, detail="egg-box does not partition the family")
    deficits = [grid.deficit for grid in box.d_classes]
    if deficits != sorted(deficits, reverse=True):
        return checked, _ex(data, detail="D-classes not in descending deficit order")
    top = box.d_classes[0]
    top_members = {e.images for row in top.cells for cell in row for e in cell.elements}
    if top_members != {u.images for u in units(ctx)}:
        return checked, _ex(data, detail="top D-class is not the unit group")
    for grid in box.d_classes:
        cell_sizes = {len(c.elements) for row in grid.cells for c in row}
        checked += 1
        if len(cell_sizes) != 1:
            return checked, _ex(data, deficit=grid.deficit, detail="H-cells in one D-class differ in size")
        for row in grid.cells:
            if not any(c.has_idempotent for c in row):
                return checked, _ex(data, deficit=grid.deficit, detail="an R-row has no idempotent")
        for col in zip(*grid.cells):
            if not any(c.has_idempotent for c in col):
                return checked, _ex(data, deficit=grid.deficit, detail="an L-column has no idempotent")
    want_pairs = {
        (i, j)
        for i in range(len(box.d_classes))
        for j in range(len(box.d_classes))
        if i != j and box.d_classes[i].deficit <= box.d_classes[j].deficit
    }
    checked += 1
    if set(box.j_below_pairs) != want_pairs:
        return checked, _ex(data, detail="order pairs differ from deficit comparisons")
    for grid in box.d_classes:
        cells = [c for row in grid.cells for c in row]
        for _ in range(min(20, len(cells))):
            cell = cells[rng.randrange(len(cells))]
            e = cell.elements[rng.randrange(len(cell.elements))]
            e2 = cell.elements[rng.randrange(len(cell.elements))]
            checked += 1
            if not green_related(ctx, "H", e, e2):
                return checked, _ex(data, f=e, g=e2, detail="cellmates are not H-related")
    return checked, None


CTX_CHECKS: list[tuple[str, object]] = [
    ("count.family", _check_count_family),
    ("count.units", _check_count_units),
    ("core.assoc", _check_assoc),
    ("core.closure", _check_closure),
    ("core.membership", _check_membership),
    ("core.restriction", _check_restriction),
    ("core.transversals", _check_transversals),
    ("profile.concrete", _check_profile_concrete),
    ("green.L", _make_green_check("L")),
    ("green.R", _make_green_check("R")),
    ("green.H", _make_green_check("H")),
    ("green.D", _make_green_check("D")),
    ("green.J", _make_green_check("J")),
    ("green.D_eq_J", _check_d_eq_j),
    ("green.D_compositions", _check_d_compositions),
    ("witness.L", _make_witness_check("L")),
    ("witness.R", _make_witness_check("R")),
    ("witness.J", _make_witness_check("J")),
    ("reg.char", _check_reg_char),
    ("reg.unit_regular", _check_unit_regular),
    ("reg.pre_inverse", _check_pre_inverse),
    ("ideal.down_sets", _check_ideal_down_sets),
    ("ideal.enumerate", _check_ideal_enumerate),
    ("ideal.thresholds", _check_ideal_thresholds),
    ("ideal.kernel", _check_kernel),
    ("eggbox.grid", _check_eggbox),
]


# --- global checks -----------------------------------------------------------


def _check_extnat_arith(rng: random.Random):
    vals = [ExtNat(v) for v in range(0, 6)] + [OMEGA]
    checked = 0
    for a, b in itertools.product(vals, repeat=2):
        checked += 1
        if a + b != b + a:
            return checked, {"detail": f"addition not commutative at {a},{b}"}
        if (a < b) + (a == b) + (b < a) != 1:
            return checked, {"detail": f"order not trichotomous at {a},{b}"}
        if (a + b).is_omega != (a.is_omega or b.is_omega):
            return checked, {"detail": f"absorption wrong at {a},{b}"}
    for a, b, c in itertools.product(vals, repeat=3):
        checked += 1
        if (a + b) + c != a + (b + c):
            return checked, {"detail": "addition not associative"}
        if a <= b and b <= c and not a <= c:
            return checked, {"detail": "order not transitive"}
    if sum(vals[1:4], ExtNat(0)) != ExtNat(1 + 2 + 3):
        return checked, {"detail": "finite sum wrong"}
    if sum([OMEGA, ExtNat(2)], ExtNat(0)) != OMEGA:
        return checked, {"detail": "omega sum wrong"}
    return checked, None


def _check_parse_roundtrip(rng: random.Random):
    corpus = ["[0]", "[1 0 0]", "[0 1 2 3]", "[2 2 2]"]
    checked = 0
    for text in corpus:
        f = parse_transformation(text)
        checked += 1
        if str(f) != text:
            return checked, {"detail": f"text round-trip failed on {text}"}
        if transformation_from_json(transformation_to_json(f)).images != f.images:
            return checked, {"detail": f"json round-trip failed on {text}"}
    for bad in ["", "[]", "[a b]", "1 0 0", "[3 0 0]"]:
        checked += 1
        try:
            parse_transformation(bad)
        except ValueError:
            continue
        return checked, {"detail": f"bad literal {bad!r} accepted"}
    for text in ["[1 1]", "[w]", "[w 1 1]", "[w w]+rest1", "[]+rest1", "[2 1]+rest1"]:
        p = parse_profile(text)
        checked += 1
        if str(p) != text:
            return checked, {"detail": f"profile round-trip failed on {text}"}
    for bad in ["", "w 1", "[x]", "[0 1]", "[1]+rest2"]:
        checked += 1
        try:
            parse_profile(bad)
        except ValueError:
            continue
        return checked, {"detail": f"bad profile {bad!r} accepted"}
    return checked, None


def _check_profile_d_fixed(rng: random.Random):
    checked = 0
    pw = parse_profile
    m = d_condition(pw("[2 1 1]"), pw("[1 2 1]"))
    checked += 1
    if m != {0: 1, 1: 0, 2: 2} or not matching_is_valid(pw("[2 1 1]"), pw("[1 2 1]"), m):
        return checked, {"detail": "finite permutation matching wrong"}
    checked += 1
    if d_condition(pw("[w 1 1]"), pw("[w w 1]")) is not None:
        return checked, {"detail": "distinct multisets matched"}
    checked += 1
    if d_condition(pw("[w]+rest1"), pw("[w w]+rest1")) is not None:
        return checked, {"detail": "one and two infinite fibers matched"}
    m = d_condition(pw("[w 1]+rest1"), pw("[w]+rest1"))
    checked += 1
    if m != {0: 0, 1: None} or not matching_is_valid(pw("[w 1]+rest1"), pw("[w]+rest1"), m):
        return checked, {"detail": "rest absorption matching wrong"}
    checked += 1
    try:
        d_condition(pw("[1 1]"), pw("[1 1 1]"))
    except DimensionError:
        pass
    else:
        return checked, {"detail": "length mismatch not rejected"}
    checked += 1
    try:
        d_condition(pw("[1 1]"), pw("[1 1]+rest1"))
    except DimensionError:
        pass
    else:
        return checked, {"detail": "cardinality mismatch not rejected"}
    return checked, None


def _check_profile_j_fixed(rng: random.Random):
    checked = 0
    pw = parse_profile
    cases_present = [
        ("[w 1 1]", "[w w 1]"),
        ("[w w 1]", "[w 1 1]"),
        ("[1 1]", "[1 1]"),
        ("[w]", "[2 2]"),
        ("[2 2]", "[2 1 1]"),
        ("[w]+rest1", "[w w]+rest1"),
        ("[w w]+rest1", "[w]+rest1"),
        ("[w 1]+rest1", "[w]+rest1"),
        ("[w]", "[1 1]+rest1"),
    ]
    for a, b in cases_present:
        p, q = pw(a), pw(b)
        cov = j_condition(p, q)
        checked += 1
        if cov is None or not cover_is_valid(p, q, cov):
            return checked, {"detail": f"packing {b} into {a} should work"}
    cases_absent = [
        ("[2 2]", "[w]"),
        ("[1 1 1]", "[2 1]"),
        ("[2]", "[1 1 1]"),
        ("[2 2]", "[1 1]+rest1"),
        ("[3 1]", "[2 2]"),  # equal totals, still unpackable
    ]
    for a, b in cases_absent:
        checked += 1
        if j_condition(pw(a), pw(b)) is not None:
            return checked, {"detail": f"packing {b} into {a} should fail"}
    checked += 1
    try:
        j_condition(pw("[1 1 1 1 1 1 1 1 1]"), pw("[1]"))
        return checked, {"detail": "budget not enforced"}
    except BudgetError:
        pass
    return checked, None


def _check_profile_separation(rng: random.Random):
    checked = 0
    pw = parse_profile
    pairs = [
        (pw("[w 1 1]"), pw("[w w 1]")),
        (pw("[w]+rest1"), pw("[w w]+rest1")),
        (pw("[w w]+rest1"), pw("[w]+rest1")),
    ]
    for p, q in pairs:
        fwd, bwd = j_condition(p, q), j_condition(q, p)
        checked += 1
        if fwd is None or bwd is None:
            return checked, {"detail": f"{p} and {q} should divide each other"}
        if not (cover_is_valid(p, q, fwd) and cover_is_valid(q, p, bwd)):
            return checked, {"detail": f"invalid cover between {p} and {q}"}
        if d_condition(p, q) is not None:
            return checked, {"detail": f"{p} and {q} should not be in bijection"}
    checked += 1
    if n_value(pw("[w 1 1]"), OMEGA) != ExtNat(2):
        return checked, {"detail": "two small fibers expected"}
    if n_value(pw("[w]+rest1"), OMEGA) != OMEGA:
        return checked, {"detail": "rest tail should dominate the small-fiber count"}
    if n_value(pw("[w w]"), OMEGA) != ExtNat(0):
        return checked, {"detail": "no small fibers expected"}
    if n_value(pw("[1 1]"), 2) != ExtNat(2) or n_value(pw("[1]"), 1) != ExtNat(0):
        return checked, {"detail": "finite ambient count wrong"}
    return checked, None


GLOBAL_CHECKS: list[tuple[str, object]] = [
    ("extnat.arith", _check_extnat_arith),
    ("parse.roundtrip", _check_parse_roundtrip),
    ("profile.d_fixed", _check_profile_d_fixed),
    ("profile.j_fixed", _check_profile_j_fixed),
    ("profile.separation", _check_profile_separation),
]


# --- runner -------------------------------------------------------------------


def _rng_for(seed: int, label: str, n: int = -1, ys: tuple[int, ...] = ()) -> random.Random:
    key = f"{seed}:{label}:{n}:{','.join(map(str, ys))}"
    return random.Random(key)


def _run_context(args) -> list[tuple[str, str, int, dict | None]]:
    seed, n, ys = args
    _apply_env_mutation()
    data = _CtxData(Context(n, ys))
    rows = []
    for label, fn in CTX_CHECKS:
        rng = _rng_for(seed, label, n, ys)
        try:
            checked, ex = fn(data, rng)
            status = "pass" if ex is None else "fail"
        except BudgetError as e:
            checked, ex, status = 0, {"n": n, "y": ",".join(map(str, ys)), "error": str(e)}, "resource"
        except Exception as e:  # a crash is a counterexample, not a harness stop
            checked, ex, status = 0, {"n": n, "y": ",".join(map(str, ys)), "error": repr(e)}, "fail"
        rows.append((label, status, checked, ex))
    return rows


def run_verify(cfg: VerifyConfig) -> dict:
    """Run every check and return the report as plain data."""
    _apply_env_mutation()
    ctxs = _contexts(cfg)
    shard_args = [(cfg.seed, n, ys) for n, ys in ctxs]
    if cfg.jobs > 1 and len(shard_args) > 1:
        with _mp_context("fork").Pool(processes=cfg.jobs) as pool:
            shard_rows = pool.map(_run_context, shard_args)
    else:
        shard_rows = [_run_context(a) for a in shard_args]

    results = []
    for idx, (label, _fn) in enumerate(CTX_CHECKS):
        status, checked, ex = "pass", 0, None
        for rows in shard_rows:
            row_label, row_status, row_checked, row_ex = rows[idx]
            assert row_label == label
            checked += row_checked
            if row_status == "fail" and status != "fail":
                status, ex = "fail", row_ex
            elif row_status == "resource" and status == "pass":
                status, ex = "resource", row_ex
        results.append({"label": label, "status": status, "checked": checked, "counterexample": ex})

    for label, fn in GLOBAL_CHECKS:
        rng = _rng_for(cfg.seed, label)
        try:
            checked, ex = fn(rng)
            status = "pass" if ex is None else "fail"
        except BudgetError as e:
            checked, ex, status = 0, {"error": str(e)}, "resource"
        except Exception as e:
            checked, ex, status = 0, {"error": repr(e)}, "fail"
        results.append({"label": label, "status": status, "checked": checked, "counterexample": ex})

    summary = {
        "checks": len(results),
        "pass": sum(1 for r in results if r["status"] == "pass"),
        "fail": sum(1 for r in results if r["status"] == "fail"),
        "resource": sum(1 for r in results if r["status"] == "resource"),
    }
    report = {
        "schema": REPORT_SCHEMA,
        "config": {"max_n": cfg.max_n, "sample_n5": cfg.sample_n5, "seed": cfg.seed},
        "contexts": [f"n={n} Y={{{','.join(map(str, ys))}}}" for n, ys in ctxs],
        "results": results,
        "summary": summary,
    }
    if cfg.report_path:
        with open(cfg.report_path, "w") as fh:
            fh.write(render_report_json(report))
    return report


def render_report_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def render_report_text(report: dict) -> str:
    lines = [f"schema {report['schema']}  seed {report['config']['seed']}  max_n {report['config']['max_n']}"]
    for row in report["results"]:
        mark = {"pass": "pass", "fail": "FAIL", "resource": "RESOURCE"}[row["status"]]
        line = f"{mark:8s} {row['label']:22s} checked={row['checked']}"
        if row["counterexample"]:
            line += f"  {json.dumps(row['counterexample'])}"
        lines.append(line)
    s = report["summary"]
    lines.append(f"{s['pass']}/{s['checks']} passed, {s['fail']} failed, {s['resource']} hit resource limits")
    return "\n".join(lines) + "\n"


def exit_code_for(report: dict) -> int:
    if report["summary"]["fail"]:
        return 1
    if report["summary"]["resource"]:
        return 3
    return 0
