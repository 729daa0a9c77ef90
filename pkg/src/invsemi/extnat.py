"""Naturals extended by a single countable infinity, and fiber-size profiles.

An ExtNat is either a nonnegative int or omega (written ``w`` in text form).
Arithmetic is absorbing: w + k = w.  Order is total with w on top.

A FiberProfile records, per index, the size of one fiber of a map restricted
to the distinguished subset.  The optional ``rest_ones`` flag means "plus
countably many further fibers of size 1", which is how profiles over an
infinite subset are written down at desk scale: only the interesting fiber
sizes are listed and the tail of singletons is kept symbolic.

Two comparisons on profiles drive everything downstream:

  d_condition(p, q)   is there a size-preserving bijection of index sets?
  j_condition(p, q)   can q's fibers be packed into p's capacities, blockwise?

The packing question is one-sided; the symmetric closure of it is strictly
coarser than the bijection question once profiles carry infinite entries,
which is the separation the profile calculus exists to exhibit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetError, DimensionError, DomainError

# Backtracking guard: explicit index lists longer than this are refused.
MAX_EXPLICIT_INDICES = 8


def _co(x: object) -> "ExtNat | None":
    if isinstance(x, ExtNat):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return ExtNat(x)
    return None


@dataclass(frozen=True, slots=True, eq=False)
class ExtNat:
    """A natural number or omega; ``value=None`` encodes omega."""

    value: int | None = 0

    def __post_init__(self) -> None:
        v = self.value
        if v is not None and (not isinstance(v, int) or isinstance(v, bool) or v < 0):
            raise DomainError(f"extended natural must be a nonnegative int or None, got {v!r}")

    @property
    def is_omega(self) -> bool:
        return self.value is None

    def __eq__(self, other: object) -> bool:
        o = _co(other)
        if o is None:
            return NotImplemented
        return self.value == o.value

    def __hash__(self) -> int:
        return hash(("extnat", self.value))

    def __lt__(self, other: object) -> bool:
        o = _co(other)
        if o is None:
            return NotImplemented
        if self.is_omega:
            return False
        if o.is_omega:
            return True
        return self.value < o.value

    def __le__(self, other: object) -> bool:
        o = _co(other)
        if o is None:
            return NotImplemented
        return self < o or self == o

    def __gt__(self, other: object) -> bool:
        o = _co(other)
        if o is None:
            return NotImplemented
        return o < self

    def __ge__(self, other: object) -> bool:
        o = _co(other)
        if o is None:
            return NotImplemented
        return o <= self

    def __add__(self, other: object) -> "ExtNat":
        o = _co(other)
        if o is None:
            return NotImplemented
        if self.is_omega or o.is_omega:
            return OMEGA
        return ExtNat(self.value + o.value)

    __radd__ = __add__

    def __str__(self) -> str:
        return "w" if self.is_omega else str(self.value)

    def __repr__(self) -> str:
        return f"ExtNat({self.value!r})"


OMEGA = ExtNat(None)
ZERO = ExtNat(0)
ONE = ExtNat(1)


def as_extnat(x: "ExtNat | int") -> ExtNat:
    out = _co(x)
    if out is None:
        raise DomainError(f"cannot interpret {x!r} as an extended natural")
    return out


@dataclass(frozen=True, slots=True)
class FiberProfile:
    """Indexed fiber sizes, each at least 1, plus an optional tail of 1s."""

    sizes: tuple[ExtNat, ...]
    rest_ones: bool = False

    def __post_init__(self) -> None:
        sizes = tuple(as_extnat(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        for s in sizes:
            if not s >= ONE:
                raise DomainError(f"fiber size must be at least 1, got {s}")

    def __str__(self) -> str:
        return format_profile(self)


@dataclass(frozen=True, slots=True)
class IndexedCover:
    """A packing of one profile's fibers into another's capacities.

    ``blocks[i]`` lists the right-profile indices absorbed by left index i;
    empty blocks are allowed.  The remaining fields route material through
    the symbolic rest parts: ``to_rest`` holds size-1 right indices absorbed
    one-per-slot by the left rest, ``rest_to_rest`` matches the two rest
    tails one-to-one, and ``rest_to_block`` names the explicit left index
    swallowing the right rest tail when the left profile has no rest.
    """

    blocks: tuple[frozenset[int], ...]
    to_rest: frozenset[int] = frozenset()
    rest_to_rest: bool = False
    rest_to_block: int | None = None

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for b in self.blocks:
            if b & seen:
                raise DomainError("cover blocks must be pairwise disjoint")
            seen |= b
        if self.to_rest & seen:
            raise DomainError("an index cannot be in a block and in the rest part")
        if self.rest_to_rest and self.rest_to_block is not None:
            raise DomainError("rest tail routed two ways at once")


def d_condition(p: FiberProfile, q: FiberProfile) -> dict[int, int | None] | None:
    """Size-preserving bijection between the index sets, or None.

    Returned dict sends each explicit index of p to the matching explicit
    index of q, or to None when it matches into q's rest tail (size 1 only).
    Explicit q indices missing from the values are size-1 entries matched
    into p's rest tail.  Raises DimensionError when the index sets cannot be
    in bijection at all (one finite, one not, or finite of different sizes).
    """
    if p.rest_ones != q.rest_ones:
        raise DimensionError("profiles index sets of different cardinality (rest flags differ)")
    if not p.rest_ones and len(p.sizes) != len(q.sizes):
        raise DimensionError(
            f"profiles index {len(p.sizes)} and {len(q.sizes)} fibers; no bijection exists"
        )
    used = [False] * len(q.sizes)
    out: dict[int, int | None] = {}
    for i, s in enumerate(p.sizes):
        hit = next((j for j, t in enumerate(q.sizes) if not used[j] and t == s), None)
        if hit is not None:
            used[hit] = True
            out[i] = hit
        elif p.rest_ones and s == ONE:
            out[i] = None
        else:
            return None
    for j, u in enumerate(used):
        if not u and not (q.rest_ones and q.sizes[j] == ONE):
            return None
    return out


def matching_is_valid(p: FiberProfile, q: FiberProfile, m: dict[int, int | None]) -> bool:
    """Check a claimed d-matching without trusting how it was produced."""
    if p.rest_ones != q.rest_ones:
        return False
    if set(m) != set(range(len(p.sizes))):
        return False
    picked = [j for j in m.values() if j is not None]
    if len(picked) != len(set(picked)):
        return False
    for i, j in m.items():
        if j is None:
            if not (p.rest_ones and p.sizes[i] == ONE):
                return False
        else:
            if not 0 <= j < len(q.sizes) or q.sizes[j] != p.sizes[i]:
                return False
    leftover = set(range(len(q.sizes))) - set(picked)
    return all(q.rest_ones and q.sizes[j] == ONE for j in leftover)


def j_condition(p: FiberProfile, q: FiberProfile) -> IndexedCover | None:
    """Pack all of q's fibers into p's capacities, or None when impossible.

    Each explicit index of p is a bin of capacity p.sizes[i]; a valid cover
    assigns every explicit index of q to some bin with blockwise sums within
    capacity.  Rest tails: q's tail needs either p's tail (matched 1-to-1)
    or an explicit infinite bin; p's tail additionally absorbs explicit
    size-1 entries of q, one per slot.  The first cover in a fixed search
    order is returned, so equal inputs give equal covers.
    """
    k, m = len(p.sizes), len(q.sizes)
    if k > MAX_EXPLICIT_INDICES or m > MAX_EXPLICIT_INDICES:
        raise BudgetError(
            f"profile comparison beyond {MAX_EXPLICIT_INDICES} explicit indices ({k} vs {m})"
        )
    rest_to_rest = False
    rest_to_block: int | None = None
    if q.rest_ones:
        if p.rest_ones:
            rest_to_rest = True
        else:
            rest_to_block = next((i for i, s in enumerate(p.sizes) if s.is_omega), None)
            if rest_to_block is None:
                return None
    # With a rest tail on the left, explicit 1s on the right go there: each
    # occupies one of infinitely many free slots and can never hurt packing.
    to_rest = frozenset(j for j in range(m) if p.rest_ones and q.sizes[j] == ONE)
    entries = [(j, q.sizes[j]) for j in range(m) if j not in to_rest]

    assign = _pack(entries, list(p.sizes))
    if assign is None:
        return None
    blocks = tuple(
        frozenset(j for j, b in assign.items() if b == i) for i in range(k)
    )
    return IndexedCover(
        blocks=blocks, to_rest=to_rest, rest_to_rest=rest_to_rest, rest_to_block=rest_to_block
    )


def _pack(entries: list[tuple[int, ExtNat]], caps: list[ExtNat]) -> dict[int, int] | None:
    """First-found assignment of entries to capacity bins, or None."""
    if not entries:
        return {}
    # Fast path: all finite and exactly tight, so first-fit-decreasing either
    # finishes or says nothing (packing may still exist; fall through).
    if all(not s.is_omega for _, s in entries) and all(not c.is_omega for c in caps):
        total = sum(s.value for _, s in entries)
        if total > sum(c.value for c in caps):
            return None
        if total == sum(c.value for c in caps):
            greedy = _first_fit_decreasing(entries, caps)
            if greedy is not None:
                return greedy
    sums = [ZERO] * len(caps)
    assign: dict[int, int] = {}

    def rec(k: int) -> bool:
        if k == len(entries):
            return True
        j, s = entries[k]
        for b in range(len(caps)):
            ns = sums[b] + s
            if ns <= caps[b]:
                keep = sums[b]
                sums[b] = ns
                assign[j] = b
                if rec(k + 1):
                    return True
                sums[b] = keep
                del assign[j]
        return False

    return assign if rec(0) else None


def _first_fit_decreasing(
    entries: list[tuple[int, ExtNat]], caps: list[ExtNat]
) -> dict[int, int] | None:
    room = [c.value for c in caps]
    assign: dict[int, int] = {}
    for j, s in sorted(entries, key=lambda e: (-e[1].value, e[0])):
        b = next((i for i, r in enumerate(room) if s.value <= r), None)
        if b is None:
            return None
        room[b] -= s.value
        assign[j] = b
    return assign


def cover_is_valid(p: FiberProfile, q: FiberProfile, cover: IndexedCover) -> bool:
    """Check a claimed j-cover without trusting how it was produced."""
    k, m = len(p.sizes), len(q.sizes)
    if len(cover.blocks) != k:
        return False
    placed: set[int] = set(cover.to_rest)
    for b in cover.blocks:
        placed |= b
    if placed != set(range(m)):
        return False
    if cover.to_rest and not p.rest_ones:
        return False
    if any(q.sizes[j] != ONE for j in cover.to_rest):
        return False
    if cover.rest_to_rest and not (q.rest_ones and p.rest_ones):
        return False
    if q.rest_ones:
        # the right tail must be routed exactly one way
        if cover.rest_to_rest == (cover.rest_to_block is not None):
            return False
        if cover.rest_to_block is not None and not 0 <= cover.rest_to_block < k:
            return False
    elif cover.rest_to_rest or cover.rest_to_block is not None:
        return False
    for i in range(k):
        load: ExtNat = ZERO
        for j in cover.blocks[i]:
            load = load + q.sizes[j]
        if cover.rest_to_block == i:
            load = load + OMEGA
        if not load <= p.sizes[i]:
            return False
    return True


def n_value(p: FiberProfile, ambient: "ExtNat | int") -> ExtNat:
    """How many indexed fibers are strictly smaller than the ambient size."""
    amb = as_extnat(ambient)
    if p.rest_ones and ONE < amb:
        return OMEGA
    return ExtNat(sum(1 for s in p.sizes if s < amb))


def profile_of(ctx, f) -> FiberProfile:
    """Fiber sizes of f restricted to Y, indexed along sorted(Y).

    Only defined for maps carrying Y onto Y, where every fiber over Y is
    nonempty; anything else raises DomainError.
    """
    from .core import classify  # local import keeps module load order flat

    if not classify(ctx, f).in_omegabar:
        raise DomainError(f"{f} does not carry Y onto Y; profile undefined")
    ys = ctx.y_set
    counts = [sum(1 for z in ys if f.images[z] == y) for y in ys]
    return FiberProfile(tuple(ExtNat(c) for c in counts))


# --- text form --------------------------------------------------------------
# "[w 1 1]" lists explicit sizes; a "+rest1" suffix marks the symbolic tail.


def format_profile(p: FiberProfile) -> str:
    body = "[" + " ".join(str(s) for s in p.sizes) + "]"
    return body + "+rest1" if p.rest_ones else body


def parse_profile(text: str) -> FiberProfile:
    s = text.strip()
    rest = False
    if s.endswith("+rest1"):
        rest = True
        s = s[: -len("+rest1")].strip()
    if not (s.startswith("[") and s.endswith("]")):
        raise ValueError(f"expected profile like '[w 1 1]' or '[w]+rest1', got {text!r}")
    sizes: list[ExtNat] = []
    for tok in s[1:-1].replace(",", " ").split():
        if tok == "w":
            sizes.append(OMEGA)
        else:
            try:
                sizes.append(ExtNat(int(tok)))
            except (ValueError, DomainError):
                raise ValueError(f"bad profile entry {tok!r} in {text!r}") from None
    try:
        return FiberProfile(tuple(sizes), rest_ones=rest)
    except DomainError as e:
        raise ValueError(str(e)) from None
