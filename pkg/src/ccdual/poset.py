"""Finite posets encoded as bitmasks.

Elements are the integers ``0..size-1``.  A poset stores, for every
element ``i``, the bitmask ``up[i]`` of all ``j`` with ``i <= j``.  Subsets
of the carrier are plain Python ints used as bitmasks, so unions,
intersections and containment are single integer operations.
"""

from __future__ import annotations

import itertools
from dataclasses import InitVar, dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import DimensionError, PreconditionError, ResourceError, ValidationError

DEFAULT_CHAIN_CAP = 1_000_000
DEFAULT_HOM_CAP = 100_000
DEFAULT_UPSET_CAP = 1_000_000


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(elements: Iterable[int]) -> int:
    m = 0
    for x in elements:
        m |= 1 << x
    return m


def popcount(mask: int) -> int:
    return mask.bit_count()


@dataclass(frozen=True)
class Poset:
    """A finite partial order; ``up[i]`` is the mask of ``{j | i <= j}``."""

    up: tuple
    labels: tuple | None = field(default=None, compare=False)
    validate: InitVar[bool] = True

    def __post_init__(self, validate):
        object.__setattr__(self, "up", tuple(self.up))
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))
            if len(self.labels) != len(self.up):
                raise DimensionError("labels", f"{len(self.labels)} labels for {len(self.up)} elements")
        if validate:
            self._check_axioms()

    def _check_axioms(self):
        n = len(self.up)
        full = (1 << n) - 1
        for i, u in enumerate(self.up):
            if u & ~full:
                raise DimensionError("relation", f"row {i} mentions elements outside 0..{n - 1}")
            if not (u >> i) & 1:
                raise ValidationError("reflexivity violated", f"element {i} is not <= itself")
        for i, u in enumerate(self.up):
            for j in bits(u & ~(1 << i)):
                if (self.up[j] >> i) & 1:
                    raise ValidationError("antisymmetry violated", f"elements {i} and {j}")
                if self.up[j] & ~u:
                    raise ValidationError("transitivity violated", f"at {i} <= {j}")

    # construction

    @classmethod
    def from_leq(cls, table: Sequence[Sequence[bool]], labels=None) -> "Poset":
        n = len(table)
        up = []
        for i, row in enumerate(table):
            if len(row) != n:
                raise DimensionError("leq table", f"row {i} has length {len(row)}, expected {n}")
            up.append(mask_of(j for j, v in enumerate(row) if v))
        return cls(tuple(up), labels)

    @classmethod
    def from_relation(cls, n: int, rel, labels=None) -> "Poset":
        return cls(tuple(mask_of(j for j in range(n) if rel(i, j)) for i in range(n)), labels)

    @classmethod
    def from_covers(cls, n: int, covers: Iterable[Sequence[int]], labels=None) -> "Poset":
        """Reflexive-transitive closure of the relation ``i < j`` for each pair in ``covers``."""
        succ = [0] * n
        for pair in covers:
            if len(pair) != 2:
                raise DimensionError("covers", f"pair {pair!r} does not have two entries")
            i, j = pair
            if not (0 <= i < n and 0 <= j < n):
                raise DimensionError("covers", f"pair {pair!r} out of range for size {n}")
            succ[i] |= 1 << j
        up = [(1 << i) | succ[i] for i in range(n)]
        changed = True
        while changed:
            changed = False
            for i in range(n):
                acc = up[i]
                for j in bits(up[i] & ~(1 << i)):
                    acc |= up[j]
                if acc != up[i]:
                    up[i] = acc
                    changed = True
        return cls(tuple(up), labels)

    # basic structure

    @property
    def size(self) -> int:
        return len(self.up)

    @property
    def full(self) -> int:
        return (1 << len(self.up)) - 1

    @cached_property
    def down(self) -> tuple:
        d = [1 << i for i in range(self.size)]
        for i, u in enumerate(self.up):
            for j in bits(u & ~(1 << i)):
                d[j] |= 1 << i
        return tuple(d)

    def leq(self, i: int, j: int) -> bool:
        return bool((self.up[i] >> j) & 1)

    def leq_table(self) -> list:
        return [[bool((u >> j) & 1) for j in range(self.size)] for u in self.up]

    def label(self, i: int) -> str:
        return str(i) if self.labels is None else str(self.labels[i])

    @cached_property
    def upper_covers(self) -> tuple:
        out = []
        for i, u in enumerate(self.up):
            strict = u & ~(1 << i)
            cov = strict
            for j in bits(strict):
                cov &= ~(self.up[j] & ~(1 << j))
            out.append(cov)
        return tuple(out)

    @cached_property
    def lower_covers(self) -> tuple:
        d = [0] * self.size
        for i, c in enumerate(self.upper_covers):
            for j in bits(c):
                d[j] |= 1 << i
        return tuple(d)

    def covers(self) -> list:
        """Hasse diagram edges ``(i, j)`` meaning ``j`` covers ``i``."""
        return [(i, j) for i, c in enumerate(self.upper_covers) for j in bits(c)]

    @cached_property
    def linear_extension(self) -> tuple:
        return tuple(sorted(range(self.size), key=lambda i: (self.down[i].bit_count(), i)))

    def maximal(self) -> int:
        return mask_of(i for i, u in enumerate(self.up) if u == 1 << i)

    def minimal(self) -> int:
        return mask_of(i for i, d in enumerate(self.down) if d == 1 << i)

    def check_mask(self, mask: int, what="subset") -> int:
        if mask < 0 or mask >> self.size:
            raise DimensionError(what, f"mask {mask:#x} exceeds carrier of size {self.size}")
        return mask

    def is_upset(self, mask: int) -> bool:
        return up_set(self, mask) == mask

    def is_downset(self, mask: int) -> bool:
        return down_set(self, mask) == mask

    def is_chain(self, mask: int) -> bool:
        for x in bits(mask):
            if mask & ~(self.up[x] | self.down[x]):
                return False
        return True

    def induced(self, mask: int) -> tuple:
        """Subposet on ``mask``; returns ``(poset, kept)`` with ``kept[k]`` the old index."""
        self.check_mask(mask)
        kept = tuple(bits(mask))
        pos = {x: k for k, x in enumerate(kept)}
        up = tuple(mask_of(pos[y] for y in bits(self.up[x] & mask)) for x in kept)
        labels = None if self.labels is None else tuple(self.labels[x] for x in kept)
        return Poset(up, labels, validate=False), kept

    def opposite(self) -> "Poset":
        return Poset(self.down, self.labels, validate=False)

    def __repr__(self):
        return f"Poset(size={self.size}, covers={self.covers()})"


# named families

def empty_poset() -> Poset:
    return Poset(())


def chain_poset(k: int) -> Poset:
    return Poset(tuple(mask_of(range(i, k)) for i in range(k)))


def antichain_poset(k: int) -> Poset:
    return Poset(tuple(1 << i for i in range(k)))


def diamond_poset() -> Poset:
    """The four element Boolean lattice 2x2 as a poset: 0 < 1, 2 < 3."""
    return Poset.from_covers(4, [(0, 1), (0, 2), (1, 3), (2, 3)], labels=("00", "01", "10", "11"))


def disjoint_union(p: Poset, q: Poset) -> Poset:
    shift = p.size
    return Poset(p.up + tuple(u << shift for u in q.up), validate=False)


# order operations

def up_set(p: Poset, a: int) -> int:
    p.check_mask(a)
    out = 0
    for x in bits(a):
        out |= p.up[x]
    return out


def down_set(p: Poset, a: int) -> int:
    p.check_mask(a)
    out = 0
    for x in bits(a):
        out |= p.down[x]
    return out


def is_root_system(p: Poset) -> bool:
    return all(p.is_chain(u) for u in p.up)


def _require_root_system(p: Poset, op: str):
    if not is_root_system(p):
        raise PreconditionError("not a root system", f"{op} needs every principal upset to be a chain")


def depth(p: Poset, x: int) -> int:
    _require_root_system(p, "depth")
    return p.up[x].bit_count()


def depth_of(p: Poset) -> int:
    _require_root_system(p, "depth_of")
    return max((u.bit_count() for u in p.up), default=0)


def depth_mask(p: Poset, n: int) -> int:
    _require_root_system(p, "restrict_to_depth")
    return mask_of(i for i, u in enumerate(p.up) if u.bit_count() <= n)


def restrict_to_depth(p: Poset, n: int) -> Poset:
    """Subposet of the elements of depth at most ``n``."""
    return p.induced(depth_mask(p, n))[0]


@dataclass(frozen=True)
class Chain:
    """A nonempty chain of ``parent`` stored as sorted element indices."""

    elements: tuple
    parent: Poset = field(repr=False, hash=False)

    def __post_init__(self):
        els = tuple(self.elements)
        object.__setattr__(self, "elements", els)
        if not els:
            raise ValidationError("empty chain")
        if any(a >= b for a, b in zip(els, els[1:])):
            raise ValidationError("chain not canonical", f"{els} is not strictly increasing")
        if els[-1] >= self.parent.size or els[0] < 0:
            raise DimensionError("chain", f"{els} out of range for size {self.parent.size}")
        if not self.parent.is_chain(mask_of(els)):
            raise ValidationError("not totally ordered", f"{els}")

    @classmethod
    def from_mask(cls, parent: Poset, mask: int) -> "Chain":
        return cls(tuple(bits(mask)), parent)

    @property
    def mask(self) -> int:
        return mask_of(self.elements)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def label(self) -> str:
        return "{" + ",".join(self.parent.label(x) for x in self.elements) + "}"


def chain_masks(p: Poset, cap: int = DEFAULT_CHAIN_CAP, max_size: int | None = None) -> list:
    """All nonempty chains of ``p`` as masks, sorted lexicographically by element list."""
    lin = p.linear_extension
    strict_up = [u & ~(1 << i) for i, u in enumerate(p.up)]
    out = []
    limit = p.size if max_size is None else max_size

    def extend(mask, last, size):
        out.append(mask)
        if len(out) > cap:
            raise ResourceError("chain_cap", cap, len(out))
        if size >= limit:
            return
        for y in bits(strict_up[last]):
            extend(mask | (1 << y), y, size + 1)

    # starting from each element and only moving strictly upwards visits every chain once
    if limit > 0:
        for x in lin:
            extend(1 << x, x, 1)
    out.sort(key=lambda m: tuple(bits(m)))
    return out


def enumerate_chains(p: Poset, cap: int = DEFAULT_CHAIN_CAP) -> list:
    return [Chain.from_mask(p, m) for m in chain_masks(p, cap)]


# maps between posets

@dataclass(frozen=True)
class PMorph:
    """A total map ``source -> target`` given as a tuple of target indices."""

    source: Poset = field(repr=False)
    target: Poset = field(repr=False)
    map: tuple

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.source.size:
            raise DimensionError("map", f"{len(self.map)} images for {self.source.size} elements")
        if any(not 0 <= v < self.target.size for v in self.map):
            raise DimensionError("map", "image index out of range")

    def __call__(self, x):
        return self.map[x]

    def image(self, mask: int) -> int:
        return mask_of(self.map[x] for x in bits(mask))


def is_monotone(f: PMorph) -> bool:
    src, tgt = f.source, f.target
    return all((tgt.up[f.map[x]] >> f.map[y]) & 1 for x in range(src.size) for y in bits(src.up[x]))


def is_p_morphism(f: PMorph) -> bool:
    """Order preserving with ``f[up x] = up f(x)`` for every ``x``."""
    if not is_monotone(f):
        return False
    return all(f.image(f.source.up[x]) == f.target.up[f.map[x]] for x in range(f.source.size))


def enumerate_monotone_maps(p: Poset, q: Poset, cap: int = DEFAULT_HOM_CAP, allowed=None) -> Iterator[tuple]:
    """Yield every order-preserving map ``p -> q`` as a tuple.

    ``allowed[x]``, when given, is a mask of admissible images for ``x``.
    """
    order = p.linear_extension
    img = [0] * p.size
    count = 0
    full_q = q.full

    def rec(k):
        nonlocal count
        if k == len(order):
            count += 1
            if count > cap:
                raise ResourceError("hom_cap", cap, count)
            yield tuple(img)
            return
        x = order[k]
        cand = full_q if allowed is None else allowed[x]
        for y in bits(p.down[x] & ~(1 << x)):
            cand &= q.up[img[y]]
        for v in bits(cand):
            img[x] = v
            yield from rec(k + 1)

    yield from rec(0)


def enumerate_p_morphisms(p: Poset, q: Poset, cap: int = DEFAULT_HOM_CAP, allowed=None) -> Iterator[tuple]:
    """Yield every p-morphism ``p -> q``; elements are assigned top-down."""
    order = p.linear_extension[::-1]
    img = [0] * p.size
    count = 0
    full_q = q.full

    def rec(k):
        nonlocal count
        if k == len(order):
            count += 1
            if count > cap:
                raise ResourceError("hom_cap", cap, count)
            yield tuple(img)
            return
        x = order[k]
        above = p.up[x] & ~(1 << x)
        cand = full_q if allowed is None else allowed[x]
        seen = 0
        for y in bits(above):
            cand &= q.down[img[y]]
            seen |= 1 << img[y]
        for v in bits(cand):
            if seen | (1 << v) == q.up[v]:
                img[x] = v
                yield from rec(k + 1)

    yield from rec(0)


# upsets and their counts

def enumerate_upsets(p: Poset, cap: int = DEFAULT_UPSET_CAP) -> list:
    """All upsets of ``p`` as masks, ordered by (size, mask)."""
    order = p.linear_extension[::-1]
    strict = [u & ~(1 << i) for i, u in enumerate(p.up)]
    out = []

    def rec(k, cur):
        if k == len(order):
            out.append(cur)
            if len(out) > cap:
                raise ResourceError("upset_cap", cap, len(out))
            return
        x = order[k]
        rec(k + 1, cur)
        if strict[x] & ~cur == 0:
            rec(k + 1, cur | (1 << x))

    rec(0, 0)
    out.sort(key=lambda m: (m.bit_count(), m))
    return out


def count_upsets_transfer(p: Poset) -> int:
    """Count upsets with a frontier transfer matrix swept top-down.

    The state is the membership of those processed elements that are still
    upper covers of some unprocessed element; an element may join the
    upset only if all of its upper covers are in.
    """
    order = p.linear_extension[::-1]
    covers = p.upper_covers
    needed_until = [-1] * p.size
    for k, x in enumerate(order):
        for c in bits(covers[x]):
            needed_until[c] = max(needed_until[c], k)
    states = {0: 1}
    frontier = 0
    for k, x in enumerate(order):
        nxt = {}
        bit = 1 << x
        frontier |= bit
        keep = mask_of(y for y in bits(frontier) if needed_until[y] > k)
        for state, n in states.items():
            s0 = state & keep
            nxt[s0] = nxt.get(s0, 0) + n
            if covers[x] & ~state == 0:
                s1 = (state | bit) & keep
                nxt[s1] = nxt.get(s1, 0) + n
        states = nxt
        frontier = keep
    return sum(states.values())


def count_upsets_forest(p: Poset) -> int:
    """Count upsets of a root system: product over roots of ``1 + prod(children)``."""
    _require_root_system(p, "count_upsets_forest")
    memo = {}
    for x in p.linear_extension:
        prod = 1
        for c in bits(p.lower_covers[x]):
            prod *= memo[c]
        memo[x] = 1 + prod
    total = 1
    for r in bits(p.maximal()):
        total *= memo[r]
    return total


# isomorphism

def _invariants(p: Poset) -> list:
    return [
        (p.down[i].bit_count(), p.up[i].bit_count(), p.lower_covers[i].bit_count(), p.upper_covers[i].bit_count())
        for i in range(p.size)
    ]


def find_isomorphism(p: Poset, q: Poset) -> tuple | None:
    """Return an order isomorphism ``p -> q`` as a tuple, or ``None``."""
    if p.size != q.size:
        return None
    ip, iq = _invariants(p), _invariants(q)
    if sorted(ip) != sorted(iq):
        return None
    order = p.linear_extension
    img = [-1] * p.size
    used = 0

    def rec(k):
        nonlocal used
        if k == len(order):
            return True
        x = order[k]
        for y in range(q.size):
            if (used >> y) & 1 or iq[y] != ip[x]:
                continue
            ok = True
            for z in order[:k]:
                fz = img[z]
                if p.leq(z, x) != q.leq(fz, y) or p.leq(x, z) != q.leq(y, fz):
                    ok = False
                    break
            if ok:
                img[x] = y
                used |= 1 << y
                if rec(k + 1):
                    return True
                used &= ~(1 << y)
        img[x] = -1
        return False

    return tuple(img) if rec(0) else None


def is_isomorphic(p: Poset, q: Poset) -> bool:
    if p.size != q.size:
        return False
    if is_root_system(p) and is_root_system(q):
        return forest_canonical_form(p) == forest_canonical_form(q)
    return find_isomorphism(p, q) is not None


def forest_canonical_form(p: Poset) -> str:
    """Canonical string of a root system (a forest hanging from its maxima)."""
    _require_root_system(p, "forest_canonical_form")
    memo = {}
    for x in p.linear_extension:
        kids = sorted(memo[c] for c in bits(p.lower_covers[x]))
        memo[x] = "(" + "".join(kids) + ")"
    return "".join(sorted(memo[r] for r in bits(p.maximal())))


def canonical_form(p: Poset) -> tuple:
    """Lexicographically least relabelled ``up`` tuple among invariant-respecting relabellings."""
    inv = _invariants(p)
    classes = {}
    for i, key in enumerate(inv):
        classes.setdefault(key, []).append(i)
    keys = sorted(classes)
    best = None
    for parts in itertools.product(*(itertools.permutations(classes[k]) for k in keys)):
        perm = [x for part in parts for x in part]
        pos = {x: k for k, x in enumerate(perm)}
        rel = tuple(mask_of(pos[y] for y in bits(p.up[x])) for x in perm)
        if best is None or rel < best:
            best = rel
    return (p.size,) + (best or ())
