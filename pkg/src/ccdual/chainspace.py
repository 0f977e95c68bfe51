"""The space of nonempty chains of a finite poset and its operators.

Chains of ``X`` are kept as bitmasks over ``X``; sets of chains are
bitmasks over chain indices.  ``C1 <| C2`` means ``C2`` is an up-closed
subchain of ``C1``, so every chain has exactly ``|C|`` chains above it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .certificate import Certificate
from .errors import DimensionError, PreconditionError, ValidationError
from .poset import (
    DEFAULT_CHAIN_CAP,
    DEFAULT_HOM_CAP,
    Chain,
    PMorph,
    Poset,
    bits,
    chain_masks,
    enumerate_p_morphisms,
    is_monotone,
    is_root_system,
    mask_of,
)

ORDERS = ("cc", "nerve", "unravel")


def _least(p: Poset, mask: int) -> int:
    for x in bits(mask):
        if p.up[x] & mask == mask:
            return x
    raise ValidationError("not a chain", f"{mask:#x} has no least element")


def _greatest(p: Poset, mask: int) -> int:
    for x in bits(mask):
        if p.down[x] & mask == mask:
            return x
    raise ValidationError("not a chain", f"{mask:#x} has no greatest element")


@dataclass(frozen=True, eq=False)
class ChainPoset:
    """A list of chains of ``base`` together with an order on their indices.

    ``kind`` selects the order: ``"cc"`` is the up-closed-subchain order,
    ``"nerve"`` is reverse inclusion and ``"unravel"`` is the
    down-closed-subchain order.  ``variant`` records the producer.
    """

    base: Poset
    masks: tuple
    kind: str = "cc"
    variant: str = "full"
    order: Poset = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in ORDERS:
            raise PreconditionError("unknown order", self.kind)
        object.__setattr__(self, "masks", tuple(self.masks))
        if len(set(self.masks)) != len(self.masks):
            raise ValidationError("duplicate chains")
        object.__setattr__(self, "order", self._build_order())

    @classmethod
    def from_masks(cls, base, masks, kind="cc", variant="full"):
        masks = sorted(masks, key=lambda m: tuple(bits(m)))
        return cls(base, tuple(masks), kind, variant)

    def _build_order(self) -> Poset:
        p, idx = self.base, self.index
        n = len(self.masks)
        if self.kind == "cc":
            up = []
            for c in self.masks:
                u = 0
                for x in bits(c):
                    j = idx.get(p.up[x] & c)
                    if j is None:
                        raise ValidationError("not closed under up-closed subchains", f"{c:#x}")
                    u |= 1 << j
                up.append(u)
            return Poset(tuple(up), validate=False)
        if self.kind == "nerve":
            up = []
            for c in self.masks:
                u = 0
                for sub in _submasks(c):
                    j = idx.get(sub)
                    if j is not None:
                        u |= 1 << j
                up.append(u)
            return Poset(tuple(up), validate=False)
        # unravel: C1 below C2 iff C1 is a down-closed subchain of C2
        up = [0] * n
        for i, c in enumerate(self.masks):
            for x in bits(c):
                j = idx.get(p.down[x] & c)
                if j is not None:
                    up[j] |= 1 << i
        return Poset(tuple(up), validate=False)

    @cached_property
    def index(self) -> dict:
        return {m: i for i, m in enumerate(self.masks)}

    @property
    def size(self) -> int:
        return len(self.masks)

    @property
    def full(self) -> int:
        return (1 << len(self.masks)) - 1

    def index_of(self, mask: int) -> int:
        try:
            return self.index[mask]
        except KeyError:
            raise DimensionError("chain", f"{_label_mask(self.base, mask)} is not in this space") from None

    def chain(self, i: int) -> Chain:
        return Chain.from_mask(self.base, self.masks[i])

    def chains(self) -> list:
        return [self.chain(i) for i in range(self.size)]

    def label(self, i: int) -> str:
        return _label_mask(self.base, self.masks[i])

    @cached_property
    def least(self) -> tuple:
        return tuple(_least(self.base, c) for c in self.masks)

    @cached_property
    def greatest(self) -> tuple:
        return tuple(_greatest(self.base, c) for c in self.masks)

    def up_of(self, s: int) -> int:
        out = 0
        for i in bits(s):
            out |= self.order.up[i]
        return out

    def down_of(self, s: int) -> int:
        out = 0
        for i in bits(s):
            out |= self.order.down[i]
        return out

    def select(self, pred) -> int:
        return mask_of(i for i, c in enumerate(self.masks) if pred(c))

    def box(self, a: int) -> int:
        self.base.check_mask(a)
        return self.select(lambda c: c & ~a == 0)

    def diamond(self, a: int) -> int:
        self.base.check_mask(a)
        return self.select(lambda c: c & a != 0)

    def check_set(self, s: int) -> int:
        if s < 0 or s >> self.size:
            raise DimensionError("chain set", f"mask {s:#x} exceeds {self.size} chains")
        return s

    def __repr__(self):
        return f"ChainPoset(kind={self.kind!r}, variant={self.variant!r}, base={self.base.size}, chains={self.size})"


def _submasks(m: int):
    s = m
    while s:
        yield s
        s = (s - 1) & m


def _label_mask(p: Poset, mask: int) -> str:
    return "{" + ",".join(p.label(x) for x in bits(mask)) + "}"


# the order on chains

def _same_parent(c1: Chain, c2: Chain):
    if c1.parent is not c2.parent and c1.parent != c2.parent:
        raise DimensionError("chains", "chains live in different posets")


def leq_cc(c1: Chain, c2: Chain) -> bool:
    """``C2`` is the part of ``C1`` above its own least element."""
    _same_parent(c1, c2)
    p = c1.parent
    x = _least(p, c2.mask)
    return (c1.mask >> x) & 1 == 1 and p.up[x] & c1.mask == c2.mask


def leq_cc_definitional(c1: Chain, c2: Chain) -> bool:
    """``C2`` is a subset of ``C1`` and upward closed inside it."""
    _same_parent(c1, c2)
    p, m1, m2 = c1.parent, c1.mask, c2.mask
    if m2 & ~m1:
        return False
    return all(p.up[x] & m1 & ~m2 == 0 for x in bits(m2))


def cc(x: Poset, cap: int = DEFAULT_CHAIN_CAP) -> ChainPoset:
    """All nonempty chains of ``x`` ordered by up-closed subchains."""
    return ChainPoset(x, tuple(chain_masks(x, cap)), "cc", "full")


def cc_n(x: Poset, n: int, cap: int = DEFAULT_CHAIN_CAP) -> ChainPoset:
    """Chains with at most ``n`` elements; an upset of ``cc(x)``."""
    if n < 0:
        raise PreconditionError("negative depth", str(n))
    masks = tuple(chain_masks(x, cap, max_size=n)) if n else ()
    return ChainPoset(x, masks, "cc", f"depth_bounded({n})")


def least(c: Chain) -> int:
    return _least(c.parent, c.mask)


def greatest(c: Chain) -> int:
    return _greatest(c.parent, c.mask)


def least_map(space: ChainPoset) -> PMorph:
    """The map sending a chain to its least element, as a map of posets."""
    return PMorph(space.order, space.base, space.least)


def box(space: ChainPoset, a: int) -> int:
    return space.box(a)


def diamond(space: ChainPoset, a: int) -> int:
    return space.diamond(a)


def minv_up(space: ChainPoset, u: int) -> int:
    """Preimage of an upset under the least-element map."""
    if not space.base.is_upset(space.base.check_mask(u)):
        raise PreconditionError("not an upset", f"{u:#x}")
    return mask_of(i for i, x in enumerate(space.least) if (u >> x) & 1)


def minv_down(space: ChainPoset, d: int) -> int:
    if not space.base.is_downset(space.base.check_mask(d)):
        raise PreconditionError("not a downset", f"{d:#x}")
    return mask_of(i for i, x in enumerate(space.least) if (d >> x) & 1)


# maps

def cc_map(f: PMorph, src: ChainPoset | None = None, tgt: ChainPoset | None = None) -> PMorph:
    """``C -> f[C]`` from the chains of the source to the chains of the target."""
    if not is_monotone(f):
        raise PreconditionError("not order preserving", "cc_map needs a monotone map")
    src = src or cc(f.source)
    tgt = tgt or cc(f.target)
    return PMorph(src.order, tgt.order, tuple(tgt.index_of(f.image(c)) for c in src.masks))


def universal_extension(f: PMorph, space: ChainPoset | None = None) -> PMorph:
    """The p-morphism ``y -> f[up y]`` from a root system into the chain space of the target."""
    y = f.source
    if not is_root_system(y):
        raise PreconditionError("not a root system", "the domain of universal_extension")
    if not is_monotone(f):
        raise PreconditionError("not order preserving", "universal_extension needs a monotone map")
    space = space or cc(f.target)
    return PMorph(y, space.order, tuple(space.index_of(f.image(y.up[v])) for v in range(y.size)))


def verify_extension_unique(f: PMorph, space: ChainPoset | None = None, cap: int = DEFAULT_HOM_CAP) -> Certificate:
    """Enumerate every p-morphism ``g`` with ``least o g = f`` and compare with the constructed one."""
    space = space or cc(f.target)
    g = universal_extension(f, space)
    cert = Certificate("extension-unique")
    fibre = {}
    for i, x in enumerate(space.least):
        fibre[x] = fibre.get(x, 0) | (1 << i)
    allowed = [fibre.get(f.map[v], 0) for v in range(f.source.size)]
    found = list(enumerate_p_morphisms(f.source, space.order, cap, allowed))
    cert.record(len(found) == 1 and found[0] == g.map, f"{len(found)} factorizations for f={f.map}")
    cert.details["factorizations"] = len(found)
    return cert


# identity suites over all subsets

def subset_laws_check(x: Poset, space: ChainPoset | None = None) -> Certificate:
    """Meet/join preservation and the complement laws for box and diamond, over all pairs of subsets."""
    space = space or cc(x)
    cert = Certificate("box-diamond")
    n = 1 << x.size
    bx = [space.box(a) for a in range(n)]
    dm = [space.diamond(a) for a in range(n)]
    full, xf = space.full, x.full
    for a in range(n):
        cert.record(full & ~bx[a] == dm[xf & ~a], f"complement of box at {a:#x}")
        cert.record(full & ~dm[a] == bx[xf & ~a], f"complement of diamond at {a:#x}")
        for b in range(n):
            cert.record(bx[a & b] == bx[a] & bx[b], f"box meet at {a:#x},{b:#x}")
            cert.record(dm[a | b] == dm[a] | dm[b], f"diamond join at {a:#x},{b:#x}")
    return cert


def order_laws_check(x: Poset, space: ChainPoset | None = None, max_terms: int = 3,
                     unqualified: bool = True) -> Certificate:
    """How box and diamond sets sit in the chain order.

    Covers: box sets are upsets, diamond sets downsets, box of a downset
    is a downset, diamond of an upset is an upset, box A & diamond D is a
    downset when D is a downset inside A, the down-closure of a basic set
    splits over its diamond terms (up to ``max_terms``), and the closed
    form of the down-closure of box A & diamond(U & D) when ``U & D``
    lies inside ``A``.  Without that hypothesis the identity is only
    tallied in ``details``.
    """
    space = space or cc(x)
    cert = Certificate("order-laws")
    ch = space.order
    n = 1 << x.size
    bx = [space.box(a) for a in range(n)]
    dm = [space.diamond(a) for a in range(n)]
    ups = [u for u in range(n) if x.is_upset(u)]
    downs = [d for d in range(n) if x.is_downset(d)]
    down_cache = {}

    def dn(s):
        v = down_cache.get(s)
        if v is None:
            v = down_cache[s] = space.down_of(s)
        return v

    def is_up(s):
        return space.up_of(s) == s

    def is_down(s):
        return dn(s) == s

    for a in range(n):
        cert.record(is_up(bx[a]), f"box {a:#x} not an upset")
        cert.record(is_down(dm[a]), f"diamond {a:#x} not a downset")
    for d in downs:
        cert.record(is_down(bx[d]), f"box of downset {d:#x}")
        for a in range(n):
            if d & ~a == 0:
                cert.record(is_down(bx[a] & dm[d]), f"box {a:#x} & diamond {d:#x}")
    for u in ups:
        cert.record(is_up(dm[u]), f"diamond of upset {u:#x}")
    for a in range(n):
        for k in range(2, max_terms + 1):
            for bs in itertools.combinations_with_replacement(range(n), k):
                lhs = bx[a]
                for b in bs:
                    lhs &= dm[b]
                rhs = ch.full if ch.size else 0
                for b in bs:
                    rhs &= dn(bx[a] & dm[b])
                cert.record(dn(lhs) == rhs, f"split at A={a:#x}, B={bs}")
    off = off_fail = 0
    for u in ups:
        for d in downs:
            w = u & d
            for a in range(n):
                ok = dn(bx[a] & dm[w]) == bx[a | d] & dm[w]
                if w & ~a == 0:
                    cert.record(ok, f"closed form at A={a:#x}, U={u:#x}, D={d:#x}")
                elif unqualified:
                    off += 1
                    off_fail += not ok
    cert.details["unqualified_cases"] = off
    cert.details["unqualified_failures"] = off_fail
    return cert


def preimage_laws_check(x: Poset, space: ChainPoset | None = None) -> Certificate:
    """Preimages of upsets are box sets, preimages of downsets are diamond sets."""
    space = space or cc(x)
    cert = Certificate("preimage-laws")
    for m in range(1 << x.size):
        if x.is_upset(m):
            cert.record(minv_up(space, m) == space.box(m), f"upset {m:#x}")
        if x.is_downset(m):
            cert.record(minv_down(space, m) == space.diamond(m), f"downset {m:#x}")
    return cert


def structure_check(space: ChainPoset) -> Certificate:
    """Root-system property, closure under up-closed subchains, and monotone least map."""
    cert = Certificate("chain-space")
    cert.record(is_root_system(space.order), "order is not a root system")
    cert.record(is_monotone(least_map(space)), "least map not monotone")
    for i, c in enumerate(space.masks):
        cert.record(bin(space.order.up[i]).count("1") == bin(c).count("1"), f"{space.label(i)}")
    return cert
