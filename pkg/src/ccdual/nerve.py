"""Chains ordered by reverse inclusion, chains of chains, and the two-headed upset.

``twohead_up`` generalizes the upset of a single set to a family: ``x`` is
in it when some chain below ``x`` meets every set of the family.  It gives
a closed form for the upset (in the chain order) of a basic set
``box V & diamond W_1 & ... & diamond W_n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .certificate import Certificate
from .chainspace import ChainPoset, cc
from .errors import PreconditionError, ResourceError
from .lattice import DistLattice, HeytingAlgebra, upset_implication, upset_lattice
from .poset import (
    DEFAULT_CHAIN_CAP,
    DEFAULT_UPSET_CAP,
    PMorph,
    Poset,
    bits,
    chain_masks,
    enumerate_upsets,
    is_p_morphism,
    is_root_system,
    mask_of,
    up_set,
)

MAX_FAMILY = 6


class TwoheadMemo:
    """Memo table for ``twohead_up`` keyed by poset and sorted family."""

    def __init__(self):
        self.table = {}
        self.hits = 0

    def get(self, key):
        v = self.table.get(key)
        if v is not None:
            self.hits += 1
        return v

    def put(self, key, value):
        # single writer semantics: first value wins, later ones must agree
        return self.table.setdefault(key, value)


_session_memo = TwoheadMemo()


def twohead_up(x: Poset, family, memo: TwoheadMemo | None = None, max_family: int = MAX_FAMILY) -> int:
    """Recursive value: the whole poset for the empty family, otherwise the union over ``i`` of
    the upset of ``A_i`` intersected with the value on the family without ``A_i``."""
    family = tuple(sorted(x.check_mask(a) for a in family))
    if len(family) > max_family:
        raise ResourceError("family_size", max_family, len(family))
    memo = _session_memo if memo is None else memo
    return _twohead(x, family, memo)


def _twohead(x, family, memo):
    if not family:
        return x.full
    key = (x.up, family)
    hit = memo.get(key)
    if hit is not None:
        return hit
    out = 0
    for i, a in enumerate(family):
        rest = family[:i] + family[i + 1:]
        out |= up_set(x, _twohead(x, rest, memo) & a)
    return memo.put(key, out)


def twohead_up_oracle(x: Poset, family, chains=None) -> int:
    """Elements ``x`` such that some chain (possibly empty) inside the downset of ``x`` meets every set."""
    family = [x.check_mask(a) for a in family]
    if chains is None:
        chains = chain_masks(x)
    out = x.full if not family else 0
    for c in chains:
        if all(c & a for a in family):
            above = x.full
            for y in bits(c):
                above &= x.up[y]
            out |= above
    return out


def upset_of_basic(space: ChainPoset, v: int, ws, memo: TwoheadMemo | None = None) -> int:
    """Closed form for the up-closure of ``box V & diamond W_1 & ... & diamond W_n``."""
    x = space.base
    ws = list(ws)
    for w in ws:
        if w & ~v:
            raise PreconditionError("W not inside V", f"{w:#x} vs {v:#x}")
    dm = [space.diamond(w) for w in ws]
    out = 0
    n = len(ws)
    for r in range(n + 1):
        for inside in itertools.combinations(range(n), r):
            s = space.box(v & twohead_up(x, [ws[i] for i in inside], memo))
            for j in range(n):
                if j not in inside:
                    s &= dm[j]
            out |= s
    return out


def upset_of_basic_direct(space: ChainPoset, v: int, ws) -> int:
    s = space.box(v)
    for w in ws:
        s &= space.diamond(w)
    return space.up_of(s)


def max_cc_iso(x: Poset, space: ChainPoset | None = None) -> tuple:
    """``x -> {x}``; raises unless the image is exactly the set of maximal chains."""
    space = space or cc(x)
    phi = tuple(space.index_of(1 << v) for v in range(x.size))
    maxima = space.order.maximal()
    if mask_of(phi) != maxima or len(set(phi)) != x.size:
        raise PreconditionError("singletons are not the maximal chains")
    return phi


def unravel(x: Poset, cap: int = DEFAULT_CHAIN_CAP):
    """Chains ordered by down-closed subchains, with the greatest-element map back to ``x``."""
    space = ChainPoset.from_masks(x, chain_masks(x, cap), "unravel", "unravel")
    return space, PMorph(space.order, x, space.greatest)


def is_forest(p: Poset) -> bool:
    """Every principal downset is a chain."""
    return all(p.is_chain(d) for d in p.down)


# reverse inclusion and chains of chains

def nerve(x: Poset, cap: int = DEFAULT_CHAIN_CAP) -> ChainPoset:
    """Same chains as ``cc(x)``, ordered by reverse inclusion."""
    return ChainPoset.from_masks(x, chain_masks(x, cap), "nerve", "nerve")


@dataclass(frozen=True, eq=False)
class ChainOfChains:
    members: int
    parent: ChainPoset = field(repr=False)

    def __post_init__(self):
        if not self.members or not self.parent.order.is_chain(self.members):
            raise PreconditionError("not a chain of chains", f"{self.members:#x}")


def is_m_open(ny: ChainPoset, fam) -> bool:
    """For each member ``C1`` and each subchain ``C2`` of it, some member inside ``C1`` has the least element of ``C2``."""
    members = fam.members if isinstance(fam, ChainOfChains) else fam
    least = ny.least
    for c1 in bits(members):
        inside = ny.order.up[c1]
        mins = {least[c3] for c3 in bits(members & inside)}
        for c2 in bits(inside):
            if least[c2] not in mins:
                return False
    return True


def z_space(x: Poset, cap: int = DEFAULT_CHAIN_CAP, ny: ChainPoset | None = None) -> ChainPoset:
    """m-open nonempty chains of the nerve, ordered by reverse inclusion."""
    ny = ny or nerve(x, cap)
    fams = [m for m in chain_masks(ny.order, cap) if is_m_open(ny, m)]
    return ChainPoset.from_masks(ny.order, fams, "nerve", "z")


def z_iso_check(x: Poset, cap: int = DEFAULT_CHAIN_CAP) -> Certificate:
    """``C -> up-closure of C`` is an order isomorphism from the chain space onto Z."""
    space = cc(x, cap)
    ny = nerve(x, cap)
    z = z_space(x, cap, ny)
    cert = Certificate("z-iso")
    # nerve and chain space share indices, so the up-closure of C is already a family over the nerve
    image = [space.order.up[i] for i in range(space.size)]
    open_flags = [is_m_open(ny, m) for m in image]
    for i, ok in enumerate(open_flags):
        cert.record(ok, f"up-closure of {space.label(i)} is not m-open")
    in_z = all(m in z.index for m in image)
    cert.record(in_z, "image leaves Z")
    cert.record(len(set(image)) == len(image), "not injective")
    cert.record(z.size == space.size, f"|Z|={z.size} but {space.size} chains")
    for i in range(space.size):
        for j in range(space.size):
            sup = image[j] & ~image[i] == 0
            cert.record(space.order.leq(i, j) == sup, f"order mismatch at {space.label(i)}, {space.label(j)}")
    cert.details.update(chains=space.size, z=z.size, all_m_open=all(open_flags))
    cert.summary = f"{space.size} ↔ {z.size}" + (", isomorphism verified" if cert.passed else "")
    return cert


def implication_box_formula_check(x: Poset, cap: int = DEFAULT_CHAIN_CAP, table_limit: int = 256) -> Certificate:
    """Implication between boxed upsets equals the box of the complement-union, over all upset pairs.

    The implication is computed from the downset formula on the chain
    order; when the upset algebra has at most ``table_limit`` elements it is
    also read from tables built by residuation alone.
    """
    space = cc(x, cap)
    cert = Certificate("implication")
    ups = enumerate_upsets(x)
    h = None
    if _few_upsets(space.order, table_limit):
        base = upset_lattice(space.order, table_limit)
        h = HeytingAlgebra.from_lattice(_plain(base))
    for u1 in ups:
        for u2 in ups:
            b1, b2 = space.box(u1), space.box(u2)
            want = space.box((x.full & ~u1) | u2)
            cert.record(upset_implication(space.order, b1, b2) == want, f"formula at {u1:#x},{u2:#x}")
            if h is not None:
                got = base.carrier[h.impl[base.index_of(b1)][base.index_of(b2)]]
                cert.record(got == want, f"table at {u1:#x},{u2:#x}")
    cert.details["tables"] = h is not None
    return cert


def _few_upsets(p: Poset, limit: int) -> bool:
    try:
        enumerate_upsets(p, limit)
    except ResourceError:
        return False
    return True


def _plain(h):
    """Lattice part only, so the implication gets recomputed from the order."""
    lat = DistLattice(h.meet, h.join, validate=False)
    lat.verified = True
    return lat


def union_closure(sets, start=(0,)) -> set:
    """All finite unions (including the empty one) of the given masks."""
    seen = set(start)
    frontier = list(seen)
    sets = list(set(sets))
    while frontier:
        nxt = []
        for s in frontier:
            for b in sets:
                t = s | b
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
    return seen


def nerve_upset_characterization_check(x: Poset, cap: int = DEFAULT_CHAIN_CAP,
                                       upset_cap: int = DEFAULT_UPSET_CAP) -> Certificate:
    """Upsets of the reverse-inclusion order are exactly the finite unions of box sets."""
    ny = nerve(x, cap)
    cert = Certificate("nerve-upsets")
    boxes = [ny.box(v) for v in range(1 << x.size)]
    for v, b in enumerate(boxes):
        cert.record(ny.up_of(b) == b, f"box {v:#x} is not an upset")
    ups = set(enumerate_upsets(ny.order, upset_cap))
    unions = union_closure(boxes)
    cert.record(ups == unions, f"{len(ups)} upsets vs {len(unions)} unions of boxes")
    cert.details.update(upsets=len(ups), unions=len(unions))
    return cert


def nerve_refines_check(x: Poset, cap: int = DEFAULT_CHAIN_CAP, upset_cap: int = DEFAULT_UPSET_CAP) -> Certificate:
    """Reverse inclusion extends the chain order, so every upset of the former is one of the latter."""
    space = cc(x, cap)
    ny = nerve(x, cap)
    cert = Certificate("nerve-refines")
    for i in range(space.size):
        cert.record(space.order.up[i] & ~ny.order.up[i] == 0, f"{space.label(i)}")
    nu = set(enumerate_upsets(ny.order, upset_cap))
    cu = set(enumerate_upsets(space.order, upset_cap))
    cert.record(nu <= cu, "a nerve upset is not a chain-order upset")
    cert.details.update(nerve_upsets=len(nu), chain_upsets=len(cu))
    return cert


def unravel_check(x: Poset, cap: int = DEFAULT_CHAIN_CAP) -> Certificate:
    space, m = unravel(x, cap)
    cert = Certificate("unravel")
    cert.record(is_forest(space.order), "not a forest")
    cert.record(is_p_morphism(m), "greatest-element map is not a p-morphism")
    if x.size:
        cert.record(mask_of(m.map) == x.full, "greatest-element map not onto")
    cert.details["root_system"] = is_root_system(x)
    return cert


def twohead_check(x: Poset, max_terms: int = 3, memo: TwoheadMemo | None = None) -> Certificate:
    """Recursion against the chain oracle for every multiset of at most ``max_terms`` subsets."""
    memo = memo or TwoheadMemo()
    chains = chain_masks(x)
    cert = Certificate("twohead")
    subsets = range(1 << x.size)
    for k in range(max_terms + 1):
        for fam in itertools.combinations_with_replacement(subsets, k):
            cert.record(twohead_up(x, fam, memo) == twohead_up_oracle(x, fam, chains), f"family {fam}")
    return cert


def upset_of_basic_check(x: Poset, max_terms: int = 3, memo: TwoheadMemo | None = None,
                         space: ChainPoset | None = None) -> Certificate:
    """Closed form against the direct up-closure, for every V and multiset of subsets of V."""
    memo = memo or TwoheadMemo()
    space = space or cc(x)
    cert = Certificate("upsets-of-basic")
    for v in range(1 << x.size):
        subs = [w for w in range(1 << x.size) if w & ~v == 0]
        for k in range(max_terms + 1):
            for ws in itertools.combinations_with_replacement(subs, k):
                cert.record(upset_of_basic(space, v, ws, memo) == upset_of_basic_direct(space, v, ws),
                            f"V={v:#x}, W={ws}")
    return cert
