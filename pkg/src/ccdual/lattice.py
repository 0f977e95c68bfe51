"""Finite distributive lattices, Heyting algebras and finite Birkhoff duality.

Lattices are operation tables over the indices ``0..size-1``.  Upset
algebras of a poset additionally remember which upset (as a bitmask over
the poset) each element is, via ``space`` and ``carrier``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import DimensionError, PreconditionError, ResourceError, ValidationError
from .poset import (
    DEFAULT_HOM_CAP,
    DEFAULT_UPSET_CAP,
    Poset,
    bits,
    down_set,
    enumerate_monotone_maps,
    enumerate_upsets,
    is_root_system,
    mask_of,
    up_set,
)


class DistLattice:
    """A bounded distributive lattice given by meet and join tables."""

    def __init__(self, meet, join, labels=None, *, validate=True, space=None, carrier=None):
        self.meet = tuple(tuple(r) for r in meet)
        self.join = tuple(tuple(r) for r in join)
        self.size = len(self.meet)
        self.labels = None if labels is None else tuple(labels)
        self.space = space
        self.carrier = None if carrier is None else tuple(carrier)
        if len(self.join) != self.size or any(len(r) != self.size for r in self.meet + self.join):
            raise DimensionError("operation tables", f"expected {self.size}x{self.size} meet and join")
        if any(not 0 <= v < self.size for r in self.meet + self.join for v in r):
            raise DimensionError("operation tables", "entry out of range")
        if self.size == 0:
            raise ValidationError("bounds", "a bounded lattice has at least one element")
        r = range(self.size)
        bots = [a for a in r if all(self.meet[a][x] == a for x in r)]
        tops = [a for a in r if all(self.join[a][x] == a for x in r)]
        if not bots or not tops:
            raise ValidationError("bounds violated", "no bottom/top element")
        self.bot, self.top = bots[0], tops[0]
        self.verified = False
        if validate:
            self.validate()

    # checks

    def validate(self):
        n, m, j = self.size, self.meet, self.join
        r = range(n)
        for a in r:
            if m[a][a] != a or j[a][a] != a:
                raise ValidationError("idempotence violated", f"at {a}")
        for a, b in itertools.product(r, r):
            if m[a][b] != m[b][a] or j[a][b] != j[b][a]:
                raise ValidationError("commutativity violated", f"at ({a}, {b})")
            if m[a][j[a][b]] != a or j[a][m[a][b]] != a:
                raise ValidationError("absorption violated", f"at ({a}, {b})")
        for a, b, c in itertools.product(r, r, r):
            if m[a][m[b][c]] != m[m[a][b]][c] or j[a][j[b][c]] != j[j[a][b]][c]:
                raise ValidationError("associativity violated", f"at ({a}, {b}, {c})")
        for a in r:
            if m[self.bot][a] != self.bot or j[self.top][a] != self.top:
                raise ValidationError("bounds violated", "no bottom/top element")
        if not self.is_distributive():
            raise ValidationError("distributivity violated")
        self.verified = True
        return self

    def is_distributive(self) -> bool:
        m, j, r = self.meet, self.join, range(self.size)
        return all(m[a][j[b][c]] == j[m[a][b]][m[a][c]] for a in r for b in r for c in r)

    # order

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    @cached_property
    def below(self) -> tuple:
        """``below[a]`` is the mask of elements ``<= a``."""
        return tuple(mask_of(x for x in range(self.size) if self.meet[x][a] == x) for a in range(self.size))

    def join_all(self, elements) -> int:
        acc = self.bot
        for x in elements:
            acc = self.join[acc][x]
        return acc

    def meet_all(self, elements) -> int:
        acc = self.top
        for x in elements:
            acc = self.meet[acc][x]
        return acc

    @cached_property
    def join_irreducibles(self) -> tuple:
        """Elements with exactly one lower cover, in index order."""
        out = []
        for a in range(self.size):
            strict = self.below[a] & ~(1 << a)
            if not strict:
                continue
            # a is join irreducible iff the elements strictly below it have a greatest one
            if self.join_all(bits(strict)) != a:
                out.append(a)
        return tuple(out)

    def index_of(self, upset_mask: int) -> int:
        if self.carrier is None:
            raise PreconditionError("not an upset algebra", "index_of needs a carrier")
        try:
            return self._index[upset_mask]
        except KeyError:
            raise DimensionError("upset", f"{upset_mask:#x} is not an element of this algebra") from None

    @cached_property
    def _index(self):
        return {m: i for i, m in enumerate(self.carrier)}

    def label(self, a: int) -> str:
        return str(a) if self.labels is None else str(self.labels[a])

    def __repr__(self):
        return f"{type(self).__name__}(size={self.size})"


class HeytingAlgebra(DistLattice):
    """A distributive lattice with an implication table; ``impl[a][b]`` is ``a -> b``."""

    def __init__(self, meet, join, impl, labels=None, *, validate=True, space=None, carrier=None):
        super().__init__(meet, join, labels, validate=validate, space=space, carrier=carrier)
        self.impl = tuple(tuple(r) for r in impl)
        if len(self.impl) != self.size or any(len(r) != self.size for r in self.impl):
            raise DimensionError("implication table", f"expected {self.size}x{self.size}")
        if validate and not residuation_holds(self):
            raise ValidationError("residuation violated")
        self.godel = is_prelinear(self)

    @classmethod
    def from_lattice(cls, lat: DistLattice) -> "HeytingAlgebra":
        """Implication computed from the order alone: ``b -> c`` is the join of all ``a`` with ``a & b <= c``."""
        n = lat.size
        impl = [[lat.join_all(a for a in range(n) if lat.leq(lat.meet[a][b], c)) for c in range(n)] for b in range(n)]
        h = cls(lat.meet, lat.join, impl, lat.labels, validate=not lat.verified,
                space=lat.space, carrier=lat.carrier)
        h.verified = True
        return h


def residuation_holds(h: HeytingAlgebra) -> bool:
    r = range(h.size)
    return all(h.leq(h.meet[a][b], c) == h.leq(a, h.impl[b][c]) for a in r for b in r for c in r)


def is_prelinear(h: HeytingAlgebra) -> bool:
    r = range(h.size)
    return all(h.join[h.impl[a][b]][h.impl[b][a]] == h.top for a in r for b in r)


def coimplication_table(lat: DistLattice):
    """Table of ``a <- b``: the least ``c`` with ``a <= b | c``; ``None`` if some value is missing."""
    n = lat.size
    out = []
    for a in range(n):
        row = []
        for b in range(n):
            c = lat.meet_all(c for c in range(n) if lat.leq(a, lat.join[b][c]))
            if not lat.leq(a, lat.join[b][c]):
                return None
            row.append(c)
        out.append(row)
    return out


def is_bi_heyting(h: HeytingAlgebra) -> bool:
    """Both residuation laws hold, for implication and for co-implication."""
    co = coimplication_table(h)
    if co is None or not residuation_holds(h):
        return False
    r = range(h.size)
    return all(h.leq(co[a][b], c) == h.leq(a, h.join[b][c]) for a in r for b in r for c in r)


# upset algebras and duality

def upset_implication(p: Poset, u: int, v: int) -> int:
    """``U -> V`` on upsets: the complement of the downset generated by ``U \\ V``."""
    return p.full & ~down_set(p, u & ~v)


def upset_lattice(p: Poset, cap: int = 4096) -> HeytingAlgebra:
    """The Heyting algebra of all upsets of ``p`` ordered by inclusion."""
    ups = enumerate_upsets(p, cap)
    index = {m: i for i, m in enumerate(ups)}
    meet = [[index[a & b] for b in ups] for a in ups]
    join = [[index[a | b] for b in ups] for a in ups]
    impl = [[index[upset_implication(p, a, b)] for b in ups] for a in ups]
    h = HeytingAlgebra(meet, join, impl, validate=False, space=p, carrier=ups)
    h.verified = True
    return h


def dual_poset(lat: DistLattice) -> Poset:
    """Join irreducibles ``j <= k`` iff ``k <= j`` in the lattice (prime filter inclusion)."""
    if not lat.verified and not lat.is_distributive():
        raise PreconditionError("not distributive", "dual_poset needs a distributive lattice")
    ji = lat.join_irreducibles
    up = tuple(mask_of(k for k, b in enumerate(ji) if lat.leq(b, a)) for a in ji)
    return Poset(up, labels=tuple(lat.label(a) for a in ji), validate=False)


@dataclass(frozen=True)
class LatticeHom:
    source: DistLattice
    target: DistLattice
    map: tuple
    flavor: str = "lattice"

    def __call__(self, a):
        return self.map[a]


def is_hom(src: DistLattice, tgt: DistLattice, f, flavor: str = "lattice") -> bool:
    if len(f) != src.size:
        raise DimensionError("hom", f"{len(f)} images for {src.size} elements")
    if f[src.bot] != tgt.bot or f[src.top] != tgt.top:
        return False
    r = range(src.size)
    for a in r:
        for b in r:
            if f[src.meet[a][b]] != tgt.meet[f[a]][f[b]] or f[src.join[a][b]] != tgt.join[f[a]][f[b]]:
                return False
            if flavor == "heyting" and f[src.impl[a][b]] != tgt.impl[f[a]][f[b]]:
                return False
    return True


def sigma(lat: DistLattice, target: HeytingAlgebra | None = None) -> LatticeHom:
    """The Birkhoff isomorphism ``a -> {j join irreducible | j <= a}`` into the upsets of the dual."""
    x = dual_poset(lat)
    if target is None:
        target = upset_lattice(x)
    ji = lat.join_irreducibles
    images = tuple(target.index_of(mask_of(k for k, j in enumerate(ji) if lat.leq(j, a))) for a in range(lat.size))
    return LatticeHom(lat, target, images)


def sigma_masks(lat: DistLattice) -> tuple:
    """``sigma`` as raw upset masks over ``dual_poset(lat)``."""
    ji = lat.join_irreducibles
    return tuple(mask_of(k for k, j in enumerate(ji) if lat.leq(j, a)) for a in range(lat.size))


def birkhoff_point_map(p: Poset, h: HeytingAlgebra | None = None) -> tuple:
    """For each ``x`` of ``p`` the position of the principal upset of ``x`` among the points of ``dual_poset(upset_lattice(p))``."""
    if h is None:
        h = upset_lattice(p)
    ji = h.join_irreducibles
    pos = {a: k for k, a in enumerate(ji)}
    return tuple(pos.get(h.index_of(p.up[x]), -1) for x in range(p.size))


# named algebras

def chain_lattice(k: int) -> HeytingAlgebra:
    """The k element chain ``0 < 1 < ... < k-1`` as a Heyting algebra from tables."""
    meet = [[min(a, b) for b in range(k)] for a in range(k)]
    join = [[max(a, b) for b in range(k)] for a in range(k)]
    return HeytingAlgebra.from_lattice(DistLattice(meet, join))


def boolean_lattice(atoms: int) -> HeytingAlgebra:
    n = 1 << atoms
    meet = [[a & b for b in range(n)] for a in range(n)]
    join = [[a | b for b in range(n)] for a in range(n)]
    return HeytingAlgebra.from_lattice(DistLattice(meet, join))


def as_heyting(lat: DistLattice) -> HeytingAlgebra:
    return lat if isinstance(lat, HeytingAlgebra) else HeytingAlgebra.from_lattice(lat)


# bounded depth terms

def bd_value(h: HeytingAlgebra, xs) -> int:
    """``bd_0 = 0`` and ``bd_n = x_n | (x_n -> bd_{n-1})``."""
    acc = h.bot
    for x in xs:
        if not 0 <= x < h.size:
            raise DimensionError("bd argument", f"{x} not an element")
        acc = h.join[x][h.impl[x][acc]]
    return acc


def is_in_gan(h: HeytingAlgebra, n: int) -> bool:
    if not h.godel:
        raise PreconditionError("not a Goedel algebra", "is_in_gan needs prelinearity")
    return all(bd_value(h, xs) == h.top for xs in itertools.product(range(h.size), repeat=n))


def algebra_depth(h: HeytingAlgebra, max_n: int = 16) -> int:
    """Least ``n`` with the algebra in GA_n, found through the bd terms."""
    for n in range(max_n + 1):
        if is_in_gan(h, n):
            return n
    raise ResourceError("depth_search", max_n)


# homomorphisms

def _search_homs(src, tgt, flavor, cap):
    """Backtracking over all elements of ``src``; every operation is checked once its arguments are assigned."""
    n = src.size
    order = sorted(range(n), key=lambda a: (src.below[a].bit_count(), a))
    img = [-1] * n
    img[src.bot], img[src.top] = tgt.bot, tgt.top
    if src.bot == src.top and tgt.bot != tgt.top:
        return
    count = 0
    ops = [(src.meet, tgt.meet), (src.join, tgt.join)]
    if flavor == "heyting":
        ops.append((src.impl, tgt.impl))

    def consistent(a):
        # every fully assigned triple x op y = c touching a, as argument or as result
        done = [b for b in range(n) if img[b] >= 0]
        for s_op, t_op in ops:
            for x in done:
                for y in done:
                    c = s_op[x][y]
                    if (x == a or y == a or c == a) and img[c] >= 0 and img[c] != t_op[img[x]][img[y]]:
                        return False
        return True

    free = [a for a in order if a not in (src.bot, src.top)]
    if not consistent(src.bot) or not consistent(src.top):
        return

    def rec(k):
        nonlocal count
        if k == len(free):
            count += 1
            if count > cap:
                raise ResourceError("hom_cap", cap, count)
            yield tuple(img)
            return
        a = free[k]
        for v in range(tgt.size):
            img[a] = v
            if consistent(a):
                yield from rec(k + 1)
        img[a] = -1

    yield from rec(0)


def _dual_homs(src, tgt, flavor, cap):
    """Lattice homs ``src -> tgt`` from monotone maps between the duals ``tgt_* -> src_*``."""
    xs, xt = dual_poset(src), dual_poset(tgt)
    ji_s, ji_t = src.join_irreducibles, tgt.join_irreducibles
    for phi in enumerate_monotone_maps(xt, xs, cap):
        f = tuple(tgt.join_all(ji_t[k] for k in range(xt.size) if src.leq(ji_s[phi[k]], a)) for a in range(src.size))
        if flavor == "heyting" and not all(
            f[src.impl[a][b]] == tgt.impl[f[a]][f[b]] for a in range(src.size) for b in range(src.size)
        ):
            continue
        yield f


def enumerate_homs(src: DistLattice, tgt: DistLattice, flavor: str = "lattice",
                   cap: int = DEFAULT_HOM_CAP, method: str = "auto") -> list:
    """All homomorphisms preserving the flavor's operations, as sorted tuples.

    ``method="search"`` backtracks over the tables directly; ``"dual"``
    walks the monotone maps between the dual posets.
    """
    if flavor not in ("lattice", "heyting"):
        raise PreconditionError("unknown flavor", flavor)
    if flavor == "heyting" and not (isinstance(src, HeytingAlgebra) and isinstance(tgt, HeytingAlgebra)):
        raise PreconditionError("heyting flavor needs Heyting algebras")
    if method == "auto":
        method = "search" if src.size <= 8 else "dual"
    gen = _search_homs if method == "search" else _dual_homs
    out = sorted(set(gen(src, tgt, flavor, cap)))
    return [LatticeHom(src, tgt, f, flavor) for f in out]


def find_lattice_isomorphism(a: DistLattice, b: DistLattice):
    """Brute-force isomorphism search pruned by the join-irreducible profile."""
    if a.size != b.size or len(a.join_irreducibles) != len(b.join_irreducibles):
        return None

    def profile(lat, x):
        return (lat.below[x].bit_count(), sum(1 for j in lat.join_irreducibles if lat.leq(j, x)))

    pa = [profile(a, x) for x in range(a.size)]
    pb = [profile(b, x) for x in range(b.size)]
    if sorted(pa) != sorted(pb):
        return None
    order = sorted(range(a.size), key=lambda x: pa[x])
    img = [-1] * a.size
    used = set()

    def rec(k):
        if k == len(order):
            return True
        x = order[k]
        for y in range(b.size):
            if y in used or pb[y] != pa[x]:
                continue
            if all(a.leq(z, x) == b.leq(img[z], y) and a.leq(x, z) == b.leq(y, img[z]) for z in order[:k]):
                img[x] = y
                used.add(y)
                if rec(k + 1):
                    return True
                used.discard(y)
        img[x] = -1
        return False

    return tuple(img) if rec(0) else None


def upset_coimplication(p: Poset, a: int, b: int) -> int:
    """``a <- b`` on upsets: the least upset ``c`` with ``a`` inside ``b | c``."""
    return up_set(p, a & ~b)


def coresiduation_holds(h: HeytingAlgebra, triples=None) -> bool:
    """``a <= b | c`` iff ``(a <- b) <= c``, with co-implication from the carrier masks when available.

    ``triples`` restricts the check to the given index triples; default is all of them.
    """
    if h.carrier is not None and h.space is not None:
        co = lambda a, b: h.index_of(upset_coimplication(h.space, h.carrier[a], h.carrier[b]))
    else:
        table = coimplication_table(h)
        if table is None:
            return False
        co = lambda a, b: table[a][b]
    if triples is None:
        triples = itertools.product(range(h.size), repeat=3)
    return all(h.leq(a, h.join[b][c]) == h.leq(co(a, b), c) for a, b, c in triples)
