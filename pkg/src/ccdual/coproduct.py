"""Products of root systems through admissible chains, and coproducts of Goedel algebras.

A chain of the product poset is admissible when each of its coordinate
projections is an upset of the corresponding factor.  Admissible chains
ordered as in the chain space form the product of the factors among root
systems, and their upset algebra is the coproduct of the dual algebras.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod

from .certificate import Certificate
from .chainspace import ChainPoset, cc
from .errors import CheckFailed, DimensionError, PreconditionError, ResourceError
from .lattice import HeytingAlgebra, LatticeHom, dual_poset, sigma_masks, upset_lattice
from .poset import (
    DEFAULT_CHAIN_CAP,
    DEFAULT_HOM_CAP,
    DEFAULT_UPSET_CAP,
    PMorph,
    Poset,
    bits,
    chain_masks,
    depth,
    depth_of,
    enumerate_p_morphisms,
    is_isomorphic,
    is_monotone,
    is_p_morphism,
    is_root_system,
    mask_of,
)

MAX_PRODUCT = 4096


def product_poset(factors, max_size: int = MAX_PRODUCT):
    """Componentwise order on tuples, listed lexicographically.  Returns ``(poset, tuples)``."""
    factors = list(factors)
    n = prod(f.size for f in factors)
    if n > max_size:
        raise ResourceError("product_size", max_size, n)
    tuples = list(itertools.product(*(range(f.size) for f in factors)))
    index = {t: i for i, t in enumerate(tuples)}
    up = []
    for t in tuples:
        ranges = [bits(f.up[c]) for f, c in zip(factors, t)]
        up.append(mask_of(index[u] for u in itertools.product(*map(list, ranges))))
    labels = None
    if factors:
        # plain index strings like "01" when no factor carries labels
        sep, lb, rb = ("", "", "") if all(f.labels is None for f in factors) else (",", "(", ")")
        labels = tuple(lb + sep.join(f.label(c) for f, c in zip(factors, t)) + rb for t in tuples)
    return Poset(tuple(up), labels=labels, validate=False), tuples


@dataclass(frozen=True, eq=False)
class TensorSpace:
    factors: tuple
    product: Poset = field(repr=False)
    tuples: tuple = field(repr=False)
    space: ChainPoset = field(repr=False)

    def coord(self, i: int, x: int) -> int:
        return self.tuples[x][i]

    def projection_image(self, i: int, mask: int) -> int:
        return mask_of(self.tuples[x][i] for x in bits(mask))

    def is_admissible(self, mask: int) -> bool:
        return all(f.is_upset(self.projection_image(i, mask)) for i, f in enumerate(self.factors))

    def label(self, k: int) -> str:
        return self.space.label(k)


def _require_root_systems(factors):
    for i, f in enumerate(factors):
        if not is_root_system(f):
            raise PreconditionError("not a root system", f"factor {i}")


def _filter_admissible(product, tuples, factors, cap):
    def ok(m):
        return all(f.is_upset(mask_of(tuples[x][i] for x in bits(m))) for i, f in enumerate(factors))

    return [m for m in chain_masks(product, cap) if ok(m)]


def _generate_admissible(product, tuples, factors, cap):
    """Grow admissible chains downward: every coordinate of the new minimum equals,
    or is a lower cover of, the same coordinate of the old minimum."""
    index = {t: i for i, t in enumerate(tuples)}
    lower = [f.lower_covers for f in factors]
    tops = [index[t] for t in itertools.product(*(list(bits(f.maximal())) for f in factors))] if factors else [0]
    out = []
    stack = [(1 << x, x) for x in tops]
    while stack:
        m, low = stack.pop()
        out.append(m)
        if len(out) > cap:
            raise ResourceError("chain_cap", cap, len(out))
        t = tuples[low]
        options = [[c] + list(bits(lower[i][c])) for i, c in enumerate(t)]
        for y in itertools.product(*options):
            if y == t:
                continue
            j = index[y]
            stack.append((m | (1 << j), j))
    return out


def tensor(factors, method: str = "generate", cap: int = DEFAULT_CHAIN_CAP,
           max_product: int = MAX_PRODUCT) -> TensorSpace:
    """Admissible chains of the product of root systems.

    ``method`` is ``"filter"`` (test every chain of the product),
    ``"generate"`` (grow admissible chains directly) or ``"both"``, which
    runs the two and raises if they disagree.
    """
    factors = tuple(factors)
    _require_root_systems(factors)
    product, tuples = product_poset(factors, max_product)
    if method == "filter":
        masks = _filter_admissible(product, tuples, factors, cap)
    elif method == "generate":
        masks = _generate_admissible(product, tuples, factors, cap) if product.size else []
    elif method == "both":
        masks = _filter_admissible(product, tuples, factors, cap)
        gen = _generate_admissible(product, tuples, factors, cap) if product.size else []
        if sorted(masks) != sorted(gen):
            raise CheckFailed("tensor cross-check", f"filter gives {len(masks)} chains, generator {len(gen)}")
    else:
        raise PreconditionError("unknown tensor method", method)
    space = ChainPoset.from_masks(product, masks, "cc", "tensor")
    return TensorSpace(factors, product, tuple(tuples), space)


def restrict_tensor(t: TensorSpace, n: int) -> ChainPoset:
    """Admissible chains with at most ``n`` elements."""
    masks = [m for m in t.space.masks if m.bit_count() <= n]
    return ChainPoset(t.product, tuple(masks), "cc", f"tensor_n({n})")


def tensor_projection(t: TensorSpace, i: int, space: ChainPoset | None = None) -> PMorph:
    """``C -> coordinate i of the least element of C``."""
    if not 0 <= i < len(t.factors):
        raise DimensionError("projection index", f"{i} not in 0..{len(t.factors) - 1}")
    space = space or t.space
    return PMorph(space.order, t.factors[i], tuple(t.tuples[x][i] for x in space.least))


def mediating_map(t: TensorSpace, z: Poset, fs) -> tuple:
    """``z -> {(f_i(w))_i | w above z}`` as chain masks over the product."""
    index = {tp: k for k, tp in enumerate(t.tuples)}
    out = []
    for v in range(z.size):
        out.append(mask_of(index[tuple(f.map[w] for f in fs)] for w in bits(z.up[v])))
    return tuple(out)


def verify_product_universal(t: TensorSpace, z: Poset, fs, cap: int = DEFAULT_HOM_CAP) -> Certificate:
    """The mediating map exists, factors through the projections, and is the only such p-morphism."""
    fs = list(fs)
    if len(fs) != len(t.factors):
        raise DimensionError("maps", f"{len(fs)} maps for {len(t.factors)} factors")
    for f, y in zip(fs, t.factors):
        if f.source != z or f.target != y:
            raise DimensionError("maps", "map source/target mismatch")
    cert = Certificate("product-universal")
    masks = mediating_map(t, z, fs)
    idx = t.space.index
    inside = all(m in idx for m in masks)
    cert.record(inside, "mediating map leaves the admissible chains")
    if not inside:
        return cert
    g = PMorph(z, t.space.order, tuple(idx[m] for m in masks))
    cert.record(is_p_morphism(g), "mediating map is not a p-morphism")
    for i, f in enumerate(fs):
        p = tensor_projection(t, i)
        cert.record(tuple(p.map[g.map[v]] for v in range(z.size)) == f.map, f"projection {i} does not factor")
    target = {}
    for k, x in enumerate(t.space.least):
        target[t.tuples[x]] = target.get(t.tuples[x], 0) | (1 << k)
    allowed = [target.get(tuple(f.map[v] for f in fs), 0) for v in range(z.size)]
    found = list(enumerate_p_morphisms(z, t.space.order, cap, allowed))
    cert.record(found == [g.map], f"{len(found)} p-morphisms factor through the projections")
    cert.details["factorizations"] = len(found)
    return cert


# coproducts of algebras

@dataclass
class CoproductResult:
    """Coproduct as the upset algebra of a chain space, with per-factor injection masks."""

    tensor: TensorSpace
    space: ChainPoset
    factors: tuple
    injection_masks: tuple
    upset_cap: int = DEFAULT_UPSET_CAP
    _algebra: HeytingAlgebra | None = field(default=None, repr=False)

    @property
    def algebra(self) -> HeytingAlgebra:
        if self._algebra is None:
            self._algebra = upset_lattice(self.space.order, self.upset_cap)
        return self._algebra

    @property
    def injections(self) -> list:
        alg = self.algebra
        return [LatticeHom(g, alg, tuple(alg.index_of(m) for m in ms), "heyting")
                for g, ms in zip(self.factors, self.injection_masks)]

    def __iter__(self):
        yield self.algebra
        yield self.injections


def _require_godel(gs):
    for i, g in enumerate(gs):
        if not isinstance(g, HeytingAlgebra) or not g.godel:
            raise PreconditionError("not a Goedel algebra", f"factor {i}")


def _injection_masks(t: TensorSpace, space: ChainPoset, gs) -> tuple:
    out = []
    for i, g in enumerate(gs):
        row = []
        for s in sigma_masks(g):
            pre = mask_of(x for x, tp in enumerate(t.tuples) if (s >> tp[i]) & 1)
            row.append(space.box(pre))
        out.append(tuple(row))
    return tuple(out)


def coproduct_godel(gs, cap: int = DEFAULT_CHAIN_CAP, upset_cap: int = DEFAULT_UPSET_CAP) -> CoproductResult:
    gs = tuple(gs)
    _require_godel(gs)
    t = tensor([dual_poset(g) for g in gs], cap=cap)
    return CoproductResult(t, t.space, gs, _injection_masks(t, t.space, gs), upset_cap)


def coproduct_gan(gs, n: int, cap: int = DEFAULT_CHAIN_CAP, upset_cap: int = DEFAULT_UPSET_CAP) -> CoproductResult:
    gs = tuple(gs)
    _require_godel(gs)
    if n < 1:
        raise PreconditionError("depth bound below 1", str(n))
    duals = [dual_poset(g) for g in gs]
    for i, d in enumerate(duals):
        if depth_of(d) > n:
            raise PreconditionError("factor outside GA_n", f"factor {i} has depth {depth_of(d)} > {n}")
    t = tensor(duals, cap=cap)
    space = restrict_tensor(t, n)
    return CoproductResult(t, space, gs, _injection_masks(t, space, gs), upset_cap)


def depth_of_coproduct(ds) -> int:
    ds = list(ds)
    for d in ds:
        if d < 1:
            raise PreconditionError("trivial factor", "every factor needs depth at least 1")
    return 1 + sum(d - 1 for d in ds)


def _as_spaces(items):
    return [dual_poset(x) if isinstance(x, HeytingAlgebra) else x for x in items]


def depth_check(items, cap: int = DEFAULT_CHAIN_CAP) -> Certificate:
    """Compare the depth of the admissible-chain space with the closed formula.

    ``items`` may be root systems or Goedel algebras (their duals are used).
    Also checks chainwise that no admissible chain exceeds the bound.
    """
    spaces = _as_spaces(items)
    _require_root_systems(spaces)
    formula = depth_of_coproduct([depth_of(y) for y in spaces])
    t = tensor(spaces, cap=cap)
    computed = depth_of(t.space.order)
    cert = Certificate("depth")
    cert.record(computed == formula, f"formula {formula}, computed {computed}")
    for k, m in enumerate(t.space.masks):
        cert.record(m.bit_count() <= formula, f"chain {t.label(k)} longer than the bound")
    cert.details.update(formula=formula, computed=computed)
    cert.summary = f"formula {formula}, computed {computed}"
    return cert


def witness_chain(factors, ws, zs) -> tuple:
    """Chain of the product through the coordinates listed in ``zs``, in that order.

    ``ws`` picks a maximal element per factor; ``zs`` is a list of
    ``(factor index, element)`` pairs with distinct indices and each
    element below the chosen maximum.  Segment ``j`` fixes the earlier
    listed coordinates at their ``z``, runs coordinate ``i_j`` through the
    chain above ``z_{i_j}``, and keeps the remaining coordinates at ``w``.
    Returns ``(mask over the product, tuples)``.
    """
    factors = list(factors)
    _require_root_systems(factors)
    if len(ws) != len(factors):
        raise DimensionError("maxima", f"{len(ws)} maxima for {len(factors)} factors")
    for i, (f, w) in enumerate(zip(factors, ws)):
        if not (f.maximal() >> w) & 1:
            raise PreconditionError("not maximal", f"w_{i}={w}")
    seen = set()
    for i, z in zs:
        if i in seen or not 0 <= i < len(factors):
            raise PreconditionError("bad coordinate list", f"index {i}")
        seen.add(i)
        if not factors[i].leq(z, ws[i]):
            raise PreconditionError("z not below w", f"coordinate {i}")
    point = list(ws)
    members = {tuple(point)}
    for i, z in zs:
        for y in bits(factors[i].up[z]):
            point[i] = y
            members.add(tuple(point))
        point[i] = z
    product, tuples = product_poset(factors)
    index = {t: k for k, t in enumerate(tuples)}
    mask = mask_of(index[m] for m in members)
    if not product.is_chain(mask):
        raise PreconditionError("not a chain", "witness segments are not nested")
    return mask, tuples


def witness_size(factors, zs) -> int:
    return 1 + sum(depth(factors[i], z) - 1 for i, z in zs)


def gan_coincidence(gs, n: int, cap: int = DEFAULT_CHAIN_CAP) -> bool:
    """Whether the coproduct in GA_n agrees with the full coproduct, decided on the dual posets."""
    gs = tuple(gs)
    _require_godel(gs)
    for i, g in enumerate(gs):
        if g.size < 2:
            raise PreconditionError("trivial factor", f"factor {i}")
    res = coproduct_gan(gs, n, cap)
    full = res.tensor.space.order
    return res.space.size == full.size and is_isomorphic(res.space.order, full)


def tensor_laws_check(t: TensorSpace, cap: int = DEFAULT_CHAIN_CAP) -> Certificate:
    """Admissibility, root-system property, upset of all chains, and projection p-morphisms."""
    cert = Certificate("tensor")
    cert.record(is_root_system(t.space.order), "not a root system")
    for k, m in enumerate(t.space.masks):
        cert.record(t.is_admissible(m), f"{t.label(k)} not admissible")
    full = cc(t.product, cap)
    mine = set(t.space.masks)
    inside = mask_of(full.index[m] for m in mine)
    cert.record(full.up_of(inside) == inside, "not an upset of all chains")
    for i in range(len(t.factors)):
        p = tensor_projection(t, i)
        cert.record(is_monotone(p) and is_p_morphism(p), f"projection {i} is not a p-morphism")
    return cert
