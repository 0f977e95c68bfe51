"""Free Goedel algebras as upset algebras of chain spaces.

The free algebra over a lattice ``L`` is the algebra of upsets of the
chains of ``L``'s dual, with unit ``a -> box(sigma(a))``.  Over ``k``
generators the base is the cube ``2^k`` and generator ``s`` goes to the
box of the half-space where coordinate ``s`` is 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .certificate import Certificate
from .chainspace import ChainPoset, cc, cc_n
from .coproduct import product_poset
from .errors import PreconditionError, ResourceError
from .lattice import (
    DistLattice,
    HeytingAlgebra,
    LatticeHom,
    dual_poset,
    enumerate_homs,
    is_in_gan,
    sigma_masks,
    upset_lattice,
)
from .poset import (
    DEFAULT_CHAIN_CAP,
    DEFAULT_HOM_CAP,
    DEFAULT_UPSET_CAP,
    chain_poset,
    count_upsets_forest,
    count_upsets_transfer,
    enumerate_monotone_maps,
    enumerate_p_morphisms,
    mask_of,
)

MAX_GENERATORS = 3


@dataclass
class FreeAlgebraResult:
    """Dual chain space plus unit images, with the upset algebra built on demand.

    ``unit`` holds one chain-set mask per element of the input lattice (or
    per generator when ``lattice`` is None).
    """

    dual: ChainPoset
    unit: tuple
    lattice: DistLattice | None = None
    depth: int | None = None
    upset_cap: int = 100_000
    _algebra: HeytingAlgebra | None = field(default=None, repr=False)

    @property
    def algebra(self) -> HeytingAlgebra:
        if self._algebra is None:
            self._algebra = upset_lattice(self.dual.order, self.upset_cap)
        return self._algebra

    @property
    def materialized(self) -> bool:
        return self._algebra is not None

    def algebra_size(self) -> int:
        """Number of upsets of the dual, counted without listing them."""
        if self._algebra is not None:
            return self._algebra.size
        return count_upsets_forest(self.dual.order)

    def unit_indices(self) -> tuple:
        return tuple(self.algebra.index_of(m) for m in self.unit)

    def unit_hom(self) -> LatticeHom:
        if self.lattice is None:
            raise PreconditionError("generator unit is not a lattice map")
        return LatticeHom(self.lattice, self.algebra, self.unit_indices())

    @property
    def generators(self) -> int | None:
        return None if self.lattice is not None else len(self.unit)


def _cube_with_halfspaces(k: int):
    base, tuples = product_poset([chain_poset(2)] * k)
    halves = [mask_of(i for i, t in enumerate(tuples) if t[s] == 1) for s in range(k)]
    return base, halves


def free_godel_over_lattice(lat: DistLattice, cap: int = DEFAULT_CHAIN_CAP,
                            upset_cap: int = DEFAULT_UPSET_CAP) -> FreeAlgebraResult:
    space = cc(dual_poset(lat), cap)
    unit = tuple(space.box(s) for s in sigma_masks(lat))
    return FreeAlgebraResult(space, unit, lat, upset_cap=upset_cap)


def free_gan_over_lattice(lat: DistLattice, n: int, cap: int = DEFAULT_CHAIN_CAP,
                          upset_cap: int = DEFAULT_UPSET_CAP) -> FreeAlgebraResult:
    """Depth-bounded variant: chains of size at most ``n``."""
    space = cc_n(dual_poset(lat), n, cap)
    unit = tuple(space.box(s) for s in sigma_masks(lat))
    return FreeAlgebraResult(space, unit, lat, depth=n, upset_cap=upset_cap)


def _check_generators(k, max_generators):
    if k < 0:
        raise PreconditionError("negative generator count", str(k))
    if k > max_generators:
        raise ResourceError("generators", max_generators, k)


def free_godel(k: int, cap: int = DEFAULT_CHAIN_CAP, max_generators: int = MAX_GENERATORS,
               upset_cap: int = DEFAULT_UPSET_CAP) -> FreeAlgebraResult:
    _check_generators(k, max_generators)
    base, halves = _cube_with_halfspaces(k)
    space = cc(base, cap)
    return FreeAlgebraResult(space, tuple(space.box(h) for h in halves), upset_cap=upset_cap)


def free_gan(k: int, n: int, cap: int = DEFAULT_CHAIN_CAP, max_generators: int = MAX_GENERATORS,
             upset_cap: int = DEFAULT_UPSET_CAP) -> FreeAlgebraResult:
    _check_generators(k, max_generators)
    base, halves = _cube_with_halfspaces(k)
    space = cc_n(base, n, cap)
    return FreeAlgebraResult(space, tuple(space.box(h) for h in halves), depth=n, upset_cap=upset_cap)


def size_oracle(res: FreeAlgebraResult) -> int:
    """Independent count of the algebra: transfer-matrix over the dual order."""
    return count_upsets_transfer(res.dual.order)


# certification of the universal property

def count_heyting_extensions(g_alg: HeytingAlgebra, h: HeytingAlgebra, fixed: dict,
                             cap: int = DEFAULT_HOM_CAP) -> int:
    """Number of Heyting homs ``g_alg -> h`` agreeing with ``fixed``.

    Values are propagated through the meet, join and implication tables;
    elements left undetermined are branched on, so the count does not rely
    on ``fixed`` generating the algebra.
    """
    n = g_alg.size
    ops = ((g_alg.meet, h.meet), (g_alg.join, h.join), (g_alg.impl, h.impl))
    seeds = dict(fixed)
    seeds.setdefault(g_alg.bot, h.bot)
    seeds.setdefault(g_alg.top, h.top)
    if seeds[g_alg.bot] != h.bot or seeds[g_alg.top] != h.top:
        return 0
    count = 0

    def propagate(img, assigned, work):
        while work:
            a = work.pop()
            va = img[a]
            for b in assigned:
                vb = img[b]
                for s_op, t_op in ops:
                    for c, v in ((s_op[a][b], t_op[va][vb]), (s_op[b][a], t_op[vb][va])):
                        cur = img[c]
                        if cur < 0:
                            img[c] = v
                            work.append(c)
                        elif cur != v:
                            return False
            assigned.append(a)
            # the element paired with itself
            for s_op, t_op in ops:
                c, v = s_op[a][a], t_op[va][va]
                if img[c] < 0:
                    img[c] = v
                    work.append(c)
                elif img[c] != v:
                    return False
        return True

    def rec(img, assigned, work):
        nonlocal count
        if not propagate(img, assigned, work):
            return
        free = next((a for a in range(n) if img[a] < 0), None)
        if free is None:
            count += 1
            if count > cap:
                raise ResourceError("hom_cap", cap, count)
            return
        for v in range(h.size):
            img2 = list(img)
            img2[free] = v
            rec(img2, list(assigned), [free])

    img = [-1] * n
    work = []
    for a, v in seeds.items():
        if img[a] >= 0 and img[a] != v:
            return 0
        if img[a] < 0:
            img[a] = v
            work.append(a)
    rec(img, [], work)
    return count


def _fibres(space: ChainPoset) -> dict:
    out = {}
    for i, x in enumerate(space.least):
        out[x] = out.get(x, 0) | (1 << i)
    return out


def certify_free(res: FreeAlgebraResult, h: HeytingAlgebra, method: str = "auto",
                 cap: int = DEFAULT_HOM_CAP) -> Certificate:
    """Every lattice hom ``f: L -> h`` has exactly one Heyting extension through the unit.

    ``"algebraic"`` enumerates lattice homs and counts Heyting homs on the
    materialized algebra.  ``"dual"`` enumerates monotone maps
    ``h_* -> L_*`` and counts p-morphisms ``h_* -> CC(L_*)`` over each.
    ``"both"`` runs both and also compares their hom counts.
    """
    if res.lattice is None:
        raise PreconditionError("no input lattice", "use certify_free_generators for free algebras over sets")
    if not h.godel:
        raise PreconditionError("not a Goedel algebra", "target of certify_free")
    if res.depth is not None:
        if not is_in_gan(h, res.depth):
            raise PreconditionError("target outside GA_n", f"n={res.depth}")
    if method == "auto":
        method = "algebraic" if res.algebra_size() * h.size <= 4096 else "dual"
    cert = Certificate(f"free[{method}]")
    if method in ("algebraic", "both"):
        alg = res.algebra
        unit = res.unit_indices()
        homs = enumerate_homs(res.lattice, h, "lattice", cap)
        counts = []
        for f in homs:
            fixed = {}
            clash = False
            for a, e in enumerate(unit):
                if fixed.get(e, f.map[a]) != f.map[a]:
                    clash = True
                fixed[e] = f.map[a]
            n_ext = 0 if clash else count_heyting_extensions(alg, h, fixed, cap)
            counts.append(n_ext)
            cert.record(n_ext == 1, f"f={f.map} has {n_ext} extensions")
        cert.details["algebraic"] = {"homs": len(homs), "extensions": counts}
    if method in ("dual", "both"):
        hx = dual_poset(h)
        lx = res.dual.base
        fib = _fibres(res.dual)
        counts = []
        for psi in enumerate_monotone_maps(hx, lx, cap):
            allowed = [fib.get(psi[v], 0) for v in range(hx.size)]
            n_ext = sum(1 for _ in enumerate_p_morphisms(hx, res.dual.order, cap, allowed))
            counts.append(n_ext)
            cert.record(n_ext == 1, f"dual map {psi} has {n_ext} lifts")
        cert.details["dual"] = {"homs": len(counts), "extensions": counts}
    if method == "both":
        a, d = cert.details["algebraic"]["homs"], cert.details["dual"]["homs"]
        cert.record(a == d, f"hom counts differ: {a} algebraic vs {d} dual")
    f_count = next(v["homs"] for k, v in cert.details.items() if k in ("algebraic", "dual"))
    cert.summary = f"{f_count} homs, each with one extension" if cert.passed else f"{f_count} homs"
    return cert


def certify_free_generators(res: FreeAlgebraResult, h: HeytingAlgebra, cap: int = DEFAULT_HOM_CAP) -> Certificate:
    """Every assignment of the generators into ``h`` extends to exactly one Heyting hom."""
    if res.lattice is not None:
        raise PreconditionError("result is over a lattice", "use certify_free")
    if not h.godel:
        raise PreconditionError("not a Goedel algebra", "target of certify_free_generators")
    if res.depth is not None:
        if not is_in_gan(h, res.depth):
            raise PreconditionError("target outside GA_n", f"n={res.depth}")
    alg = res.algebra
    gens = res.unit_indices()
    cert = Certificate("free-generators")
    counts = []
    for vals in itertools.product(range(h.size), repeat=len(gens)):
        fixed = {}
        clash = False
        for g, v in zip(gens, vals):
            if fixed.get(g, v) != v:
                clash = True
            fixed[g] = v
        n_ext = 0 if clash else count_heyting_extensions(alg, h, fixed, cap)
        counts.append(n_ext)
        cert.record(n_ext == 1, f"assignment {vals} has {n_ext} extensions")
    cert.details["extensions"] = counts
    cert.summary = f"{len(counts)} assignments"
    return cert


def unit_laws_check(res: FreeAlgebraResult) -> Certificate:
    """The unit is injective and preserves bounds, meets and joins (checked on masks)."""
    lat = res.lattice
    cert = Certificate("unit-laws")
    u = res.unit
    full = res.dual.full
    cert.record(u[lat.bot] == 0, "bottom not preserved")
    cert.record(u[lat.top] == full, "top not preserved")
    cert.record(len(set(u)) == len(u), "unit not injective")
    for a in range(lat.size):
        for b in range(lat.size):
            cert.record(u[lat.meet[a][b]] == u[a] & u[b], f"meet at {a},{b}")
            cert.record(u[lat.join[a][b]] == u[a] | u[b], f"join at {a},{b}")
    return cert
