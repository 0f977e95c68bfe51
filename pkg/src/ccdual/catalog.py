"""Finite corpora of posets and named structures used by tests and the CLI."""

from __future__ import annotations

import random
import re
from functools import lru_cache

from .coproduct import product_poset
from .errors import ParseError
from .freealg import free_godel
from .lattice import boolean_lattice, chain_lattice, upset_lattice
from .poset import (
    Poset,
    antichain_poset,
    bits,
    canonical_form,
    chain_poset,
    count_upsets_forest,
    diamond_poset,
    empty_poset,
    is_root_system,
)


@lru_cache(maxsize=None)
def posets_of_size(n: int) -> tuple:
    """All posets with ``n`` elements up to isomorphism (built by adding a new maximal element)."""
    if n == 0:
        return (empty_poset(),)
    seen = {}
    for base in posets_of_size(n - 1):
        # the new element n-1 sits above exactly the chosen downset of the old poset
        for d in _downsets(base):
            up = tuple(u | (1 << (n - 1)) if (d >> i) & 1 else u for i, u in enumerate(base.up)) + (1 << (n - 1),)
            p = Poset(up, validate=False)
            seen.setdefault(canonical_form(p), p)
    return tuple(seen[k] for k in sorted(seen))


def _downsets(p: Poset):
    out = [0]
    for x in p.linear_extension:
        out += [m | (1 << x) for m in out if p.down[x] & ~(1 << x) & ~m == 0]
    return out


def all_posets(max_size: int, min_size: int = 0) -> list:
    return [p for n in range(min_size, max_size + 1) for p in posets_of_size(n)]


def all_root_systems(max_size: int, min_size: int = 0) -> list:
    return [p for p in all_posets(max_size, min_size) if is_root_system(p)]


def random_root_system(rng: random.Random, max_size: int, min_size: int = 1) -> Poset:
    """A random forest with roots on top; element 0 is always maximal."""
    n = rng.randint(min_size, max_size)
    parent = [None] * n
    for i in range(1, n):
        parent[i] = rng.choice([None] + list(range(i)))
    up = []
    for i in range(n):
        m, j = 0, i
        while j is not None:
            m |= 1 << j
            j = parent[j]
        up.append(m)
    return Poset(tuple(up))


def random_poset(rng: random.Random, n: int, density: float = 0.4) -> Poset:
    covers = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset.from_covers(n, covers)


def cube_poset(k: int) -> Poset:
    """The k-fold power of the two element chain, coordinates read as tuples."""
    return product_poset([chain_poset(2)] * k)[0]


_NAMED = {
    "empty": lambda: empty_poset(),
    "point": lambda: chain_poset(1),
    "d4": diamond_poset,
    "v": lambda: Poset.from_covers(3, [(0, 1), (0, 2)]),
    "lambda": lambda: Poset.from_covers(3, [(0, 2), (1, 2)]),
}


def named_poset(name: str) -> Poset:
    """Resolve ``point``, ``d4``, ``chain-K``, ``antichain-K``, ``cube-K`` and friends."""
    key = name.strip().lower()
    if key in _NAMED:
        return _NAMED[key]()
    m = re.fullmatch(r"(chain|antichain|cube)-(\d+)", key)
    if not m:
        raise ParseError("unknown poset name", name)
    kind, k = m.group(1), int(m.group(2))
    if kind == "chain":
        return chain_poset(k)
    if kind == "antichain":
        return antichain_poset(k)
    return cube_poset(k)


def poset_names():
    return sorted(_NAMED) + ["chain-K", "antichain-K", "cube-K"]


def describe(p: Poset) -> str:
    """``"3 points {0<1}"``: size and cover relation."""
    if not p.size:
        return "empty poset"
    noun = "point" if p.size == 1 else "points"
    return f"{p.size} {noun} {{" + ", ".join(f"{p.label(i)}<{p.label(j)}" for i, j in p.covers()) + "}"


def component_masks(p: Poset) -> list:
    """Connected components of the comparability graph."""
    left = p.full
    comps = []
    while left:
        seed = left & -left
        comp = seed
        frontier = seed
        while frontier:
            nxt = 0
            for x in bits(frontier):
                nxt |= p.up[x] | p.down[x]
            frontier = nxt & ~comp
            comp |= nxt
        comps.append(comp)
        left &= ~comp
    return comps


def named_algebra(name: str):
    """``trivial``, ``two``, ``threechain``, ``chainalg-K`` (K elements), ``boolean-K`` (K atoms),
    ``free-K`` (free on K generators, K <= 2) and ``upsets:<poset name>``."""
    key = name.strip().lower()
    if key.startswith("upsets:"):
        return upset_lattice(named_poset(key.split(":", 1)[1]))
    fixed = {"trivial": lambda: chain_lattice(1), "two": lambda: chain_lattice(2),
             "threechain": lambda: chain_lattice(3)}
    if key in fixed:
        return fixed[key]()
    m = re.fullmatch(r"(chainalg|boolean|free)-(\d+)", key)
    if not m:
        raise ParseError("unknown algebra name", name)
    kind, k = m.group(1), int(m.group(2))
    if kind == "chainalg":
        if k < 1:
            raise ParseError("chain algebra needs at least one element", name)
        return chain_lattice(k)
    if kind == "boolean":
        return boolean_lattice(k)
    if k > 2:
        raise ParseError("free algebra too large to tabulate", name)
    return free_godel(k).algebra


def algebra_names():
    return ["trivial", "two", "threechain", "chainalg-K", "boolean-K", "free-K", "upsets:<poset>"]


def godel_algebras(max_size: int, max_dual: int = 6) -> list:
    """Upset algebras of root systems with at most ``max_size`` upsets, one per isomorphism type."""
    return [upset_lattice(p) for p in all_root_systems(max_dual) if count_upsets_forest(p) <= max_size]
