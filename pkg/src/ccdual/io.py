"""JSON readers/writers and DOT export.

Poset objects look like ``{"size": n, "covers": [[i, j], ...]}`` where
``j`` covers ``i``.  Lattice objects are either ``{"poset": <poset>}``
(its upset algebra) or ``{"size": n, "meet": [[..]], "join": [[..]]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .chainspace import ChainPoset
from .errors import ParseError
from .lattice import DistLattice, HeytingAlgebra, upset_lattice
from .poset import Poset, bits

SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


def poset_to_obj(p: Poset) -> dict:
    obj = {"size": p.size, "covers": [list(c) for c in p.covers()]}
    if p.labels is not None:
        obj["labels"] = list(p.labels)
    return obj


def poset_from_obj(obj) -> Poset:
    if not isinstance(obj, dict) or "size" not in obj:
        raise ParseError("poset object", "expected an object with a 'size' key")
    n = obj["size"]
    covers = obj.get("covers", [])
    if not isinstance(n, int) or n < 0:
        raise ParseError("poset size", repr(n))
    if not isinstance(covers, list) or any(not isinstance(c, list) or len(c) != 2 for c in covers):
        raise ParseError("poset covers", "expected a list of [i, j] pairs")
    labels = obj.get("labels")
    return Poset.from_covers(n, [tuple(c) for c in covers], labels=tuple(labels) if labels else None)


def lattice_from_obj(obj) -> HeytingAlgebra:
    if isinstance(obj, dict) and "poset" in obj:
        return upset_lattice(poset_from_obj(obj["poset"]))
    if not isinstance(obj, dict) or not {"meet", "join"} <= set(obj):
        raise ParseError("lattice object", "expected 'poset' or 'meet'/'join' tables")
    meet, join = obj["meet"], obj["join"]
    if "size" in obj and obj["size"] != len(meet):
        raise ParseError("lattice size", f"size {obj['size']} but {len(meet)} rows")
    return HeytingAlgebra.from_lattice(DistLattice(meet, join, obj.get("labels")))


def lattice_to_obj(lat: DistLattice) -> dict:
    obj = {"size": lat.size, "meet": [list(r) for r in lat.meet], "join": [list(r) for r in lat.join]}
    if isinstance(lat, HeytingAlgebra):
        obj["impl"] = [list(r) for r in lat.impl]
        obj["godel"] = lat.godel
    return obj


def chainposet_to_obj(space: ChainPoset) -> dict:
    return {
        "base": poset_to_obj(space.base),
        "chains": [list(bits(m)) for m in space.masks],
        "order": poset_to_obj(space.order),
        "kind": space.kind,
        "variant": space.variant,
    }


def chainposet_from_obj(obj) -> ChainPoset:
    try:
        base = poset_from_obj(obj["base"])
        masks = [sum(1 << x for x in c) for c in obj["chains"]]
        return ChainPoset(base, tuple(masks), obj.get("kind", "cc"), obj.get("variant", "full"))
    except (KeyError, TypeError) as exc:
        raise ParseError("chain space object", str(exc)) from None


def read_json(path) -> object:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError("cannot read file", str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ParseError("malformed JSON", f"{path}: {exc.msg} at line {exc.lineno}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


# DOT export

def chain_label(space: ChainPoset, i: int, subscripts: bool = False) -> str:
    """``{x1,...,xk}``; with ``subscripts`` bare indices render as ``x₁``."""
    p = space.base
    if subscripts and p.labels is None:
        return "{" + ",".join(f"x{x}".translate(SUBSCRIPTS) for x in bits(space.masks[i])) + "}"
    return space.label(i)


def poset_to_dot(p: Poset, name: str = "P", labels=None, extra_edges=()) -> str:
    """Hasse diagram, bottom to top; ``extra_edges`` are drawn dotted."""
    labels = labels or [p.label(i) for i in range(p.size)]
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i in range(p.size):
        lines.append(f'  n{i} [label="{labels[i]}"];')
    for i, j in p.covers():
        lines.append(f"  n{i} -> n{j};")
    for i, j in extra_edges:
        lines.append(f"  n{i} -> n{j} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def chainposet_to_dot(space: ChainPoset, name: str = "CC", compare_with: ChainPoset | None = None,
                      subscripts: bool = False) -> str:
    """Chain-labelled Hasse diagram.  With ``compare_with`` (same chains, coarser order)
    only its covers are solid and the rest are dotted."""
    labels = [chain_label(space, i, subscripts) for i in range(space.size)]
    if compare_with is None:
        return poset_to_dot(space.order, name, labels)
    solid = set(compare_with.order.covers())
    extra = [e for e in space.order.covers() if e not in solid]
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for i in range(space.size):
        lines.append(f'  n{i} [label="{labels[i]}"];')
    for i, j in sorted(solid):
        lines.append(f"  n{i} -> n{j};")
    for i, j in extra:
        lines.append(f"  n{i} -> n{j} [style=dotted];")
    lines.append("}")
    return "\n".join(lines) + "\n"
