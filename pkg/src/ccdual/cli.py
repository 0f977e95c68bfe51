"""Command line front end: ``ccdual {dual,free,coproduct,depth,check,nerve}``."""

from __future__ import annotations

import argparse
import itertools
import json
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .catalog import all_posets, all_root_systems, describe, godel_algebras, named_algebra, named_poset, random_root_system
from .certificate import Certificate
from .chainspace import cc, order_laws_check, preimage_laws_check, subset_laws_check
from .coproduct import (
    coproduct_gan,
    coproduct_godel,
    depth_check,
    depth_of_coproduct,
    tensor,
    tensor_laws_check,
    verify_product_universal,
    witness_chain,
    witness_size,
)
from .errors import DualityError, ParseError, PreconditionError, ValidationError
from .freealg import certify_free, free_gan, free_gan_over_lattice, free_godel, free_godel_over_lattice
from .lattice import algebra_depth, dual_poset, upset_lattice
from .nerve import (
    implication_box_formula_check,
    nerve,
    nerve_upset_characterization_check,
    twohead_check,
    upset_of_basic_check,
    z_iso_check,
)
from .poset import (
    DEFAULT_CHAIN_CAP,
    DEFAULT_HOM_CAP,
    PMorph,
    bits,
    count_upsets_forest,
    depth_of,
    enumerate_p_morphisms,
    is_root_system,
)

SUITES = ("free", "product", "depth", "z-iso", "implication", "upsets", "twohead", "box-diamond", "basic")


@dataclass
class RunConfig:
    chain_cap: int = DEFAULT_CHAIN_CAP
    hom_cap: int = DEFAULT_HOM_CAP
    seed: int = 0
    output: str | None = None
    format: str = "text"

    def __post_init__(self):
        if self.chain_cap <= 0 or self.hom_cap <= 0:
            raise ValidationError("caps must be positive")
        if self.format not in ("text", "structured", "graph"):
            raise ParseError("unknown format", self.format)


@dataclass
class Report:
    command: str
    inputs: dict
    lines: list = field(default_factory=list)
    result: dict = field(default_factory=dict)
    certificates: list = field(default_factory=list)
    graph: str | None = None

    def add(self, cert: Certificate):
        self.certificates.append(cert)
        self.lines.append(cert.line())

    @property
    def failed(self):
        return [c for c in self.certificates if not c.passed]


# input resolution

def load_poset(source: str):
    if Path(source).is_file():
        return io.poset_from_obj(io.read_json(source))
    return named_poset(source)


def load_algebra(source: str):
    if Path(source).is_file():
        return io.lattice_from_obj(io.read_json(source))
    return named_algebra(source)


def load_lattice(source: str):
    return load_algebra(source)


# commands

def cmd_dual(args, cfg) -> Report:
    if args.lattice:
        lat = load_lattice(args.lattice)
        x = dual_poset(lat)
        rep = Report("dual", {"lattice": args.lattice})
        rep.lines.append(f"dual poset: {x.size} elements")
        rep.lines.append(describe(x))
        rep.result = {"poset": io.poset_to_obj(x), "root_system": is_root_system(x)}
        rep.graph = io.poset_to_dot(x, "dual")
        return rep
    if not args.poset:
        raise ParseError("missing input", "dual needs --lattice or --poset")
    p = load_poset(args.poset)
    h = upset_lattice(p)
    rep = Report("dual", {"poset": args.poset})
    rep.lines.append(f"upset algebra: {h.size} elements; goedel: {str(h.godel).lower()}")
    if h.godel:
        rep.lines.append(f"depth: {depth_of(p)}")
    rep.result = {"algebra": io.lattice_to_obj(h)}
    rep.graph = io.poset_to_dot(p, "poset")
    return rep


def cmd_free(args, cfg) -> Report:
    if args.generators is not None:
        k = args.generators
        res = free_godel(k, cfg.chain_cap) if args.depth is None else free_gan(k, args.depth, cfg.chain_cap)
        inputs = {"generators": k, "depth": args.depth}
    elif args.lattice:
        lat = load_lattice(args.lattice)
        res = (free_godel_over_lattice(lat, cfg.chain_cap) if args.depth is None
               else free_gan_over_lattice(lat, args.depth, cfg.chain_cap))
        inputs = {"lattice": args.lattice, "depth": args.depth}
    else:
        raise ParseError("missing input", "free needs --generators or --lattice")
    rep = Report("free", inputs)
    size = res.algebra_size()
    rep.lines.append(f"dual: {res.dual.size} elements; algebra: {size} elements")
    rep.lines.append(f"dual depth: {depth_of(res.dual.order)}")
    names = [f"g{s}" for s in range(len(res.unit))] if res.lattice is None else [str(a) for a in range(len(res.unit))]
    for nm, m in zip(names, res.unit):
        rep.lines.append(f"  {nm} -> {{" + ", ".join(res.dual.label(i) for i in bits(m)) + "}")
    rep.result = {"dual_size": res.dual.size, "algebra_size": size,
                  "unit": [list(bits(m)) for m in res.unit], "dual": io.chainposet_to_obj(res.dual)}
    rep.graph = io.chainposet_to_dot(res.dual, "free")
    return rep


def _algebras(args):
    if not args.alg:
        raise ParseError("missing input", "at least one --alg is needed")
    return [load_algebra(a) for a in args.alg]


def cmd_coproduct(args, cfg) -> Report:
    gs = _algebras(args)
    res = coproduct_godel(gs, cfg.chain_cap) if args.depth is None else coproduct_gan(gs, args.depth, cfg.chain_cap)
    rep = Report("coproduct", {"alg": args.alg, "depth": args.depth})
    size = count_upsets_forest(res.space.order)
    rep.lines.append(f"tensor: {res.space.size} chains over a product of {res.tensor.product.size} points")
    rep.lines.append(f"algebra: {size} elements; depth {depth_of(res.space.order)}")
    rep.result = {"chains": res.space.size, "algebra_size": size, "depth": depth_of(res.space.order),
                  "space": io.chainposet_to_obj(res.space)}
    rep.graph = io.chainposet_to_dot(res.space, "tensor")
    return rep


def cmd_depth(args, cfg) -> Report:
    gs = _algebras(args)
    ds = [algebra_depth(g) for g in gs]
    cert = depth_check(gs, cfg.chain_cap)
    rep = Report("depth", {"alg": args.alg})
    rep.lines.append(f"formula {depth_of_coproduct(ds)}, computed {cert.details['computed']}")
    rep.result = {"depths": ds, "formula": cert.details["formula"], "computed": cert.details["computed"]}
    rep.certificates.append(cert)
    return rep


def _suite_posets(args):
    if args.poset:
        return [load_poset(args.poset)]
    return all_posets(3)


def run_suite(name: str, args, cfg) -> list:
    rng = random.Random(cfg.seed)
    certs = []
    if name == "free":
        targets = godel_algebras(6)
        for p in _suite_posets(args):
            res = free_godel_over_lattice(upset_lattice(p), cfg.chain_cap)
            agg = Certificate(f"free[{describe(p)}]")
            for h in targets:
                agg.merge(certify_free(res, h, "auto", cfg.hom_cap))
            certs.append(agg)
    elif name == "product":
        factors = [p for p in _suite_posets(args) if is_root_system(p) and p.size]
        for y in factors:
            t = tensor([y, y], "both", cfg.chain_cap)
            certs.append(tensor_laws_check(t, cfg.chain_cap))
            agg = Certificate(f"product-universal[{describe(y)}]")
            for z in all_root_systems(3, 1):
                maps = list(enumerate_p_morphisms(z, y, cfg.hom_cap))
                for f1, f2 in itertools.product(maps, maps):
                    agg.merge(verify_product_universal(t, z, [PMorph(z, y, f1), PMorph(z, y, f2)], cfg.hom_cap))
            certs.append(agg)
    elif name == "depth":
        if args.poset:
            fams = [[load_poset(args.poset)] * 2]
        else:
            fams = [[random_root_system(rng, 4) for _ in range(rng.randint(1, 3))] for _ in range(100)]
        agg = Certificate("depth")
        for fam in fams:
            if not all(is_root_system(f) for f in fam):
                raise PreconditionError("not a root system", "depth suite")
            agg.merge(depth_check(fam, cfg.chain_cap))
            agg.merge(witness_check(fam, cfg.chain_cap))
        agg.summary = f"{len(fams)} families"
        certs.append(agg)
    else:
        fns = {
            "z-iso": lambda p: [z_iso_check(p, cfg.chain_cap)],
            "implication": lambda p: [implication_box_formula_check(p, cfg.chain_cap)],
            "upsets": lambda p: [nerve_upset_characterization_check(p, cfg.chain_cap)],
            "twohead": lambda p: [twohead_check(p)],
            "basic": lambda p: [upset_of_basic_check(p)],
            "box-diamond": lambda p: [subset_laws_check(p), order_laws_check(p), preimage_laws_check(p)],
        }
        if name not in fns:
            raise ParseError("unknown suite", name)
        for p in _suite_posets(args):
            certs.extend(fns[name](p))
    return certs


def witness_check(factors, cap=DEFAULT_CHAIN_CAP) -> Certificate:
    """Deepest witness chains are admissible and reach the formula."""
    cert = Certificate("witness")
    t = tensor(factors, cap=cap)
    ws, zs = [], []
    for i, f in enumerate(factors):
        # an element of maximal depth and the unique maximal element above it
        z = max(range(f.size), key=lambda v: (f.up[v].bit_count(), -v))
        w = next(v for v in bits(f.up[z]) if f.up[v] == 1 << v)
        ws.append(w)
        if f.up[z].bit_count() > 1:
            zs.append((i, z))
    mask, _ = witness_chain(factors, ws, zs)
    want = witness_size(factors, zs)
    cert.record(mask in t.space.index, "witness is not admissible")
    cert.record(mask.bit_count() == want == depth_of_coproduct([depth_of(f) for f in factors]),
                f"witness size {mask.bit_count()} vs {want}")
    return cert


def cmd_check(args, cfg) -> Report:
    rep = Report("check", {"suite": args.suite, "poset": args.poset, "seed": cfg.seed})
    for cert in run_suite(args.suite, args, cfg):
        rep.add(cert)
    if args.suite == "z-iso" and len(rep.certificates) == 1 and rep.certificates[0].passed:
        rep.lines = [rep.certificates[0].summary]
    rep.result = {"passed": not rep.failed, "cases": sum(c.cases for c in rep.certificates)}
    return rep


def cmd_nerve(args, cfg) -> Report:
    if not args.poset:
        raise ParseError("missing input", "nerve needs --poset")
    p = load_poset(args.poset)
    ny = nerve(p, cfg.chain_cap)
    space = cc(p, cfg.chain_cap)
    solid = set(space.order.covers())
    extra = [e for e in ny.order.covers() if e not in solid]
    rep = Report("nerve", {"poset": args.poset, "checks": args.check})
    rep.lines.append(f"nerve: {ny.size} chains, {len(ny.order.covers())} covers, "
                     f"{len(extra)} beyond the chain order")
    for i, j in extra:
        rep.lines.append(f"  {ny.label(i)} < {ny.label(j)}")
    rep.result = {"chains": ny.size, "covers": len(ny.order.covers()),
                  "extra": [[ny.label(i), ny.label(j)] for i, j in extra]}
    rep.graph = io.chainposet_to_dot(ny, "nerve", compare_with=space)
    for name in args.check or []:
        args.suite = name
        for cert in run_suite(name, args, cfg):
            rep.add(cert)
    return rep


COMMANDS = {"dual": cmd_dual, "free": cmd_free, "coproduct": cmd_coproduct, "depth": cmd_depth,
            "check": cmd_check, "nerve": cmd_nerve}


class _Parser(argparse.ArgumentParser):
    """Usage errors become parse errors so they share the ``ERROR`` first line."""

    def error(self, message):
        raise ParseError("command line", message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--cap-chains", type=int, default=DEFAULT_CHAIN_CAP, dest="cap_chains")
    common.add_argument("--cap-homs", type=int, default=DEFAULT_HOM_CAP, dest="cap_homs")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "structured", "graph"), default="text")
    common.add_argument("--output", default=None, help="write to this file instead of stdout")

    parser = _Parser(prog="ccdual", description="Finite duality for free Goedel algebras.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("dual", parents=[common], help="Birkhoff dual of a lattice or upset algebra of a poset")
    p.add_argument("--lattice")
    p.add_argument("--poset")

    p = sub.add_parser("free", parents=[common], help="free Goedel algebra over generators or a lattice")
    p.add_argument("--generators", type=int)
    p.add_argument("--lattice")
    p.add_argument("--depth", type=int)

    helps = {"coproduct": "coproduct of finite Goedel algebras via the chain tensor",
             "depth": "depth of a coproduct, by formula and by construction"}
    for name in ("coproduct", "depth"):
        p = sub.add_parser(name, parents=[common], help=helps[name])
        p.add_argument("--alg", action="append", default=[])
        if name == "coproduct":
            p.add_argument("--depth", type=int)

    p = sub.add_parser("check", parents=[common], help="run a named verification suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--poset")

    p = sub.add_parser("nerve", parents=[common], help="reverse-inclusion order on chains")
    p.add_argument("--poset")
    p.add_argument("--check", action="append", choices=("z-iso", "implication", "upsets", "twohead", "basic"))
    return parser


def render(rep: Report, cfg: RunConfig) -> str:
    if cfg.format == "structured":
        obj = {"command": rep.command, "inputs": rep.inputs, "result": rep.result,
               "certificates": [c.to_dict() for c in rep.certificates]}
        return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if cfg.format == "graph":
        if rep.graph is None:
            raise PreconditionError("no graph", f"{rep.command} has no graph output")
        return rep.graph
    return "\n".join(rep.lines) + "\n"


def _error_text(exc: DualityError) -> str:
    first = f"ERROR {exc.code} {exc.subject}"
    return first + ("" if exc.detail is None else f"\n{exc.detail}") + "\n"


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.cap_chains, args.cap_homs, args.seed, args.output, args.format)
        rep = COMMANDS[args.command](args, cfg)
        text = render(rep, cfg)
        if rep.failed:
            names = ",".join(c.name for c in rep.failed)
            text = f"ERROR check {names}\n" + text
    except DualityError as exc:
        sys.stdout.write(_error_text(exc))
        return 2 if exc.code in ("validation", "parse", "dimension") else 1
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 1 if rep.failed else 0


if __name__ == "__main__":
    sys.exit(main())
