"""Write the diamond's chain space and nerve as DOT files and print their cover counts.

Solid edges are covers of the up-closed-subchain order; dotted edges are the
extra covers reverse inclusion adds.
"""

import argparse
from dataclasses import dataclass
from pathlib import Path

from ccdual import io
from ccdual.chainspace import cc
from ccdual.nerve import nerve
from ccdual.poset import diamond_poset


@dataclass
class DiagramConfig:
    outdir: Path = Path("diagrams")
    subscripts: bool = False


def main(cfg: DiagramConfig):
    d = diamond_poset()
    space, ny = cc(d), nerve(d)
    cfg.outdir.mkdir(parents=True, exist_ok=True)
    (cfg.outdir / "cc_d4.dot").write_text(io.chainposet_to_dot(space, "CC", subscripts=cfg.subscripts))
    (cfg.outdir / "nerve_d4.dot").write_text(
        io.chainposet_to_dot(ny, "nerve", compare_with=space, subscripts=cfg.subscripts))
    solid = set(space.order.covers())
    extra = [e for e in ny.order.covers() if e not in solid]
    print(f"chains: {space.size}")
    print(f"chain-order covers: {len(solid)}")
    print(f"extra nerve covers: {len(extra)}")
    for i, j in extra:
        print(f"  {ny.label(i)} < {ny.label(j)}")
    print(f"wrote {cfg.outdir / 'cc_d4.dot'} and {cfg.outdir / 'nerve_d4.dot'}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", type=Path, default=DiagramConfig.outdir)
    ap.add_argument("--subscripts", action="store_true", help="label points x0, x1, ... instead of 00, 01, ...")
    a = ap.parse_args()
    main(DiagramConfig(a.outdir, a.subscripts))
