"""Table of free Goedel algebra sizes by generator count and depth bound.

Sizes come from the forest upset counter and are cross-checked against the
transfer-matrix counter (skipped for duals above --oracle-limit chains).
"""

import argparse
from dataclasses import dataclass

from ccdual.freealg import free_gan, free_godel, size_oracle
from ccdual.poset import depth_of


@dataclass
class SizesConfig:
    max_generators: int = 3
    oracle_limit: int = 40


def rows(cfg: SizesConfig):
    for k in range(cfg.max_generators + 1):
        full = free_godel(k)
        d = depth_of(full.dual.order)
        for n in list(range(1, d)) + [None]:
            res = full if n is None else free_gan(k, n)
            size = res.algebra_size()
            if res.dual.size <= cfg.oracle_limit and size_oracle(res) != size:
                raise SystemExit(f"counter mismatch at k={k}, n={n}")
            yield k, "full" if n is None else n, res.dual.size, size


def main(cfg: SizesConfig):
    print(f"{'k':>2} {'depth':>6} {'dual':>5}  algebra")
    for k, n, dual, size in rows(cfg):
        print(f"{k:>2} {n!s:>6} {dual:>5}  {size}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-generators", type=int, default=SizesConfig.max_generators)
    ap.add_argument("--oracle-limit", type=int, default=SizesConfig.oracle_limit)
    a = ap.parse_args()
    main(SizesConfig(a.max_generators, a.oracle_limit))
