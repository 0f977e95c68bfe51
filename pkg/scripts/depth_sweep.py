"""Random families of root systems: computed coproduct depth against the closed formula."""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from ccdual.catalog import describe, random_root_system
from ccdual.cli import witness_check
from ccdual.coproduct import depth_check


@dataclass
class SweepConfig:
    trials: int = 100
    max_factors: int = 3
    max_size: int = 4
    seed: int = 0


def main(cfg: SweepConfig) -> int:
    rng = random.Random(cfg.seed)
    by_depth = Counter()
    bad = 0
    for _ in range(cfg.trials):
        fam = [random_root_system(rng, cfg.max_size) for _ in range(rng.randint(1, cfg.max_factors))]
        cert = depth_check(fam)
        wit = witness_check(fam)
        by_depth[cert.details["computed"]] += 1
        if not (cert.passed and wit.passed):
            bad += 1
            print("MISMATCH", [describe(f) for f in fam], cert.summary)
    for d in sorted(by_depth):
        print(f"depth {d}: {by_depth[d]} families")
    print(f"{cfg.trials - bad}/{cfg.trials} families agree with the formula")
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=SweepConfig.trials)
    ap.add_argument("--max-factors", type=int, default=SweepConfig.max_factors)
    ap.add_argument("--max-size", type=int, default=SweepConfig.max_size)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    a = ap.parse_args()
    raise SystemExit(main(SweepConfig(a.trials, a.max_factors, a.max_size, a.seed)))
