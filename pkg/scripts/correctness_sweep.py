"""Run many seeded honest protocol runs per variant and report failures."""

import argparse
import random
import time
from dataclasses import dataclass, field

from ecblind.codec import registry_lookup
from ecblind.protocol import Variant, run_protocol


@dataclass
class SweepConfig:
    curve: str = "toy17"
    runs: int = 1000
    seed: int = 0
    variants: list[str] = field(default_factory=lambda: [v.value for v in Variant])


def sweep(cfg: SweepConfig) -> dict[str, int]:
    params = registry_lookup(cfg.curve)
    failures = {}
    for name in cfg.variants:
        variant = Variant.parse(name)
        rng = random.Random(f"{cfg.seed}-{name}")
        t0 = time.perf_counter()
        bad = sum(
            not run_protocol(params, variant, params.scalar(rng.randrange(1, params.n)), rng).verified
            for _ in range(cfg.runs)
        )
        failures[name] = bad
        print(f"{cfg.curve:<10} {name:<12} runs={cfg.runs} failures={bad} ({time.perf_counter() - t0:.1f}s)")
    return failures


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curve", default=SweepConfig.curve)
    ap.add_argument("--runs", type=int, default=SweepConfig.runs)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    args = ap.parse_args()
    result = sweep(SweepConfig(args.curve, args.runs, args.seed))
    raise SystemExit(1 if any(result.values()) else 0)
