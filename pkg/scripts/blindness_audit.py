"""Cross-match signer views against unrelated requester results and check
that unblinding factors linking them always exist."""

import argparse
import random
from collections import Counter
from dataclasses import dataclass

from ecblind.codec import registry_lookup
from ecblind.protocol import (
    DegenerateTranscript,
    Variant,
    check_blinding,
    derive_unblinding_factors,
    keygen,
    run_protocol,
)


@dataclass
class AuditConfig:
    curve: str = "toy17"
    transcripts: int = 100
    pairs: int = 500
    seed: int = 0


def audit(cfg: AuditConfig, variant: Variant) -> Counter:
    params = registry_lookup(cfg.curve)
    rng = random.Random(f"{cfg.seed}-{variant.value}")
    keys = keygen(params, rng)
    pool = [
        run_protocol(params, variant, params.scalar(rng.randrange(1, params.n)), rng, keys=keys)
        for _ in range(cfg.transcripts)
    ]
    tally = Counter()
    for _ in range(cfg.pairs):
        i, j = rng.sample(range(len(pool)), 2)
        t1 = params.scalar(rng.randrange(1, params.n)) if variant is Variant.GENERALIZED else None
        try:
            f = derive_unblinding_factors(pool[i].view, pool[j].result, variant, t1)
        except DegenerateTranscript:
            tally["degenerate"] += 1
            continue
        ok = all(check_blinding(params, keys.Q, pool[i].view, pool[j].result, f, variant).values())
        tally["linked" if ok else "FAILED"] += 1
    return tally


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curve", default=AuditConfig.curve)
    ap.add_argument("--pairs", type=int, default=AuditConfig.pairs)
    ap.add_argument("--seed", type=int, default=AuditConfig.seed)
    a = ap.parse_args()
    cfg = AuditConfig(curve=a.curve, pairs=a.pairs, seed=a.seed)
    for v in Variant:
        print(f"{v.value:<12} {dict(audit(cfg, v))}")
