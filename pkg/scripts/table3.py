"""Print the cost comparison; counts for the implemented schemes are measured."""

import argparse
from dataclasses import dataclass

from ecblind.codec import registry_lookup
from ecblind.costmodel import format_report, report_envelope, table3_report


@dataclass
class ReportConfig:
    curve: str = "secp160r1"
    seed: int = 0
    out: str | None = None


def main(cfg: ReportConfig) -> None:
    rows = table3_report(registry_lookup(cfg.curve), seed=cfg.seed)
    print(format_report(rows))
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(report_envelope(rows).serialize())


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--curve", default=ReportConfig.curve)
    ap.add_argument("--seed", type=int, default=ReportConfig.seed)
    ap.add_argument("--out")
    a = ap.parse_args()
    main(ReportConfig(a.curve, a.seed, a.out))
