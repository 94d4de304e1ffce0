#!/usr/bin/env python3
"""Run the stability verdict over generated data and print a one-line summary per datum."""

import argparse
import json
from collections import Counter
from dataclasses import dataclass

from ambitoric.catalog import generated_datasets
from ambitoric.stability import stability_verdict


@dataclass
class ScanConfig:
    n: int = 20
    seed: int = 0
    as_json: bool = False


def scan(cfg: ScanConfig):
    for i, d in enumerate(generated_datasets(cfg.n, cfg.seed)):
        rep = stability_verdict(d)
        yield i, d, rep


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--json", action="store_true")
    a = ap.parse_args(argv)
    cfg = ScanConfig(a.n, a.seed, a.json)
    tally = Counter()
    for i, d, rep in scan(cfg):
        tally[rep.verdict.value] += 1
        if cfg.as_json:
            print(json.dumps({"index": i, "data": d.to_json(), **rep.to_json()}, sort_keys=True))
            continue
        wit = rep.witness["futaki"] if rep.witness else "-"
        print(f"{i:3d} {d.kind.value:10s} {rep.verdict.value:18s} witness futaki {wit}")
    if not cfg.as_json:
        print(", ".join(f"{k}: {v}" for k, v in sorted(tally.items())))


if __name__ == "__main__":
    main()
