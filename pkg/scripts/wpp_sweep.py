#!/usr/bin/env python3
"""Tabulate weights and scalar-curvature bounds of Bochner-flat weighted projective planes.

Sweeps beta_4 for a fixed (beta_1, beta_2, beta_3) and writes one CSV row per value.
"""

import argparse
import csv
import sys
from dataclasses import dataclass
from fractions import Fraction

from ambitoric.catalog import affine_range, average_scalar_curvature, wpp_from_beta


@dataclass
class SweepConfig:
    base: tuple = (1, 2, 3)
    start: int = 4
    stop: int = 40
    step: int = 1


def rows(cfg: SweepConfig):
    for b4 in range(cfg.start, cfg.stop + 1, cfg.step):
        w = wpp_from_beta((*cfg.base, b4))
        lo, hi = affine_range(w.simplex, w.scalar_curvature)
        yield {
            "beta4": b4,
            "weights": " ".join(map(str, w.weights)),
            "s_min": str(w.s_min),
            "s_max": str(w.s_max),
            "s_avg": str(w.s_avg),
            "simplex_min": str(lo),
            "simplex_max": str(hi),
            "simplex_avg": str(average_scalar_curvature(w.simplex)),
            "positive": w.s_min > 0,
        }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--base", nargs=3, default=["1", "2", "3"])
    ap.add_argument("--start", type=int, default=4)
    ap.add_argument("--stop", type=int, default=40)
    args = ap.parse_args(argv)
    cfg = SweepConfig(tuple(Fraction(b) for b in args.base), args.start, args.stop)
    out = csv.DictWriter(sys.stdout, fieldnames=list(next(rows(cfg)).keys()), lineterminator="\n")
    out.writeheader()
    for r in rows(cfg):
        out.writerow(r)


if __name__ == "__main__":
    main()
