#!/usr/bin/env python3
"""Finite-difference verification of a datum: closedness, curvature, Abreu and boundary checks.

Prints the worst residual of each check; exits non-zero if any exceeds its tolerance.
"""

import argparse
import sys
from dataclasses import dataclass

from ambitoric.cli import load_data
from ambitoric.numcheck import (
    FACETS,
    abreu_cross_check,
    boundary_conditions_check,
    curvature_report,
    fd_closedness,
    sample_points,
)
from ambitoric.structures import MINUS, PLUS, OutOfImageError, bach_flat_example, momentum


@dataclass
class VerifyConfig:
    points: int = 100
    seed: int = 0
    closed_tol: float = 1e-7
    curv_tol: float = 1e-3
    boundary_tol: float = 1e-6


def run(d, cfg: VerifyConfig):
    pts = sample_points(d, cfg.points, cfg.seed, margin=1e-4)
    inner = sample_points(d, min(cfg.points, 20), cfg.seed, margin=0.02)
    out = []
    for side in (PLUS, MINUS):
        out.append((f"closed{side}", fd_closedness(d, side, pts).max_abs, cfg.closed_tol))
        out.append((f"curvature{side}", curvature_report(d, inner, side).max_rel, cfg.curv_tol))
        errs = []
        for x, y in inner:
            try:
                errs.append(abreu_cross_check(d, momentum(d, x, y, side), side))
            except OutOfImageError:
                pass        # stencil in momentum space left the polytope
        out.append((f"abreu{side}", max(errs, default=0.0), cfg.curv_tol))
    for facet in FACETS:
        zero, rep = boundary_conditions_check(d, facet, 20)
        out.append((f"boundary {facet}", rep.max_rel if zero else float("inf"), cfg.boundary_tol))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("file", nargs="?", help="datum JSON (default: the built-in Bach-flat example)")
    ap.add_argument("--points", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args(argv)
    d = load_data(a.file) if a.file else bach_flat_example()
    bad = 0
    for name, val, tol in run(d, VerifyConfig(a.points, a.seed)):
        ok = val < tol
        bad += not ok
        print(f"{name:22s} {val:.3e}  (tol {tol:.0e})  {'ok' if ok else 'FAIL'}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
