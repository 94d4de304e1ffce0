"""Command-line front end.

    ambitoric check FILE
    ambitoric verify FILE [--points N] [--seed S] [--inject-error]
    ambitoric polytope FILE
    ambitoric stability FILE [--crease x0=VALUE]
    ambitoric catalog {wpp,extremal,bachflat,einstein,unstable,random} ...

Exit codes: 0 ok, 1 malformed input, 2 validation failure, 3 verification failure, 64 usage.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import catalog, numcheck, polytope, stability
from .structures import (
    MINUS,
    PLUS,
    AmbitoricData,
    Kind,
    OutOfImageError,
    PreconditionError,
    boundary_data,
    condition_report,
    momentum,
    validate_data,
)

EXIT_OK, EXIT_MALFORMED, EXIT_INVALID, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2, 3, 64

CONVENTION = {
    "quartic": "coefficients listed from z^4 down to z^0",
    "rationals": "exact values are strings p/q",
    "pl_functions": "convex, max of affine pieces",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    seed: int = 0
    points: int = 200
    fmt: str = "json"
    fd: numcheck.FDConfig = field(default_factory=numcheck.FDConfig)
    threads: int = 1


def threads_from_env() -> int:
    raw = os.environ.get("AMBITORIC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def load_data(path: str) -> AmbitoricData:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    if isinstance(obj, dict) and "data" in obj and "type" not in obj:
        obj = obj["data"]          # catalog output piped back in
    if not isinstance(obj, dict):
        raise ValueError("input must be a JSON object")
    return AmbitoricData.from_json(obj)


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, x in enumerate(obj):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def emit(report: dict, fmt: str, out=None, rows: list | None = None) -> None:
    out = out or sys.stdout
    report = _jsonable(report)
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    if rows is not None:
        w.writerow(["check", "x", "y", "residual"])
        for r in rows:
            w.writerow([r[0], repr(float(r[1])), repr(float(r[2])), repr(float(r[3]))])
        return
    w.writerow(["key", "value"])
    for k, v in _flatten(report):
        w.writerow([k, v])


# Commands

def cmd_check(cfg: RunConfig) -> tuple[int, dict]:
    d = load_data(cfg.input)
    violations = validate_data(d)
    rep = {
        "command": "check",
        "convention": CONVENTION,
        "data": d.to_json(),
        "valid": not violations,
        "violations": [{"code": v.code, "detail": v.detail} for v in violations],
        "conditions": condition_report(d).to_json(),
    }
    if not violations:
        rep["boundary_data"] = [str(c) for c in boundary_data(d)]
    return (EXIT_OK if not violations else EXIT_INVALID), rep


def _corrupted_form(d: AmbitoricData, side: str):
    base = numcheck.form_fn(d, side)

    def w(x, y):
        m = np.array(base(x, y), dtype=float)
        m[0, 2] += 1e-2 * y
        m[2, 0] -= 1e-2 * y
        return m

    return w


def cmd_verify(cfg: RunConfig, inject_error: bool = False) -> tuple[int, dict, list]:
    if cfg.points <= 0:
        raise UsageError("--points must be positive")
    d = load_data(cfg.input)
    violations = validate_data(d)
    if violations:
        return EXIT_INVALID, {"command": "verify", "valid": False,
                              "violations": [{"code": v.code, "detail": v.detail} for v in violations]}, []
    fd = cfg.fd
    rows: list = []
    checks = {}
    pts = numcheck.sample_points(d, cfg.points, seed=cfg.seed, margin=10 * fd.h)

    for side, name in ((PLUS, "plus"), (MINUS, "minus")):
        form = _corrupted_form(d, side) if inject_error else None
        r = numcheck.fd_closedness(d, side, pts, fd, form=form)
        checks[f"closedness_{name}"] = (r, fd.tolerance, False)

    (a1, a2), (b1, b2) = d.alpha, d.beta
    width = min(float(a2 - a1), float(b2 - b1))
    curv_pts = numcheck.sample_points(d, min(cfg.points, 20), seed=cfg.seed + 1, margin=0.05 * width)

    def curv(side):
        return numcheck.curvature_report(d, curv_pts, side, fd)

    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        cp, cm = pool.map(curv, (PLUS, MINUS))
    checks["curvature_plus"] = (cp, 1e-3, True)
    checks["curvature_minus"] = (cm, 1e-3, True)

    ab_rows, ab_skipped = [], 0
    for x, y in curv_pts[:5]:
        for side in (PLUS, MINUS):
            mu = momentum(d, x, y, side)
            try:
                err = numcheck.abreu_cross_check(d, mu, side, fd)
            except OutOfImageError:
                # the momentum-space stencil left the polytope
                ab_skipped += 1
                continue
            ab_rows.append((x, y, err, err))
    checks["abreu"] = (numcheck._report(ab_rows, ab_skipped), 1e-3, True)

    for facet in numcheck.FACETS:
        exact_zero, r = numcheck.boundary_conditions_check(d, facet, 20, fd)
        if not exact_zero:
            r.max_abs = float("inf")
        checks[f"boundary_{facet}"] = (r, 1e-6, True)

    failed = []
    summary = {}
    for name, (r, tol, rel) in checks.items():
        ok = r.within(tol, rel)
        summary[name] = dict(r.to_json(), tolerance=tol, relative=rel, ok=ok)
        if not ok:
            failed.append(name)
        rows.extend((name, x, y, res) for x, y, res in r.rows)
    rep = {
        "command": "verify",
        "seed": cfg.seed,
        "points": cfg.points,
        "inject_error": inject_error,
        "fd": {"h": fd.h, "h2": fd.h2, "richardson": fd.richardson, "tolerance": fd.tolerance},
        "checks": summary,
        "failed": failed,
        "ok": not failed,
    }
    return (EXIT_OK if not failed else EXIT_VERIFY), rep, rows


def cmd_polytope(cfg: RunConfig) -> tuple[int, dict]:
    d = load_data(cfg.input)
    bad = validate_data(d)
    if bad:
        return EXIT_INVALID, {"command": "polytope", "valid": False,
                              "violations": [{"code": v.code, "detail": v.detail} for v in bad]}
    p = polytope.build_polytope(d)
    m = polytope.moments(p)
    return EXIT_OK, {
        "command": "polytope",
        "convention": CONVENTION,
        "polytope": p.to_json(),
        "lattice": polytope.lattice_check(p).to_json(),
        "moments": m.to_json(),
        "extremal_field": stability.extremal_field(m).to_json(),
    }


def cmd_stability(cfg: RunConfig, crease: str | None = None) -> tuple[int, dict]:
    d = load_data(cfg.input)
    try:
        rep = stability.stability_verdict(d)
    except PreconditionError as exc:
        return EXIT_INVALID, {"command": "stability", "valid": False, "error": str(exc)}
    out = {"command": "stability", "convention": CONVENTION, "data": d.to_json(), **rep.to_json()}
    if crease:
        cr = stability.Crease.parse(crease)
        out["crease"] = cr.to_json(d)
        out["crease"]["futaki"] = str(stability.futaki_crease(d, cr))
    return EXIT_OK, out


def cmd_catalog(cfg: RunConfig, args) -> tuple[int, dict]:
    sub = args.family
    if sub == "wpp":
        w = catalog.wpp_from_beta(args.beta)
        return EXIT_OK, {"command": "catalog", "family": "wpp", **w.to_json()}
    if sub in ("extremal", "bachflat"):
        if args.alpha is None:
            raise UsageError("--alpha is required")
        fn = catalog.extremal_search if sub == "extremal" else catalog.bachflat_search
        res = catalog.shrink_to_positive(fn, args.beta, args.alpha) if args.shrink else fn(args.beta, args.alpha)
        out = {"command": "catalog", **res.to_json()}
        if res.ok:
            out.update(res.data.to_json())
        return (EXIT_OK if res.ok else EXIT_INVALID), out
    if sub == "einstein":
        if not cfg.input:
            raise UsageError("einstein needs an input file")
        d = load_data(cfg.input)
        try:
            reg = catalog.einstein_region(d)
        except PreconditionError as exc:
            return EXIT_INVALID, {"command": "catalog", "error": str(exc)}
        return EXIT_OK, {"command": "catalog", "family": "einstein", **reg.to_json()}
    if sub == "unstable":
        d = catalog.unstable_datum()
        return EXIT_OK, {**d.to_json(), "provenance": {"family": "unstable"}}
    if sub == "random":
        kind = Kind.parse(args.kind)
        d = catalog.random_extremal_data(kind, cfg.seed)
        return EXIT_OK, {**d.to_json(), "provenance": {"family": "random", "seed": cfg.seed}}
    raise UsageError(f"unknown catalog family {sub}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ambitoric", description="Ambitoric Kahler structures: checks, polytopes, stability.")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    sp = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sp.add_parser("check", help="validate a datum and report its coefficient conditions")
    c.add_argument("file")

    v = sp.add_parser("verify", help="run the finite-difference oracles")
    v.add_argument("file")
    v.add_argument("--points", type=int, default=200)
    v.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    v.add_argument("--inject-error", action="store_true", help="perturb the Kahler form (self-test)")
    v.add_argument("--csv-out", help="also write the residual grid to this CSV file")
    v.add_argument("--h", type=float, default=1e-5)
    v.add_argument("--tolerance", type=float, default=1e-7)

    t = sp.add_parser("polytope", help="labelled polytope, lattice and moments")
    t.add_argument("file")

    s = sp.add_parser("stability", help="stability verdict with a witness crease")
    s.add_argument("file")
    s.add_argument("--crease", help="x0=VALUE or y0=VALUE")

    k = sp.add_parser("catalog", help="constructive example families")
    k.add_argument("family", choices=("wpp", "extremal", "bachflat", "einstein", "unstable", "random"))
    k.add_argument("file", nargs="?")
    k.add_argument("--beta", nargs=4, default=["1", "2", "3", "4"])
    k.add_argument("--alpha", nargs=2)
    k.add_argument("--shrink", action="store_true", help="halve towards the seed until positive")
    k.add_argument("--kind", default="hyperbolic")
    k.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = args.seed if getattr(args, "seed", None) is not None else 0
    cfg = RunConfig(command=args.command, input=getattr(args, "file", None), seed=seed,
                    fmt=args.format, threads=threads_from_env())
    rows = None
    try:
        if args.command == "check":
            code, rep = cmd_check(cfg)
        elif args.command == "verify":
            cfg.points = args.points
            cfg.fd = numcheck.FDConfig(h=args.h, tolerance=args.tolerance)
            code, rep, rows = cmd_verify(cfg, args.inject_error)
            if args.csv_out and rows:
                with open(args.csv_out, "w") as fh:
                    emit(rep, "csv", fh, rows)
        elif args.command == "polytope":
            code, rep = cmd_polytope(cfg)
        elif args.command == "stability":
            code, rep = cmd_stability(cfg, args.crease)
        else:
            code, rep = cmd_catalog(cfg, args)
    except UsageError as exc:
        print(f"ambitoric: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        emit({"command": args.command, "error": str(exc)}, "json", sys.stderr)
        return EXIT_MALFORMED
    rep.setdefault("seed", cfg.seed)
    emit(rep, cfg.fmt, rows=rows if cfg.fmt == "csv" and args.command == "verify" else None)
    return code


if __name__ == "__main__":
    sys.exit(main())
