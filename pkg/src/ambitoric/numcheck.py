"""Floating-point oracles that check the closed forms independently.

Everything here works in doubles and only touches the exact layer through the
metric/form components at a point.  Derivatives are central differences, with
Richardson extrapolation for the second-order ones.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .exactmath import Quadratic, discriminant_form, inner
from .structures import (
    PLUS,
    AmbitoricData,
    PreconditionError,
    _side,
    barycentric_split,
    boundary_data,
    facet_direction,
    frame_components,
    h_matrix_at,
    invert_momentum,
    momentum_kind,
    scalar_curvature_at,
)


@dataclass(frozen=True)
class FDConfig:
    h: float = 1e-5            # first derivatives
    h2: float = 1e-3           # second derivatives (before Richardson)
    richardson: bool = True
    tolerance: float = 1e-7

    def __post_init__(self):
        if not (self.h > 0 and self.h2 > 0 and self.tolerance > 0):
            raise ValueError("step sizes and tolerance must be positive")


@dataclass
class ResidualReport:
    max_abs: float
    max_rel: float
    worst_point: tuple | None
    samples: int
    skipped: int = 0
    rows: list = field(default_factory=list, repr=False)   # (x, y, residual)

    def within(self, tol: float, rel: bool = False) -> bool:
        return (self.max_rel if rel else self.max_abs) < tol

    def to_json(self) -> dict:
        return {
            "max_abs": self.max_abs,
            "max_rel": self.max_rel,
            "worst_point": None if self.worst_point is None else [float(v) for v in self.worst_point],
            "samples": self.samples,
            "skipped": self.skipped,
        }


def _report(rows: list, skipped: int = 0) -> ResidualReport:
    """rows are (x, y, abs_residual, rel_residual)."""
    if not rows:
        return ResidualReport(0.0, 0.0, None, 0, skipped)
    worst = max(rows, key=lambda r: r[2])
    return ResidualReport(
        max_abs=float(worst[2]),
        max_rel=float(max(r[3] for r in rows)),
        worst_point=(float(worst[0]), float(worst[1])),
        samples=len(rows),
        skipped=skipped,
        rows=[(r[0], r[1], r[2]) for r in rows],
    )


def write_csv(report: ResidualReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "residual"])
        for x, y, r in report.rows:
            w.writerow([repr(float(x)), repr(float(y)), repr(float(r))])


# Point sampling and float evaluation

def float_poly(P) -> Callable[[float], float]:
    c = [float(v) for v in P.coeffs()]
    return lambda z: np.polyval(c, z)


def sample_points(d: AmbitoricData, n: int, seed: int = 0, margin: float = 1e-4) -> list[tuple[float, float]]:
    """Uniform points of the open domain rectangle, kept `margin` away from its edges."""
    rng = np.random.default_rng(seed)
    (a1, a2), (b1, b2) = [tuple(float(v) for v in pair) for pair in (d.alpha, d.beta)]
    xs = rng.uniform(a1 + margin, a2 - margin, n)
    ys = rng.uniform(b1 + margin, b2 - margin, n)
    return list(zip(xs.tolist(), ys.tolist()))


def _in_domain(d: AmbitoricData, x: float, y: float, pad: float) -> bool:
    (a1, a2), (b1, b2) = d.alpha, d.beta
    return a1 + pad < x < a2 - pad and b1 + pad < y < b2 - pad


def metric_fn(d: AmbitoricData, side: str = PLUS) -> Callable:
    side = _side(side)
    fA, fB = float_poly(d.A), float_poly(d.B)

    def g(x, y):
        fr = frame_components(d.kind, fA, fB, x, y)
        return fr.gplus if side == PLUS else fr.gminus

    return g


def form_fn(d: AmbitoricData, side: str = PLUS) -> Callable:
    side = _side(side)
    fA, fB = float_poly(d.A), float_poly(d.B)

    def w(x, y):
        fr = frame_components(d.kind, fA, fB, x, y)
        return fr.omega_plus if side == PLUS else fr.omega_minus

    return w


# Finite differences of t-invariant tensor fields.  Only x (index 0) and y (index 1)
# carry derivatives.

def grad(T: Callable, x: float, y: float, h: float) -> np.ndarray:
    """Array with a leading axis of length 4: d_k T for k = x, y, t1, t2."""
    t0 = np.asarray(T(x, y), dtype=float)
    out = np.zeros((4,) + t0.shape)
    out[0] = (np.asarray(T(x + h, y)) - np.asarray(T(x - h, y))) / (2 * h)
    out[1] = (np.asarray(T(x, y + h)) - np.asarray(T(x, y - h))) / (2 * h)
    return out


def _hessian_raw(T: Callable, x: float, y: float, h: float) -> np.ndarray:
    t0 = np.asarray(T(x, y), dtype=float)
    out = np.zeros((4, 4) + t0.shape)
    out[0, 0] = (np.asarray(T(x + h, y)) - 2 * t0 + np.asarray(T(x - h, y))) / (h * h)
    out[1, 1] = (np.asarray(T(x, y + h)) - 2 * t0 + np.asarray(T(x, y - h))) / (h * h)
    out[0, 1] = out[1, 0] = (
        np.asarray(T(x + h, y + h)) - np.asarray(T(x + h, y - h))
        - np.asarray(T(x - h, y + h)) + np.asarray(T(x - h, y - h))
    ) / (4 * h * h)
    return out


def richardson(fn: Callable[[float], np.ndarray], h: float, on: bool = True) -> np.ndarray:
    """Combine two second-order estimates into a fourth-order one."""
    if not on:
        return fn(h)
    return (4 * fn(h / 2) - fn(h)) / 3


# Curvature

def christoffel(g: np.ndarray, dg: np.ndarray) -> np.ndarray:
    """Gamma^a_bc from g and dg[k, i, j] = d_k g_ij."""
    ginv = np.linalg.inv(g)
    low = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg)   # Gamma_{d,bc}
    return np.einsum("ad,dbc->abc", ginv, low)


def fd_scalar_curvature(d: AmbitoricData, x: float, y: float, side: str = PLUS,
                        cfg: FDConfig | None = None, metric: Callable | None = None) -> float:
    cfg = cfg or FDConfig()
    g = metric or metric_fn(d, side)
    x, y = float(x), float(y)
    if not _in_domain(d, x, y, 2 * cfg.h2):
        raise ValueError(f"point ({x}, {y}) is too close to the boundary for the stencil")
    g0 = np.asarray(g(x, y), dtype=float)
    dg = richardson(lambda h: grad(g, x, y, h), cfg.h2, cfg.richardson)
    ddg = richardson(lambda h: _hessian_raw(g, x, y, h), cfg.h2, cfg.richardson)
    return _scalar_from(g0, dg, ddg)


def _scalar_from(g: np.ndarray, dg: np.ndarray, dd: np.ndarray) -> float:
    """dg[k,i,j] = d_k g_ij; dd[k,l,i,j] = d_k d_l g_ij."""
    ginv = np.linalg.inv(g)
    dginv = -np.einsum("ai,kij,jb->kab", ginv, dg, ginv)
    # Gamma_{d,bc} = (d_b g_dc + d_c g_db - d_d g_bc)/2
    low = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg)
    dlow = 0.5 * (np.einsum("kbdc->kdbc", dd) + np.einsum("kcdb->kdbc", dd) - dd)
    gam = np.einsum("ad,dbc->abc", ginv, low)
    dgam = np.einsum("kad,dbc->kabc", dginv, low) + np.einsum("ad,kdbc->kabc", ginv, dlow)
    # R_bd = d_a Gamma^a_bd - d_d Gamma^a_ab + Gamma^a_ae Gamma^e_bd - Gamma^a_de Gamma^e_ab
    ric = (np.einsum("aabd->bd", dgam) - np.einsum("daab->bd", dgam)
           + np.einsum("aae,ebd->bd", gam, gam) - np.einsum("ade,eab->bd", gam, gam))
    return float(np.einsum("bd,bd->", ginv, ric))


def curvature_report(d: AmbitoricData, points: Iterable, side: str = PLUS,
                     cfg: FDConfig | None = None) -> ResidualReport:
    rows, skipped = [], 0
    for x, y in points:
        try:
            fd = fd_scalar_curvature(d, x, y, side, cfg)
        except ValueError:
            skipped += 1
            continue
        exact = float(scalar_curvature_at(d, x, y, side))
        err = abs(fd - exact)
        rows.append((x, y, err, err / max(abs(exact), 1e-12)))
    return _report(rows, skipped)


# Closedness

def fd_closedness(d: AmbitoricData, side: str = PLUS, points: Iterable | None = None,
                  cfg: FDConfig | None = None, form: Callable | None = None) -> ResidualReport:
    """Max over points of |dw| with dw_abc = d_a w_bc + d_b w_ca + d_c w_ab."""
    cfg = cfg or FDConfig()
    w = form or form_fn(d, side)
    if points is None:
        points = sample_points(d, 200, seed=0, margin=10 * cfg.h)
    rows, skipped = [], 0
    for x, y in points:
        x, y = float(x), float(y)
        if not _in_domain(d, x, y, cfg.h):
            skipped += 1
            continue
        dw = grad(w, x, y, cfg.h)
        dw3 = dw + np.einsum("abc->bca", dw) + np.einsum("abc->cab", dw)
        res = float(np.max(np.abs(dw3)))
        scale = float(np.max(np.abs(dw))) or 1.0
        rows.append((x, y, res, res / scale))
    return _report(rows, skipped)


# Abreu's formula in momentum coordinates

def h_matrix_side(d: AmbitoricData, x: float, y: float, side: str = PLUS) -> np.ndarray:
    """g(K_i, K_j) for g+ or g-, in floats."""
    side = _side(side)
    fA, fB = float_poly(d.A), float_poly(d.B)
    fr = frame_components(d.kind, fA, fB, float(x), float(y))
    g = fr.gplus if side == PLUS else fr.gminus
    return np.asarray(g[2:, 2:], dtype=float)


def abreu_scalar(d: AmbitoricData, mu: Sequence[float], side: str = PLUS, cfg: FDConfig | None = None,
                 hfun: Callable | None = None) -> float:
    """-sum_rs d^2 H_rs / d mu_r d mu_s, differentiating H directly in the momenta."""
    cfg = cfg or FDConfig()
    side = _side(side)

    def H(m1, m2):
        if hfun is not None:
            return hfun(m1, m2)
        x, y = invert_momentum(d, m1, m2, side, tol=1e-9)
        return h_matrix_side(d, x, y, side)

    m1, m2 = float(mu[0]), float(mu[1])
    # one step per axis, relative to the extent of the momentum image along it
    L1, L2 = _momentum_extent(d, side)
    dd = richardson(lambda h: _hessian_raw(lambda s1, s2: H(m1 + L1 * s1, m2 + L2 * s2), 0.0, 0.0, h),
                    cfg.h2, cfg.richardson)
    return -float(dd[0, 0, 0, 0] / (L1 * L1) + dd[1, 1, 1, 1] / (L2 * L2) + 2 * dd[0, 1, 0, 1] / (L1 * L2))


def _momentum_extent(d: AmbitoricData, side: str) -> tuple[float, float]:
    pts = [momentum_kind(d.kind, float(x), float(y), side) for x, y in d.corners()]
    return (max(p[0] for p in pts) - min(p[0] for p in pts),
            max(p[1] for p in pts) - min(p[1] for p in pts))


def abreu_cross_check(d: AmbitoricData, mu: Sequence, side: str = PLUS, cfg: FDConfig | None = None) -> float:
    """Relative discrepancy between the Abreu value and the closed-form scalar curvature."""
    fd = abreu_scalar(d, mu, side, cfg)
    x, y = invert_momentum(d, float(mu[0]), float(mu[1]), side, tol=1e-9)
    exact = float(scalar_curvature_at(d, x, y, side))
    return abs(fd - exact) / max(abs(exact), 1e-12)


# First-order boundary conditions

FACETS = ("x=alpha1", "x=alpha2", "y=beta1", "y=beta2")


def facet_normal(d: AmbitoricData, facet: str):
    """Inward normal of a facet, exact."""
    if facet not in FACETS:
        raise ValueError(f"unknown facet {facet!r}; expected one of {FACETS}")
    c = dict(zip(FACETS, boundary_data(d)))[facet]
    z = {"x=alpha1": d.alpha[0], "x=alpha2": d.alpha[1], "y=beta1": d.beta[0], "y=beta2": d.beta[1]}[facet]
    fd = facet_direction(d.kind, z)
    return (c * fd[0], c * fd[1])


def _facet_points(d: AmbitoricData, facet: str, samples: int):
    (a1, a2), (b1, b2) = d.alpha, d.beta
    ts = [Fraction(k, samples + 1) for k in range(1, samples + 1)]
    if facet.startswith("x"):
        x0 = a1 if facet.endswith("1") else a2
        return [(x0, b1 + t * (b2 - b1)) for t in ts]
    y0 = b1 if facet.endswith("1") else b2
    return [(a1 + t * (a2 - a1), y0) for t in ts]


def boundary_conditions_check(d: AmbitoricData, facet: str, samples: int = 20,
                              cfg: FDConfig | None = None, normal=None) -> tuple[bool, ResidualReport]:
    """(H(u, .) == 0 exactly at every sample, report of |dH(u,u) - 2u|).

    The gradient of H(u,u) in the momenta is taken by pulling back to (x, y): a
    one-sided second-order difference across the facet and a central one along it,
    then the inverse transposed Jacobian of the momentum map.
    """
    cfg = cfg or FDConfig()
    u = normal if normal is not None else facet_normal(d, facet)
    uf = np.array([float(u[0]), float(u[1])])
    pts = _facet_points(d, facet, samples)
    exact_zero = True
    fA, fB = float_poly(d.A), float_poly(d.B)
    from .structures import h_matrix_kind

    def phi(x, y):
        H = np.array(h_matrix_kind(d.kind, fA, fB, x, y), dtype=float)
        return uf @ H @ uf

    def mu(x, y):
        return np.array(momentum_kind(d.kind, x, y), dtype=float)

    h = cfg.h
    rows = []
    across_x = facet.startswith("x")
    inward = 1.0 if facet.endswith("1") else -1.0
    for x, y in pts:
        H = h_matrix_at(d, x, y)
        Hu = [H[i][0] * u[0] + H[i][1] * u[1] for i in range(2)]
        if any(v != 0 for v in Hu):
            exact_zero = False
        xf, yf = float(x), float(y)

        def one_sided(f):
            s = inward * h
            if across_x:
                return (-3 * f(xf, yf) + 4 * f(xf + s, yf) - f(xf + 2 * s, yf)) / (2 * s)
            return (-3 * f(xf, yf) + 4 * f(xf, yf + s) - f(xf, yf + 2 * s)) / (2 * s)

        def central(f):
            if across_x:
                return (f(xf, yf + h) - f(xf, yf - h)) / (2 * h)
            return (f(xf + h, yf) - f(xf - h, yf)) / (2 * h)

        if across_x:
            dphi = np.array([one_sided(phi), central(phi)])
            J = np.column_stack([one_sided(mu), central(mu)])
        else:
            dphi = np.array([central(phi), one_sided(phi)])
            J = np.column_stack([central(mu), one_sided(mu)])
        # dphi_xy = J^T grad_mu phi
        gmu = np.linalg.solve(J.T, dphi)
        err = float(np.max(np.abs(gmu - 2 * uf)))
        rows.append((xf, yf, err, err / float(np.max(np.abs(2 * uf)))))
    return exact_zero, _report(rows)


# Killing tensors of the barycentric metric family

def killing_tensor(d: AmbitoricData, F: Callable, G: Callable) -> Callable:
    """(g, S) at a point, for g = (F(x) - G(y)) g0 and S = (F+G) g + (F-G) g(I., .)."""
    fA, fB = float_poly(d.A), float_poly(d.B)

    def fields(x, y):
        h = F(x) - G(y)
        if h <= 0:
            raise ValueError(f"F(x) - G(y) = {h} is not positive at ({x}, {y})")
        gx, gy = barycentric_split(d.kind, fA, fB, x, y)
        g = h * (gx + gy)
        S = h * (2 * G(y) * gx + 2 * F(x) * gy)
        return g, S

    return fields


def killing_residual(d: AmbitoricData, F: Callable, G: Callable, points: Iterable | None = None,
                     cfg: FDConfig | None = None) -> ResidualReport:
    """Max component of the full symmetrization of nabla S, with Christoffels from FD."""
    cfg = cfg or FDConfig()
    fields = killing_tensor(d, F, G)
    if points is None:
        points = sample_points(d, 20, seed=0, margin=0.05 * float(d.alpha[1] - d.alpha[0]))
    rows = []
    for x, y in points:
        x, y = float(x), float(y)
        g, S = fields(x, y)
        dg = grad(lambda a, b: fields(a, b)[0], x, y, cfg.h)
        dS = grad(lambda a, b: fields(a, b)[1], x, y, cfg.h)
        gam = christoffel(g, dg)
        nab = dS - np.einsum("eab,ec->abc", gam, S) - np.einsum("eac,be->abc", gam, S)
        sym = sum(np.transpose(nab, p) for p in
                  ((0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0))) / 6
        res = float(np.max(np.abs(sym)))
        scale = float(np.max(np.abs(dS))) or 1.0
        rows.append((x, y, res, res / scale))
    return _report(rows)


# Gram matrix of the torus generators

def gram_check(d: AmbitoricData, points: Iterable) -> ResidualReport:
    """h_matrix_at against the tt-block of the float g+ frame."""
    rows = []
    for x, y in points:
        H = np.array(h_matrix_at(d, Fraction(x), Fraction(y)), dtype=float)
        G = h_matrix_side(d, x, y, PLUS)
        err = float(np.max(np.abs(H - G)))
        rows.append((x, y, err, err / float(np.max(np.abs(H)))))
    return _report(rows)


# Separability of the Ricci form for h = (x - y) q(x,y) / p(x,y)^2

BiPoly = dict  # {(i, j): Fraction} for sum c x^i y^j


def _bp_add(*ps: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for p in ps:
        for k, v in p.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v != 0}


def _bp_mul(p: BiPoly, r: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (i, j), a in p.items():
        for (k, l), b in r.items():
            out[(i + k, j + l)] = out.get((i + k, j + l), 0) + a * b
    return {k: v for k, v in out.items() if v != 0}


def _bp_scale(p: BiPoly, c) -> BiPoly:
    return {k: v * c for k, v in p.items() if v * c != 0}


def _bp_dx(p: BiPoly) -> BiPoly:
    return {(i - 1, j): v * i for (i, j), v in p.items() if i > 0}


def _bp_dy(p: BiPoly) -> BiPoly:
    return {(i, j - 1): v * j for (i, j), v in p.items() if j > 0}


def _polar(q: Quadratic) -> BiPoly:
    # q0 x y + q1 (x + y) + q2
    return {k: v for k, v in {(1, 1): q.q0, (1, 0): q.q1, (0, 1): q.q1, (0, 0): q.q2}.items() if v != 0}


def hxy_numerator(q: Quadratic, p: Quadratic) -> BiPoly:
    """Numerator of d^2/dxdy [(x - y) q(x,y) / p(x,y)^2] over p^4."""
    N = _bp_mul({(1, 0): Fraction(1), (0, 1): Fraction(-1)}, _polar(q))
    P = _polar(p)
    Nx, Ny, Nxy = _bp_dx(N), _bp_dy(N), _bp_dx(_bp_dy(N))
    Px, Py, Pxy = _bp_dx(P), _bp_dy(P), _bp_dx(_bp_dy(P))
    first = _bp_add(_bp_mul(Nxy, P), _bp_mul(Nx, Py), _bp_scale(_bp_mul(Ny, Px), -2),
                    _bp_scale(_bp_mul(N, Pxy), -2))
    hx_num = _bp_add(_bp_mul(Nx, P), _bp_scale(_bp_mul(N, Px), -2))
    return _bp_add(_bp_mul(first, P), _bp_scale(_bp_mul(Py, hx_num), -3))


def ricci_separability_check(q: Quadratic, p: Quadratic) -> dict:
    if inner(q, p) != 0:
        raise PreconditionError(f"<q, p> = {inner(q, p)} must vanish")
    return {
        "h_xy_zero": not hxy_numerator(q, p),
        "Q_p_zero": discriminant_form(p) == 0,
    }


__all__ = [
    "FACETS", "FDConfig", "ResidualReport", "abreu_cross_check", "abreu_scalar",
    "boundary_conditions_check", "curvature_report", "facet_normal", "fd_closedness",
    "fd_scalar_curvature", "gram_check", "hxy_numerator", "killing_residual", "killing_tensor",
    "ricci_separability_check", "sample_points", "write_csv",
]
