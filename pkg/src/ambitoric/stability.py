"""Extremal vector field, relative Futaki invariant and the toric stability verdict.

Convention: the relative Futaki invariant

    F(f) = int_{boundary} f dnu + 1/2 int (<A, mu> + B) f dv

vanishes on affine f, and a polytope is polystable when F(f) >= 0 for every
convex piecewise-linear f, with equality only for affine f.  A simple PL function
with crease along the line <u, mu> + c = 0 is max(0, <u, mu> + c).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exactmath import Positivity, sturm_positive_on, to_q
from .polytope import (
    LabelledPolytope,
    Moments,
    build_polytope,
    clip,
    dot,
    edge_density,
    line_segment_in,
    moments,
    polygon_moments,
)
from .structures import (
    AffineFunction,
    AmbitoricData,
    Kind,
    PreconditionError,
    boundary_data,
    condition_report,
    facet_direction,
    h_matrix_kind,
    invert_momentum,
    momentum_kind,
)


@dataclass(frozen=True)
class ExtremalField:
    A: tuple[Fraction, Fraction]
    B: Fraction

    def scalar_curvature(self) -> AffineFunction:
        """The affine function -<A, mu> - B."""
        return AffineFunction(-self.A[0], -self.A[1], -self.B)

    def to_json(self) -> dict:
        return {"A": [str(a) for a in self.A], "B": str(self.B),
                "scalar_curvature": self.scalar_curvature().to_json()}


def solve3(M: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction]:
    """Exact Gaussian elimination."""
    n = len(rhs)
    aug = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                k = aug[r][col] / aug[col][col]
                aug[r] = [a - k * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]


def extremal_field(m: Moments) -> ExtremalField:
    """Affine function whose Futaki pairing with every affine function vanishes."""
    (a1, a2), ((a11, a12), (_, a22)) = m.alpha_r, m.alpha_rs
    M = [[a1, a2, m.alpha], [a11, a12, a1], [a12, a22, a2]]
    rhs = [-2 * m.beta, -2 * m.beta_r[0], -2 * m.beta_r[1]]
    try:
        A1, A2, B = solve3(M, rhs)
    except ZeroDivisionError as exc:
        raise ValueError("moment matrix is singular (degenerate polytope)") from exc
    return ExtremalField((A1, A2), B)


@dataclass(frozen=True)
class PLFunction:
    """max over affine pieces <a, mu> + b."""

    pieces: tuple[tuple[tuple[Fraction, Fraction], Fraction], ...]

    def __post_init__(self):
        if not self.pieces:
            raise ValueError("a PL function needs at least one piece")
        norm = tuple(((to_q(a[0]), to_q(a[1])), to_q(b)) for a, b in self.pieces)
        if len(set(norm)) != len(norm):
            raise ValueError("pieces must be pairwise distinct")
        object.__setattr__(self, "pieces", norm)

    @classmethod
    def crease(cls, u, c) -> "PLFunction":
        zero = Fraction(0)
        return cls((((zero, zero), zero), ((to_q(u[0]), to_q(u[1])), to_q(c))))

    @classmethod
    def affine(cls, a, b) -> "PLFunction":
        return cls((((to_q(a[0]), to_q(a[1])), to_q(b)),))

    def __call__(self, mu):
        return max(dot(a, mu) + b for a, b in self.pieces)


def _affine_integral(area, first, second, f1, g1):
    """int (f1 . (mu, 1)) (g1 . (mu, 1)) dv from polygon moments."""
    (c1, c2, c0), (a1, a2, b) = f1, g1
    out = c0 * b * area
    out += (c0 * a1 + c1 * b) * first[0] + (c0 * a2 + c2 * b) * first[1]
    out += c1 * a1 * second[0][0] + (c1 * a2 + c2 * a1) * second[0][1] + c2 * a2 * second[1][1]
    return out


def _edge_integral(a, b, f: PLFunction):
    """int_0^1 f(a + t (b - a)) dt, exact for PL f."""
    e = (b[0] - a[0], b[1] - a[1])
    lines = [(dot(ai, e), dot(ai, a) + bi) for ai, bi in f.pieces]   # slope, value at t=0
    ts = {Fraction(0), Fraction(1)}
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            ds = lines[i][0] - lines[j][0]
            if ds != 0:
                t = (lines[j][1] - lines[i][1]) / ds
                if 0 < t < 1:
                    ts.add(t)
    ts = sorted(ts)
    total = Fraction(0)
    for t0, t1 in zip(ts, ts[1:]):
        v0 = max(s * t0 + v for s, v in lines)
        v1 = max(s * t1 + v for s, v in lines)
        total += (t1 - t0) * (v0 + v1) / 2
    return total


def futaki_pl(p: LabelledPolytope, ef: ExtremalField, f: PLFunction) -> Fraction:
    """Exact relative Futaki invariant of a convex PL function."""
    boundary = Fraction(0)
    for a, b, fac in p.edges():
        boundary += edge_density(fac.u, (b[0] - a[0], b[1] - a[1])) * _edge_integral(a, b, f)
    weight = (ef.A[0], ef.A[1], ef.B)
    interior = Fraction(0)
    for i, (ai, bi) in enumerate(f.pieces):
        cell = list(p.vertices)
        for j, (aj, bj) in enumerate(f.pieces):
            if j == i:
                continue
            # piece i dominates: <ai - aj, mu> + bi - bj >= 0; ties go to the lower index
            cell = clip(cell, (ai[0] - aj[0], ai[1] - aj[1]), bi - bj)
            if len(cell) < 3:
                break
        if len(cell) < 3:
            continue
        area, first, second = polygon_moments(cell)
        interior += _affine_integral(area, first, second, weight, (ai[0], ai[1], bi))
    return boundary + interior / 2


# Crease lines through the momentum image

@dataclass(frozen=True)
class Crease:
    """A crease {x = value}, {y = value} or a general line <u, mu> + c = 0."""

    kind: str          # "x", "y" or "line"
    value: Fraction | None = None
    u: tuple | None = None
    c: Fraction | None = None

    @classmethod
    def parse(cls, text: str) -> "Crease":
        key, _, val = text.partition("=")
        key = key.strip().lower()
        if key in ("x", "x0"):
            return cls("x", to_q(val.strip()))
        if key in ("y", "y0"):
            return cls("y", to_q(val.strip()))
        raise ValueError(f"cannot parse crease {text!r}; use x0=VALUE or y0=VALUE")

    def line(self, d: AmbitoricData) -> tuple[tuple[Fraction, Fraction], Fraction]:
        """(u, c) with the crease equal to {<u, mu> + c = 0}."""
        if self.kind == "line":
            return (to_q(self.u[0]), to_q(self.u[1])), to_q(self.c)
        u = facet_direction(d.kind, self.value)
        if self.kind == "x":
            mu = momentum_kind(d.kind, self.value, _other_point(d.beta, self.value, d.kind, True))
        else:
            mu = momentum_kind(d.kind, _other_point(d.alpha, self.value, d.kind, False), self.value)
        return u, -dot(u, mu)

    def to_json(self, d: AmbitoricData | None = None) -> dict:
        out = {"kind": self.kind}
        if self.value is not None:
            out["value"] = str(self.value)
        if d is not None:
            u, c = self.line(d)
            out["u"] = [str(v) for v in u]
            out["c"] = str(c)
        return out


def _other_point(rng, z, kind, z_is_x):
    """A point of the other interval that keeps (x, y) regular."""
    for t in (Fraction(1, 2), Fraction(1, 3), Fraction(2, 3)):
        w = rng[0] + t * (rng[1] - rng[0])
        x, y = (z, w) if z_is_x else (w, z)
        if x != y and not (kind is Kind.HYPERBOLIC and x + y == 0) and not (kind is Kind.ELLIPTIC and 1 + x * y == 0):
            return w
    raise ValueError("no regular point on the crease")


def _int_linear_over_power(p0, p1, r0, r1, k: int, lo, hi):
    """Exact int_lo^hi (p0 + p1 z) / (r0 + r1 z)^k dz for k in {0, 3}."""
    p0, p1, r0, r1 = (to_q(v) for v in (p0, p1, r0, r1))
    if k == 0 or r1 == 0:
        scale = 1 if k == 0 else 1 / r0 ** k
        return scale * (p0 * (hi - lo) + p1 * (hi * hi - lo * lo) / 2)
    P = p0 - p1 * r0 / r1
    Q = p1 / r1

    def anti(z):
        w = r0 + r1 * z
        return (-P / (2 * w * w) - Q / w) / r1

    return anti(hi) - anti(lo)


def crease_integral(kind: Kind, z0, lo, hi):
    """int of H(u,u) against the crease measure for a crease through x = z0 (or y = z0),
    divided by the value of A(z0) (or B(z0)); the other variable runs over (lo, hi).

    On x = x0 the integrand is A(x0) (x0 - y) w(y) with w = 1, (x0+y)^-3, 2 (1+x0 y)^-3 by
    type; the y-crease is the same with the roles of x and y exchanged, which flips the
    sign of (x0 - y) and the orientation of the interval.
    """
    if kind is Kind.PARABOLIC:
        return _int_linear_over_power(z0, -1, 1, 0, 0, lo, hi)
    if kind is Kind.HYPERBOLIC:
        return _int_linear_over_power(z0, -1, z0, 1, 3, lo, hi)
    return 2 * _int_linear_over_power(z0, -1, 1, z0, 3, lo, hi)


# The Futaki invariant of a simple crease function is half the crease integral of H(u,u).
CREASE_FACTOR = Fraction(1, 2)


def futaki_crease(d: AmbitoricData, crease: Crease | str | dict, tol: float = 1e-9):
    """Futaki invariant of max(0, <u, mu> + c) for a crease line.

    Exact rational for x0/y0 creases, float (adaptive quadrature) for general lines.
    """
    if isinstance(crease, str):
        crease = Crease.parse(crease)
    elif isinstance(crease, dict):
        crease = Crease("line", u=tuple(crease["u"]), c=crease["c"])
    (a1, a2), (b1, b2) = d.alpha, d.beta
    if crease.kind == "x":
        x0 = crease.value
        if not a1 < x0 < a2:
            raise ValueError(f"crease x0 = {x0} misses the polytope interior")
        return CREASE_FACTOR * d.A(x0) * crease_integral(d.kind, x0, b1, b2)
    if crease.kind == "y":
        y0 = crease.value
        if not b1 < y0 < b2:
            raise ValueError(f"crease y0 = {y0} misses the polytope interior")
        # (x - y0) = -(y0 - x): same antiderivative with a flipped sign
        return -CREASE_FACTOR * d.B(y0) * crease_integral(d.kind, y0, a1, a2)
    return _futaki_general(d, crease, tol)


def _futaki_general(d: AmbitoricData, crease: Crease, tol: float) -> float:
    from scipy.integrate import quad
    import numpy as np

    p = build_polytope(d, check=False)
    u, c = crease.line(d)
    seg = line_segment_in(p, u, c)
    if seg is None:
        raise ValueError("crease misses the polytope interior")
    P, Q = seg
    uf = np.array([float(u[0]), float(u[1])])
    length = float(np.hypot(float(Q[0] - P[0]), float(Q[1] - P[1])))
    coef = [float(v) for v in d.A.coeffs()], [float(v) for v in d.B.coeffs()]
    fA = lambda z: np.polyval(coef[0], z)
    fB = lambda z: np.polyval(coef[1], z)

    def integrand(t):
        m1 = float(P[0]) + t * float(Q[0] - P[0])
        m2 = float(P[1]) + t * float(Q[1] - P[1])
        x, y = invert_momentum(d, m1, m2, tol=1e-9)
        H = np.array(h_matrix_kind(d.kind, fA, fB, x, y), dtype=float)
        return float(uf @ H @ uf)

    val, _ = quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=200)
    return float(CREASE_FACTOR) * val * length / float(np.linalg.norm(uf))


# Verdict

class Verdict(enum.Enum):
    POLYSTABLE = "Polystable"
    SEMISTABLE_BOUNDARY = "SemistableBoundary"
    UNSTABLE = "Unstable"


@dataclass
class StabilityReport:
    verdict: Verdict
    extremal: AffineFunction
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "extremal_affine": self.extremal.to_json(),
            "witness": self.witness,
            "notes": list(self.notes),
        }


def check_hypotheses(d: AmbitoricData) -> None:
    """Extremality and first-order boundary conditions; positivity is not required."""
    problems = []
    rep = condition_report(d)
    if not rep.extremal:
        problems.append(f"extremal relations fail: {rep.residuals.get('extremal')}")
    try:
        boundary_data(d)
    except ValueError as exc:
        problems.append(str(exc))
    (a1, a2), (b1, b2) = d.alpha, d.beta
    if not (b1 < b2 < a1 < a2):
        problems.append("interval ordering beta1 < beta2 < alpha1 < alpha2 fails")
    if problems:
        raise PreconditionError("; ".join(problems))


def _witness(d: AmbitoricData, which: str, z0) -> dict:
    cr = Crease(which, to_q(z0))
    val = futaki_crease(d, cr)
    u, c = cr.line(d)
    f = PLFunction.crease(u, c)
    p = build_polytope(d, check=False)
    ef = extremal_field(moments(p))
    return {
        "crease": cr.to_json(d),
        "futaki": str(val),
        "futaki_pl": str(futaki_pl(p, ef, f)),
    }


def stability_verdict(d: AmbitoricData) -> StabilityReport:
    check_hypotheses(d)
    p = build_polytope(d, check=False)
    ef = extremal_field(moments(p))
    (a1, a2), (b1, b2) = d.alpha, d.beta
    ra = sturm_positive_on(d.A, a1, a2)
    rb = sturm_positive_on(d.B, b1, b2)
    aff = ef.scalar_curvature()
    if ra.verdict is Positivity.POSITIVE and rb.verdict is Positivity.POSITIVE:
        return StabilityReport(Verdict.POLYSTABLE, aff)
    for res, which, name in ((ra, "x", "A"), (rb, "y", "B")):
        if res.verdict is Positivity.CHANGES_SIGN:
            return StabilityReport(
                Verdict.UNSTABLE, aff, _witness(d, which, res.witness),
                [f"{name} changes sign on its interval: no compatible extremal metric exists"],
            )
    notes = []
    witness = None
    for res, which, name in ((ra, "x", "A"), (rb, "y", "B")):
        if res.verdict is Positivity.NONNEGATIVE_WITH_ROOT:
            notes.append(f"{name} has an interior double root; the crease through it has Futaki 0")
            if witness is None and res.witness is not None:
                witness = _witness(d, which, res.witness)
    return StabilityReport(Verdict.SEMISTABLE_BOUNDARY, aff, witness, notes)


__all__ = [
    "CREASE_FACTOR", "Crease", "ExtremalField", "PLFunction", "StabilityReport", "Verdict",
    "check_hypotheses", "crease_integral", "extremal_field", "futaki_crease", "futaki_pl",
    "stability_verdict",
]
