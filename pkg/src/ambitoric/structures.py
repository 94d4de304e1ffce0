"""Normal-form ambitoric Kähler structures.

Every regular ambitoric structure is locally determined by a quadratic q and two
functions A(x), B(y).  Up to projective change of the coordinate z there are three
normal forms, q = 1 (parabolic), q = z (hyperbolic) and q = 1 + z^2 (elliptic).
In each of them the torus coordinates (t1, t2) enter through the vector

    n(z) = (n1(z), n2(z)),     N_x = n(y) . dt,   N_y = n(x) . dt,

with n = (1, z), (1, z^2), (2z, z^2 - 1) respectively, and

    g0 = dx^2/A(x) + dy^2/B(y) + (A(x) N_x^2 + B(y) N_y^2) / D^2,
    g+ = g0 / F,   g- = F g0,
    w+ = (dx ^ N_x + dy ^ N_y) / (F D),   w- = F (dx ^ N_x - dy ^ N_y) / D,

where D = det-type denominator and F the conformal factor of each type.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exactmath import (
    Positivity,
    Quadratic,
    Quartic,
    inner,
    poisson_bracket,
    polarize,
    pmul,
    sturm_positive_on,
    to_q,
    transvect,
)


class Kind(enum.Enum):
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"

    @property
    def q(self) -> Quadratic:
        return {
            Kind.PARABOLIC: Quadratic(0, 0, 1),
            Kind.HYPERBOLIC: Quadratic(0, Fraction(1, 2), 0),
            Kind.ELLIPTIC: Quadratic(1, 0, 1),
        }[self]

    @classmethod
    def parse(cls, name: str | "Kind") -> "Kind":
        if isinstance(name, Kind):
            return name
        return cls(name.lower())


PLUS, MINUS = "+", "-"


def _side(side: str) -> str:
    if side in ("+", "plus", 1):
        return PLUS
    if side in ("-", "minus", -1):
        return MINUS
    raise ValueError(f"side must be '+' or '-', got {side!r}")


class SingularPointError(ValueError):
    pass


class OutOfImageError(ValueError):
    pass


class DegenerateFacetError(ValueError):
    pass


class OrientationError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class AmbitoricData:
    kind: Kind
    A: Quartic
    B: Quartic
    alpha: tuple[Fraction, Fraction]
    beta: tuple[Fraction, Fraction]

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        object.__setattr__(self, "alpha", tuple(to_q(a) for a in self.alpha))
        object.__setattr__(self, "beta", tuple(to_q(b) for b in self.beta))
        if len(self.alpha) != 2 or len(self.beta) != 2:
            raise ValueError("alpha and beta must be pairs")

    @classmethod
    def from_json(cls, obj: dict) -> "AmbitoricData":
        try:
            return cls(
                kind=Kind.parse(obj["type"]),
                A=Quartic.from_coeffs(obj["A"]),
                B=Quartic.from_coeffs(obj["B"]),
                alpha=tuple(obj["alpha"]),
                beta=tuple(obj["beta"]),
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed ambitoric data: {exc}") from exc

    def to_json(self) -> dict:
        return {
            "type": self.kind.value,
            "A": [str(c) for c in self.A.coeffs()],
            "B": [str(c) for c in self.B.coeffs()],
            "alpha": [str(a) for a in self.alpha],
            "beta": [str(b) for b in self.beta],
        }

    def corners(self) -> list[tuple[Fraction, Fraction]]:
        """Domain corners in counterclockwise order of their momentum images."""
        (a1, a2), (b1, b2) = self.alpha, self.beta
        return [(a1, b1), (a2, b1), (a2, b2), (a1, b2)]

    def interior_point(self, s=Fraction(1, 2), t=Fraction(1, 2)):
        (a1, a2), (b1, b2) = self.alpha, self.beta
        return a1 + (a2 - a1) * s, b1 + (b2 - b1) * t


def bach_flat_example() -> AmbitoricData:
    """The Bach-flat hyperbolic datum A = -z^4+4z^3-z^2-6z, B = z^4-6z^3+z^2+4z."""
    return AmbitoricData(Kind.HYPERBOLIC, Quartic(-1, 4, -1, -6, 0), Quartic(1, -6, 1, 4, 0),
                         (2, 3), (0, 1))


# Per-type building blocks.  All helpers are exact on Fractions and work on floats.

def nvec(kind: Kind, z):
    if kind is Kind.PARABOLIC:
        return (1 + 0 * z, z)
    if kind is Kind.HYPERBOLIC:
        return (1 + 0 * z, z * z)
    return (2 * z, z * z - 1)


def facet_direction(kind: Kind, z):
    """Unscaled inward-normal shape of the facet x = z or y = z (orthogonal to n(z))."""
    if kind is Kind.PARABOLIC:
        return (z, -1 + 0 * z)
    if kind is Kind.HYPERBOLIC:
        return (z * z, -1 + 0 * z)
    return ((z * z - 1) / 2, -z)


def denom(kind: Kind, x, y):
    if kind is Kind.PARABOLIC:
        return x - y
    if kind is Kind.HYPERBOLIC:
        return x * x - y * y
    return (x - y) * (1 + x * y)


def conformal_factor(kind: Kind, x, y):
    """F with g- = F^2 g+ and g0 = F g+."""
    if kind is Kind.PARABOLIC:
        return 1 / (x - y)
    if kind is Kind.HYPERBOLIC:
        return (x + y) / (x - y)
    return (1 + x * y) / (x - y)


def _num(v):
    """Integers become Fractions so exact inputs stay exact; floats pass through."""
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return Fraction(v)
    return v


def _check_regular(kind: Kind, x, y, side: str | None = None):
    if x == y:
        raise SingularPointError("x = y")
    if kind is Kind.HYPERBOLIC and x + y == 0:
        raise SingularPointError("x + y = 0")
    if kind is Kind.ELLIPTIC and 1 + x * y == 0:
        raise SingularPointError("1 + x y = 0")


def det_factor(kind: Kind, x, y):
    """det H / (A(x) B(y)), a positive function on the domain."""
    if kind is Kind.PARABOLIC:
        return 1 + 0 * x
    if kind is Kind.HYPERBOLIC:
        return 1 / (x + y) ** 4
    return 4 / (1 + x * y) ** 4


# Momenta

def momentum_kind(kind: Kind, x, y, side: str = PLUS):
    side = _side(side)
    _check_regular(kind, x, y)
    if kind is Kind.PARABOLIC:
        if side == PLUS:
            return (x + y, x * y)
        return (-1 / (x - y), -(x + y) / (2 * (x - y)))
    if kind is Kind.HYPERBOLIC:
        if side == PLUS:
            return (-1 / (x + y), x * y / (x + y))
        return (-1 / (x - y), -x * y / (x - y))
    if side == PLUS:
        return (-(1 - x * y) / (1 + x * y), -(x + y) / (1 + x * y))
    return (-(x + y) / (x - y), (1 - x * y) / (x - y))


def momentum(d: AmbitoricData, x, y, side: str = PLUS):
    return momentum_kind(d.kind, _num(x), _num(y), side)


def _sqrt(v):
    """Exact square root of a perfect-square rational, float otherwise."""
    if isinstance(v, Fraction) and v >= 0:
        rn, rd = math.isqrt(v.numerator), math.isqrt(v.denominator)
        if rn * rn == v.numerator and rd * rd == v.denominator:
            return Fraction(rn, rd)
    if v < 0:
        raise OutOfImageError("negative discriminant")
    return math.sqrt(v)


def _pairs_from_sum_product(s, p):
    disc = s * s - 4 * p
    if disc < 0:
        raise OutOfImageError("point is not in the momentum image (complex preimage)")
    r = _sqrt(disc)
    return [((s + r) / 2, (s - r) / 2)]


def invert_momentum(d: AmbitoricData, mu1, mu2, side: str = PLUS, tol: float = 1e-12):
    """The preimage (x, y), x > y, inside the closed domain rectangle."""
    side = _side(side)
    kind = d.kind
    mu1, mu2 = _num(mu1), _num(mu2)
    cands = []
    try:
        if kind is Kind.PARABOLIC and side == PLUS:
            cands = _pairs_from_sum_product(mu1, mu2)
        elif kind is Kind.PARABOLIC:
            dd = -1 / mu1
            s = 2 * mu2 / mu1
            cands = [((s + dd) / 2, (s - dd) / 2)]
        elif kind is Kind.HYPERBOLIC and side == PLUS:
            cands = _pairs_from_sum_product(-1 / mu1, -mu2 / mu1)
        elif kind is Kind.HYPERBOLIC:
            dd = -1 / mu1
            p = mu2 / mu1
            # x - y = dd, x y = p:  x = (dd + sqrt(dd^2 + 4p)) / 2 and its partner
            disc = dd * dd + 4 * p
            if disc < 0:
                raise OutOfImageError("point is not in the momentum image")
            r = _sqrt(disc)
            for sgn in (1, -1):
                x = (dd + sgn * r) / 2
                cands.append((x, x - dd))
        elif side == PLUS:
            if mu1 == 1:
                raise OutOfImageError("mu1 = 1 is not attained")
            p = (1 + mu1) / (1 - mu1)
            s = -2 * mu2 / (1 - mu1)
            cands = _pairs_from_sum_product(s, p)
        else:
            # (mu1^2 - 1) dd^2 / 4 + mu2 dd - 1 = 0 with dd = x - y, then x + y = -mu1 dd
            a = (mu1 * mu1 - 1) / 4
            if a == 0:
                roots = [1 / mu2] if mu2 != 0 else []
            else:
                disc = mu2 * mu2 + 4 * a
                if disc < 0:
                    raise OutOfImageError("point is not in the momentum image")
                r = _sqrt(disc)
                roots = [(-mu2 + r) / (2 * a), (-mu2 - r) / (2 * a)]
            for dd in roots:
                s = -mu1 * dd
                cands.append(((s + dd) / 2, (s - dd) / 2))
    except ZeroDivisionError as exc:
        raise OutOfImageError(str(exc)) from exc

    (a1, a2), (b1, b2) = d.alpha, d.beta
    slack = 0 if all(isinstance(v, Fraction) for c in cands for v in c) else tol
    for x, y in cands:
        if x > y and a1 - slack <= x <= a2 + slack and b1 - slack <= y <= b2 + slack:
            return x, y
    raise OutOfImageError(f"no preimage of ({mu1}, {mu2}) in the domain")


# Metric and forms

@dataclass
class MetricFrame:
    point: tuple
    g0: np.ndarray
    gplus: np.ndarray
    gminus: np.ndarray
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    f: object       # conformal factor F with g- = F^2 g+

    def exact(self) -> bool:
        return self.g0.dtype == object


def _frame_arrays(kind: Kind, A, B, x, y):
    """(g0, w+, w-, F) in coordinates (x, y, t1, t2); A, B are values A(x), B(y)."""
    exact = isinstance(x, Fraction) and isinstance(y, Fraction)
    dtype = object if exact else float
    D = denom(kind, x, y)
    F = conformal_factor(kind, x, y)
    nx, ny = nvec(kind, x), nvec(kind, y)
    g0 = np.zeros((4, 4), dtype=dtype)
    if exact:
        g0[:] = Fraction(0)
    g0[0, 0] = 1 / A
    g0[1, 1] = 1 / B
    for i in range(2):
        for j in range(2):
            g0[2 + i, 2 + j] = (A * ny[i] * ny[j] + B * nx[i] * nx[j]) / (D * D)
    wp = np.zeros((4, 4), dtype=dtype)
    wm = np.zeros((4, 4), dtype=dtype)
    if exact:
        wp[:] = Fraction(0)
        wm[:] = Fraction(0)
    for i in range(2):
        wp[0, 2 + i] = ny[i] / (F * D)
        wp[1, 2 + i] = nx[i] / (F * D)
        wm[0, 2 + i] = F * ny[i] / D
        wm[1, 2 + i] = -F * nx[i] / D
    wp -= wp.T.copy()
    wm -= wm.T.copy()
    return g0, wp, wm, F


def frame_components(kind: Kind, A, B, x, y) -> MetricFrame:
    """Metric frame for arbitrary callables A, B (used by the numerical oracles)."""
    _check_regular(kind, x, y)
    Ax, By = A(x), B(y)
    if Ax == 0 or By == 0:
        raise SingularPointError("metric degenerates where A(x) B(y) = 0")
    g0, wp, wm, F = _frame_arrays(kind, Ax, By, x, y)
    return MetricFrame((x, y), g0, g0 / F, g0 * F, wp, wm, F)


def metric_frame_at(d: AmbitoricData, x, y) -> MetricFrame:
    return frame_components(d.kind, d.A, d.B, _num(x), _num(y))


def barycentric_split(kind: Kind, A, B, x, y):
    """g0 as the sum of its x-plane part (dx, N_x) and y-plane part (dy, N_y)."""
    Ax, By = A(x), B(y)
    D = denom(kind, x, y)
    nx, ny = nvec(kind, x), nvec(kind, y)
    gx, gy = np.zeros((4, 4)), np.zeros((4, 4))
    gx[0, 0] = 1 / Ax
    gy[1, 1] = 1 / By
    for i in range(2):
        for j in range(2):
            gx[2 + i, 2 + j] = Ax * ny[i] * ny[j] / (D * D)
            gy[2 + i, 2 + j] = By * nx[i] * nx[j] / (D * D)
    return gx, gy


def h_matrix_kind(kind: Kind, A, B, x, y):
    """H_ij = g+(K_i, K_j) for the generators K_i = d/dt_i."""
    _check_regular(kind, x, y)
    Ax, By = A(x), B(y)
    D = denom(kind, x, y)
    F = conformal_factor(kind, x, y)
    nx, ny = nvec(kind, x), nvec(kind, y)
    return [[(Ax * ny[i] * ny[j] + By * nx[i] * nx[j]) / (F * D * D) for j in range(2)]
            for i in range(2)]


def h_matrix_at(d: AmbitoricData, x, y):
    return h_matrix_kind(d.kind, d.A, d.B, _num(x), _num(y))


# Scalar curvature

def general_scalar_curvatures(q: Quadratic, A: Quartic, B: Quartic, x, y):
    """(s+, s-) for the metrics built from q(x, y) = polarize(q, x, y) and f = q(x,y)/(x-y)."""
    q0, q1 = q.q0, q.q1
    qxy = polarize(q, x, y)
    Ax, A1, A2 = A(x), A.derivative(x, 1), A.derivative(x, 2)
    By, B1, B2 = B(y), B.derivative(y, 1), B.derivative(y, 2)
    ly, lx = q0 * y + q1, q0 * x + q1
    sp = (-qxy * qxy * (A2 + B2) + 6 * qxy * (ly * A1 + lx * B1)
          - 12 * (ly * ly * Ax + lx * lx * By)) / ((x - y) * qxy)
    sm = (-(x - y) ** 2 * (A2 + B2) + 6 * (x - y) * (A1 - B1) - 12 * (Ax + By)) / ((x - y) * qxy)
    return sp, sm


# The general-q metrics agree with the normal forms up to homothety; only the
# hyperbolic case, where q(x, y) = (x + y)/2, picks up a constant: the general g+
# is twice the normal-form g+, the general g- half the normal-form g-.
_CURVATURE_SCALE = {
    Kind.PARABOLIC: (1, 1),
    Kind.HYPERBOLIC: (2, Fraction(1, 2)),
    Kind.ELLIPTIC: (1, 1),
}


def scalar_curvature_at(d: AmbitoricData, x, y, side: str = PLUS):
    side = _side(side)
    x, y = _num(x), _num(y)
    _check_regular(d.kind, x, y)
    sp, sm = general_scalar_curvatures(d.kind.q, d.A, d.B, x, y)
    kp, km = _CURVATURE_SCALE[d.kind]
    return sp * kp if side == PLUS else sm * km


@dataclass(frozen=True)
class AffineFunction:
    """c1 mu1 + c2 mu2 + c0."""

    c1: Fraction
    c2: Fraction
    c0: Fraction

    def __call__(self, mu):
        return self.c1 * mu[0] + self.c2 * mu[1] + self.c0

    def to_json(self) -> dict:
        return {"mu1": str(self.c1), "mu2": str(self.c2), "const": str(self.c0)}


def extremal_affine_coeffs(d: AmbitoricData, side: str = PLUS) -> AffineFunction:
    """Scalar curvature of an extremal datum as an affine function of the momenta."""
    side = _side(side)
    rep = condition_report(d)
    if not rep.extremal:
        raise PreconditionError(f"datum is not extremal: {rep.residuals['extremal']}")
    a0, a1, a2, a3, a4 = d.A.coeffs()
    b0, b1, b2, b3, b4 = d.B.coeffs()
    Z = Fraction(0)
    if d.kind is Kind.PARABOLIC:
        if side == PLUS:
            return AffineFunction(-12 * a0, Z, -6 * a1)
        return AffineFunction(12 * (a4 + b4), 12 * (a3 + b3), Z)
    if d.kind is Kind.HYPERBOLIC:
        if side == PLUS:
            return AffineFunction(6 * (a3 - b3), 6 * (a1 - b1), Z)
        return AffineFunction(6 * (a3 + b3), 6 * (a1 + b1), Z)
    if side == PLUS:
        return AffineFunction(6 * (a3 - b1), -12 * (a4 + b0), Z)
    return AffineFunction(6 * (a3 + b3), -12 * (a4 + b4), Z)


# Coefficient conditions

@dataclass
class ConditionReport:
    kind: Kind
    extremal: bool
    bach_flat: bool
    csc_plus: bool
    kahler_einstein_plus: bool
    selfdual: bool          # s- vanishes identically
    antiselfdual: bool      # s+ vanishes identically
    residuals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "type": self.kind.value,
            "extremal": self.extremal,
            "bach_flat": self.bach_flat,
            "csc_plus": self.csc_plus,
            "kahler_einstein_plus": self.kahler_einstein_plus,
            "selfdual": self.selfdual,
            "antiselfdual": self.antiselfdual,
            "residuals": {k: [str(v) for v in vs] for k, vs in self.residuals.items()},
        }


def _extremal_relations(kind: Kind, a, b):
    a0, a1, a2, a3, a4 = a
    b0, b1, b2, b3, b4 = b
    if kind is Kind.PARABOLIC:
        return [a0 + b0, a1 + b1, a2 + b2]
    if kind is Kind.HYPERBOLIC:
        return [a0 + b0, a2 + b2, a4 + b4]
    return [a2 + b2, a0 + b0 + a4 + b4, a1 + b1 - a3 - b3]


def condition_report(d: AmbitoricData) -> ConditionReport:
    a = d.A.coeffs()
    b = d.B.coeffs()
    a0, a1, a2, a3, a4 = a
    b0, b1, b2, b3, b4 = b
    ext = _extremal_relations(d.kind, a, b)
    extremal = not any(ext)
    if d.kind is Kind.PARABOLIC:
        bach = [a1 * (a3 + b3) - 4 * a0 * (a4 + b4)]
        s_plus_zero = [a0, a1]
        s_minus_zero = [a3 + b3, a4 + b4]
    elif d.kind is Kind.HYPERBOLIC:
        bach = [(a3 - b3) * (a1 + b1) + (a3 + b3) * (a1 - b1)]
        s_plus_zero = [a1 - b1, a3 - b3]
        s_minus_zero = [a1 + b1, a3 + b3]
    else:
        bach = [(a3 - b1) * (a3 + b3) + 4 * (a4 + b4) * (a4 + b0)]
        s_plus_zero = [a3 - b1, a4 + b0]
        s_minus_zero = [a3 + b3, a4 + b4]
    antiselfdual = extremal and not any(s_plus_zero)
    selfdual = extremal and not any(s_minus_zero)
    if d.kind is Kind.PARABOLIC:
        csc = extremal and a0 == 0
        ke = csc and a3 + b3 == 0
    else:
        csc = antiselfdual
        ke = False
    residuals = {}
    if not extremal:
        residuals["extremal"] = ext
    if not (extremal and not any(bach)):
        residuals["bach_flat"] = bach
    return ConditionReport(
        kind=d.kind,
        extremal=extremal,
        bach_flat=extremal and not any(bach),
        csc_plus=csc,
        kahler_einstein_plus=ke,
        selfdual=selfdual,
        antiselfdual=antiselfdual,
        residuals=residuals,
    )


def kind_of(q: Quadratic) -> Kind | None:
    """The normal form a quadratic already is, if any."""
    for k in Kind:
        if k.q == q:
            return k
    return None


def build_extremal_family(q: Quadratic, pi: Quadratic, P: Quartic) -> tuple[Quartic, Quartic]:
    """A = q pi + P, B = q pi - P for pi orthogonal to q."""
    if inner(q, pi) != 0:
        raise PreconditionError(f"<pi, q> = {inner(q, pi)} is not zero")
    qpi = Quartic.from_ascending(pmul(q.ascending(), pi.ascending()))
    return qpi + P, qpi - P


def bach_flat_by_wronskian(q: Quadratic, pi: Quadratic, P: Quartic) -> bool:
    """pi and {q, q.P} linearly dependent (all 2x2 minors vanish)."""
    w = transvect(q, P)[1].triple()
    p = pi.triple()
    return all(p[i] * w[j] - p[j] * w[i] == 0 for i in range(3) for j in range(i + 1, 3))


def extremal_partner(kind: Kind, B: Quartic, alpha: Sequence) -> Quartic:
    """The unique A (if any) with (A, B) extremal of this kind and A(alpha_j) = 0.

    The extremality relations fix three combinations of A's coefficients; the two
    remaining directions are solved from the endpoint conditions.
    """
    b0, b1, b2, b3, b4 = B.coeffs()
    a1_, a2_ = (to_q(v) for v in alpha)
    if kind is Kind.PARABOLIC:
        base = Quartic(-b0, -b1, -b2, 0, 0)
        free = [Quartic(0, 0, 0, 1, 0), Quartic(0, 0, 0, 0, 1)]
    elif kind is Kind.HYPERBOLIC:
        base = Quartic(-b0, 0, -b2, 0, -b4)
        free = [Quartic(0, 1, 0, 0, 0), Quartic(0, 0, 0, 1, 0)]
    else:
        base = Quartic(0, 0, -b2, b1 - b3, -b0 - b4)
        free = [Quartic(1, 0, 0, 0, -1), Quartic(0, 1, 0, 1, 0)]
    m = [[f(z) for f in free] for z in (a1_, a2_)]
    rhs = [-base(z) for z in (a1_, a2_)]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if det == 0:
        raise PreconditionError("endpoint conditions are singular for this kind")
    s = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det
    t = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det
    return base + free[0].scale(s) + free[1].scale(t)


def boundary_data(d: AmbitoricData) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """(c1a, c2a, c1b, c2b) with c_j^alpha = 2/A'(alpha_j), c_j^beta = -2/B'(beta_j)."""
    (a1, a2), (b1, b2) = d.alpha, d.beta
    for P, z, name in ((d.A, a1, "A"), (d.A, a2, "A"), (d.B, b1, "B"), (d.B, b2, "B")):
        if P(z) != 0:
            raise DegenerateFacetError(f"{name}({z}) = {P(z)} is not zero")
    ders = [d.A.derivative(a1), d.A.derivative(a2), d.B.derivative(b1), d.B.derivative(b2)]
    if any(v == 0 for v in ders):
        raise DegenerateFacetError("double root at an endpoint: the facet is degenerate")
    c = (2 / ders[0], 2 / ders[1], -2 / ders[2], -2 / ders[3])
    if not (c[0] > 0 > c[1] and c[2] < 0 < c[3]):
        raise OrientationError(f"boundary data {tuple(str(v) for v in c)} have the wrong sign pattern")
    return c


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str


def validate_data(d: AmbitoricData) -> list[Violation]:
    """Every invariant of a compactifiable datum, checked exactly.  Empty list = ok."""
    out: list[Violation] = []
    (a1, a2), (b1, b2) = d.alpha, d.beta
    if not b1 < b2:
        out.append(Violation("beta_order", f"beta1 < beta2 fails: {b1}, {b2}"))
    if not b2 < a1:
        out.append(Violation("beta2_lt_alpha1", f"beta2 < alpha1 fails: {b2}, {a1}"))
    if not a1 < a2:
        out.append(Violation("alpha_order", f"alpha1 < alpha2 fails: {a1}, {a2}"))
    for P, z, name in ((d.A, a1, "A(alpha1)"), (d.A, a2, "A(alpha2)"),
                       (d.B, b1, "B(beta1)"), (d.B, b2, "B(beta2)")):
        if P(z) != 0:
            out.append(Violation("endpoint_root", f"{name} = {P(z)}"))
    if a1 < a2:
        res = sturm_positive_on(d.A, a1, a2)
        if res.verdict is not Positivity.POSITIVE:
            out.append(Violation("A_positive", f"A is not positive on ({a1}, {a2}): {res.verdict.value}"))
    if b1 < b2:
        res = sturm_positive_on(d.B, b1, b2)
        if res.verdict is not Positivity.POSITIVE:
            out.append(Violation("B_positive", f"B is not positive on ({b1}, {b2}): {res.verdict.value}"))
    if d.kind is Kind.HYPERBOLIC and not a1 + b1 > 0:
        out.append(Violation("hyperbolic_domain", f"alpha1 + beta1 > 0 fails: {a1 + b1}"))
    if d.kind is Kind.ELLIPTIC:
        for a in (a1, a2):
            for b in (b1, b2):
                if not a * b > -1:
                    out.append(Violation("elliptic_domain", f"alpha*beta > -1 fails at ({a}, {b})"))
    if not any(v.code in ("endpoint_root",) for v in out):
        try:
            boundary_data(d)
        except (DegenerateFacetError, OrientationError) as exc:
            out.append(Violation("boundary_data", str(exc)))
    return out


@dataclass(frozen=True)
class CalabiFlags:
    extremal: bool
    bach_flat: bool
    csc: bool
    kahler_einstein: bool


def calabi_check(V: Quartic, k) -> CalabiFlags:
    """Coefficient tests for the Calabi-type ansatz with base of Gauss curvature k."""
    a0, a1, a2, a3, a4 = V.coeffs()
    ext = a2 == to_q(k)
    bach = ext and 4 * a0 * a4 - a1 * a3 == 0
    csc = ext and a0 == 0
    ke = csc and a3 == 0
    return CalabiFlags(ext, bach, csc, ke)


# General-q evaluator

@dataclass
class GeneralFrame:
    """Metric and forms of the general-q displays in coordinates (x, y, s1, s2).

    ``basis`` is the 3x2 matrix expressing (dtau0, dtau1, dtau2) in terms of
    (ds1, ds2); it spans the plane <q, dtau> = 0.
    """

    point: tuple
    basis: tuple
    g0: np.ndarray
    gplus: np.ndarray
    gminus: np.ndarray
    omega_plus: np.ndarray
    omega_minus: np.ndarray
    f: object


def default_tau_basis(q: Quadratic):
    """Solve 2 q1 dtau1 = q0 dtau2 + q2 dtau0 for one coordinate, keeping the other two."""
    q0, q1, q2 = q.triple()
    one, zero = Fraction(1), Fraction(0)
    if q1 != 0:
        # keep (tau2, tau0)
        return ((zero, one), (q0 / (2 * q1), q2 / (2 * q1)), (one, zero))
    if q2 != 0:
        # tau0 = -q0 tau2 / q2; keep (tau1, tau2)
        return ((zero, -q0 / q2), (one, zero), (zero, one))
    if q0 != 0:
        # tau2 = -q2 tau0 / q0 = 0; keep (tau1, tau0)
        return ((zero, one), (one, zero), (zero, zero))
    raise PreconditionError("q must be nonzero")


def general_q_frame(q: Quadratic, A, B, x, y, basis=None) -> GeneralFrame:
    if q.is_zero():
        raise PreconditionError("q must be nonzero")
    if x == y:
        raise SingularPointError("x = y")
    qxy = polarize(q, x, y)
    if qxy == 0:
        raise SingularPointError("q(x, y) = 0")
    basis = basis or default_tau_basis(q)
    M = [[to_q(v) for v in row] for row in basis]
    if any(sum(c * M[i][j] for c, i in zip((-q.q2 / 2, q.q1, -q.q0 / 2), range(3))) != 0 for j in range(2)):
        raise PreconditionError("basis does not satisfy <q, dtau> = 0")
    Ax, By = A(x), B(y)
    exact = isinstance(x, Fraction) and isinstance(y, Fraction)
    dtype = object if exact else float

    def nrow(z):
        # y^2 dtau0 + 2 y dtau1 + dtau2 in the s-basis
        coef = (z * z, 2 * z, 1 + 0 * z)
        return [sum(coef[i] * M[i][j] for i in range(3)) for j in range(2)]

    Nx, Ny = nrow(y), nrow(x)     # N_x pairs with dx, N_y with dy
    den = (x - y) * qxy
    g0 = np.zeros((4, 4), dtype=dtype)
    wp = np.zeros((4, 4), dtype=dtype)
    wm = np.zeros((4, 4), dtype=dtype)
    if exact:
        g0[:] = Fraction(0)
        wp[:] = Fraction(0)
        wm[:] = Fraction(0)
    g0[0, 0] = 1 / Ax
    g0[1, 1] = 1 / By
    for i in range(2):
        for j in range(2):
            g0[2 + i, 2 + j] = (Ax * Nx[i] * Nx[j] + By * Ny[i] * Ny[j]) / (den * den)
        wp[0, 2 + i] = Nx[i] / (qxy * qxy)
        wp[1, 2 + i] = Ny[i] / (qxy * qxy)
        wm[0, 2 + i] = Nx[i] / ((x - y) ** 2)
        wm[1, 2 + i] = -Ny[i] / ((x - y) ** 2)
    wp -= wp.T.copy()
    wm -= wm.T.copy()
    f = qxy / (x - y)
    return GeneralFrame((x, y), tuple(tuple(r) for r in M), g0, g0 / f, g0 * f, wp, wm, f)


__all__ = [
    "AffineFunction", "AmbitoricData", "CalabiFlags", "ConditionReport", "DegenerateFacetError",
    "GeneralFrame", "Kind", "MetricFrame", "OrientationError", "OutOfImageError", "PLUS", "MINUS",
    "PreconditionError", "SingularPointError", "Violation", "bach_flat_by_wronskian",
    "barycentric_split", "boundary_data", "build_extremal_family", "calabi_check",
    "condition_report", "conformal_factor", "default_tau_basis", "denom", "det_factor",
    "extremal_affine_coeffs", "extremal_partner", "facet_direction", "frame_components",
    "general_q_frame", "general_scalar_curvatures", "h_matrix_at", "h_matrix_kind",
    "invert_momentum", "kind_of", "metric_frame_at", "momentum", "momentum_kind", "nvec",
    "bach_flat_example", "poisson_bracket", "scalar_curvature_at", "validate_data",
]
