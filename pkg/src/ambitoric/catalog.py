"""Constructive families: weighted projective planes, extremal and Bach-flat perturbations.

All families here are hyperbolic.  Seeds start from four rationals beta_1..beta_4
and B(z) = -(z - beta_1)(z - beta_2)(z - beta_3)(z - beta_4); the Bochner-flat seed
pair is (A, B) = (-B, B) on (beta_2, beta_3) x (beta_1, beta_2).
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Callable, Sequence

from .exactmath import Quartic, pmul, to_q
from .polytope import (
    Facet,
    LabelledPolytope,
    boundary_moments,
    dot,
    interior_moments,
    moments,
    polytope_from_facets,
    simplex_weights,
)
from .structures import (
    AffineFunction,
    AmbitoricData,
    Kind,
    PreconditionError,
    condition_report,
    extremal_affine_coeffs,
    extremal_partner,
    facet_direction,
    momentum_kind,
    validate_data,
)


def _ordered(betas: Sequence, strict_positive: bool = False) -> tuple[Fraction, ...]:
    b = tuple(to_q(v) for v in betas)
    if len(b) != 4:
        raise ValueError("need four betas")
    if not all(x < y for x, y in zip(b, b[1:])):
        raise ValueError(f"betas must be strictly increasing: {[str(v) for v in b]}")
    if strict_positive and b[0] <= 0:
        raise ValueError("betas must be positive")
    return b


def seed_quartic(betas: Sequence) -> Quartic:
    return Quartic.from_roots([to_q(v) for v in betas], -1)


# Weighted projective planes

@dataclass(frozen=True)
class WPPData:
    betas: tuple[Fraction, ...]
    weights: tuple[int, int, int]
    s_min: Fraction                      # these three are half the values taken by scalar_curvature
    s_max: Fraction
    s_avg: Fraction
    simplex: LabelledPolytope
    scalar_curvature: AffineFunction     # computed from the simplex moments

    def to_json(self) -> dict:
        return {
            "betas": [str(b) for b in self.betas],
            "weights": list(self.weights),
            "s_min": str(self.s_min),
            "s_max": str(self.s_max),
            "s_avg": str(self.s_avg),
            "scalar_curvature": self.scalar_curvature.to_json(),
            "simplex": self.simplex.to_json(),
        }


def wpp_weights(betas: Sequence) -> tuple[int, int, int]:
    b1, b2, b3, b4 = _ordered(betas)
    raw = [(b4 - b3) * (b1 + b2), (b4 - b2) * (b1 + b3), (b4 - b1) * (b2 + b3)]
    den = reduce(lambda a, c: a * c // gcd(a, c), (r.denominator for r in raw), 1)
    ints = [int(r * den) for r in raw]
    g = reduce(gcd, ints)
    return tuple(sorted(v // g for v in ints))


def wpp_simplex(betas: Sequence) -> LabelledPolytope:
    """Momentum image of (beta_2, beta_3) x (beta_1, beta_2) for the Bochner-flat pair.

    The two facets x = beta_2 and y = beta_2 lie on one line, leaving a triangle.
    """
    b1, b2, b3, b4 = _ordered(betas, strict_positive=True)
    B = seed_quartic((b1, b2, b3, b4))
    A = -B
    kind = Kind.HYPERBOLIC

    def facet(z, c, label):
        fd = facet_direction(kind, z)
        u = (c * fd[0], c * fd[1])
        # the line passes through mu(z, w) for any w; take w = beta_1 or beta_2 away from z
        w = b1 if z != b1 else b3
        mu = momentum_kind(kind, max(z, w), min(z, w))
        return Facet(u, -dot(u, mu), label)

    facets = (
        facet(b2, 2 / A.derivative(b2), "x=y=beta2"),
        facet(b3, 2 / A.derivative(b3), "x=beta3"),
        facet(b1, -2 / B.derivative(b1), "y=beta1"),
    )
    return polytope_from_facets(facets)


def wpp_from_beta(betas: Sequence) -> WPPData:
    b1, b2, b3, b4 = _ordered(betas, strict_positive=True)
    simplex = wpp_simplex((b1, b2, b3, b4))
    w_normals = simplex_weights([f.u for f in simplex.facets])
    weights = wpp_weights((b1, b2, b3, b4))
    if tuple(sorted(w_normals)) != weights:
        raise AssertionError(f"weights {weights} disagree with the simplex normals {w_normals}")
    from .stability import extremal_field

    s = extremal_field(moments(simplex)).scalar_curvature()
    return WPPData(
        betas=(b1, b2, b3, b4),
        weights=weights,
        s_min=6 * (b1 * b4 - b2 * b3),
        s_max=6 * (b3 * b4 - b1 * b2),
        s_avg=2 * b4 * (b1 + b2 + b3) - 2 * (b1 * b2 + b2 * b3 + b3 * b1),
        simplex=simplex,
        scalar_curvature=s,
    )


def affine_range(p: LabelledPolytope, f: AffineFunction) -> tuple[Fraction, Fraction]:
    vals = [f(v) for v in p.vertices]
    return min(vals), max(vals)


def average_scalar_curvature(p: LabelledPolytope) -> Fraction:
    """2 beta / alpha, the average of the scalar curvature of any compatible metric."""
    return 2 * boundary_moments(p)[0] / interior_moments(p)[0]


# Extremal and Bach-flat families

@dataclass
class FamilyResult:
    ok: bool
    data: AmbitoricData | None
    reason: str = ""
    provenance: dict = field(default_factory=dict)
    candidate: AmbitoricData | None = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "reason": self.reason, "provenance": self.provenance}
        if self.data is not None:
            out["data"] = self.data.to_json()
        elif self.candidate is not None:
            out["candidate"] = self.candidate.to_json()
        return out


def _assess(d: AmbitoricData, seeded: bool) -> tuple[bool, str]:
    bad = validate_data(d)
    if seeded:
        # alpha_1 = beta_2 is the simplex degeneration; the remaining checks still apply
        bad = [v for v in bad if v.code != "beta2_lt_alpha1"]
        bad = [v for v in bad if not (v.code in ("boundary_data",) and "double root" in v.detail)]
    if bad:
        return False, "; ".join(f"{v.code}: {v.detail}" for v in bad)
    return True, ""


def extremal_search(betas: Sequence, alpha: Sequence) -> FamilyResult:
    """A = z^4 + a z^3 - b2 z^2 + c z - b0 matched to B, with A(alpha_j) = 0."""
    b = _ordered(betas)
    a1, a2 = (to_q(v) for v in alpha)
    if not b[1] <= a1 < a2:
        raise ValueError("need beta_2 <= alpha_1 < alpha_2")
    B = seed_quartic(b)
    prov = {"family": "extremal", "betas": [str(v) for v in b], "alpha": [str(a1), str(a2)]}
    try:
        A = extremal_partner(Kind.HYPERBOLIC, B, (a1, a2))
    except PreconditionError as exc:
        return FamilyResult(False, None, str(exc), prov)
    d = AmbitoricData(Kind.HYPERBOLIC, A, B, (a1, a2), (b[0], b[1]))
    ok, why = _assess(d, seeded=(a1 == b[1]))
    if a1 == b[1]:
        prov["note"] = "alpha_1 = beta_2: the polytope degenerates to a simplex"
    return FamilyResult(ok, d if ok else None, why, prov, d)


def bachflat_pair(betas: Sequence, gamma, delta) -> tuple[Quartic, Quartic]:
    """(A_{gamma,delta}, B_{gamma,delta}) with B vanishing at beta_1, beta_2.

    With B = -z^4 + b3 z^3 + b2 z^2 + b1 z + b0 the seed,
        B_{g,d} = -z^4 + d b3 z^3 + b2(g,d) z^2 + g b1 z + b0(g,d),
        A_{g,d} =  z^4 - g b3 z^3 - b2(g,d) z^2 - d b1 z - b0(g,d).
    """
    b = [to_q(v) for v in betas]
    g, dl = to_q(gamma), to_q(delta)
    seed = seed_quartic(b)
    _, b3, _, b1, _ = seed.coeffs()
    r = [z ** 4 - dl * b3 * z ** 3 - g * b1 * z for z in b[:2]]
    if b[0] ** 2 == b[1] ** 2:
        raise PreconditionError("beta_1^2 = beta_2^2 makes the family singular")
    c2 = (r[0] - r[1]) / (b[0] ** 2 - b[1] ** 2)
    c0 = r[0] - c2 * b[0] ** 2
    B = Quartic(-1, dl * b3, c2, g * b1, c0)
    A = Quartic(1, -g * b3, -c2, -dl * b1, -c0)
    return A, B


def bachflat_parameters(betas: Sequence, alpha: Sequence) -> tuple[Fraction, Fraction]:
    """Solve A_{g,d}(alpha_1) = A_{g,d}(alpha_2) = 0; both are affine in (g, d)."""
    al = [to_q(v) for v in alpha]

    def value(g, dl, z):
        return bachflat_pair(betas, g, dl)[0](z)

    rows = []
    for z in al:
        c = value(0, 0, z)
        rows.append((value(1, 0, z) - c, value(0, 1, z) - c, -c))
    det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if det == 0:
        raise PreconditionError("the endpoint conditions do not determine (gamma, delta)")
    g = (rows[0][2] * rows[1][1] - rows[0][1] * rows[1][2]) / det
    dl = (rows[0][0] * rows[1][2] - rows[0][2] * rows[1][0]) / det
    return g, dl


def bachflat_search(betas: Sequence, alpha: Sequence, allow_negation: bool = True) -> FamilyResult:
    """Two-parameter Bach-flat family through the Bochner-flat seed.

    The betas need not be ordered beyond beta_1 < beta_2 <= alpha_1 < alpha_2.  Both
    coefficient conditions are homogeneous, so (-A, -B) is tried when the family
    member itself has the wrong sign.
    """
    b = [to_q(v) for v in betas]
    a1, a2 = (to_q(v) for v in alpha)
    if not b[0] < b[1] <= a1 < a2:
        raise ValueError("need beta_1 < beta_2 <= alpha_1 < alpha_2")
    prov = {"family": "bach_flat", "betas": [str(v) for v in b], "alpha": [str(a1), str(a2)]}
    try:
        g, dl = bachflat_parameters(b, (a1, a2))
        A, B = bachflat_pair(b, g, dl)
    except PreconditionError as exc:
        return FamilyResult(False, None, str(exc), prov)
    prov.update(gamma=str(g), delta=str(dl), sign=1)
    d = AmbitoricData(Kind.HYPERBOLIC, A, B, (a1, a2), (b[0], b[1]))
    rep = condition_report(d)
    if not (rep.extremal and rep.bach_flat):
        raise AssertionError("Bach-flat family member fails its own identities")
    seeded = a1 == b[1]
    ok, why = _assess(d, seeded)
    if not ok and allow_negation:
        neg = AmbitoricData(Kind.HYPERBOLIC, -A, -B, (a1, a2), (b[0], b[1]))
        ok2, why2 = _assess(neg, seeded)
        if ok2:
            prov["sign"] = -1
            return FamilyResult(True, neg, "", prov, neg)
    return FamilyResult(ok, d if ok else None, why, prov, d)


def shrink_to_positive(search: Callable[[Sequence, Sequence], FamilyResult], betas: Sequence,
                       alpha: Sequence, floor: Fraction = Fraction(1, 2 ** 16)) -> FamilyResult:
    """Move alpha towards the seed (beta_2, beta_3) by halving until the search succeeds."""
    b = [to_q(v) for v in betas]
    seed = (b[1], b[2])
    target = tuple(to_q(v) for v in alpha)
    t = Fraction(1)
    last = None
    while t >= floor:
        al = tuple(s + t * (a - s) for s, a in zip(seed, target))
        last = search(b, al)
        if last.ok:
            last.provenance["shrink"] = str(t)
            return last
        t /= 2
    last.reason = f"no positive member within 2^-16 of the seed; last: {last.reason}"
    return last


# Sign of the scalar curvature over the polytope

class Region(enum.Enum):
    POSITIVE = "PositiveEverywhere"
    NEGATIVE = "NegativeEverywhere"
    MIXED = "MixedSign"


@dataclass
class EinsteinRegion:
    region: Region
    vertex_values: tuple[Fraction, ...]
    negative_vertices: tuple = ()
    zero_line: AffineFunction | None = None

    def to_json(self) -> dict:
        return {
            "region": self.region.value,
            "vertex_values": [str(v) for v in self.vertex_values],
            "negative_vertices": [[str(c) for c in v] for v in self.negative_vertices],
            "zero_line": None if self.zero_line is None else self.zero_line.to_json(),
        }


def einstein_region(d: AmbitoricData) -> EinsteinRegion:
    """Sign pattern of s+ on the polytope; s+^-2 g+ is Einstein wherever s+ is nonzero."""
    rep = condition_report(d)
    if not (rep.extremal and rep.bach_flat):
        raise PreconditionError("einstein_region needs an extremal Bach-flat datum")
    s = extremal_affine_coeffs(d)
    verts = [momentum_kind(d.kind, x, y) for x, y in d.corners()]
    vals = tuple(s(v) for v in verts)
    if all(v > 0 for v in vals):
        return EinsteinRegion(Region.POSITIVE, vals)
    if all(v < 0 for v in vals):
        return EinsteinRegion(Region.NEGATIVE, vals)
    neg = tuple(v for v, val in zip(verts, vals) if val < 0)
    return EinsteinRegion(Region.MIXED, vals, neg, s)


# Generated data

def unstable_datum() -> AmbitoricData:
    """An extremal hyperbolic datum whose A changes sign inside (alpha_1, alpha_2).

    A = -(z-4)(z-5)(z-6)(z-7) on (4, 7); B is its extremal partner vanishing at
    -1 and 3.  All first-order boundary conditions hold, positivity does not.
    """
    A = Quartic.from_roots((4, 5, 6, 7), -1)
    B = extremal_partner(Kind.HYPERBOLIC, A, (-1, 3))
    return AmbitoricData(Kind.HYPERBOLIC, A, B, (4, 7), (-1, 3))


def _rand_q(rng: random.Random, lo: int, hi: int, den: int = 8) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def random_extremal_data(kind: Kind | str, seed: int, require_positive: bool = True,
                         max_tries: int = 2000) -> AmbitoricData:
    """Random rational extremal datum of the given kind.

    B = (z - beta_1)(beta_2 - z) R(z) with R quadratic, A the extremal partner.  With
    require_positive False the data only satisfy the hypotheses of the stability
    verdict (orientation, ordering, extremality), so A or B may change sign.
    """
    kind = Kind.parse(kind)
    rng = random.Random(seed)
    for _ in range(max_tries):
        b1 = _rand_q(rng, 0, 2)
        b2 = b1 + _rand_q(rng, 1, 2) / 2
        a1 = b2 + _rand_q(rng, 1, 3) / 4
        a2 = a1 + _rand_q(rng, 1, 3) / 2
        if require_positive:
            # R > 0 on (beta_1, beta_2)
            r0, r1, r2 = _rand_q(rng, -1, 1), _rand_q(rng, -2, 2), _rand_q(rng, 1, 4)
            R = (r0, r1, r2)
        else:
            m1 = b1 + (b2 - b1) * _rand_q(rng, 0, 1)
            m2 = b1 + (b2 - b1) * _rand_q(rng, 0, 1)
            R = (Fraction(1), -(m1 + m2), m1 * m2) if rng.random() < 0.5 else \
                (_rand_q(rng, -1, 1), _rand_q(rng, -2, 2), _rand_q(rng, 1, 4))
        base = Quartic(0, 0, -1, b1 + b2, -b1 * b2)        # (z - b1)(b2 - z)
        Rq = Quartic(0, 0, *R)
        B = Quartic.from_ascending(pmul(base.ascending(), Rq.ascending()))
        if B.is_zero():
            continue
        try:
            A = extremal_partner(kind, B, (a1, a2))
        except PreconditionError:
            continue
        d = AmbitoricData(kind, A, B, (a1, a2), (b1, b2))
        codes = {v.code for v in validate_data(d)}
        allowed = set() if require_positive else {"A_positive", "B_positive"}
        if codes <= allowed:
            return d
    raise RuntimeError(f"no {kind.value} datum found for seed {seed}")


def random_unstable_data(seed: int, max_tries: int = 2000) -> AmbitoricData:
    """Random perturbation of unstable_datum: A = -(z-r1)..(z-r4) changes sign on (r1, r4)."""
    rng = random.Random(seed)
    for _ in range(max_tries):
        r = sorted(_rand_q(rng, 4, 7) for _ in range(4))
        if len(set(r)) < 4:
            continue
        b1, b2 = _rand_q(rng, -2, 0), _rand_q(rng, 1, 4)
        if not (b1 < 0 < b2 < r[0] and r[0] + b1 > 0):
            continue
        A = Quartic.from_roots(r, -1)
        try:
            B = extremal_partner(Kind.HYPERBOLIC, A, (b1, b2))
        except PreconditionError:
            continue
        d = AmbitoricData(Kind.HYPERBOLIC, A, B, (r[0], r[3]), (b1, b2))
        if {v.code for v in validate_data(d)} == {"A_positive"}:
            return d
    raise RuntimeError(f"no unstable datum found for seed {seed}")


def generated_datasets(n: int, seed: int = 0) -> list[AmbitoricData]:
    """A reproducible mix: positive data of all three kinds and sign-changing data."""
    kinds = list(Kind)
    out = []
    for i in range(n):
        if i % 4 == 3:
            out.append(random_unstable_data(seed * 1000 + i))
        else:
            out.append(random_extremal_data(kinds[i % 3], seed * 1000 + i))
    return out


__all__ = [
    "EinsteinRegion", "FamilyResult", "Region", "WPPData", "affine_range",
    "average_scalar_curvature", "bachflat_pair", "bachflat_parameters", "bachflat_search",
    "einstein_region", "extremal_search", "generated_datasets", "random_extremal_data",
    "random_unstable_data", "seed_quartic",
    "shrink_to_positive", "unstable_datum", "wpp_from_beta", "wpp_simplex", "wpp_weights",
]
