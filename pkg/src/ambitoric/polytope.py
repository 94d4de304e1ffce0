"""Rational Delzant polytopes of compactified ambitoric data, and their moments.

A labelled polytope is {mu : <u_j, mu> + lambda_j >= 0} with inward normals u_j.
The boundary measure on the facet with normal u is fixed by u ^ dnu = -dv; on an
edge traversed counterclockwise with direction e this is the density
-det(u, e) / |u|^2 per unit parameter, so it scales like 1/|u|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
import math
from math import gcd
from typing import Sequence

from .exactmath import to_q
from .structures import (
    AmbitoricData,
    boundary_data,
    facet_direction,
    momentum_kind,
    validate_data,
)

Vec = tuple[Fraction, Fraction]


def det2(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1]


@dataclass(frozen=True)
class Facet:
    u: Vec
    lam: Fraction
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "u", tuple(to_q(c) for c in self.u))
        object.__setattr__(self, "lam", to_q(self.lam))

    def value(self, mu):
        return dot(self.u, mu) + self.lam

    def to_json(self) -> dict:
        return {"u": [str(c) for c in self.u], "lambda": str(self.lam), "label": self.label}


@dataclass(frozen=True)
class LabelledPolytope:
    facets: tuple[Facet, ...]
    vertices: tuple[Vec, ...]                 # counterclockwise
    edge_facets: tuple[int, ...] = ()         # facet index of the edge vertices[i] -> vertices[i+1]

    def edges(self):
        n = len(self.vertices)
        for i in range(n):
            yield self.vertices[i], self.vertices[(i + 1) % n], self.facets[self.edge_facets[i]]

    def contains(self, mu, strict: bool = False) -> bool:
        vals = [f.value(mu) for f in self.facets]
        return all(v > 0 for v in vals) if strict else all(v >= 0 for v in vals)

    def to_json(self) -> dict:
        return {
            "facets": [f.to_json() for f in self.facets],
            "vertices": [[str(c) for c in v] for v in self.vertices],
        }


def shoelace(vertices: Sequence[Vec]) -> Fraction:
    n = len(vertices)
    return sum((det2(vertices[i], vertices[(i + 1) % n]) for i in range(n)), Fraction(0)) / 2


def polytope_from_facets(facets: Sequence[Facet]) -> LabelledPolytope:
    """Vertices of a bounded polygon given by inequalities, ordered counterclockwise."""
    facets = tuple(facets)
    pts: list[tuple[Vec, set]] = []
    for i in range(len(facets)):
        for j in range(i + 1, len(facets)):
            u, v = facets[i].u, facets[j].u
            dt = det2(u, v)
            if dt == 0:
                continue
            # solve <u, m> = -lam_i, <v, m> = -lam_j
            m = ((-facets[i].lam * v[1] + facets[j].lam * u[1]) / dt,
                 (-facets[j].lam * u[0] + facets[i].lam * v[0]) / dt)
            if all(f.value(m) >= 0 for f in facets):
                for p, s in pts:
                    if p == m:
                        s.update((i, j))
                        break
                else:
                    pts.append((m, {i, j}))
    if len(pts) < 3:
        raise ValueError("facets do not bound a polygon")
    cx = sum(p[0] for p, _ in pts) / len(pts)
    cy = sum(p[1] for p, _ in pts) / len(pts)
    pts.sort(key=lambda ps: math.atan2(float(ps[0][1] - cy), float(ps[0][0] - cx)))
    verts = tuple(p for p, _ in pts)
    edge_facets = []
    n = len(pts)
    for k in range(n):
        common = [i for i in pts[k][1] & pts[(k + 1) % n][1]
                  if facets[i].value(verts[k]) == 0 and facets[i].value(verts[(k + 1) % n]) == 0]
        if not common:
            raise ValueError("adjacent vertices share no facet")
        edge_facets.append(common[0])
    return LabelledPolytope(facets, verts, tuple(edge_facets))


def build_polytope(d: AmbitoricData, check: bool = True) -> LabelledPolytope:
    """The momentum image of the (x, y) rectangle under mu+, with labelled normals.

    Offsets are read off from the corner images, so vertices coincide with the
    images of the domain corners by construction.
    """
    if check:
        bad = [v for v in validate_data(d) if v.code not in ("A_positive", "B_positive")]
        if bad:
            raise ValueError(f"invalid datum: {[v.detail for v in bad]}")
    c1a, c2a, c1b, c2b = boundary_data(d)
    (a1, a2), (b1, b2) = d.alpha, d.beta
    kind = d.kind

    def facet(c, z, on_point, label):
        fd = facet_direction(kind, z)
        u = (c * fd[0], c * fd[1])
        mu = momentum_kind(kind, *on_point)
        return Facet(u, -dot(u, mu), label)

    facets = (
        facet(c1a, a1, (a1, b1), "x=alpha1"),
        facet(c2a, a2, (a2, b1), "x=alpha2"),
        facet(c1b, b1, (a1, b1), "y=beta1"),
        facet(c2b, b2, (a1, b2), "y=beta2"),
    )
    corners = d.corners()
    verts = [momentum_kind(kind, x, y) for x, y in corners]
    # corner (a1,b1) -> (a2,b1) runs along y = beta1, then x = alpha2, y = beta2, x = alpha1
    edge_facets = [2, 1, 3, 0]
    if shoelace(verts) < 0:
        verts = verts[::-1]
        edge_facets = [edge_facets[(2 - i) % 4] for i in range(4)]
    p = LabelledPolytope(facets, tuple(verts), tuple(edge_facets))
    check_polytope(p)
    return p


def check_polytope(p: LabelledPolytope) -> None:
    """Each vertex lies on its two adjacent facets, strictly inside the others; normals point inward."""
    for k, v in enumerate(p.vertices):
        on = {p.edge_facets[k], p.edge_facets[k - 1]}
        for i, f in enumerate(p.facets):
            val = f.value(v)
            if i in on and val != 0:
                raise ValueError(f"vertex {v} is off its facet {f.label}")
            if i not in on and val <= 0:
                raise ValueError(f"vertex {v} violates facet {f.label}")
    if shoelace(p.vertices) <= 0:
        raise ValueError("vertices are not counterclockwise")
    for a, b, f in p.edges():
        if det2(f.u, (b[0] - a[0], b[1] - a[1])) >= 0:
            raise ValueError(f"normal of {f.label} is not inward")


@dataclass(frozen=True)
class LatticeInfo:
    is_lattice: bool
    basis: tuple[Vec, Vec]
    covolume: Fraction
    vertex_condition: bool
    failures: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "is_lattice": self.is_lattice,
            "basis": [[str(c) for c in v] for v in self.basis],
            "covolume": str(self.covolume),
            "vertex_condition": self.vertex_condition,
            "failures": list(self.failures),
        }


def lattice_check(p: LabelledPolytope) -> LatticeInfo:
    """Lattice spanned by the facet normals, as an HNF basis, plus the vertex condition.

    Rational normals always span a lattice, so ``is_lattice`` is true whenever the
    normals span the plane.
    """
    from sympy import Matrix
    from sympy.matrices.normalforms import hermite_normal_form

    normals = [f.u for f in p.facets]
    if any(u[0] == 0 and u[1] == 0 for u in normals):
        raise ValueError("zero normal")
    den = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for u in normals for c in u), 1)
    rows = [[int(c * den) for c in u] for u in normals]
    H = hermite_normal_form(Matrix(rows).T)
    if H.shape[1] < 2:
        return LatticeInfo(False, ((Fraction(0), Fraction(0)),) * 2, Fraction(0), False,
                           ("normals do not span the plane",))
    cols = [(Fraction(int(H[0, j]), den), Fraction(int(H[1, j]), den)) for j in range(H.shape[1])]
    basis = (cols[0], cols[1])
    failures = []
    n = len(p.vertices)
    for k in range(n):
        u = p.facets[p.edge_facets[k - 1]].u
        v = p.facets[p.edge_facets[k]].u
        if det2(u, v) == 0:
            failures.append(f"parallel normals at vertex {k}")
    return LatticeInfo(True, basis, abs(det2(*basis)), not failures, tuple(failures))


@dataclass(frozen=True)
class Moments:
    alpha: Fraction
    alpha_r: Vec
    alpha_rs: tuple[Vec, Vec]
    beta: Fraction
    beta_r: Vec

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "alpha_r": [str(c) for c in self.alpha_r],
            "alpha_rs": [[str(c) for c in r] for r in self.alpha_rs],
            "beta": str(self.beta),
            "beta_r": [str(c) for c in self.beta_r],
        }


def triangle_moments(p0, p1, p2):
    """(area, int mu_r, int mu_r mu_s) over a triangle, signed by orientation."""
    area = det2((p1[0] - p0[0], p1[1] - p0[1]), (p2[0] - p0[0], p2[1] - p0[1])) / 2
    pts = (p0, p1, p2)
    s = [sum(p[r] for p in pts) for r in range(2)]
    first = tuple(area * s[r] / 3 for r in range(2))
    second = tuple(tuple(area / 12 * (sum(p[r] * p[t] for p in pts) + s[r] * s[t]) for t in range(2))
                   for r in range(2))
    return area, first, second


def polygon_moments(vertices: Sequence[Vec]):
    """Exact (area, first, second) moments of a simple polygon via a vertex fan."""
    vertices = [tuple(to_q(c) for c in v) for v in vertices]
    v0 = vertices[0]
    area = Fraction(0)
    first = [Fraction(0), Fraction(0)]
    second = [[Fraction(0)] * 2 for _ in range(2)]
    for i in range(1, len(vertices) - 1):
        a, f, s = triangle_moments(v0, vertices[i], vertices[i + 1])
        area += a
        for r in range(2):
            first[r] += f[r]
            for t in range(2):
                second[r][t] += s[r][t]
    return area, tuple(first), tuple(tuple(r) for r in second)


def interior_moments(p: LabelledPolytope):
    area, first, second = polygon_moments(p.vertices)
    if area <= 0:
        raise ValueError("degenerate polygon")
    return area, first, second


def edge_density(u: Sequence, e: Sequence) -> Fraction:
    """dnu per unit parameter along the edge vector e (CCW) with inward normal u."""
    return -det2(u, e) / dot(u, u)


def boundary_moments(p: LabelledPolytope):
    beta = Fraction(0)
    beta_r = [Fraction(0), Fraction(0)]
    for a, b, f in p.edges():
        c = edge_density(f.u, (b[0] - a[0], b[1] - a[1]))
        beta += c
        for r in range(2):
            beta_r[r] += c * (a[r] + b[r]) / 2
    return beta, tuple(beta_r)


def moments(p: LabelledPolytope) -> Moments:
    a, ar, ars = interior_moments(p)
    b, br = boundary_moments(p)
    return Moments(a, ar, ars, b, br)


def clip(vertices: Sequence[Vec], a: Sequence, c) -> list[Vec]:
    """Sutherland-Hodgman clip of a convex polygon to the half-plane <a, mu> + c >= 0."""
    out: list[Vec] = []
    n = len(vertices)
    for i in range(n):
        P, Q = vertices[i], vertices[(i + 1) % n]
        fp, fq = dot(a, P) + c, dot(a, Q) + c
        if fp >= 0:
            out.append(P)
        if (fp > 0 > fq) or (fp < 0 < fq):
            t = fp / (fp - fq)
            out.append((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])))
    # drop repeated points
    dedup: list[Vec] = []
    for v in out:
        if not dedup or dedup[-1] != v:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def line_segment_in(p: LabelledPolytope, a: Sequence, c):
    """Endpoints of {<a, mu> + c = 0} inside the polygon, or None if it misses the interior."""
    pts = []
    n = len(p.vertices)
    for i in range(n):
        P, Q = p.vertices[i], p.vertices[(i + 1) % n]
        fp, fq = dot(a, P) + c, dot(a, Q) + c
        if fp == 0:
            pts.append(P)
        if (fp > 0 > fq) or (fp < 0 < fq):
            t = fp / (fp - fq)
            pts.append((P[0] + t * (Q[0] - P[0]), P[1] + t * (Q[1] - P[1])))
    uniq = []
    for q in pts:
        if q not in uniq:
            uniq.append(q)
    if len(uniq) != 2:
        return None
    mid = ((uniq[0][0] + uniq[1][0]) / 2, (uniq[0][1] + uniq[1][1]) / 2)
    if not p.contains(mid, strict=True):
        return None
    return uniq[0], uniq[1]


def simplex_weights(normals: Sequence[Vec]) -> tuple[int, int, int]:
    """Coprime positive integers p_i with sum p_i u_i = 0, for three normals of a simplex."""
    u1, u2, u3 = normals
    w = [det2(u2, u3), det2(u3, u1), det2(u1, u2)]
    if w[0] < 0:
        w = [-x for x in w]
    if not all(x > 0 for x in w):
        raise ValueError("normals do not bound a simplex")
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in w), 1)
    ints = [int(x * den) for x in w]
    g = reduce(gcd, ints)
    return tuple(x // g for x in ints)
