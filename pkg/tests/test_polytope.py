import random
from fractions import Fraction as Fr

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ambitoric.polytope import (
    Facet,
    build_polytope,
    clip,
    interior_moments,
    lattice_check,
    line_segment_in,
    moments,
    polygon_moments,
    polytope_from_facets,
    simplex_weights,
)
from ambitoric.structures import momentum

from conftest import rationals


def square(scale=1):
    s = Fr(scale)
    return polytope_from_facets([
        Facet((s, 0), 0), Facet((-s, 0), s), Facet((0, s), 0), Facet((0, -s), s),
    ])


def test_example_polytope(example):
    p = build_polytope(example)
    assert [f.u for f in p.facets] == [(Fr(4, 3), Fr(-1, 3)), (Fr(-3, 2), Fr(1, 6)),
                                       (0, Fr(1, 2)), (Fr(1, 4), Fr(-1, 4))]
    assert set(p.vertices) == {(Fr(-1, 2), 0), (Fr(-1, 3), 0), (Fr(-1, 3), Fr(2, 3)), (Fr(-1, 4), Fr(3, 4))}
    for x, y in example.corners():
        assert momentum(example, x, y) in p.vertices


def test_polytope_contains_interior_images(example):
    p = build_polytope(example)
    rng = random.Random(3)
    for _ in range(50):
        x, y = example.interior_point(Fr(rng.randint(1, 99), 100), Fr(rng.randint(1, 99), 100))
        assert p.contains(momentum(example, x, y), strict=True)


def test_lattice_examples(example):
    info = lattice_check(build_polytope(example))
    assert info.is_lattice and info.vertex_condition
    assert info.covolume == Fr(1, 72)
    assert info.basis == ((Fr(1, 6), 0), (Fr(1, 12), Fr(1, 12)))
    sq = lattice_check(square())
    assert sq.covolume == 1
    assert {tuple(b) for b in sq.basis} == {(1, 0), (0, 1)}


def test_lattice_parallel_normals_fail_vertex_condition():
    p = square()
    bad = type(p)(p.facets, p.vertices, (0, 0, 2, 3))
    assert not lattice_check(bad).vertex_condition


def test_square_moments():
    m = moments(square())
    assert m.alpha == 1
    assert m.alpha_r == (Fr(1, 2), Fr(1, 2))
    assert m.alpha_rs == ((Fr(1, 3), Fr(1, 4)), (Fr(1, 4), Fr(1, 3)))
    assert m.beta == 4
    assert m.beta_r == (2, 2)


def test_doubled_normals_halve_boundary_measure():
    # the boundary measure scales like 1/|u|
    assert moments(square(2)).beta == 2


def test_triangle_moments():
    area, first, _ = polygon_moments([(0, 0), (1, 0), (0, 1)])
    assert area == Fr(1, 2)
    assert first == (Fr(1, 6), Fr(1, 6))


def test_moments_monte_carlo(example):
    p = build_polytope(example)
    area, first, _ = interior_moments(p)
    xs = [v[0] for v in p.vertices]
    ys = [v[1] for v in p.vertices]
    lo, hi = (min(xs), min(ys)), (max(xs), max(ys))
    box = float((hi[0] - lo[0]) * (hi[1] - lo[1]))
    rng = random.Random(0)
    n, hit, sx = 200000, 0, 0.0
    for _ in range(n):
        mu = (float(lo[0]) + rng.random() * float(hi[0] - lo[0]),
              float(lo[1]) + rng.random() * float(hi[1] - lo[1]))
        if all(float(f.u[0]) * mu[0] + float(f.u[1]) * mu[1] + float(f.lam) >= 0 for f in p.facets):
            hit += 1
            sx += mu[0]
    assert abs(box * hit / n - float(area)) < 1e-3
    assert abs(box * sx / n - float(first[0])) < 1e-3


@settings(max_examples=40)
@given(rationals(-1, 1, 8), rationals(-1, 1, 8), rationals(Fr(-1, 2), Fr(1, 2), 8))
def test_split_additivity(a1, a2, c):
    assume(a1 != 0 or a2 != 0)
    p = square()
    pts = list(p.vertices)
    left = clip(pts, (a1, a2), c)
    right = clip(pts, (-a1, -a2), -c)
    total = polygon_moments(pts)
    parts = [polygon_moments(q) if len(q) >= 3 else (0, (0, 0), ((0, 0), (0, 0))) for q in (left, right)]
    assert parts[0][0] + parts[1][0] == total[0]
    assert tuple(parts[0][1][r] + parts[1][1][r] for r in range(2)) == total[1]


def test_line_segment_in():
    p = square()
    seg = line_segment_in(p, (1, 0), Fr(-1, 2))
    assert set(seg) == {(Fr(1, 2), 0), (Fr(1, 2), 1)}
    assert line_segment_in(p, (1, 0), 0) is None


def test_simplex_weights():
    assert simplex_weights([(1, 0), (0, 1), (-1, -1)]) == (1, 1, 1)
    assert simplex_weights([(1, 0), (0, 1), (-2, -3)]) == (2, 3, 1)
    with pytest.raises(ValueError):
        simplex_weights([(1, 0), (0, 1), (1, 1)])


@settings(max_examples=30)
@given(st.integers(1, 5), st.integers(1, 5))
def test_rectangle_moments(w, h):
    p = polytope_from_facets([Facet((1, 0), 0), Facet((-1, 0), w), Facet((0, 1), 0), Facet((0, -1), h)])
    m = moments(p)
    assert m.alpha == w * h
    assert m.beta == 2 * (w + h)
    assert m.alpha_r == (Fr(w * w * h, 2), Fr(w * h * h, 2))
