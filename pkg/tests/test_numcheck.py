from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambitoric.catalog import random_extremal_data
from ambitoric.exactmath import Quadratic, discriminant_form, inner
from ambitoric.numcheck import (
    FACETS,
    FDConfig,
    abreu_cross_check,
    abreu_scalar,
    boundary_conditions_check,
    curvature_report,
    facet_normal,
    fd_closedness,
    fd_scalar_curvature,
    form_fn,
    gram_check,
    h_matrix_side,
    killing_residual,
    ricci_separability_check,
    sample_points,
)
from ambitoric.structures import (
    MINUS,
    PLUS,
    Kind,
    PreconditionError,
    h_matrix_at,
    invert_momentum,
    momentum,
    scalar_curvature_at,
)

from conftest import rationals

RANDOM = [random_extremal_data(k, seed) for k in Kind for seed in range(3)]


@pytest.mark.parametrize("side", [PLUS, MINUS])
def test_closedness_on_example(example, side):
    rep = fd_closedness(example, side)
    assert rep.samples == 200
    assert rep.max_abs < 1e-7


def test_parabolic_plus_form_is_closed_for_any_functions():
    d = random_extremal_data(Kind.PARABOLIC, 5)
    assert fd_closedness(d, PLUS, sample_points(d, 30, seed=1, margin=1e-3)).max_abs < 1e-9


def test_closedness_detects_corruption(example):
    w = form_fn(example, PLUS)

    def bad(x, y):
        m = np.array(w(x, y), dtype=float)
        m[0, 2] *= 1 + 1e-2 * x
        m[2, 0] = -m[0, 2]
        return m

    assert fd_closedness(example, PLUS, form=bad).max_abs > 1e-3


@pytest.mark.parametrize("d", RANDOM, ids=lambda d: d.kind.value)
def test_closedness_on_random_data(d):
    pts = sample_points(d, 20, seed=2, margin=1e-3)
    for side in (PLUS, MINUS):
        rep = fd_closedness(d, side, pts)
        assert rep.max_abs < 1e-7 or rep.max_rel < 1e-6


def test_fd_curvature_examples(example):
    x, y = 2.5, 0.5
    assert abs(fd_scalar_curvature(example, x, y, PLUS) - 45) / 45 < 1e-3
    exact = float(scalar_curvature_at(example, Fr(21, 10), Fr(1, 2), MINUS))
    fd = fd_scalar_curvature(example, 2.1, 0.5, MINUS)
    assert abs(fd - exact) / abs(exact) < 1e-3
    with pytest.raises(ValueError):
        fd_scalar_curvature(example, 2.0, 0.5)


@pytest.mark.parametrize("d", RANDOM, ids=lambda d: d.kind.value)
def test_fd_curvature_random(d):
    pts = sample_points(d, 5, seed=4, margin=0.05)
    for side in (PLUS, MINUS):
        rep = curvature_report(d, pts, side)
        assert rep.max_rel < 1e-3 or rep.max_abs < 1e-4


def test_abreu_matches_closed_form(example):
    mu = momentum(example, 2.5, 0.5)
    assert abreu_cross_check(example, mu, PLUS) < 1e-3
    assert abreu_cross_check(example, momentum(example, 2.5, 0.5, MINUS), MINUS) < 1e-3


def test_abreu_detects_corrupted_h(example):
    mu = momentum(example, 2.5, 0.5)

    def bad(m1, m2):
        x, y = invert_momentum(example, m1, m2, PLUS, tol=1e-9)
        H = h_matrix_side(example, x, y, PLUS).copy()
        H[0, 0] *= 1.01
        return H

    fd = abreu_scalar(example, mu, PLUS, hfun=bad)
    assert abs(fd - 45) > 1e-2
    assert abs(abreu_scalar(example, mu, PLUS) - 45) < 1e-3


def test_gram_matches_frame(example):
    rep = gram_check(example, sample_points(example, 10, seed=0, margin=1e-2))
    assert rep.max_rel < 1e-12
    assert h_matrix_at(example, Fr(5, 2), Fr(1, 2))[0][0] == Fr(5, 72)


@pytest.mark.parametrize("facet", FACETS)
def test_boundary_conditions_on_example(example, facet):
    zero, rep = boundary_conditions_check(example, facet, 20)
    assert zero
    assert rep.max_abs < 1e-6


@pytest.mark.parametrize("d", RANDOM, ids=lambda d: d.kind.value)
def test_boundary_conditions_random(d):
    for facet in FACETS:
        zero, rep = boundary_conditions_check(d, facet, 10)
        assert zero
        assert rep.max_rel < 1e-6


def test_boundary_wrong_normal_is_detected(example):
    u = facet_normal(example, "x=alpha1")
    zero, rep = boundary_conditions_check(example, "x=alpha1", 20, normal=(2 * u[0], 2 * u[1]))
    # H is linear in the normal, so dH(2u, 2u) = 8u = 4 (2u): far from 2 (2u)
    assert zero
    assert rep.max_rel > 0.5


def test_interior_point_is_not_on_a_facet(example):
    u = facet_normal(example, "x=alpha1")
    H = h_matrix_at(example, Fr(5, 2), Fr(1, 2))
    Hu = [H[i][0] * u[0] + H[i][1] * u[1] for i in range(2)]
    assert any(v != 0 for v in Hu)


def test_killing_tensor_of_barycentric_metric(example):
    rep = killing_residual(example, lambda x: 1.0, lambda y: 0.0)
    assert rep.samples == 20
    assert rep.max_abs < 1e-5


@pytest.mark.parametrize("F, G", [
    (lambda x: 1.0, lambda y: 0.0),
    (lambda x: 1.0 + x * x, lambda y: y ** 3),
])
def test_killing_residual_converges_at_second_order(example, F, G):
    pts = sample_points(example, 5, seed=1, margin=0.1)
    r = [killing_residual(example, F, G, pts, FDConfig(h=h)).max_abs for h in (2e-2, 1e-2)]
    assert 3.5 < r[0] / r[1] < 4.5


def test_ricci_examples():
    q = Quadratic(0, Fr(1, 2), 0)
    assert ricci_separability_check(q, Quadratic(1, 0, 0)) == {"h_xy_zero": True, "Q_p_zero": True}
    assert ricci_separability_check(q, Quadratic(1, 0, -1)) == {"h_xy_zero": False, "Q_p_zero": False}
    with pytest.raises(PreconditionError):
        ricci_separability_check(q, Quadratic(0, 1, 0))


@settings(max_examples=200)
@given(st.sampled_from(list(Kind)), rationals(-4, 4, 5), rationals(-4, 4, 5))
def test_ricci_flags_agree(kind, s, t):
    q = kind.q
    if q.q1 != 0:
        p = Quadratic(s, (q.q0 * t + q.q2 * s) / (2 * q.q1), t)
    else:
        p = Quadratic(-q.q0 * t / q.q2, s, t)
    assert inner(q, p) == 0
    flags = ricci_separability_check(q, p)
    assert flags["h_xy_zero"] == flags["Q_p_zero"] == (discriminant_form(p) == 0)
