from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambitoric.exactmath import Quadratic, Quartic
from ambitoric.structures import (
    MINUS,
    PLUS,
    AmbitoricData,
    DegenerateFacetError,
    Kind,
    OutOfImageError,
    PreconditionError,
    SingularPointError,
    bach_flat_by_wronskian,
    boundary_data,
    build_extremal_family,
    calabi_check,
    condition_report,
    extremal_affine_coeffs,
    general_q_frame,
    h_matrix_at,
    invert_momentum,
    metric_frame_at,
    momentum,
    scalar_curvature_at,
    validate_data,
)

from conftest import rationals

A_EX = Quartic(-1, 4, -1, -6, 0)
B_EX = Quartic(1, -6, 1, 4, 0)


def data(kind, A=A_EX, B=B_EX, alpha=(2, 3), beta=(0, 1)):
    return AmbitoricData(kind, A, B, alpha, beta)


def codes(d):
    return {v.code for v in validate_data(d)}


def test_validate_examples(example):
    assert validate_data(example) == []
    assert "beta2_lt_alpha1" in codes(data(Kind.HYPERBOLIC, beta=(0, 3)))
    assert "hyperbolic_domain" in codes(data(Kind.HYPERBOLIC, beta=(-3, 1)))


def test_validate_reports_sign_and_roots():
    c = codes(data(Kind.HYPERBOLIC, alpha=(Fr(1, 2), 3)))
    assert "endpoint_root" in c and "A_positive" in c


def test_json_roundtrip(example):
    assert AmbitoricData.from_json(example.to_json()) == example
    with pytest.raises(ValueError):
        AmbitoricData.from_json({"type": "hyperbolic", "A": [1]})


@pytest.mark.parametrize("kind, pt, expected", [
    (Kind.HYPERBOLIC, (2, 0), (Fr(-1, 2), 0)),
    (Kind.PARABOLIC, (2, 1), (3, 2)),
    (Kind.ELLIPTIC, (1, 0), (-1, -1)),
])
def test_momentum_examples(kind, pt, expected):
    assert momentum(data(kind), *pt, PLUS) == expected


def test_momentum_singular_points():
    with pytest.raises(SingularPointError):
        momentum(data(Kind.PARABOLIC), 1, 1, MINUS)
    with pytest.raises(SingularPointError):
        momentum(data(Kind.HYPERBOLIC), 1, -1, PLUS)


def test_invert_examples():
    assert invert_momentum(data(Kind.PARABOLIC, alpha=(2, 3), beta=(0, 1)), 3, 2) == (2, 1)
    assert invert_momentum(data(Kind.HYPERBOLIC), Fr(-1, 2), 0) == (2, 0)
    with pytest.raises(OutOfImageError):
        invert_momentum(data(Kind.PARABOLIC), 1, 1)


@settings(max_examples=60)
@given(st.sampled_from(list(Kind)), st.sampled_from([PLUS, MINUS]),
       rationals(0, 1, 16).filter(lambda s: 0 < s < 1), rationals(0, 1, 16).filter(lambda t: 0 < t < 1))
def test_invert_is_left_inverse(kind, side, s, t):
    d = data(kind, alpha=(2, 3), beta=(Fr(1, 10), 1))
    x, y = d.interior_point(s, t)
    mu = momentum(d, x, y, side)
    xx, yy = invert_momentum(d, *mu, side=side)
    assert abs(float(xx) - float(x)) < 1e-10 and abs(float(yy) - float(y)) < 1e-10


def test_metric_frame_positive_and_conformal(example):
    fr = metric_frame_at(example, Fr(5, 2), Fr(1, 2))
    g0 = np.array(fr.g0, dtype=float)
    assert np.all(np.linalg.eigvalsh(g0) > 0)
    F2 = float(fr.f) ** 2
    assert np.allclose(np.array(fr.gplus, dtype=float) * F2, np.array(fr.gminus, dtype=float))
    with pytest.raises(SingularPointError):
        metric_frame_at(example, 2, Fr(1, 2))


def test_h_matrix_example(example):
    H = h_matrix_at(example, Fr(5, 2), Fr(1, 2))
    assert H[0][0] == Fr(5, 72)
    assert H[0][1] == H[1][0]


def test_true_scalar_curvature_of_example(example):
    sp = extremal_affine_coeffs(example, PLUS)
    sm = extremal_affine_coeffs(example, MINUS)
    assert (sp.c1, sp.c2, sp.c0) == (-60, 60, 0)
    assert (sm.c1, sm.c2, sm.c0) == (-12, -12, 0)
    for x, y in [(Fr(5, 2), Fr(1, 2)), (Fr(2), Fr(0)), (Fr(21, 10), Fr(1, 2))]:
        assert scalar_curvature_at(example, x, y, PLUS) == sp(momentum(example, x, y, PLUS))
        assert scalar_curvature_at(example, x, y, MINUS) == sm(momentum(example, x, y, MINUS))
    assert scalar_curvature_at(example, Fr(5, 2), Fr(1, 2)) == 45
    assert scalar_curvature_at(example, 2, 0) == 30
    assert scalar_curvature_at(example, 2, 1, MINUS) == 36


@pytest.mark.parametrize("kind", list(Kind))
@pytest.mark.parametrize("side", [PLUS, MINUS])
def test_affine_form_matches_pointwise_formula(kind, side):
    q = kind.q
    A, B = build_extremal_family(q, Quadratic(0, 0, 0) if kind is Kind.ELLIPTIC else _orth(q),
                                 Quartic(Fr(1, 3), -2, Fr(1, 5), 3, -1))
    d = data(kind, A, B)
    f = extremal_affine_coeffs(d, side)
    for x, y in [(Fr(5, 2), Fr(1, 2)), (Fr(11, 4), Fr(1, 3))]:
        assert scalar_curvature_at(d, x, y, side) == f(momentum(d, x, y, side))


def _orth(q):
    # a quadratic orthogonal to q
    return {Kind.PARABOLIC.q: Quadratic(0, 1, 0), Kind.HYPERBOLIC.q: Quadratic(1, 0, 0)}[q]


def test_condition_report_examples(example):
    rep = condition_report(example)
    assert rep.extremal and rep.bach_flat
    sd = condition_report(data(Kind.HYPERBOLIC, A_EX, -A_EX))
    assert sd.selfdual
    assert not condition_report(data(Kind.HYPERBOLIC, A_EX, Quartic(2, 0, 0, 0, 0))).extremal
    with pytest.raises(PreconditionError):
        extremal_affine_coeffs(data(Kind.HYPERBOLIC, A_EX, Quartic(2, 0, 0, 0, 0)))


def test_build_extremal_family_examples():
    A, B = build_extremal_family(Quadratic(0, 0, 1), Quadratic(0, Fr(1, 2), 0), Quartic(1, 0, 0, 0, 0))
    assert A == Quartic(1, 0, 0, 1, 0)
    assert B == Quartic(-1, 0, 0, 1, 0)
    A, B = build_extremal_family(Quadratic(0, 0, 1), Quadratic(0, 0, 0), A_EX)
    assert B == -A
    A, B = build_extremal_family(Quadratic(1, 0, 1), Quadratic(1, 0, -1), A_EX)
    assert condition_report(data(Kind.ELLIPTIC, A, B)).extremal
    with pytest.raises(PreconditionError):
        build_extremal_family(Quadratic(0, 0, 1), Quadratic(1, 0, 0), A_EX)


@settings(max_examples=50)
@given(st.sampled_from(list(Kind)), st.lists(rationals(-5, 5, 6), min_size=5, max_size=5),
       rationals(-3, 3, 4), rationals(-3, 3, 4))
def test_family_is_extremal(kind, pc, s, t):
    q = kind.q
    q0, q1, q2 = q.q0, q.q1, q.q2
    # parametrize <pi, q> = 0: q1 pi1 = (q0 pi2 + q2 pi0)/2
    if q1 != 0:
        pi = Quadratic(s, (q0 * t + q2 * s) / (2 * q1), t)
    else:
        pi = Quadratic(-q0 * t / q2, s, t)
    A, B = build_extremal_family(q, pi, Quartic(*pc))
    assert condition_report(data(kind, A, B)).extremal
    rep = condition_report(data(kind, A, B))
    assert rep.bach_flat == bach_flat_by_wronskian(q, pi, Quartic(*pc)) or pi.is_zero()


def test_boundary_data_examples(example):
    assert boundary_data(example) == (Fr(1, 3), Fr(-1, 6), Fr(-1, 2), Fr(1, 4))
    dbl = Quartic.from_roots([2, 2, 3, 5], lead=-1)
    with pytest.raises(DegenerateFacetError):
        boundary_data(data(Kind.HYPERBOLIC, dbl, B_EX))


def test_calabi_examples():
    k = Fr(3, 7)
    f = calabi_check(Quartic(1, 1, k, 4, 1), k)
    assert f.extremal and f.bach_flat and not f.csc
    assert all(vars(calabi_check(Quartic(0, 0, k, 0, 0), k)).values())
    assert not calabi_check(Quartic(0, 0, 1, 0, 0), k).extremal


def test_general_frame_parabolic_matches_normal_form(example):
    x, y = Fr(5, 2), Fr(1, 2)
    d = data(Kind.PARABOLIC)
    gf = general_q_frame(Quadratic(0, 0, 1), d.A, d.B, x, y, basis=((0, 0), (0, Fr(1, 2)), (1, 0)))
    nf = metric_frame_at(d, x, y)
    # tau2 -> t1, 2 tau1 -> t2 reproduces n = (1, z)
    assert np.array_equal(gf.g0, nf.g0)
    assert np.array_equal(gf.omega_plus, nf.omega_plus)


def test_general_frame_hyperbolic_is_four_times(example):
    x, y = Fr(5, 2), Fr(1, 2)
    gf = general_q_frame(Quadratic(0, Fr(1, 2), 0), A_EX, B_EX, x, y,
                         basis=((0, 1), (0, 0), (1, 0)))
    nf = metric_frame_at(example, x, y)
    assert np.array_equal(gf.omega_plus, 4 * nf.omega_plus)


def test_general_frame_singular():
    with pytest.raises(SingularPointError):
        general_q_frame(Quadratic(0, Fr(1, 2), 0), A_EX, B_EX, Fr(1), Fr(-1))
