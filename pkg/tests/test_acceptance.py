"""End-to-end acceptance checks.  Each test records one PASS/FAIL line."""

import random
import time
from contextlib import contextmanager
from fractions import Fraction as Fr

import numpy as np
import pytest

from ambitoric.catalog import generated_datasets, random_extremal_data, unstable_datum, wpp_from_beta
from ambitoric.exactmath import (
    Quadratic,
    Quartic,
    discriminant_form,
    inner,
    poisson_bracket,
    transvect,
)
from ambitoric.numcheck import (
    FACETS,
    abreu_cross_check,
    boundary_conditions_check,
    curvature_report,
    fd_closedness,
    killing_residual,
    ricci_separability_check,
    sample_points,
)
from ambitoric.polytope import build_polytope, moments
from ambitoric.stability import (
    Crease,
    PLFunction,
    Verdict,
    extremal_field,
    futaki_crease,
    futaki_pl,
    stability_verdict,
)
from ambitoric.structures import (
    MINUS,
    PLUS,
    AffineFunction,
    Kind,
    boundary_data,
    condition_report,
    momentum,
    validate_data,
)


@pytest.fixture
def criterion(request, capsys):
    @contextmanager
    def run(number: int, title: str):
        t0 = time.perf_counter()
        status = "FAIL"
        try:
            yield
            status = "PASS"
        finally:
            line = f"[{status}] criterion {number}: {title} ({time.perf_counter() - t0:.2f}s)"
            request.config.stash.setdefault("acceptance", []).append(line)
            with capsys.disabled():
                print("\n" + line)
    return run


def _rand_q(rng, span=20, den=12):
    return Fr(rng.randint(-span * den, span * den), rng.randint(1, den))


def test_example_datum_is_extremal_and_bach_flat(example, criterion):
    with criterion(1, "worked example validates, extremal, Bach-flat, boundary data"):
        t0 = time.perf_counter()
        assert validate_data(example) == []
        a, b = example.A.coeffs(), example.B.coeffs()
        assert a[0] + b[0] == a[2] + b[2] == a[4] + b[4] == 0
        assert (a[1] - b[1]) * (a[3] + b[3]) + (a[1] + b[1]) * (a[3] - b[3]) == 0
        rep = condition_report(example)
        assert rep.extremal and rep.bach_flat
        assert boundary_data(example) == (Fr(1, 3), Fr(-1, 6), Fr(-1, 2), Fr(1, 4))
        assert time.perf_counter() - t0 < 1


def test_moment_field_equals_stated_affine_curvature(example, criterion):
    with criterion(2, "extremal field from moments equals 12 mu1 + 12 mu2"):
        t0 = time.perf_counter()
        ef = extremal_field(moments(build_polytope(example)))
        got = ef.scalar_curvature()
        print(f"\nextremal field from moments: {got}")
        assert got == AffineFunction(Fr(12), Fr(12), Fr(0))
        assert time.perf_counter() - t0 < 1


def test_kahler_forms_are_closed(example, criterion):
    with criterion(3, "finite-difference closedness of both Kahler forms"):
        t0 = time.perf_counter()
        data = [example] + [random_extremal_data(list(Kind)[i % 3], 100 + i) for i in range(20)]
        worst = 0.0
        for d in data:
            pts = sample_points(d, 200, seed=0, margin=1e-4)
            for side in (PLUS, MINUS):
                rep = fd_closedness(d, side, pts)
                assert rep.samples == 200
                worst = max(worst, rep.max_abs)
        assert worst < 1e-7, worst
        assert time.perf_counter() - t0 < 5


def test_curvature_oracles(example, criterion):
    with criterion(4, "finite-difference and Abreu curvature match closed forms"):
        t0 = time.perf_counter()
        pts = sample_points(example, 20, seed=1, margin=0.02)
        for side in (PLUS, MINUS):
            rep = curvature_report(example, pts, side)
            assert rep.samples == 20 and rep.max_rel < 1e-3, rep.max_rel
            for x, y in pts:
                assert abreu_cross_check(example, momentum(example, x, y, side), side) < 1e-3
        assert time.perf_counter() - t0 < 30


def test_first_order_boundary_conditions(example, criterion):
    with criterion(5, "H(u, .) = 0 and dH(u, u) = 2u on every facet"):
        for facet in FACETS:
            exact_zero, rep = boundary_conditions_check(example, facet, 20)
            assert exact_zero
            assert rep.samples == 20 and rep.max_abs < 1e-6, (facet, rep.max_abs)


def test_algebraic_identities(criterion):
    with criterion(6, "bracket/discriminant identity and <q, {q, q.P}> = 0"):
        t0 = time.perf_counter()
        rng = random.Random(0)
        for _ in range(1000):
            p = Quadratic(*(_rand_q(rng) for _ in range(3)))
            pt = Quadratic(*(_rand_q(rng) for _ in range(3)))
            lhs = discriminant_form(poisson_bracket(p, pt))
            assert lhs == 4 * (inner(p, pt) ** 2 - discriminant_form(p) * discriminant_form(pt))
        for _ in range(1000):
            q = Quadratic(*(_rand_q(rng) for _ in range(3)))
            P = Quartic(*(_rand_q(rng) for _ in range(5)))
            assert inner(q, transvect(q, P)[1]) == 0
        assert time.perf_counter() - t0 < 2


def test_weighted_projective_planes(criterion):
    with criterion(7, "weighted projective plane weights and curvature bounds"):
        w = wpp_from_beta((1, 2, 3, 4))
        assert w.weights == (3, 8, 15)
        assert (w.s_min, w.s_max, w.s_avg) == (-12, 60, 26)
        assert wpp_from_beta((1, 2, 3, 100)).s_min > 0


def test_stability(example, criterion):
    with criterion(8, "Futaki signs, polystable example, unstable witness"):
        for d in (example, unstable_datum()):
            p = build_polytope(d, check=False)
            ef = extremal_field(moments(p))
            for a, b in (((1, 0), 0), ((Fr(3, 7), -2), Fr(5, 3))):
                assert futaki_pl(p, ef, PLFunction.affine(a, b)) == 0
        rng = random.Random(8)
        data = [example, unstable_datum(), random_extremal_data(Kind.PARABOLIC, 3, require_positive=False),
                random_extremal_data(Kind.ELLIPTIC, 4, require_positive=False)]
        signs = set()
        for k in range(50):
            d = data[k % len(data)]
            a1, a2 = d.alpha
            x0 = a1 + (a2 - a1) * Fr(rng.randint(1, 999), 1000)
            val = futaki_crease(d, Crease("x", x0))
            s = (d.A(x0) > 0) - (d.A(x0) < 0)
            assert (val > 0) - (val < 0) == s
            signs.add(s)
        assert signs == {-1, 1}
        assert stability_verdict(example).verdict is Verdict.POLYSTABLE
        rep = stability_verdict(unstable_datum())
        assert rep.verdict is Verdict.UNSTABLE
        assert Fr(rep.witness["futaki"]) <= 0


def test_killing_tensor_and_ricci_separability(example, criterion):
    with criterion(9, "Killing tensor residuals and Ricci separability flags"):
        for F, G in ((lambda x: 1.0, lambda y: 0.0), (lambda x: x, lambda y: y),
                     (lambda x: x * x, lambda y: y)):
            rep = killing_residual(example, F, G)
            assert rep.samples == 20 and rep.max_abs < 1e-5, rep.max_abs
        rng = random.Random(9)
        kinds = list(Kind)
        degenerate = 0
        for i in range(200):
            q = kinds[i % 3].q
            s, t = _rand_q(rng, 4, 5), _rand_q(rng, 4, 5)
            if i % 5 == 0:
                s = 0       # lands on Q(p) = 0 for two of the three kinds
            if q.q1 != 0:
                p = Quadratic(s, (q.q0 * t + q.q2 * s) / (2 * q.q1), t)
            else:
                p = Quadratic(-q.q0 * t / q.q2, s, t)
            flags = ricci_separability_check(q, p)
            assert flags["h_xy_zero"] == flags["Q_p_zero"]
            degenerate += flags["Q_p_zero"]
        assert degenerate > 0


def test_verdict_matches_sampled_positivity(criterion):
    with criterion(10, "stability verdict agrees with sampled positivity of A and B"):
        data = generated_datasets(50, seed=10)
        seen = set()
        for d in data:
            verdict = stability_verdict(d).verdict
            (a1, a2), (b1, b2) = [tuple(float(v) for v in pair) for pair in (d.alpha, d.beta)]
            ta = np.linspace(a1, a2, 1002)[1:-1]
            tb = np.linspace(b1, b2, 1002)[1:-1]
            ma = min(float(d.A(Fr(v))) for v in ta)
            mb = min(float(d.B(Fr(v))) for v in tb)
            positive = ma > 0 and mb > 0
            assert (verdict is Verdict.POLYSTABLE) == positive, (d.to_json(), verdict, ma, mb)
            if verdict is Verdict.UNSTABLE:
                assert min(ma, mb) < 0
            seen.add(verdict)
        assert {Verdict.POLYSTABLE, Verdict.UNSTABLE} <= seen
