import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adsmodes.errors import ChartBoundaryError, InvalidSpecError
from adsmodes.geometry import (FieldEvaluator, Point, curvature, embed, energy_apply, hyperboloid_residual,
                               invariant_z, laplacian_apply, ladder_apply_d4, origin)
from adsmodes.modes2 import ModeSpec, frequency, radial_profile

from conftest import angles


def test_origin_embedding():
    x = embed(origin(4), 4)
    assert x.components == pytest.approx((0.0, 0.0, 0.0, 0.0, -1.0))
    assert embed(origin(4), 4, a=2.0).components[-1] == pytest.approx(-0.5)


@given(st.integers(2, 7), st.floats(-10, 10), st.floats(0, 1.5), st.floats(0.5, 2.0),
       st.lists(st.floats(0, math.pi), min_size=5, max_size=5))
def test_hyperboloid_constraint(d, t, r, a, ang):
    p = Point(t, r, tuple(ang[:max(d - 2, 0)]))
    assert hyperboloid_residual(embed(p, d, a), a) < 1e-12 * max(1.0, 1 / math.cos(r) ** 2)


def test_random_point_constraint_d4():
    rng = np.random.default_rng(3)
    for _ in range(200):
        p = Point(rng.uniform(-5, 5), rng.uniform(0, 1.4), (rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi)))
        assert hyperboloid_residual(embed(p, 4)) < 1e-13 / math.cos(p.r) ** 2


def test_invariant_z_examples():
    x = Point(0.3, 0.5, angles(4))
    assert invariant_z(x, x, 4) == pytest.approx(1.0, abs=1e-14)
    assert invariant_z(x, origin(4), 4) == pytest.approx(1.0886001279101832, rel=1e-14)


@given(st.floats(-3, 3), st.floats(0, 1.4), st.floats(-3, 3), st.floats(0, 1.4), st.floats(0, math.pi))
def test_invariant_z_symmetric_and_reduces(t1, r1, t2, r2, th):
    x, y = Point(t1, r1, (th, 0.3)), Point(t2, r2, (0.4, 1.1))
    assert invariant_z(x, y, 4) == pytest.approx(invariant_z(y, x, 4), rel=1e-12, abs=1e-12)
    assert invariant_z(x, origin(4), 4) == pytest.approx(math.cos(t1) / math.cos(r1), rel=1e-12, abs=1e-12)


def test_curvature_constants():
    c = curvature(4)
    assert (c.R, c.lambda_cosm) == (12, 3)
    assert curvature(2).lambda_cosm == 0


def test_point_gates():
    with pytest.raises(InvalidSpecError):
        Point(0.0, math.pi / 2)
    with pytest.raises(InvalidSpecError):
        embed(Point(0.0, 0.2, (0.1,)), 4)


def test_laplacian_constant_and_time_only():
    p = Point(0.2, 0.6, (0.9, 0.4))
    assert abs(laplacian_apply(FieldEvaluator(lambda q: 1.0), p, 4)) < 1e-10
    w = 1.7
    f = FieldEvaluator(lambda q: complex(math.cos(w * q.t), -math.sin(w * q.t)), l=0)
    expect = w * w * math.cos(p.r) ** 2 * f(p)
    assert abs(laplacian_apply(f, p, 4) - expect) < 1e-8


def test_laplacian_on_dirichlet_mode():
    spec = ModeSpec("dirichlet", 4, 2.0, 1, 0)
    prof, w = radial_profile(spec), frequency(spec)
    f = FieldEvaluator(lambda q: prof(q.r) * math.cos(q.angles[0]) * complex(math.cos(w * q.t), -math.sin(w * q.t)))
    p = Point(0.3, 0.7, (0.8, 0.2))
    lam = 2.0 * (2.0 - 4 + 1)
    assert abs(laplacian_apply(f, p, 4) - lam * f(p)) < 1e-7


def test_laplacian_step_convergence():
    spec = ModeSpec("neumann", 5, 3.0, 0, 1)
    prof, w = radial_profile(spec), frequency(spec)
    f = FieldEvaluator(lambda q: prof(q.r) * complex(math.cos(w * q.t), -math.sin(w * q.t)), l=0)
    p = Point(0.1, 0.5, angles(5))
    lam = 3.0 * (3.0 - 5 + 1)
    e1 = abs(laplacian_apply(f, p, 5, step=2e-2, richardson=False) - lam * f(p))
    e2 = abs(laplacian_apply(f, p, 5, step=1e-2, richardson=False) - lam * f(p))
    assert 3.0 < e1 / e2 < 5.0


def test_stencil_gate():
    with pytest.raises(ChartBoundaryError):
        laplacian_apply(FieldEvaluator(lambda q: 1.0), Point(0, 1e-4, (1.0, 0.0)), 4)


def test_energy_operator():
    w = 2.5
    f = FieldEvaluator(lambda q: complex(math.cos(w * q.t), -math.sin(w * q.t)) * math.sin(q.r))
    p = Point(0.4, 0.3, (1.0, 0.0))
    assert abs(energy_apply(f, p) - w * f(p)) < 1e-9


def test_ladder_commutator_closure():
    """[M3+, M3-] f = 2 i d_t f on a smooth test field."""
    f = FieldEvaluator(lambda q: math.sin(q.r) ** 2 * math.cos(q.r) * math.cos(q.angles[0])
                       * complex(math.cos(0.7 * q.t), math.sin(0.7 * q.t)))
    p = Point(0.2, 0.6, (1.1, 0.5))
    h = 2e-2

    def lowered(q):
        return ladder_apply_d4(f, q, "lower", 3, step=1e-3)

    def raised(q):
        return ladder_apply_d4(f, q, "raise", 3, step=1e-3)

    pm = ladder_apply_d4(FieldEvaluator(lowered), p, "raise", 3, step=h)
    mp_ = ladder_apply_d4(FieldEvaluator(raised), p, "lower", 3, step=h)
    dt = energy_apply(f, p) / 1j
    assert abs((pm - mp_) - 2j * dt) < 1e-5 * max(1.0, abs(dt))
