import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from adsmodes.errors import DivergenceError, InvalidSpecError
from adsmodes.modes2 import ModeSpec, frequency, radial_profile
from adsmodes.products import (QuadratureConfig, _continued_profile, gram_matrix, kg_inner, neville_zero,
                               radial_integral, regularized_inner, singleton_norm_formula)


def test_neumann_examples():
    f0, f1 = ModeSpec("neumann", 4, 3.0, 0, 0), ModeSpec("neumann", 4, 3.0, 0, 1)
    assert abs(kg_inner(f0, f0) - 1) < 1e-8
    assert abs(kg_inner(f0, f1)) < 1e-9


def test_inner_product_against_scipy_quad():
    a, b = ModeSpec("dirichlet", 5, 1.7, 1, 1), ModeSpec("dirichlet", 5, 1.7, 1, 2)
    pa, pb = radial_profile(a), radial_profile(b)
    ref = quad(lambda r: math.tan(r) ** 3 * pa(r) * pb(r), 0, math.pi / 2, limit=200, epsabs=1e-13)[0]
    assert radial_integral(pa, pb, 5) == pytest.approx(ref, abs=1e-11)
    ref_norm = 2 * frequency(a) * quad(lambda r: math.tan(r) ** 3 * pa(r) ** 2, 0, math.pi / 2, limit=200)[0]
    assert ref_norm == pytest.approx(1.0, abs=1e-9)


def test_dirichlet_neumann_overlap_is_finite():
    # both normalizable inside the window; the overlap has no claimed value
    d, e0 = 4, 1.2
    val = kg_inner(ModeSpec("dirichlet", d, e0), ModeSpec("neumann", d, e0))
    assert math.isfinite(val.real) and abs(val) > 1e-3


def test_gram_examples():
    assert np.abs(gram_matrix("dirichlet", 4, 2.0, 1, 4) - np.eye(5)).max() < 1e-7
    assert np.abs(gram_matrix("nn2", 2, 0.7, 0, 3) - np.eye(4)).max() < 1e-7
    assert gram_matrix("neumann", 5, 2.2, 0, 0) == pytest.approx(np.eye(1), abs=1e-12)


@given(st.sampled_from([3, 4, 5, 7]), st.integers(0, 3), st.sampled_from(["dirichlet", "neumann"]),
       st.floats(0.02, 0.98))
def test_gram_identity(d, l, fam, frac):
    lo, hi = (d - 3) / 2, (d + 1) / 2
    e0 = lo - 1.0 + (hi - lo + 0.9) * frac if fam == "dirichlet" else lo + 0.02 + 5 * frac
    assert np.abs(gram_matrix(fam, d, e0, l, 4) - np.eye(5)).max() < 1e-7


@given(st.sampled_from([3, 4, 5, 7]), st.integers(0, 4), st.integers(0, 4), st.floats(-3, 3))
def test_hermiticity(d, k1, k2, t0):
    a, b = ModeSpec("neumann", d, d - 0.3, 1, k1), ModeSpec("neumann", d, d - 0.3, 1, k2)
    assert abs(kg_inner(a, b, t0=t0) - np.conj(kg_inner(b, a, t0=t0))) < 1e-14


def test_different_l_is_orthogonal():
    assert kg_inner(ModeSpec("neumann", 4, 2.0, 0), ModeSpec("neumann", 4, 2.0, 1)) == 0


@pytest.mark.parametrize("scheme", ["tanh_sinh", "gauss_legendre"])
def test_alternative_quadratures(scheme):
    g = gram_matrix("neumann", 4, 3.0, 0, 2, QuadratureConfig(200, 1e-9, scheme))
    assert np.abs(g - np.eye(3)).max() < 1e-7


def test_quadrature_config_gates():
    with pytest.raises(ValueError):
        QuadratureConfig(nodes=4)
    with pytest.raises(ValueError):
        QuadratureConfig(scheme="simpson")


def test_singleton_inner_product_diverges():
    s = ModeSpec("singleton", 4)
    with pytest.raises(DivergenceError):
        kg_inner(s, s)


@pytest.mark.parametrize("d,l,expected", [(4, 0, 0.5), (5, 2, 3.0), (7, 1, 3.0)])
def test_singleton_regularized_norms(d, l, expected):
    s = ModeSpec("singleton", d, None, l)
    assert singleton_norm_formula(d, l) == expected
    assert regularized_inner(s, s) == pytest.approx(expected, rel=1e-3)


@given(st.sampled_from([4, 5, 7]), st.integers(0, 2), st.integers(0, 2))
def test_gauge_regularized_norms_vanish(d, l, k):
    g = ModeSpec("gauge", d, None, l, k)
    assert abs(regularized_inner(g, g)) < 1e-6
    assert abs(regularized_inner(ModeSpec("singleton", d, None, l), g)) < 1e-6


def test_regularized_needs_singleton_or_gauge():
    with pytest.raises(InvalidSpecError):
        regularized_inner(ModeSpec("neumann", 4, 2.0), ModeSpec("neumann", 4, 2.0))
    with pytest.raises(ValueError):
        regularized_inner(ModeSpec("gauge", 4), ModeSpec("gauge", 4), eps_sequence=(1e-3, 1e-2))


def test_bare_singleton_integral_pole_order():
    s = ModeSpec("singleton", 5, None, 1)
    eps = (1e-3, 1e-4)
    vals = [radial_integral(_continued_profile(s, e)[0], _continued_profile(s, e)[0], 5) for e in eps]
    slope = math.log(vals[1] / vals[0]) / math.log(eps[1] / eps[0])
    assert slope == pytest.approx(-1.0, abs=0.02)


def test_neville_recovers_polynomial():
    xs = [0.1, 0.05, 0.02]
    ys = [2 + 3 * x - x * x for x in xs]
    assert neville_zero(xs, ys)[-1] == pytest.approx(2.0, abs=1e-14)
