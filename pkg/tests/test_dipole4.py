import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from adsmodes import dipole4 as D4
from adsmodes.geometry import Point
from adsmodes.modes2 import ModeSpec, chebyshev_grid, mass_from_e0, radial_profile, singleton_profile
from adsmodes.specfun import hyp2f1_coefficients, lerch_phi, pochhammer

GRID = chebyshev_grid(64, 0.02, math.pi / 2 - 0.02)
PTS = [Point(0.3, 0.4, (0.7, 0.2)), Point(-0.5, 0.7, (1.1, 0.9)), Point(1.2, 0.9, (0.5, 2.0)),
       Point(0.1, 1.2, (2.0, 3.0)), Point(2.0, 0.25, (1.4, 4.5))]


def test_leading_coefficient():
    r = np.array([0.1, 0.7, 1.3])
    cf = D4.quartic_coeffs(5, D4.singleton_lambda(5), 1.3, 1, r)
    assert cf.a4 == pytest.approx(np.cos(r) ** 4, rel=1e-15)


@given(st.sampled_from([3, 4, 5, 7]), st.integers(0, 3), st.floats(0.1, 6.0))
def test_quartic_matches_composition(d, l, w):
    cmp = D4.compare_quartic(d, D4.singleton_lambda(d), w, l, GRID)
    assert cmp.agrees, cmp.worst


def test_printed_a1_needs_lambda_over_a2():
    assert D4.compare_quartic(5, 2.0, 1.3, 1, GRID, a=2.0).mismatched == ["a1"]
    assert D4.compare_quartic(5, 2.0, 1.3, 1, GRID, a=2.0, as_printed=False).agrees


def test_fourth_order_kills_second_order_solutions():
    spec = ModeSpec("dirichlet", 5, 1.0, 1, 2)  # E0 = (d-3)/2 matches the dipole mass
    prof = radial_profile(spec)
    w = 5 - 1 - 1.0 + 1 + 4
    assert float(D4.quartic_residual(prof, GRID, 5, 1, D4.singleton_lambda(5), w).max()) < 1e-8


def test_scalar_mode_example():
    r = np.linspace(0.1, 1.4, 7)
    assert D4.scalar_mode(4, 0, 0)(r) == pytest.approx(np.sin(r) ** 2 * np.cos(r) ** 0.5, rel=1e-14)
    assert D4.scalar_frequency(4, 0, 0) == 2.5


def test_scalar_mode_is_not_second_order_solution():
    spec = D4.DipoleModeSpec("scalar", 4, 0, 0)
    assert float(D4.member_residual(spec, GRID).max()) < 1e-8
    ratio = D4.l_ratio(spec.profile(), spec.profile(), np.array([0.5, 1.0]), 4, 0, D4.singleton_lambda(4), 2.5)
    assert np.abs(ratio).min() > 1e-2


def test_triplet_enumeration():
    members = D4.triplet_space(4, 0, 2)
    assert len(members) == 7
    assert [m.family.value for m in members].count("scalar") == 3
    assert all(m.family is not D4.DipoleFamily.PSI_ZERO for m in members)


@given(st.sampled_from([3, 4, 5, 7]), st.integers(0, 3))
def test_triplet_members_solve_quartic(d, l):
    for m in D4.triplet_space(d, l, 3):
        assert float(D4.member_residual(m, GRID).max()) < 1e-8


@pytest.mark.parametrize("d,e0,l,w", [(4, 2.0, 0, 1.3), (5, 3.3, 1, 2.2), (7, 2.5, 2, 0.7), (4, 0.5, 0, 0.5)])
def test_psi2_ratio_is_constant(d, e0, l, w):
    rr = np.linspace(0.1, 1.3, 25)
    ratio = D4.l_ratio(D4.psi2_series(d, e0, l, w, 1500), D4.psi1_profile(d, e0, l, w), rr, d, l,
                       mass_from_e0(e0, d), w)
    assert np.ptp(ratio) < 1e-6 * abs(ratio.mean())
    assert ratio.mean() == pytest.approx(D4.psi2_constant(d, l), rel=1e-9)


def test_psi2_leading_behaviour():
    prof = D4.psi2_series(5, 2.2, 1, 1.4)
    r = 1e-3
    assert prof(r) / (math.sin(r) ** 3 * math.cos(r) ** 2.2) == pytest.approx(1.0, abs=1e-5)


@given(st.sampled_from([3, 4, 5, 7]), st.floats(0.2, 5.0), st.integers(0, 3), st.floats(0.1, 6.0))
def test_printed_series_coefficients(d, e0, l, w):
    h = D4.psi2_coefficients(d, e0, l, w, 3)
    assert h[1] == pytest.approx(D4.printed_c1(d, e0, l, w), rel=1e-10, abs=1e-12)
    assert h[2] == pytest.approx(D4.printed_c2(d, e0, l, w), rel=1e-10, abs=1e-12)


@given(st.sampled_from([3, 4, 5, 7]), st.integers(0, 3), st.floats(0.1, 6.0))
def test_singleton_series_matches_taylor(d, l, w):
    p = l / 2 + (d + 1) / 4
    tay = hyp2f1_coefficients(p + w / 2, p - w / 2, l + (d + 1) / 2, 3)
    h = D4.psi2_coefficients(d, (d - 3) / 2, l, w, 3)
    assert h[1] == pytest.approx(tay[1], rel=1e-10, abs=1e-12)
    assert h[2] == pytest.approx(tay[2], rel=1e-10, abs=1e-12)


@given(st.sampled_from([3, 4, 5, 7]), st.integers(0, 2), st.integers(0, 3))
def test_quantized_second_solution_is_scalar_polynomial(d, l, k):
    w = D4.scalar_frequency(d, l, k)
    scale = math.factorial(k) / pochhammer(l + (d + 1) / 2, k)
    diff = D4.psi2_singleton(d, l, w)(GRID) - scale * D4.scalar_mode(d, l, k)(GRID)
    assert np.abs(diff).max() < 1e-10


def test_constrained_second_solution_vanishes():
    assert D4.psi2_singleton(4, 1, 1.5, constrained=True)(0.7) == 0.0
    assert D4.psi2_singleton(4, 1, 1.7, constrained=True)(0.7) != 0.0


def test_second_solution_at_singleton_frequency_is_psi0():
    rr = np.array([0.3, 0.6, math.pi / 4, 1.1])
    ratio = D4.psi2_singleton(4, 0, 0.5)(rr) / D4.psi0_mode(4, 0)(rr)
    assert np.ptp(ratio) < 1e-10
    s = math.sin(math.pi / 4)
    lerch = s * s * math.cos(math.pi / 4) ** 0.5 * lerch_phi(s * s, 1.0, 1.5)
    assert D4.psi2_singleton(4, 0, 0.5)(math.pi / 4) == pytest.approx(ratio[0] * 1.5 * lerch, rel=1e-10)


def test_psi0_example():
    assert D4.psi0_mode(4, 0)(math.pi / 4) == pytest.approx(0.62171797621618783, rel=1e-13)


def test_psi0_leading_series():
    r = 0.05
    s2 = math.sin(r) ** 2
    ratio = D4.psi0_mode(4, 0)(r) / (s2 * math.cos(r) ** 0.5)
    assert ratio == pytest.approx(1 + 3 / 5 * s2 + 3 / 7 * s2 * s2, abs=1e-8)


@pytest.mark.parametrize("d", [3, 4, 5, 6, 7, 8])
@pytest.mark.parametrize("l", [0, 1, 2])
def test_psi0_closed_form_matches_series(d, l):
    # the closed form cancels badly at small r, so it is only used past sin^2 r = 1/2
    for r in (0.79, 1.0, 1.2):
        assert float(D4._psi0_closed(d, l, np.array(r))) == pytest.approx(
            float(D4._psi0_series(d, l, np.array(r), 2000)), rel=1e-11)
    a = l + (d - 1) / 2
    for r in (0.05, 0.3, 0.7, 0.9, 1.3):
        s2 = math.sin(r) ** 2
        ref = a * math.sin(r) ** (l + 2) * math.cos(r) ** ((d - 3) / 2) * lerch_phi(s2, 1.0, a)
        assert D4.psi0_mode(d, l)(r) == pytest.approx(ref, rel=1e-12)


def test_psi0_solves_quartic_but_not_flux_condition():
    prof = D4.psi0_mode(5, 1)
    w = 1 + 1.0
    assert float(D4.quartic_residual(prof, GRID, 5, 1, D4.singleton_lambda(5), w).max()) < 1e-8


def test_ladder_lowers_scalar_to_singleton():
    scal = D4.dipole_field(D4.DipoleModeSpec("scalar", 4, 0, 0))
    sing1 = D4.field(singleton_profile(4, 1), 1.5, 1, 4, scale=2j)
    assert D4.ladder_pointwise(scal, sing1, PTS, "lower") < 1e-5


def test_singleton_is_lowest_weight():
    sing0 = D4.dipole_field(D4.DipoleModeSpec("singleton", 4, 0))
    from adsmodes.geometry import ladder_apply_d4

    assert max(abs(ladder_apply_d4(sing0, p, "lower", 3)) for p in PTS) < 1e-5
    assert D4.negative_energy_probe(sing0).positive_component < 1e-8


def test_psi0_has_negative_energy_component():
    probe = D4.negative_energy_probe(D4.dipole_field(D4.DipoleModeSpec("psi0", 4, 0)))
    assert probe.significant
    assert probe.positive_component > 10 * probe.noise_floor


def test_psi0_raising_decomposition():
    psi0 = D4.dipole_field(D4.DipoleModeSpec("psi0", 4, 0))
    rhs = D4.sum_fields(D4.field(D4.psi0_mode(4, 1), 1.5, 1, 4, scale=0.6j),
                        D4.field(singleton_profile(4, 1), 1.5, 1, 4, scale=-2j))
    assert D4.ladder_pointwise(psi0, rhs, PTS, "raise") < 1e-5


@pytest.mark.parametrize("d", [3, 4, 5, 7])
@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_indicial_roots_at_origin(d, l):
    poly = D4.indicial_polynomial_origin(d, D4.singleton_lambda(d), 0.7, l)
    roots = np.sort(np.roots(poly).real)
    assert roots == pytest.approx(D4.indicial_roots_origin(d, l), abs=1e-5)


@pytest.mark.parametrize("d", [3, 4, 5, 7])
def test_boundary_double_roots(d):
    assert D4.indicial_roots_boundary(d, D4.singleton_lambda(d)) == pytest.approx(
        [(d - 3) / 2, (d - 3) / 2, (d + 1) / 2, (d + 1) / 2])
    assert D4.boundary_decay_exponent(singleton_profile(d, 1)) == pytest.approx((d - 3) / 2, abs=1e-3)


@pytest.mark.parametrize("d", [3, 4, 5, 7])
def test_vanishing_flux_keeps_only_gauge(d):
    for m in D4.triplet_space(d, 1, 2):
        assert D4.passes_vanishing_flux(m) == (m.family is D4.DipoleFamily.GAUGE)
