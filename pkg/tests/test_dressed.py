import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atomshift import DomainError, PhysicalParams
from atomshift.dressed import (
    SIGMA_MINUS,
    SIGMA_PLUS,
    SIGMA_Z,
    beta_for_theta,
    diagonalize_semiclassical,
    dressed_frame,
    dressed_interaction_coefficients,
    dressed_lowering_matrix,
    dressed_sigma_z,
    dressed_splitting,
    jump_rate_down,
    jump_rate_up,
    jump_rates,
    mixing_angle,
    semiclassical_hamiltonian,
)

from conftest import param_grid

positive = st.floats(1e-3, 1e3)


def test_mixing_angle_examples():
    assert mixing_angle(PhysicalParams(0.5, 2.0), 1.0) == pytest.approx(math.pi / 4, rel=1e-12)
    assert mixing_angle(PhysicalParams(1.0, 100.0), 0.0) == 0.0
    assert mixing_angle(PhysicalParams(1.0, 100.0), 1.0) == pytest.approx(0.02827673239, abs=1e-11)


def test_mixing_angle_rejects_resonance():
    with pytest.raises(DomainError):
        mixing_angle(PhysicalParams(1.0, 0.0), 1.0)
    with pytest.raises(DomainError):
        mixing_angle(PhysicalParams(1.0, -3.0), 1.0)


def test_splitting_examples():
    assert dressed_splitting(PhysicalParams(0.5, 2.0), 1.0) == pytest.approx(math.sqrt(8), rel=1e-12)
    assert dressed_splitting(PhysicalParams(1.0, 7.0), 0.0) == 7.0
    assert dressed_splitting(PhysicalParams(1.0, 100.0), 1.0) == pytest.approx(100.03999, abs=1e-5)


def test_diagonalize_examples():
    f = diagonalize_semiclassical(PhysicalParams(0.5, 2.0), 1.0)
    assert (f.theta, f.phi, f.omega_beta) == pytest.approx((math.pi / 4, 0.0, math.sqrt(8)), rel=1e-10)
    f = diagonalize_semiclassical(PhysicalParams(1.0, 3.0), 0.0)
    assert (f.theta, f.phi, f.omega_beta) == (0.0, 0.0, 3.0)
    f = diagonalize_semiclassical(PhysicalParams(1.0, 100.0), 1j)
    assert f.theta == pytest.approx(0.02827673239, abs=1e-11)
    assert f.phi == pytest.approx(math.pi / 2, rel=1e-12)
    assert f.omega_beta == pytest.approx(100.03999, abs=1e-5)


def test_closed_form_matches_eigensolver_on_grid():
    for g, d, b in param_grid():
        p = PhysicalParams(g, d)
        closed = dressed_frame(p, b)
        eig = diagonalize_semiclassical(p, b)
        assert closed.theta == pytest.approx(eig.theta, rel=1e-10, abs=1e-14)
        assert closed.omega_beta == pytest.approx(eig.omega_beta, rel=1e-10)


def test_eigenvectors_are_dressed_states():
    # the upper eigenvector of H is the tilted excited state
    p = PhysicalParams(0.7, 1.3)
    beta = 0.8 * np.exp(0.4j)
    f = dressed_frame(p, beta)
    h = semiclassical_hamiltonian(p, beta)
    # the tilt of H points along phi + pi in this phase convention
    assert np.allclose(h, f.omega_beta * dressed_sigma_z(f.theta, f.phi + math.pi), atol=1e-12)


@given(positive, positive, st.floats(0.0, 1e2))
def test_splitting_identity(g, d, b):
    p = PhysicalParams(g, d)
    w = dressed_splitting(p, b)
    assert w >= d
    assert w**2 - d**2 == pytest.approx(8 * g * b**2, rel=1e-9, abs=1e-9 * d**2)


@given(st.floats(0.01, 10.0), st.floats(0.0, math.pi / 2 - 1e-6))
def test_rate_identities(g, theta):
    up, down = jump_rate_up(g, theta), jump_rate_down(g, theta)
    assert up * down == pytest.approx(g**2 * math.sin(theta) ** 4 / 4, rel=1e-12, abs=1e-300)
    if theta > 1e-3:
        assert up / down == pytest.approx(math.tan(theta / 2) ** 4, rel=1e-12)
    assert up <= down
    assert up + down <= 2 * g * (1 + 1e-15)


def test_rate_examples():
    assert jump_rate_up(1.0, math.pi / 2) == pytest.approx(0.5, rel=1e-12)
    assert jump_rate_down(1.0, math.pi / 2) == pytest.approx(0.5, rel=1e-12)
    assert jump_rate_up(3.0, 0.0) == 0.0
    assert jump_rate_down(1.0, 0.0) == 2.0
    assert jump_rate_up(1.0, 0.0282768) == pytest.approx(7.99e-8, rel=1e-3)
    r = jump_rates(1.0, 0.2)
    assert (r.up, r.down) == (jump_rate_up(1.0, 0.2), jump_rate_down(1.0, 0.2))


def test_rates_vectorize():
    th = np.linspace(0, 1, 5)
    assert np.allclose(jump_rate_up(1.0, th), [jump_rate_up(1.0, t) for t in th], rtol=1e-15)


def test_fourth_power_scaling(weak):
    base = jump_rate_up(1.0, mixing_angle(weak, 1e-3))
    scaled = jump_rate_up(1.0, mixing_angle(weak, 2e-3))
    assert scaled / base == pytest.approx(16.0, rel=1e-5)


def test_lowering_matrix_limits():
    assert np.array_equal(dressed_lowering_matrix(0.0, 0.0), SIGMA_MINUS)
    m = dressed_lowering_matrix(math.pi / 2, 0.0)
    # coefficients of (s-, s+, sz)
    assert m[0, 1] == pytest.approx(0.5)
    assert m[1, 0] == pytest.approx(-0.5)
    assert np.allclose(m, 0.5 * SIGMA_MINUS - 0.5 * SIGMA_PLUS - SIGMA_Z)


@given(st.floats(0.0, math.pi / 2), st.floats(-math.pi, math.pi))
@settings(max_examples=50)
def test_dressed_operator_algebra(theta, phi):
    sm = dressed_lowering_matrix(theta, phi)
    sp = sm.conj().T
    sz = dressed_sigma_z(theta, phi)
    assert np.allclose(sm @ sm, 0, atol=1e-12)
    assert np.allclose(sz @ sm - sm @ sz, -sm, atol=1e-12)
    assert np.allclose(sp @ sm - sm @ sp, 2 * sz, atol=1e-12)


def test_interaction_coefficients():
    c = dressed_interaction_coefficients(1.0, 0.0, 0.0)
    assert (c.displacement_coeff, c.conserving_coeff, c.counterrotating_coeff) == (0, math.sqrt(2), 0)
    s2 = math.sqrt(2)
    c = dressed_interaction_coefficients(1.0, math.pi / 2 - 1e-15, 0.0)
    assert abs(c.displacement_coeff - s2) < 1e-12
    assert c.conserving_coeff == pytest.approx(s2 / 2)
    assert c.counterrotating_coeff == pytest.approx(s2 / 2)
    # the counter-rotating channel carries the up-jump rate
    c = dressed_interaction_coefficients(1.0, 0.3, 0.0)
    assert c.counterrotating_coeff**2 == pytest.approx(jump_rate_up(1.0, 0.3), rel=1e-14)
    assert c.conserving_coeff**2 == pytest.approx(jump_rate_down(1.0, 0.3), rel=1e-14)


def test_beta_for_theta_roundtrip(weak):
    for theta in (0.0, 0.1, 0.2, 1.0):
        assert mixing_angle(weak, beta_for_theta(weak, theta)) == pytest.approx(theta, abs=1e-14)
