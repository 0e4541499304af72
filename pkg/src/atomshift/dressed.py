"""Dressed states of the coherently driven two-level atom.

The semiclassical part of the drive Hamiltonian,

    H / hbar = omega_delta * sz - sqrt(2 gamma) * (beta * s+ + conj(beta) * s-),

with ``sz`` eigenvalues +-1/2, is diagonal in a basis tilted by the mixing
angle ``theta``. Transitions between the dressed ground state g' and excited
state e' are quantum jumps that create a photon on top of the coherent field.

Matrices use the basis order ``(g, e)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import DomainError, check_nonnegative
from .params import PhysicalParams

SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|
SIGMA_PLUS = SIGMA_MINUS.conj().T
SIGMA_Z = np.diag([-0.5, 0.5]).astype(complex)


@dataclass(frozen=True)
class DressedFrame:
    """Instantaneous dressed basis: mixing angle, drive phase and level splitting."""

    theta: float
    phi: float
    omega_beta: float


@dataclass(frozen=True)
class JumpRates:
    up: float
    down: float


def mixing_angle(params: PhysicalParams, beta_mag):
    """Mixing angle ``arctan(2 sqrt(2 gamma) |beta| / omega_delta)``.

    Accepts scalars or arrays of ``|beta|``.
    """
    params.require_off_resonant()
    mag = np.asarray(beta_mag, dtype=float)
    if np.any(mag < 0) or not np.all(np.isfinite(mag)):
        raise DomainError("beta_mag must be finite and nonnegative")
    theta = np.arctan(2 * np.sqrt(2 * params.gamma) * mag / params.omega_delta)
    return float(theta) if theta.ndim == 0 else theta


def dressed_splitting(params: PhysicalParams, beta_mag):
    """Level splitting ``sqrt(omega_delta**2 + 8 gamma |beta|**2)`` of the dressed states."""
    mag = np.asarray(beta_mag, dtype=float)
    if np.any(mag < 0):
        raise DomainError("beta_mag must be nonnegative")
    w = np.sqrt(params.omega_delta**2 + 8 * params.gamma * mag**2)
    return float(w) if w.ndim == 0 else w


def semiclassical_hamiltonian(params: PhysicalParams, beta: complex) -> np.ndarray:
    coupling = np.sqrt(2 * params.gamma)
    return (
        params.omega_delta * SIGMA_Z
        - coupling * (beta * SIGMA_PLUS + np.conj(beta) * SIGMA_MINUS)
    )


def diagonalize_semiclassical(params: PhysicalParams, beta: complex) -> DressedFrame:
    """Dressed frame obtained by numerically diagonalizing the 2x2 drive Hamiltonian.

    Independent of the closed forms in :func:`mixing_angle` and
    :func:`dressed_splitting`, which it is used to cross-check.
    """
    beta = complex(beta)
    if not np.isfinite(beta):
        raise DomainError("beta must be finite")
    evals, evecs = np.linalg.eigh(semiclassical_hamiltonian(params, beta))
    upper = evecs[:, 1]
    g_amp, e_amp = abs(upper[0]), abs(upper[1])
    # tilt of the upper eigenvector away from |e>: tan(theta/2) = |<g|v>| / |<e|v>|
    theta = 2 * np.arctan2(g_amp, e_amp)
    phi = float(np.angle(beta)) if beta != 0 else 0.0
    return DressedFrame(float(theta), phi, float(evals[1] - evals[0]))


def dressed_frame(params: PhysicalParams, beta: complex) -> DressedFrame:
    """Closed-form dressed frame for drive amplitude ``beta``."""
    beta = complex(beta)
    phi = float(np.angle(beta)) if beta != 0 else 0.0
    return DressedFrame(mixing_angle(params, abs(beta)), phi, dressed_splitting(params, abs(beta)))


def beta_for_theta(params: PhysicalParams, theta: float) -> float:
    """Drive magnitude that produces mixing angle ``theta`` (inverse of :func:`mixing_angle`)."""
    params.require_off_resonant()
    if not 0 <= theta < np.pi / 2:
        raise DomainError("theta must lie in [0, pi/2)")
    return float(params.omega_delta * np.tan(theta) / (2 * np.sqrt(2 * params.gamma)))


def jump_rate_up(gamma, theta):
    """Rate of g' -> e' jumps, ``2 gamma sin(theta/2)**4``."""
    rate = 2 * gamma * np.sin(np.asarray(theta, dtype=float) / 2) ** 4
    return float(rate) if rate.ndim == 0 else rate


def jump_rate_down(gamma, theta):
    """Rate of e' -> g' jumps, ``2 gamma cos(theta/2)**4``."""
    rate = 2 * gamma * np.cos(np.asarray(theta, dtype=float) / 2) ** 4
    return float(rate) if rate.ndim == 0 else rate


def jump_rates(gamma: float, theta: float) -> JumpRates:
    return JumpRates(float(jump_rate_up(gamma, theta)), float(jump_rate_down(gamma, theta)))


def dressed_lowering_matrix(theta: float, phi: float) -> np.ndarray:
    """Matrix of the dressed-basis lowering operator expressed in the bare basis."""
    c2 = np.cos(theta / 2) ** 2
    s2 = np.sin(theta / 2) ** 2
    return c2 * SIGMA_MINUS - np.exp(2j * phi) * s2 * SIGMA_PLUS - np.exp(1j * phi) * np.sin(theta) * SIGMA_Z


def dressed_sigma_z(theta: float, phi: float) -> np.ndarray:
    """Tilted energy operator paired with :func:`dressed_lowering_matrix`."""
    return np.cos(theta) * SIGMA_Z + 0.5 * np.sin(theta) * (
        np.exp(-1j * phi) * SIGMA_MINUS + np.exp(1j * phi) * SIGMA_PLUS
    )


@dataclass(frozen=True)
class InteractionCoefficients:
    """Field couplings of the dressed Hamiltonian, per unit ``sqrt(c)``."""

    displacement_coeff: complex
    conserving_coeff: float
    counterrotating_coeff: float


def dressed_interaction_coefficients(gamma: float, theta: float, phi: float) -> InteractionCoefficients:
    """Couplings of the displacement term, the e' -> g' emission and the g' -> e' jump.

    The squared jump couplings equal the jump rates: ``counterrotating**2 ==
    jump_rate_up`` and ``conserving**2 == jump_rate_down``.
    """
    check_nonnegative(gamma, "gamma")
    if not 0 <= theta < np.pi / 2:
        raise DomainError("theta must lie in [0, pi/2)")
    g = np.sqrt(2 * gamma)
    return InteractionCoefficients(
        complex(g * np.sin(theta) * np.exp(1j * phi)),
        float(g * np.cos(theta / 2) ** 2),
        float(g * np.sin(theta / 2) ** 2),
    )
