"""Coherent shift of the transmitted pulse and the quantum-jump budget.

Without jumps the atom stays in its dressed ground state and simply displaces
the coherent output field. Jumps spoil this; their probability is estimated
from the same drive parameters. Two jump-rate variants are offered:

``printed``
    ``(1 / 2 gamma) * |4 gamma beta0 / omega_delta|**4`` and the pulse budget
    ``|2 delta_alpha|**4 / (2 gamma T)``.
``hamiltonian``
    leading small-angle term of ``2 gamma sin(theta/2)**4``, i.e.
    ``8 gamma**3 |beta0|**4 / omega_delta**4``, and the budget
    ``|delta_alpha|**4 / (2 gamma T)``.

The two differ by exactly a factor 16. ``printed`` is the default.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ._validation import DomainError, RegimeWarning, check_nonnegative, check_positive, check_probability
from .dressed import mixing_angle
from .params import PhysicalParams, PulseEnvelope

VARIANTS = ("printed", "hamiltonian")

# |2 x|**4 in the printed budget versus |x|**4 in the hamiltonian one
_BUDGET_FACTOR = {"printed": 16.0, "hamiltonian": 1.0}

# weak excitation means sqrt(8 gamma)|beta0| well below omega_delta
WEAK_EXCITATION_RATIO = 0.1


def _check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


def shift_coefficient(params: PhysicalParams, beta):
    """Rate amplitude ``2 gamma beta / sqrt(omega_delta**2 + 8 gamma |beta|**2)``.

    Equal to ``0.5 * sqrt(2 gamma) * sin(theta) * exp(i phi)``; saturates at
    large drive. Works elementwise on arrays.
    """
    params.require_off_resonant()
    beta = np.asarray(beta, dtype=complex)
    coeff = 2 * params.gamma * beta / np.sqrt(params.omega_delta**2 + 8 * params.gamma * np.abs(beta) ** 2)
    return complex(coeff) if coeff.ndim == 0 else coeff


def shift_coefficient_dressed(params: PhysicalParams, beta: complex) -> complex:
    """Same coefficient written through the mixing angle."""
    beta = complex(beta)
    theta = mixing_angle(params, abs(beta))
    phi = np.angle(beta) if beta != 0 else 0.0
    return complex(0.5 * math.sqrt(2 * params.gamma) * math.sin(theta) * np.exp(1j * phi))


def output_envelope(env: PulseEnvelope, params: PhysicalParams) -> PulseEnvelope:
    """No-jump output field ``beta - i * shift_coefficient(beta)``, sample by sample.

    For weak drive this is the linear response ``beta * (1 - 2i gamma / omega_delta)``;
    at stronger drive the saturated coefficient is used.
    """
    return PulseEnvelope(env.dt, env.samples - 1j * shift_coefficient(params, env.samples))


def pulse_shift(beta0: complex, duration: float, params: PhysicalParams) -> complex:
    """Integrated shift ``-i (2 gamma / omega_delta) beta0 sqrt(T)`` of a rectangular pulse."""
    params.require_off_resonant()
    duration = check_positive(duration, "duration")
    chi = 2 * params.gamma / params.omega_delta
    beta0 = complex(beta0)
    scale = chi * math.sqrt(duration)
    # multiply by -i without creating negative zeros
    return complex(scale * beta0.imag, -scale * beta0.real) + 0.0


def is_weak_excitation(params: PhysicalParams, beta0: complex) -> bool:
    return math.sqrt(8 * params.gamma) * abs(complex(beta0)) <= WEAK_EXCITATION_RATIO * params.omega_delta


def instantaneous_jump_rate(params: PhysicalParams, beta0: complex, variant: str = "printed") -> float:
    """g' -> e' jump rate of a constant drive, in the weak-excitation approximation.

    Emits :class:`RegimeWarning` when the drive is not weak compared to the detuning.
    """
    _check_variant(variant)
    params.require_off_resonant()
    if not is_weak_excitation(params, beta0):
        warnings.warn(
            f"sqrt(8 gamma)|beta0| = {math.sqrt(8 * params.gamma) * abs(beta0):.3g} is not small "
            f"against omega_delta = {params.omega_delta:.3g}; the jump-rate estimate is perturbative",
            RegimeWarning,
            stacklevel=2,
        )
    g, d, b = params.gamma, params.omega_delta, abs(complex(beta0))
    if variant == "printed":
        return (2 * (2 * g / d) * b) ** 4 / (2 * g)
    return 8 * g**3 * b**4 / d**4


@dataclass(frozen=True)
class JumpProbability:
    """Jump probability of a pulse, clamped to [0, 1].

    ``raw`` keeps the unclamped perturbative value; ``valid`` is False when it
    exceeded 1.
    """

    probability: float
    raw: float
    valid: bool
    variant: str

    def __float__(self) -> float:
        return self.probability


def jump_probability_total(delta_alpha, gamma_t: float, variant: str = "printed") -> JumpProbability:
    """Total jump probability of a pulse producing shift ``delta_alpha`` over ``gamma * T``."""
    _check_variant(variant)
    gamma_t = float(gamma_t)
    if not gamma_t > 0:
        raise DomainError(f"gamma*T must be positive, got {gamma_t!r}")
    raw = _BUDGET_FACTOR[variant] * abs(complex(delta_alpha)) ** 4 / (2 * gamma_t)
    return JumpProbability(min(raw, 1.0), raw, raw <= 1.0, variant)


def plan_pulse(target_shift: float, p_budget: float, variant: str = "printed") -> float:
    """Dimensionless pulse length ``gamma * T`` reaching ``|delta_alpha| = target_shift``
    with jump probability ``p_budget``."""
    _check_variant(variant)
    target_shift = check_nonnegative(target_shift, "target_shift")
    p_budget = check_probability(p_budget, "p_budget")
    if p_budget == 0:
        raise DomainError("p_budget must be > 0")
    return _BUDGET_FACTOR[variant] * target_shift**4 / (2 * p_budget)


def drive_for_shift(target_shift: float, duration: float, params: PhysicalParams) -> float:
    """Constant drive magnitude ``|beta0|`` giving ``|delta_alpha| = target_shift`` after ``duration``."""
    params.require_off_resonant()
    duration = check_positive(duration, "duration")
    return check_nonnegative(target_shift, "target_shift") * params.omega_delta / (2 * params.gamma * math.sqrt(duration))


@dataclass(frozen=True)
class ShiftResult:
    delta_alpha: complex
    alpha_in: complex
    alpha_out: complex
    variant_probabilities: dict = field(default_factory=dict)


def coherent_shift(beta0: complex, duration: float, params: PhysicalParams) -> ShiftResult:
    """Shift, input and output pulse amplitudes and both jump-probability variants."""
    beta0 = complex(beta0)
    delta = pulse_shift(beta0, duration, params)
    alpha_in = beta0 * math.sqrt(duration)
    gamma_t = params.gamma * duration
    probs = {v: jump_probability_total(delta, gamma_t, v) for v in VARIANTS}
    return ShiftResult(delta, alpha_in, alpha_in + delta, probs)
