"""Atom-controlled phase gate on a coherent pulse and the resulting cat states.

A three-level atom with qubit states |g> and |d> (|e> only virtually
populated) imprints the phase ``-chi = -2 gamma / omega_delta`` on the pulse
when in |g> and leaves it untouched in |d>. Measuring the atom in
``(|g> + |d>)/sqrt(2)`` afterwards heralds ``|exp(-i chi) alpha> + |alpha>``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._validation import DomainError, RegimeWarning, check_probability
from .params import PhysicalParams

# above this the "chi << 1" picture of a small dispersive phase is questionable
CHI_WARNING = 0.5


@dataclass(frozen=True)
class AtomQubit:
    g: complex
    d: complex

    def __post_init__(self):
        norm = abs(self.g) ** 2 + abs(self.d) ** 2
        if not math.isclose(norm, 1.0, rel_tol=0, abs_tol=1e-12):
            raise DomainError(f"qubit amplitudes must be normalized, got |g|^2+|d|^2 = {norm!r}")

    @classmethod
    def plus(cls) -> "AtomQubit":
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))


@dataclass(frozen=True)
class Branch:
    atom_state: str
    weight: complex
    alpha: complex


@dataclass(frozen=True)
class CatState:
    """Unnormalized superposition ``sum_i weight_i |alpha_i>``."""

    components: tuple  # ((alpha, weight), ...)

    @property
    def norm2(self) -> float:
        total = 0j
        for a1, w1 in self.components:
            for a2, w2 in self.components:
                total += np.conj(w1) * w2 * coherent_overlap(a1, a2)
        return float(total.real)

    @property
    def norm(self) -> float:
        return math.sqrt(max(self.norm2, 0.0))

    def distinguishability(self) -> float:
        """``1 - |<a1|a2>|**2`` for the two components of a two-component cat."""
        if len(self.components) != 2:
            raise DomainError("distinguishability is defined for two components")
        (a1, _), (a2, _) = self.components
        return 1.0 - abs(coherent_overlap(a1, a2)) ** 2


def gate_phase(params: PhysicalParams) -> float:
    """Conditional phase ``chi = 2 gamma / omega_delta`` per pulse."""
    params.require_off_resonant()
    return 2 * params.gamma / params.omega_delta


def conditional_phase(chi: float, alpha: complex, atom: AtomQubit) -> list:
    """Entangled output of the gate as a list of branches, d-branch unchanged."""
    chi = float(chi)
    if chi < 0 or not math.isfinite(chi):
        raise DomainError("chi must be finite and >= 0")
    if chi > CHI_WARNING:
        warnings.warn(f"chi = {chi:.3g} is not small; the gate picture assumes chi << 1", RegimeWarning, stacklevel=2)
    alpha = complex(alpha)
    return [
        Branch("g", complex(atom.g), cmath.exp(-1j * chi) * alpha),
        Branch("d", complex(atom.d), alpha),
    ]


def coherent_overlap(a1: complex, a2: complex) -> complex:
    """Inner product ``<a1|a2> = exp(-|a1|^2/2 - |a2|^2/2 + conj(a1) a2)``."""
    a1, a2 = complex(a1), complex(a2)
    # same exponent regrouped so large equal amplitudes do not cancel
    return cmath.exp(-0.5 * abs(a1 - a2) ** 2 + 1j * (a1.conjugate() * a2).imag)


def cat_output(alpha: complex, chi: float) -> CatState:
    """Field state heralded by projecting the atom onto ``|g> + |d>`` (unnormalized)."""
    alpha = complex(alpha)
    return CatState(((cmath.exp(-1j * float(chi)) * alpha, 1 + 0j), (alpha, 1 + 0j)))


def cat_fidelity_bound(p_jump: float) -> float:
    """Fidelity bound ``1 - P_jump``: any jump reveals the atom state and kills the superposition."""
    return 1.0 - check_probability(p_jump, "p_jump")
