"""Physical constants of the atom and sampled coherent drive envelopes."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._validation import DomainError, check_finite_array, check_nonnegative, check_positive


@dataclass(frozen=True)
class PhysicalParams:
    """Atom-field constants.

    Parameters
    ----------
    gamma : float
        Dipole relaxation rate. The spontaneous emission rate is ``2 * gamma``.
    omega_delta : float
        Detuning ``omega_atom - omega_light`` in rad per unit time.
    omega_light, omega_atom : float, optional
        Absolute carrier and resonance frequencies. When both are given they
        must reproduce ``omega_delta`` exactly.
    """

    gamma: float
    omega_delta: float
    omega_light: Optional[float] = None
    omega_atom: Optional[float] = None

    def __post_init__(self):
        check_positive(self.gamma, "gamma")
        if not math.isfinite(self.omega_delta):
            raise DomainError("omega_delta must be finite")
        if self.omega_light is not None and self.omega_atom is not None:
            if self.omega_atom - self.omega_light != self.omega_delta:
                raise DomainError(
                    "omega_atom - omega_light must equal omega_delta "
                    f"({self.omega_atom} - {self.omega_light} != {self.omega_delta})"
                )

    @classmethod
    def from_frequencies(cls, gamma: float, omega_light: float, omega_atom: float) -> "PhysicalParams":
        return cls(gamma, omega_atom - omega_light, omega_light, omega_atom)

    def require_off_resonant(self) -> None:
        if not self.omega_delta > 0:
            raise DomainError(
                f"detuning must be positive (off-resonant drive below the atomic line), got {self.omega_delta!r}"
            )


@dataclass(frozen=True, eq=False)
class PulseEnvelope:
    """Complex drive amplitude sampled on a uniform grid.

    ``samples[k]`` holds beta on the interval ``[k*dt, (k+1)*dt)``. The
    normalization is flux-like: ``abs(beta)**2`` is the photon rate, so the
    integral of ``abs(beta)**2`` is the mean photon number of the pulse.
    """

    dt: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_positive(self.dt, "dt")
        arr = np.array(check_finite_array(self.samples, "samples")).reshape(-1)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @classmethod
    def constant(cls, beta0: complex, duration: float, dt: Optional[float] = None) -> "PulseEnvelope":
        """Rectangular pulse of amplitude ``beta0`` lasting ``duration``."""
        duration = check_positive(duration, "duration")
        if dt is None:
            dt = duration
        n = max(1, int(round(duration / dt)))
        return cls(duration / n, np.full(n, complex(beta0)))

    @classmethod
    def raised_cosine(cls, beta0: complex, duration: float, ramp: float, dt: float) -> "PulseEnvelope":
        """Flat-top pulse whose amplitude rises and falls as ``(1 - cos)/2`` over ``ramp``."""
        duration = check_positive(duration, "duration")
        ramp = check_nonnegative(ramp, "ramp")
        if 2 * ramp > duration:
            raise DomainError("ramps longer than half the pulse duration")
        n = max(1, int(round(duration / check_positive(dt, "dt"))))
        dt = duration / n
        t = (np.arange(n) + 0.5) * dt
        shape = np.ones(n)
        if ramp > 0:
            rise = t < ramp
            fall = t > duration - ramp
            shape[rise] = 0.5 * (1 - np.cos(np.pi * t[rise] / ramp))
            shape[fall] = 0.5 * (1 - np.cos(np.pi * (duration - t[fall]) / ramp))
        return cls(dt, complex(beta0) * shape)

    @classmethod
    def zeros(cls, duration: float, dt: Optional[float] = None) -> "PulseEnvelope":
        return cls.constant(0.0, duration, dt)

    @property
    def n_samples(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        return self.n_samples * self.dt

    @property
    def times(self) -> np.ndarray:
        """Left edge of each sample interval."""
        return np.arange(self.n_samples) * self.dt

    def mean_photon_number(self) -> float:
        return float(np.sum(np.abs(self.samples) ** 2) * self.dt)

    def alpha(self) -> complex:
        """Amplitude of the pulse projected on the flat mode; ``beta0 * sqrt(T)`` for a rectangular pulse."""
        return complex(np.sum(self.samples) * self.dt / math.sqrt(self.duration))

    def beta_at(self, t) -> np.ndarray:
        idx = np.clip(np.floor(np.asarray(t) / self.dt).astype(np.int64), 0, self.n_samples - 1)
        return self.samples[idx]

    @property
    def envelope_id(self) -> str:
        h = hashlib.sha256()
        h.update(np.float64(self.dt).tobytes())
        h.update(np.ascontiguousarray(self.samples, dtype=np.complex128).tobytes())
        return h.hexdigest()[:16]
