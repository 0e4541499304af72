"""Optical Bloch (Lindblad) oracle for the driven, decaying two-level atom.

The density matrix evolves under the semiclassical drive Hamiltonian

    H = omega_delta * sz - sqrt(2 gamma) * (beta * s+ + conj(beta) * s-)

plus spontaneous emission with rate ``2 gamma`` (jump operator
``sqrt(2 gamma) s-``). Nothing here uses the dressed-state formulas; the
results are used to check them.

Basis order is ``(g, e)``; ``rho[0, 1]`` is rho_ge.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import DomainError, ResolutionError, check_positive
from .dressed import SIGMA_MINUS, semiclassical_hamiltonian
from .params import PhysicalParams, PulseEnvelope

# dt * max(omega_beta, 2 gamma) must not exceed this
MAX_PHASE_STEP = 0.05

_I2 = np.eye(2, dtype=complex)


@dataclass(frozen=True, eq=False)
class DensityMatrix2:
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex).reshape(2, 2)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def ground(cls) -> "DensityMatrix2":
        return cls(np.diag([1.0, 0.0]))

    @classmethod
    def excited(cls) -> "DensityMatrix2":
        return cls(np.diag([0.0, 1.0]))

    rho_gg = property(lambda self: float(self.matrix[0, 0].real))
    rho_ee = property(lambda self: float(self.matrix[1, 1].real))
    rho_ge = property(lambda self: complex(self.matrix[0, 1]))
    rho_eg = property(lambda self: complex(self.matrix[1, 0]))

    def expect(self, op: np.ndarray) -> complex:
        return complex(np.trace(self.matrix @ op))

    def check(self, tol: float = 1e-12) -> None:
        m = self.matrix
        if abs(np.trace(m) - 1) > tol:
            raise DomainError(f"trace deviates from 1 by {abs(np.trace(m) - 1):.3g}")
        if np.max(np.abs(m - m.conj().T)) > tol:
            raise DomainError("density matrix is not Hermitian")
        if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -tol:
            raise DomainError("density matrix has a negative eigenvalue")


def liouvillian(params: PhysicalParams, beta: complex) -> np.ndarray:
    """4x4 generator acting on the row-major vectorization of rho."""
    h = semiclassical_hamiltonian(params, complex(beta))
    c = math.sqrt(2 * params.gamma) * SIGMA_MINUS
    cdc = c.conj().T @ c
    # vec(A rho B) = kron(A, B.T) vec(rho) for row-major vec
    return (
        -1j * (np.kron(h, _I2) - np.kron(_I2, h.T))
        + np.kron(c, c.conj())
        - 0.5 * (np.kron(cdc, _I2) + np.kron(_I2, cdc.T))
    )


def bloch_steady_state(params: PhysicalParams, beta0: complex) -> DensityMatrix2:
    """Stationary state from a 3x3 real solve in the variables (Re rho_ge, Im rho_ge, rho_ee)."""
    if not params.gamma > 0:
        raise DomainError("gamma must be > 0 for a unique steady state")
    lv = liouvillian(params, beta0)

    def rho_of(x):
        u, v, w = x
        return np.array([[1 - w, u + 1j * v], [u - 1j * v, w]])

    def residual(x):
        d = (lv @ rho_of(x).reshape(-1)).reshape(2, 2)
        return np.array([d[0, 1].real, d[0, 1].imag, d[1, 1].real])

    r0 = residual((0.0, 0.0, 0.0))
    a = np.column_stack([residual(e) - r0 for e in np.eye(3)])
    x = np.linalg.solve(a, -r0)
    return DensityMatrix2(rho_of(x))


def excited_population_closed(params: PhysicalParams, beta0: complex) -> float:
    """Hand-solved steady state ``2 gamma |b|^2 / (omega_delta^2 + gamma^2 + 4 gamma |b|^2)``."""
    rabi2 = 2 * params.gamma * abs(complex(beta0)) ** 2
    return rabi2 / (params.omega_delta**2 + params.gamma**2 + 2 * rabi2)


def rk4_propagator(lv: np.ndarray, dt: float) -> np.ndarray:
    """One classical RK4 step of ``dv/dt = L v`` written as a matrix.

    For a linear autonomous system the four RK4 stages collapse to the
    fourth-order Taylor polynomial of ``exp(L dt)``.
    """
    hl = dt * lv
    eye = np.eye(lv.shape[0], dtype=complex)
    hl2 = hl @ hl
    return eye + hl + hl2 / 2 + hl2 @ hl / 6 + hl2 @ hl2 / 24


@dataclass(frozen=True)
class BlochSeries:
    times: np.ndarray = field(repr=False)
    states: np.ndarray = field(repr=False)  # (n, 2, 2)

    def __len__(self):
        return self.times.size

    def __getitem__(self, k) -> DensityMatrix2:
        return DensityMatrix2(self.states[k])

    @property
    def final(self) -> DensityMatrix2:
        return self[-1]

    @property
    def rho_ee(self) -> np.ndarray:
        return self.states[:, 1, 1].real

    @property
    def rho_ge(self) -> np.ndarray:
        return self.states[:, 0, 1]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "rho_ee", "re_rho_ge", "im_rho_ge"])
        for t, ee, ge in zip(self.times, self.rho_ee, self.rho_ge):
            w.writerow([repr(float(t)), repr(float(ee)), repr(float(ge.real)), repr(float(ge.imag))])
        return buf.getvalue()


def bloch_evolve(
    rho0: DensityMatrix2,
    env: PulseEnvelope,
    params: PhysicalParams,
    dt: float,
    record_every: int = 1,
) -> BlochSeries:
    """Fixed-step RK4 integration over the envelope duration.

    The drive is piecewise constant; each step uses the envelope sample at the
    step midpoint. Raises :class:`ResolutionError` unless
    ``dt * max(omega_beta, 2 gamma) <= 0.05`` for the strongest sample.
    """
    dt = check_positive(dt, "dt")
    peak = float(np.abs(env.samples).max(initial=0.0))
    fastest = max(math.sqrt(params.omega_delta**2 + 8 * params.gamma * peak**2), 2 * params.gamma)
    if dt * fastest > MAX_PHASE_STEP:
        raise ResolutionError(
            f"dt = {dt:.3g} does not resolve the fastest rate {fastest:.3g} (need dt <= {MAX_PHASE_STEP / fastest:.3g})"
        )
    n_steps = int(math.ceil(env.duration / dt - 1e-9))
    mids = (np.arange(n_steps) + 0.5) * dt
    sample_idx = np.minimum((mids / env.dt).astype(np.int64), env.n_samples - 1)

    cache = {}
    v = np.array(rho0.matrix, dtype=complex).reshape(-1)
    times, states = [0.0], [v.copy()]
    for k in range(n_steps):
        j = int(sample_idx[k])
        beta = env.samples[j]
        prop = cache.get(beta)
        if prop is None:
            prop = cache[beta] = rk4_propagator(liouvillian(params, beta), dt)
        v = prop @ v
        if (k + 1) % record_every == 0 or k == n_steps - 1:
            times.append((k + 1) * dt)
            states.append(v.copy())
    return BlochSeries(np.array(times), np.array(states).reshape(-1, 2, 2))


def reflection_coefficient(params: PhysicalParams, beta0: complex) -> complex:
    """Flux-conserving ratio ``beta_out / beta0`` with ``beta_out = beta0 + i sqrt(2 gamma) <s->``.

    ``|r| <= 1``; the deficit is the inelastically scattered flux.
    """
    beta0 = complex(beta0)
    if beta0 == 0:
        raise DomainError("reflection coefficient undefined at zero drive")
    rho = bloch_steady_state(params, beta0)
    return 1 + 1j * math.sqrt(2 * params.gamma) * rho.expect(SIGMA_MINUS) / beta0


def oracle_output_amplitude(params: PhysicalParams, beta0: complex) -> complex:
    """Steady-state output amplitude in the phase convention of the linear-response shift.

    The physical reflection coefficient is ``r = 1 + 2i gamma/omega_delta + ...``
    in the frame of the drive Hamiltonian above. The linear-response shift is
    written as ``beta - 2i gamma/omega_delta * beta``, i.e. in the conjugate
    phase convention; ``beta0 * conj(r)`` expresses the oracle in that
    convention. The magnitude is unaffected.
    """
    beta0 = complex(beta0)
    if beta0 == 0:
        return 0j
    return beta0 * reflection_coefficient(params, beta0).conjugate()


def output_phase(params: PhysicalParams, beta0: complex) -> float:
    """``arg(beta_out / beta0)`` of :func:`oracle_output_amplitude`."""
    return float(np.angle(oracle_output_amplitude(params, beta0) / complex(beta0)))
