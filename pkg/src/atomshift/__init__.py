"""Single two-level atom driven by off-resonant coherent light.

Closed-form dressed-state rates, coherent output shifts, quantum-jump Monte
Carlo, photon-pair wavefunctions and cat-state gate estimates, each paired
with an independent numerical check.
"""

__version__ = "0.1.0"

from ._validation import AdiabaticityWarning, DomainError, RegimeWarning, ResolutionError
from .params import PhysicalParams, PulseEnvelope
from .dressed import (
    DressedFrame,
    JumpRates,
    beta_for_theta,
    diagonalize_semiclassical,
    dressed_frame,
    dressed_interaction_coefficients,
    dressed_lowering_matrix,
    dressed_splitting,
    jump_rate_down,
    jump_rate_up,
    jump_rates,
    mixing_angle,
)
from .shift import (
    ShiftResult,
    coherent_shift,
    instantaneous_jump_rate,
    jump_probability_total,
    output_envelope,
    plan_pulse,
    pulse_shift,
    shift_coefficient,
)
from .trajectory import JumpRecord, TrajectoryStats, pair_delay_histogram, run_ensemble, simulate_trajectory
from .pairs import (
    BiphotonGrid,
    biphoton_freq_closed,
    biphoton_freq_numeric,
    biphoton_time,
    compare_spectra,
    pair_rate,
    sideband_frequencies,
)
from .cat import AtomQubit, CatState, cat_fidelity_bound, cat_output, coherent_overlap, conditional_phase
from .bloch import DensityMatrix2, bloch_evolve, bloch_steady_state, oracle_output_amplitude
