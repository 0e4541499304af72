"""Acceptance gate: one PASS/FAIL line per criterion at its stated tolerance."""

import cmath
import math
import time

import numpy as np
import pytest

from atomshift import PhysicalParams, PulseEnvelope
from atomshift.bloch import bloch_steady_state, output_phase
from atomshift.cat import cat_output, coherent_overlap, conditional_phase, AtomQubit
from atomshift.cli import run_command
from atomshift.dressed import (
    beta_for_theta,
    diagonalize_semiclassical,
    dressed_frame,
    jump_rate_down,
    jump_rate_up,
)
from atomshift.pairs import compare_spectra, pair_rate, pair_rate_quadrature
from atomshift.shift import instantaneous_jump_rate, jump_probability_total, plan_pulse
from atomshift.trajectory import pair_delay_histogram, run_ensemble, simulate_trajectory, summarize

from conftest import ACCEPTANCE_LINES, param_grid

MC_SEED = 20130701


def record(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] #{number} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def timed(fn, repeat=1):
    best, result = math.inf, None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return result, best


def test_1_headline_pulse_plan():
    (gt, p), secs = timed(
        lambda: (plan_pulse(1.88, 0.1, "printed"), jump_probability_total(1.88, 1000, "printed").probability),
        repeat=20,
    )
    ok = abs(gt - 999.4) <= 0.5 and abs(p - 0.0999) <= 0.0005 and secs < 1e-3
    record(1, "pulse plan", ok, f"gammaT={gt:.4f} (999.4+-0.5), P={p:.6f} (0.0999+-0.0005), {secs * 1e6:.1f} us")


def test_2_dressed_frame_vs_eigensolver():
    def check():
        worst_theta = worst_omega = 0.0
        for g, d, b in param_grid(10):
            prm = PhysicalParams(g, d)
            closed, eig = dressed_frame(prm, b), diagonalize_semiclassical(prm, b)
            worst_theta = max(worst_theta, abs(closed.theta - eig.theta) / closed.theta)
            worst_omega = max(worst_omega, abs(closed.omega_beta - eig.omega_beta) / closed.omega_beta)
        return worst_theta, worst_omega

    (wt, wo), secs = timed(check)
    ok = wt < 1e-10 and wo < 1e-10 and secs < 1.0
    record(2, "dressed frame vs 2x2 eigensolver (1000 points)", ok,
           f"max rel err theta={wt:.2e}, omega_beta={wo:.2e} (<1e-10), {secs:.3f} s")


def test_3_rate_identities():
    worst_prod = worst_pair = 0.0
    for g, d, b in param_grid(10):
        frame = dressed_frame(PhysicalParams(g, d), b)
        up, down = jump_rate_up(g, frame.theta), jump_rate_down(g, frame.theta)
        target = g**2 * math.sin(frame.theta) ** 4 / 4
        worst_prod = max(worst_prod, abs(up * down - target) / target)
        worst_pair = max(worst_pair, abs(pair_rate(frame, g) - up) / up)
    ok = worst_prod < 1e-12 and worst_pair < 1e-12
    record(3, "rate identities", ok, f"up*down rel err={worst_prod:.2e}, pair_rate vs up rel err={worst_pair:.2e} (<1e-12)")


def test_4_factor_sixteen():
    prm = PhysicalParams(1.0, 100.0)
    ratio = instantaneous_jump_rate(prm, 1.0, "printed") / instantaneous_jump_rate(prm, 1.0, "hamiltonian")
    record(4, "printed / small-theta rate", abs(ratio - 16) <= 1e-6, f"ratio={ratio:.12f} (16+-1e-6)")


def test_5_bloch_oracle_agreement():
    def check():
        worst_pop = worst_phase = 0.0
        for d in (50.0, 100.0, 500.0):
            for b in (0.1, 0.5, 1.0):
                prm = PhysicalParams(1.0, d)
                dressed = math.sin(dressed_frame(prm, b).theta / 2) ** 2
                worst_pop = max(worst_pop, abs(bloch_steady_state(prm, b).rho_ee - dressed) / dressed)
                worst_phase = max(worst_phase, abs(output_phase(prm, b) + 2 / d) / (2 / d))
        return worst_pop, worst_phase

    (pop, phase), secs = timed(check)
    ok = pop <= 0.01 and phase <= 0.02 and secs < 5
    record(5, "Bloch oracle vs dressed/linear response", ok,
           f"rho_ee rel err={pop:.2e} (<=1%), phase rel err={phase:.2e} (<=2%), {secs:.3f} s")


def test_6_monte_carlo_statistics():
    prm = PhysicalParams(1.0, 50.0)
    beta = beta_for_theta(prm, 0.2)

    def check():
        # up-rate: one trajectory of total time 1e6 / gamma
        single = summarize([simulate_trajectory(PulseEnvelope.constant(beta, 1.0e6), prm, MC_SEED)])
        # pair delays: same seed, 5e7 / gamma in 50 trajectories for >= 1e4 pairs
        ens = run_ensemble(PulseEnvelope.constant(beta, 1.0e6), prm, 50, MC_SEED, n_workers=4)
        return single, ens

    (single, ens), secs = timed(check)
    up_expected = 1.9867e-4
    z = abs(single.mean_up_rate - up_expected) / single.up_rate_stderr
    hist = pair_delay_histogram(ens)
    fit_err = abs(hist.rate - 1.96033) / 1.96033
    ok = z <= 3 and fit_err <= 0.05 and secs < 30
    record(6, "Monte Carlo statistics (seed 20130701)", ok,
           f"up-rate={single.mean_up_rate:.5e} ({z:.2f} stderr from 1.9867e-4, <=3); "
           f"delay fit={hist.rate:.5f} from {hist.n_pairs} pairs (rel err {fit_err:.2%}, <=5%); {secs:.2f} s")


def test_7_biphoton_numerics():
    def check():
        frame = dressed_frame(PhysicalParams(1.0, 50.0), beta_for_theta(PhysicalParams(1.0, 50.0), 0.2))
        quad = pair_rate_quadrature(frame, 1.0)
        return frame, quad, compare_spectra(frame, 1.0)

    (frame, quad, rep), secs = timed(check)
    closed = pair_rate(frame, 1.0)
    quad_err = abs(quad - closed) / closed
    gp = rep.gamma_prime
    widths_ok = (
        abs(rep.numeric_width_upper / gp - 1) < 0.01
        and abs(rep.numeric_width_lower / gp - 1) < 0.01
        and abs(rep.printed_width_lower / gp - 2) < 0.01
    )
    ok = quad_err < 1e-6 and rep.parseval_rel_error < 1e-6 and widths_ok and rep.discrepancy \
        and "DISCREPANCY" in rep.summary() and secs < 5
    record(7, "biphoton numerics", ok,
           f"quadrature rel err={quad_err:.2e}, Parseval rel err={rep.parseval_rel_error:.2e} (<1e-6); "
           f"numeric widths {rep.numeric_width_upper / gp:.3f}/{rep.numeric_width_lower / gp:.3f} Gamma', "
           f"printed second term {rep.printed_width_lower / gp:.3f} Gamma', discrepancy reported; {secs:.2f} s")


def test_8_cat_state_values():
    ov = abs(coherent_overlap(20 * cmath.exp(-0.1j), 20))
    n2 = cat_output(20, 0.1).norm2
    identity = all(b.alpha == 20 for b in conditional_phase(0.0, 20, AtomQubit.plus()))
    degenerate = cat_output(20, 0.0).norm2 == 4.0 and coherent_overlap(20, 20) == 1
    ok = abs(ov - 0.13558) <= 1e-4 and abs(n2 - 1.833) <= 0.002 and identity and degenerate
    record(8, "cat-state values", ok,
           f"|overlap|={ov:.6f} (0.13558+-1e-4), norm2={n2:.5f} (1.833+-0.002), chi=0 exact={identity and degenerate}")


def test_9_reproducibility(tmp_path):
    runs = {
        "trajectory": ["trajectory", "--theta", "0.3", "--detuning", "50", "--duration", "20000",
                       "--n-runs", "16", "--seed", str(MC_SEED)],
        "sweep": ["sweep", "--detunings", "50,100,500", "--betas", "0.1,0.5,1"],
    }
    identical = []
    for name, argv in runs.items():
        for fmt in ("json", "csv"):
            blobs = []
            for workers in ("1", "1", "8"):
                path = tmp_path / f"{name}-{workers}-{len(blobs)}.{fmt}"
                assert run_command(argv + ["--workers", workers, "--format", fmt, "--output", str(path)]) == 0
                blobs.append(path.read_bytes())
            identical.append(len(set(blobs)) == 1)
    record(9, "byte-identical artifacts at 1 and 8 workers", all(identical),
           f"{sum(identical)}/{len(identical)} artifact sets identical (trajectory, sweep x json, csv)")
