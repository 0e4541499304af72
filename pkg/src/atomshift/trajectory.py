"""Monte Carlo sampling of quantum-jump records between the dressed states.

Each trajectory is a two-state Markov jump process g' <-> e' with rates
``2 gamma sin(theta/2)**4`` (up) and ``2 gamma cos(theta/2)**4`` (down),
where ``theta(t)`` follows the drive envelope adiabatically. Time-dependent
rates are sampled exactly by thinning a homogeneous Poisson process whose
rate is the maximum over the pulse of the current state's jump rate. That
bound never exceeds ``2 gamma``.

Every trajectory owns a counter-based Philox stream keyed by a seed derived
from ``(master_seed, trajectory_index)``, so ensembles are bitwise
reproducible for any number of worker threads.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._validation import AdiabaticityWarning, DomainError
from .dressed import dressed_splitting, jump_rate_down, jump_rate_up, mixing_angle
from .params import PhysicalParams, PulseEnvelope

GROUND, EXCITED = "g'", "e'"
UP, DOWN = "up", "down"

# |d theta / dt| allowed per unit dressed splitting
ADIABATIC_TOLERANCE = 0.01

_MIN_BLOCK, _MAX_BLOCK = 16, 1 << 16


@dataclass(frozen=True)
class JumpRecord:
    events: tuple  # ((time, kind), ...)
    seed: int
    envelope_id: str
    final_state: str
    duration: float
    time_excited: float
    trajectory_id: int = 0

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.events], dtype=float)

    @property
    def n_up(self) -> int:
        return sum(1 for _, k in self.events if k == UP)

    def pair_delays(self) -> np.ndarray:
        """Delays between each up jump and the following down jump."""
        t = self.times
        n = 2 * (len(t) // 2)
        return t[1:n:2] - t[0:n:2]

    def ground_waiting_times(self) -> np.ndarray:
        """Time spent in g' before each up jump."""
        t = np.concatenate([[0.0], self.times])
        return t[1::2] - t[0:-1:2]


@dataclass(frozen=True)
class TrajectoryStats:
    n_trajectories: int
    total_time: float
    time_ground: float
    time_excited: float
    n_up: int
    n_down: int
    mean_up_rate: float
    up_rate_stderr: float
    occupancy_excited: float
    occupancy_stderr: float
    pair_delays: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    n_pairs: int
    rate: float
    rate_stderr: float
    empty: bool


def check_adiabatic(env: PulseEnvelope, params: PhysicalParams) -> bool:
    """Warn if ``|d theta/dt|`` exceeds ``ADIABATIC_TOLERANCE * omega_beta`` anywhere."""
    mag = np.abs(env.samples)
    if env.n_samples < 2:
        return True
    theta = mixing_angle(params, mag)
    rate = np.abs(np.diff(theta)) / env.dt
    limit = ADIABATIC_TOLERANCE * dressed_splitting(params, 0.5 * (mag[1:] + mag[:-1]))
    worst = int(np.argmax(rate - limit))
    if rate[worst] > limit[worst]:
        warnings.warn(
            f"envelope is not adiabatic at t={(worst + 1) * env.dt:.4g}: |dtheta/dt|={rate[worst]:.3g} "
            f"> {ADIABATIC_TOLERANCE} * omega_beta = {limit[worst]:.3g}",
            AdiabaticityWarning,
            stacklevel=3,
        )
        return False
    return True


def trajectory_seed(master_seed: int, index: int) -> int:
    """Per-trajectory seed derived from the master seed, independent of scheduling."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    hi, lo = ss.generate_state(2, dtype=np.uint32)
    return (int(hi) << 32) | int(lo)


def _rate_tables(env: PulseEnvelope, params: PhysicalParams):
    theta = mixing_angle(params, np.abs(env.samples))
    return jump_rate_up(params.gamma, theta), jump_rate_down(params.gamma, theta)


def _simulate(up, down, dt, duration, seed):
    rng = np.random.Generator(np.random.Philox(seed))
    tables = (up, down)
    bounds = tuple(float(r.max(initial=0.0)) for r in tables)
    blocks = tuple(
        int(min(_MAX_BLOCK, max(_MIN_BLOCK, 4 * b / r.mean()))) if b > 0 else 0 for b, r in zip(bounds, tables)
    )
    t = 0.0
    state = 0
    times, time_excited, entered = [], 0.0, 0.0
    n = up.size
    while True:
        rates, lam, block = tables[state], bounds[state], blocks[state]
        if lam == 0.0:
            break
        cand = t + np.cumsum(rng.exponential(1.0 / lam, size=block))
        u = rng.random(block)
        idx = np.minimum((cand / dt).astype(np.int64), n - 1)
        accept = (u * lam < rates[idx]) & (cand < duration)
        hit = int(np.argmax(accept))
        if accept[hit]:
            t = float(cand[hit])
            times.append(t)
            if state == 1:
                time_excited += t - entered
            else:
                entered = t
            state ^= 1
        elif cand[-1] >= duration:
            break
        else:
            t = float(cand[-1])
    if state == 1:
        time_excited += duration - entered
    return times, state, time_excited


def _record(up, down, env, seed, trajectory_id):
    times, state, t_exc = _simulate(up, down, env.dt, env.duration, seed)
    events = tuple((t, UP if i % 2 == 0 else DOWN) for i, t in enumerate(times))
    return JumpRecord(
        events=events,
        seed=int(seed),
        envelope_id=env.envelope_id,
        final_state=EXCITED if state else GROUND,
        duration=env.duration,
        time_excited=t_exc,
        trajectory_id=trajectory_id,
    )


def simulate_trajectory(
    env: PulseEnvelope,
    params: PhysicalParams,
    seed: int,
    trajectory_id: int = 0,
) -> JumpRecord:
    """Sample one jump record, starting in the dressed ground state at t = 0."""
    check_adiabatic(env, params)
    up, down = _rate_tables(env, params)
    return _record(up, down, env, int(seed), trajectory_id)


def simulate_records(
    env: PulseEnvelope,
    params: PhysicalParams,
    n_runs: int,
    master_seed: int,
    n_workers: int = 1,
) -> list:
    """Jump records of ``n_runs`` independent trajectories, ordered by trajectory id."""
    if n_runs < 1:
        raise DomainError("n_runs must be >= 1")
    check_adiabatic(env, params)
    up, down = _rate_tables(env, params)
    seeds = [trajectory_seed(master_seed, i) for i in range(n_runs)]

    def one(i):
        return _record(up, down, env, seeds[i], i)

    if n_workers <= 1:
        return [one(i) for i in range(n_runs)]
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        return list(pool.map(one, range(n_runs)))


def summarize(records) -> TrajectoryStats:
    """Aggregate jump records. Order of ``records`` does not matter."""
    records = sorted(records, key=lambda r: r.trajectory_id)
    if not records:
        raise DomainError("no trajectories to summarize")
    total = math.fsum(r.duration for r in records)
    t_exc = math.fsum(r.time_excited for r in records)
    t_gnd = total - t_exc
    n_up = sum(r.n_up for r in records)
    n_down = sum(len(r.events) - r.n_up for r in records)
    rate = n_up / t_gnd if t_gnd > 0 else 0.0
    rate_err = math.sqrt(n_up) / t_gnd if t_gnd > 0 else 0.0
    occ = t_exc / total
    # renewal estimate: Poisson count times exponential sojourns
    occ_err = occ * math.sqrt(2.0 / n_up) if n_up else 0.0
    delays = np.concatenate([r.pair_delays() for r in records]) if records else np.empty(0)
    return TrajectoryStats(len(records), total, t_gnd, t_exc, n_up, n_down, rate, rate_err, occ, occ_err, delays)


def run_ensemble(
    env: PulseEnvelope,
    params: PhysicalParams,
    n_runs: int,
    master_seed: int,
    n_workers: int = 1,
) -> TrajectoryStats:
    return summarize(simulate_records(env, params, n_runs, master_seed, n_workers))


def pair_delay_histogram(stats: TrajectoryStats, n_bins: int = 50, t_max: Optional[float] = None) -> Histogram:
    """Histogram of up-to-down delays with the maximum-likelihood exponential rate.

    The rate estimate ``n / sum(delays)`` uses every delay, including those
    beyond ``t_max``; the histogram covers ``[0, t_max]`` and an overflow
    count is folded into the last bin so its mass equals the pair count.
    """
    delays = np.asarray(stats.pair_delays, dtype=float)
    if n_bins < 1:
        raise DomainError("n_bins must be >= 1")
    if delays.size == 0:
        edges = np.linspace(0.0, t_max or 1.0, n_bins + 1)
        return Histogram(edges, np.zeros(n_bins, dtype=np.int64), 0, math.nan, math.nan, True)
    if t_max is None:
        t_max = float(delays.max())
    edges = np.linspace(0.0, t_max, n_bins + 1)
    counts, _ = np.histogram(np.minimum(delays, t_max), bins=edges)
    n = delays.size
    rate = n / math.fsum(delays)
    return Histogram(edges, counts, n, rate, rate / math.sqrt(n), False)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trajectory_id", "time", "kind"])
    for r in records:
        for t, kind in r.events:
            writer.writerow([r.trajectory_id, repr(float(t)), kind])
    return buf.getvalue()


def stats_to_dict(stats: TrajectoryStats) -> dict:
    return {
        "n_trajectories": stats.n_trajectories,
        "total_time": stats.total_time,
        "time_ground": stats.time_ground,
        "time_excited": stats.time_excited,
        "n_up": stats.n_up,
        "n_down": stats.n_down,
        "mean_up_rate": stats.mean_up_rate,
        "up_rate_stderr": stats.up_rate_stderr,
        "occupancy_excited": stats.occupancy_excited,
        "occupancy_stderr": stats.occupancy_stderr,
        "n_pairs": int(stats.pair_delays.size),
    }


def stats_to_json(stats: TrajectoryStats) -> str:
    return json.dumps(stats_to_dict(stats), indent=2)
