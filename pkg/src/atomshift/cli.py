"""Command-line front end.

Every subcommand resolves its parameters from built-in defaults, then an
optional ``--config`` file, then explicit flags (highest priority), runs the
computation and writes one artifact: a JSON summary (``--format json``) or a
CSV table (``--format csv``). A JSON summary can be passed back through
``--config`` to reproduce the same artifact.

Config files hold one ``key = value`` per line; ``#`` starts a comment.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from ._validation import DomainError, ResolutionError
from .bloch import (
    DensityMatrix2,
    bloch_evolve,
    bloch_steady_state,
    oracle_output_amplitude,
    output_phase,
    reflection_coefficient,
)
from .cat import AtomQubit, cat_fidelity_bound, cat_output, coherent_overlap, conditional_phase, gate_phase
from .dressed import (
    beta_for_theta,
    diagonalize_semiclassical,
    dressed_frame,
    dressed_interaction_coefficients,
    jump_rate_down,
    jump_rate_up,
    mixing_angle,
)
from .pairs import (
    GridSpec,
    biphoton_freq_numeric,
    biphoton_time,
    biphoton_time_grid,
    compare_spectra,
    pair_rate,
    sideband_frequencies,
)
from .params import PhysicalParams, PulseEnvelope
from .shift import (
    VARIANTS,
    coherent_shift,
    drive_for_shift,
    instantaneous_jump_rate,
    output_envelope,
    plan_pulse,
    shift_coefficient,
)
from .trajectory import pair_delay_histogram, records_to_csv, simulate_records, stats_to_dict, summarize

OUTPUT_DIR_ENV = "ATOMSHIFT_OUTPUT_DIR"

# keys that control execution, not the computed artifact
_EXECUTION_KEYS = ("config", "output", "workers")


def _complex(text) -> complex:
    if isinstance(text, (list, tuple)):
        re, im = text
        return complex(float(re), float(im))
    if isinstance(text, (int, float, complex)):
        return complex(text)
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _float_list(text) -> list:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def _optional_float(text):
    if text is None or str(text).lower() in ("", "none", "null"):
        return None
    return float(text)


def _optional_complex(text):
    if text is None or (isinstance(text, str) and text.lower() in ("", "none", "null")):
        return None
    return _complex(text)


def _variant(text) -> str:
    if text not in VARIANTS:
        raise argparse.ArgumentTypeError(f"variant must be one of {', '.join(VARIANTS)}")
    return text


def _choice(*choices):
    def parse(text):
        if text not in choices:
            raise argparse.ArgumentTypeError(f"expected one of {', '.join(choices)}, got {text!r}")
        return text

    return parse


# name -> (parser, default, help)
OPTIONS = {
    "gamma": (float, 1.0, "dipole relaxation rate Gamma (spontaneous emission rate is 2 Gamma)"),
    "detuning": (float, 100.0, "detuning omega_delta = omega_atom - omega_light"),
    "beta0": (_complex, 1 + 0j, "drive amplitude beta0 (sqrt of photons per unit time), e.g. 1 or 0.5+0.5j"),
    "theta": (_optional_float, None, "set the drive through the mixing angle instead of beta0"),
    "duration": (float, 100.0, "pulse duration T"),
    "dt": (_optional_float, None, "sample / integration step"),
    "variant": (_variant, "printed", "jump-probability variant: printed or hamiltonian"),
    "target_shift": (float, 1.0, "target |alpha_out - alpha_in|"),
    "p_budget": (float, 0.1, "allowed total jump probability"),
    "plan_detuning": (_optional_float, None, "detuning used to convert the plan into a drive amplitude"),
    "envelope": (_choice("constant", "raised-cosine"), "constant", "envelope shape"),
    "ramp": (float, 0.0, "ramp length of the raised-cosine envelope"),
    "n_runs": (int, 1, "number of trajectories"),
    "seed": (int, 0, "master seed"),
    "bins": (int, 50, "pair-delay histogram bins"),
    "t_max": (_optional_float, None, "upper edge of the pair-delay histogram"),
    "domain": (_choice("time", "frequency"), "time", "grid exported as CSV"),
    "n_points": (int, 8193, "odd number of grid points"),
    "span": (float, 40.0, "half-width of the time window in units of 1/Gamma'"),
    "omega_light": (_optional_float, None, "absolute carrier frequency (for sideband frequencies)"),
    "omega_atom": (_optional_float, None, "absolute atomic frequency (for sideband frequencies)"),
    "alpha": (_complex, 20 + 0j, "coherent amplitude of the pulse"),
    "chi": (_optional_float, None, "conditional phase; defaults to 2 gamma / detuning"),
    "p_jump": (_optional_float, None, "jump probability used for the fidelity bound"),
    "evolve": (_choice("no", "yes"), "no", "also integrate the Bloch equations over the pulse"),
    "detunings": (_float_list, [50.0, 100.0, 500.0], "comma-separated detunings"),
    "betas": (_float_list, [0.1, 1.0], "comma-separated drive magnitudes"),
    "format": (_choice("json", "csv"), "json", "artifact format"),
}

COMMANDS = {
    "dressed": ("dressed-state angle, splitting, jump rates and couplings", ["gamma", "detuning", "beta0", "theta"]),
    "shift": ("coherent shift of a rectangular pulse and its jump probability",
              ["gamma", "detuning", "beta0", "duration", "variant"]),
    "plan": ("pulse length gamma*T reaching a target shift at a jump budget",
             ["target_shift", "p_budget", "variant", "gamma", "plan_detuning"]),
    "trajectory": ("Monte Carlo quantum-jump records",
                   ["gamma", "detuning", "beta0", "theta", "duration", "dt", "envelope", "ramp",
                    "n_runs", "seed", "bins", "t_max"]),
    "pairs": ("two-photon wavefunction of the emitted pairs",
              ["gamma", "detuning", "beta0", "theta", "domain", "n_points", "span", "omega_light", "omega_atom"]),
    "cat": ("conditional phase gate and cat-state overlaps", ["gamma", "detuning", "alpha", "chi", "p_jump"]),
    "oracle": ("optical Bloch steady state and output amplitude",
               ["gamma", "detuning", "beta0", "duration", "dt", "evolve"]),
    "sweep": ("oracle versus dressed-state predictions over a detuning x drive grid",
              ["gamma", "detunings", "betas"]),
}


def _flag(name: str) -> str:
    return "--" + ("detuning" if name == "plan_detuning" else name.replace("_", "-"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atomshift",
        description="Off-resonant coherent light on a single two-level atom: shifts, jumps and photon pairs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for cmd, (help_text, keys) in COMMANDS.items():
        p = sub.add_parser(cmd, help=help_text, description=help_text, argument_default=argparse.SUPPRESS)
        for key in keys:
            conv, default, h = OPTIONS[key]
            p.add_argument(_flag(key), dest=key, type=conv, metavar=key.upper(), help=f"{h} (default: {default})")
        p.add_argument("--format", dest="format", type=OPTIONS["format"][0], metavar="FORMAT",
                       help="artifact format: json or csv (default: json)")
        p.add_argument("--output", "-o", dest="output", metavar="PATH",
                       help=f"artifact path (default: ${OUTPUT_DIR_ENV}/<command>.<format>, else stdout)")
        p.add_argument("--config", dest="config", metavar="FILE",
                       help="key = value config file, or a JSON summary written by this tool")
        if cmd in ("trajectory", "sweep"):
            p.add_argument("--workers", dest="workers", type=int, metavar="N",
                           help="worker threads; results do not depend on it (default: 1)")
    return parser


def read_config(path: str) -> tuple:
    """Return ``(command or None, {key: raw value})`` from a config file or JSON summary."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if "config" in data:
            return data.get("command"), dict(data["config"])
        return None, data
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return None, values


def resolve_config(command: str, ns: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    keys = COMMANDS[command][1] + ["format"]
    cfg = {k: OPTIONS[k][1] for k in keys}
    given = vars(ns)
    if "config" in given:
        try:
            file_cmd, raw = read_config(given["config"])
        except (OSError, ValueError) as exc:
            parser.error(f"cannot read config: {exc}")
        if file_cmd is not None and file_cmd != command:
            parser.error(f"config was written by '{file_cmd}', not '{command}'")
        for key, value in raw.items():
            if key in _EXECUTION_KEYS:
                continue
            if key not in cfg:
                parser.error(f"unknown config key for '{command}': {key}")
            try:
                cfg[key] = OPTIONS[key][0](value) if value is not None else None
            except (argparse.ArgumentTypeError, ValueError, TypeError) as exc:
                parser.error(f"bad value for {key}: {exc}")
    for key in keys:
        if key in given:
            cfg[key] = given[key]
    return cfg


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_jsonable(float(obj.real)), _jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return 0.0 if x == 0 else x
    return obj


def _kv_csv(results: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])

    def walk(prefix, value):
        if isinstance(value, dict):
            for k, v in value.items():
                walk(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and len(value) == 2 and all(isinstance(v, float) for v in value):
            w.writerow([prefix + ".re", repr(value[0])])
            w.writerow([prefix + ".im", repr(value[1])])
        elif isinstance(value, float):
            w.writerow([prefix, repr(value)])
        else:
            w.writerow([prefix, value])

    walk("", _jsonable(results))
    return buf.getvalue()


def _params(cfg) -> PhysicalParams:
    return PhysicalParams(cfg["gamma"], cfg["detuning"])


def _drive(cfg, params) -> complex:
    if cfg.get("theta") is not None:
        return complex(beta_for_theta(params, cfg["theta"]))
    return complex(cfg["beta0"])


def cmd_dressed(cfg, workers):
    params = _params(cfg)
    beta = _drive(cfg, params)
    frame = dressed_frame(params, beta)
    eig = diagonalize_semiclassical(params, beta)
    coeff = dressed_interaction_coefficients(params.gamma, frame.theta, frame.phi)
    return {
        "theta": frame.theta,
        "phi": frame.phi,
        "omega_beta": frame.omega_beta,
        "eigensolver": {"theta": eig.theta, "phi": eig.phi, "omega_beta": eig.omega_beta},
        "jump_rate_up": jump_rate_up(params.gamma, frame.theta),
        "jump_rate_down": jump_rate_down(params.gamma, frame.theta),
        "coefficients": {
            "displacement": coeff.displacement_coeff,
            "conserving": coeff.conserving_coeff,
            "counterrotating": coeff.counterrotating_coeff,
        },
    }, None


def cmd_shift(cfg, workers):
    params = _params(cfg)
    beta0 = complex(cfg["beta0"])
    res = coherent_shift(beta0, cfg["duration"], params)
    probs = {
        v: {"variant": v, "probability": p.probability, "raw": p.raw, "valid": p.valid}
        for v, p in res.variant_probabilities.items()
    }
    env = PulseEnvelope.constant(beta0, cfg["duration"])
    return {
        "delta_alpha": res.delta_alpha,
        "alpha_in": res.alpha_in,
        "alpha_out": res.alpha_out,
        "shift_coefficient": shift_coefficient(params, beta0),
        "beta_out": complex(output_envelope(env, params).samples[0]),
        "selected_variant": cfg["variant"],
        "jump_probability": probs[cfg["variant"]]["probability"],
        "jump_rate": {"variant": cfg["variant"], "rate": instantaneous_jump_rate(params, beta0, cfg["variant"])},
        "variant_probabilities": probs,
    }, None


def cmd_plan(cfg, workers):
    gamma_t = plan_pulse(cfg["target_shift"], cfg["p_budget"], cfg["variant"])
    out = {"gammaT": gamma_t, "variant": cfg["variant"], "duration": gamma_t / cfg["gamma"]}
    if cfg["plan_detuning"] is not None and gamma_t > 0:
        params = PhysicalParams(cfg["gamma"], cfg["plan_detuning"])
        out["beta0"] = drive_for_shift(cfg["target_shift"], out["duration"], params)
    return out, None


def cmd_trajectory(cfg, workers):
    params = _params(cfg)
    beta = _drive(cfg, params)
    if cfg["envelope"] == "constant":
        env = PulseEnvelope.constant(beta, cfg["duration"], cfg["dt"])
    else:
        env = PulseEnvelope.raised_cosine(beta, cfg["duration"], cfg["ramp"], cfg["dt"] or cfg["duration"] / 1000)
    records = simulate_records(env, params, cfg["n_runs"], cfg["seed"], workers)
    stats = summarize(records)
    hist = pair_delay_histogram(stats, cfg["bins"], cfg["t_max"])
    peak_theta = mixing_angle(params, float(np.abs(env.samples).max()))
    results = {
        "envelope_id": env.envelope_id,
        "stats": stats_to_dict(stats),
        "expected_peak": {
            "theta": peak_theta,
            "jump_rate_up": jump_rate_up(params.gamma, peak_theta),
            "jump_rate_down": jump_rate_down(params.gamma, peak_theta),
        },
        "pair_delay_fit": {"rate": hist.rate, "stderr": hist.rate_stderr, "n_pairs": hist.n_pairs},
        "histogram": {"edges": hist.edges, "counts": hist.counts},
        "trajectory_seeds": [r.seed for r in records],
    }
    return results, records_to_csv(records)


def cmd_pairs(cfg, workers):
    params = _params(cfg)
    beta = _drive(cfg, params)
    frame = dressed_frame(params, beta)
    grid = GridSpec(cfg["n_points"], cfg["span"])
    results = {
        "theta": frame.theta,
        "omega_beta": frame.omega_beta,
        "psi0": biphoton_time(0.0, frame, params.gamma),
        "pair_rate": pair_rate(frame, params.gamma),
        "jump_rate_up": jump_rate_up(params.gamma, frame.theta),
    }
    if frame.theta > 0:
        results["comparison"] = compare_spectra(frame, params.gamma).to_dict()
    if cfg["omega_light"] is not None and cfg["omega_atom"] is not None:
        results["sidebands"] = sideband_frequencies(cfg["omega_light"], cfg["omega_atom"])
    if cfg["format"] == "csv":
        g = biphoton_time_grid(frame, params.gamma, grid) if cfg["domain"] == "time" else \
            biphoton_freq_numeric(frame, params.gamma, grid)
        return results, g.to_csv()
    return results, None


def cmd_cat(cfg, workers):
    alpha = complex(cfg["alpha"])
    chi = cfg["chi"] if cfg["chi"] is not None else gate_phase(_params(cfg))
    branches = conditional_phase(chi, alpha, AtomQubit.plus())
    cat = cat_output(alpha, chi)
    (a1, _), (a2, _) = cat.components
    results = {
        "chi": chi,
        "branches": [{"atom": b.atom_state, "weight": b.weight, "alpha": b.alpha} for b in branches],
        "overlap": coherent_overlap(a1, a2),
        "overlap_abs": abs(coherent_overlap(a1, a2)),
        "norm2": cat.norm2,
        "distinguishability": cat.distinguishability(),
    }
    if cfg["p_jump"] is not None:
        results["fidelity_bound"] = cat_fidelity_bound(cfg["p_jump"])
    return results, None


def cmd_oracle(cfg, workers):
    params = _params(cfg)
    beta0 = complex(cfg["beta0"])
    rho = bloch_steady_state(params, beta0)
    results = {
        "rho_ee": rho.rho_ee,
        "rho_ge": rho.rho_ge,
        "beta_out": oracle_output_amplitude(params, beta0),
        "linear_response_beta_out": beta0 - 1j * 2 * params.gamma / params.omega_delta * beta0,
    }
    if beta0 != 0:
        results["output_phase"] = output_phase(params, beta0)
        results["reflection_abs"] = abs(reflection_coefficient(params, beta0))
        results["dressed_rho_ee"] = math.sin(mixing_angle(params, abs(beta0)) / 2) ** 2
    table = None
    if cfg["evolve"] == "yes":
        dt = cfg["dt"] or 0.05 / max(math.sqrt(params.omega_delta**2 + 8 * params.gamma * abs(beta0) ** 2),
                                     2 * params.gamma)
        env = PulseEnvelope.constant(beta0, cfg["duration"])
        series = bloch_evolve(DensityMatrix2.ground(), env, params, dt)
        results["final_rho_ee"] = series.final.rho_ee
        table = series.to_csv()
    return results, table


def _sweep_row(gamma, detuning, beta):
    params = PhysicalParams(gamma, detuning)
    rho = bloch_steady_state(params, beta)
    dressed = math.sin(mixing_angle(params, beta) / 2) ** 2
    phase = output_phase(params, beta)
    linear = -2 * gamma / detuning
    return {
        "gamma": gamma,
        "detuning": detuning,
        "beta0": beta,
        "rho_ee_oracle": rho.rho_ee,
        "rho_ee_dressed": dressed,
        "rho_ee_rel_err": abs(rho.rho_ee - dressed) / dressed,
        "phase_oracle": phase,
        "phase_linear": linear,
        "phase_rel_err": abs(phase - linear) / abs(linear),
        "reflection_abs": abs(reflection_coefficient(params, beta)),
    }


def cmd_sweep(cfg, workers):
    grid = [(d, b) for d in cfg["detunings"] for b in cfg["betas"]]
    if any(b <= 0 for _, b in grid):
        raise DomainError("sweep drive magnitudes must be positive")
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda db: _sweep_row(cfg["gamma"], *db), grid))
    else:
        rows = [_sweep_row(cfg["gamma"], d, b) for d, b in grid]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(rows[0]))
    for row in rows:
        w.writerow([repr(float(v)) for v in row.values()])
    results = {
        "rows": rows,
        "max_rho_ee_rel_err": max(r["rho_ee_rel_err"] for r in rows),
        "max_phase_rel_err": max(r["phase_rel_err"] for r in rows),
    }
    return results, buf.getvalue()


HANDLERS = {
    "dressed": cmd_dressed,
    "shift": cmd_shift,
    "plan": cmd_plan,
    "trajectory": cmd_trajectory,
    "pairs": cmd_pairs,
    "cat": cmd_cat,
    "oracle": cmd_oracle,
    "sweep": cmd_sweep,
}


def render(command: str, cfg: dict, results: dict, table, warning_messages) -> str:
    if cfg["format"] == "csv":
        return table if table is not None else _kv_csv(results)
    summary = {
        "command": command,
        "version": __version__,
        "config": cfg,
        "results": results,
        "warnings": warning_messages,
    }
    return json.dumps(_jsonable(summary), indent=2) + "\n"


def run_command(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    command = ns.command
    del ns.command
    cfg = resolve_config(command, ns, parser)
    workers = max(1, getattr(ns, "workers", 1))
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            results, table = HANDLERS[command](cfg, workers)
    except (DomainError, ResolutionError, ValueError, ZeroDivisionError) as exc:
        print(f"atomshift {command}: error: {exc}", file=sys.stderr)
        return 1
    messages = [str(w.message) for w in caught]
    for m in messages:
        print(f"atomshift {command}: warning: {m}", file=sys.stderr)
    text = render(command, cfg, results, table, messages)

    output = getattr(ns, "output", None)
    if output is None and os.environ.get(OUTPUT_DIR_ENV):
        output = str(Path(os.environ[OUTPUT_DIR_ENV]) / f"{command}.{cfg['format']}")
    if output is None:
        sys.stdout.write(text)
    else:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    return 0


def main(argv=None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
