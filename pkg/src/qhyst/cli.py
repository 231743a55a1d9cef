"""Command-line entry point: `qhyst <command> [flags]`.

Parameters resolve as defaults < preset < config file < explicit flags.  Every
command writes CSV outputs, an optional SVG and a JSON run manifest into the
output directory (``--out-dir``, else $QHYST_OUT_DIR, else ./out).
"""
from __future__ import annotations

import argparse
import math
import os
import re
import sys
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from . import io as qio
from .annealer import AnnealSchedule, ChainError, convergence_check, linear_ladder
from .config import load_config
from .dimer import (DimerParams, asymmetry, bias_sweep, dimer_energy, ground_state_closed_form,
                    ground_state_numeric, triangle_schedule)
from .hysteresis import (CALIBRATION_FILE, CycleAborted, CycleSchedule, LoopSummary, anneal_box,
                         beta_scan, extract_thresholds, load_calibration, mirrored_run,
                         prepare_start, run_cycle, x_mean_of)
from .wavefunction import BoxSpec, EnergyModel, energy

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3


class ValidationError(ValueError):
    """Bad user input; reported with the offending flag and exit code 2."""


# --- parameter registry ----------------------------------------------------

def _float(v):
    return float(v)


def _int(v):
    if isinstance(v, float) and not v.is_integer():
        raise ValueError(f"expected an integer, got {v}")
    return int(v)


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("true", "yes", "on", "1"):
        return True
    if s in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true/false, got {v!r}")


def _floats(v):
    if isinstance(v, (list, tuple)):
        return [float(x) for x in v]
    if isinstance(v, (int, float)):
        return [float(v)]
    return [float(x) for x in str(v).split(",") if x.strip()]


def _temps(v):
    """A ladder size (int) or an explicit comma-separated temperature list."""
    if isinstance(v, (list, tuple)):
        return [float(x) for x in v]
    if isinstance(v, int):
        return v
    s = str(v).strip()
    if "," in s:
        return _floats(s)
    return _int(float(s)) if s.replace(".", "", 1).isdigit() else _floats(s)


@dataclass(frozen=True)
class Param:
    kind: object
    default: object
    help: str


PARAMS: dict[str, Param] = {
    # dimer
    "t_over_u": Param(_floats, [round(0.1 * k, 10) for k in range(16)], "t/U grid"),
    "t": Param(_float, 0.0, "dimer hopping t"),
    "u": Param(_float, 1.0, "dimer on-site nonlinearity U"),
    "eps1": Param(_float, 0.0, "site-1 energy"),
    "eps2_max": Param(_float, 3.0, "sweep amplitude of eps2"),
    "jump_min": Param(_float, None, "jump size for threshold detection"),
    "complex": Param(_bool, False, "complex amplitudes instead of real"),
    # box model
    "gamma": Param(_float, -1.0, "kinetic coefficient (< 0)"),
    "beta": Param(_float, -0.1, "nonlinear coefficient (<= 0)"),
    "box_a": Param(_float, 0.5, "box width a"),
    "n_grid": Param(_int, 512, "quadrature grid points (power of two)"),
    "n_coeffs": Param(_int, 20, "Fourier coefficients per family (M)"),
    "v0": Param(_float, 0.0, "static field for box-anneal"),
    "side": Param(_int, 0, "initial tilt of the start vector (-1, 0, 1)"),
    "doubling": Param(_bool, False, "also anneal with 2M coefficients"),
    "betas": Param(_floats, [-0.1, -0.05, 0.0], "beta list for beta-scan"),
    # schedules
    "temps": Param(_temps, 20, "ladder size or explicit temperature list"),
    "cycles_per_temp": Param(_int, 1000, "sweeps per temperature"),
    "proposal_sigma0": Param(_float, 0.1, "proposal width at T = 1"),
    "sigma_floor": Param(_float, 1e-3, "minimum proposal width"),
    "v_max": Param(_float, 200.0, "cycle amplitude of V0"),
    "steps_per_leg": Param(_int, 50, "field steps per leg"),
    "sweeps_per_step": Param(_int, 200, "hold sweeps per field step"),
    "t0": Param(_float, 0.05, "hold temperature"),
    "mirror": Param(_bool, False, "run the parity image"),
    "seed": Param(_int, 0, "random seed"),
    "svg": Param(_bool, False, "also write an SVG plot"),
    "workers": Param(_int, 1, "worker processes for scans"),
}

SCHEDULE = ["temps", "cycles_per_temp", "proposal_sigma0", "sigma_floor", "seed"]
MODEL = ["gamma", "beta", "box_a", "n_grid", "n_coeffs"]
CYCLE = ["v_max", "steps_per_leg", "sweeps_per_step", "t0"]

COMMANDS: dict[str, list[str]] = {
    "dimer-ground": ["t_over_u", "u", "eps1", "complex"] + SCHEDULE,
    "dimer-hysteresis": ["t", "u", "eps1", "eps2_max", "steps_per_leg", "sweeps_per_step",
                         "t0", "proposal_sigma0", "sigma_floor", "jump_min", "mirror",
                         "complex", "seed", "svg"],
    "box-anneal": MODEL + ["v0", "side", "doubling"] + SCHEDULE + ["workers"],
    "box-hysteresis": MODEL + CYCLE + SCHEDULE + ["jump_min", "mirror", "svg"],
    "beta-scan": ["gamma", "betas", "box_a", "n_grid", "n_coeffs"] + CYCLE + SCHEDULE
                 + ["jump_min", "workers"],
}

# per-command overrides of the registry defaults
COMMAND_DEFAULTS: dict[str, dict] = {
    "dimer-ground": {"cycles_per_temp": 2000, "proposal_sigma0": 0.5},
    "dimer-hysteresis": {"steps_per_leg": 60, "t0": 1e-4, "proposal_sigma0": 0.5,
                         "sigma_floor": 0.05, "jump_min": 0.5},
    "box-hysteresis": {"jump_min": 0.2},
    "beta-scan": {"jump_min": 0.2},
}

CALIBRATED = object()  # placeholder resolved from the calibration file

PRESETS: dict[str, tuple[tuple[str, ...], dict]] = {
    "fig1": (("dimer-ground",),
             {"t_over_u": [round(0.1 * k, 10) for k in range(16)] + [2.0], "u": 1.0}),
    "fig2": (("dimer-hysteresis",),
             {"t": 0.0, "u": 1.0, "eps1": 0.0, "eps2_max": 3.0, "steps_per_leg": 60,
              "t0": 1e-4, "sigma_floor": 0.05}),
    "fig2-mirrored": (("dimer-hysteresis",),
                      {"t": 0.0, "u": 1.0, "eps1": 0.0, "eps2_max": 3.0, "steps_per_leg": 60,
                       "t0": 1e-4, "sigma_floor": 0.05, "mirror": True}),
    "fig2-linear": (("dimer-hysteresis",),
                    {"t": 0.5, "u": 0.0, "eps1": 0.0, "eps2_max": 3.0, "steps_per_leg": 60,
                     "t0": 1e-4, "sigma_floor": 0.05}),
    "fig3": (("box-anneal", "box-hysteresis"),
             {"gamma": -1.0, "beta": -0.1, "box_a": 0.5, "n_coeffs": 20, "temps": 20,
              "cycles_per_temp": 10000, "v_max": 200.0}),
    "fig3-calibrated": (("box-anneal", "box-hysteresis"),
                        {"gamma": -1.0, "beta": CALIBRATED, "box_a": 0.5, "n_coeffs": 20,
                         "temps": 20, "cycles_per_temp": 1000, "v_max": 200.0}),
    "fig4": (("beta-scan",),
             {"gamma": -1.0, "betas": [-0.1, -0.05, 0.0], "box_a": 0.5, "v_max": 200.0}),
    "fig4-calibrated": (("beta-scan",),
                        {"gamma": -1.0, "betas": CALIBRATED, "box_a": 0.5, "v_max": 200.0}),
    "linear": (("box-anneal", "box-hysteresis"),
               {"gamma": -1.0, "beta": 0.0, "box_a": 0.5, "n_coeffs": 20}),
}


def calibrated_beta(path=CALIBRATION_FILE) -> tuple[float, str]:
    """(beta_strong, calibration_version) from the calibration file."""
    try:
        cal = load_calibration(path)
    except OSError as exc:
        raise ChainError(f"calibration file unavailable: {exc}") from exc
    beta = cal.get("beta_strong")
    if not isinstance(beta, (int, float)) or isinstance(beta, bool):
        raise ChainError("calibration file has no bistable beta (beta_strong = none)")
    return float(beta), str(cal.get("calibration_version"))


def calibration_version(path=CALIBRATION_FILE) -> str | None:
    try:
        return str(load_calibration(path).get("calibration_version"))
    except OSError:
        return None


def resolve(command: str, preset: str | None, config: dict | None, flags: dict) -> dict:
    """Merge defaults < preset < config < flags and coerce every value."""
    names = COMMANDS[command]
    out = {n: PARAMS[n].default for n in names}
    out.update({k: v for k, v in COMMAND_DEFAULTS.get(command, {}).items() if k in names})
    layers = []
    if preset is not None:
        if preset not in PRESETS:
            raise ValidationError(f"--preset: unknown preset {preset!r} "
                                  f"(choose from {', '.join(PRESETS)})")
        cmds, values = PRESETS[preset]
        if command not in cmds:
            raise ValidationError(f"--preset: {preset!r} applies to {', '.join(cmds)}, "
                                  f"not {command}")
        values = dict(values)
        if any(v is CALIBRATED for v in values.values()):
            strong, _ = calibrated_beta()
            if values.get("beta") is CALIBRATED:
                values["beta"] = strong
            if values.get("betas") is CALIBRATED:
                values["betas"] = [strong, strong / 2.0, 0.0]
        layers.append(("--preset", values))
    if config:
        unknown = [k for k in config if k not in PARAMS]
        if unknown:
            raise ValidationError(f"--config: unknown keys {', '.join(sorted(unknown))}")
        layers.append(("--config", config))
    layers.append(("flags", flags))
    for source, values in layers:
        for key, value in values.items():
            if key not in names or value is None:
                continue
            try:
                out[key] = PARAMS[key].kind(value)
            except (TypeError, ValueError) as exc:
                flag = "--" + key.replace("_", "-")
                raise ValidationError(f"{flag}: {exc} (from {source})") from exc
    _validate(command, out)
    return out


def _check(ok: bool, key: str, message: str):
    if not ok:
        raise ValidationError(f"--{key.replace('_', '-')}: {message}")


def _validate(command: str, p: dict):
    for key in ("gamma", "beta", "box_a", "u", "t", "t0", "v_max", "eps1", "eps2_max",
                "proposal_sigma0", "sigma_floor", "v0", "jump_min"):
        if key in p and p[key] is not None:
            _check(math.isfinite(p[key]), key, f"must be finite, got {p[key]}")
    if "gamma" in p:
        _check(p["gamma"] < 0, "gamma", "must be negative")
    if "beta" in p:
        _check(p["beta"] <= 0, "beta", "must be <= 0")
    if "betas" in p:
        _check(len(p["betas"]) > 0, "betas", "needs at least one value")
        _check(all(math.isfinite(b) and b <= 0 for b in p["betas"]), "betas",
               "every value must be finite and <= 0")
    if "box_a" in p:
        _check(p["box_a"] > 0, "box_a", "must be positive")
    if "n_grid" in p:
        n = p["n_grid"]
        _check(n >= 64 and n & (n - 1) == 0, "n_grid", "must be a power of two >= 64")
    if "n_coeffs" in p:
        _check(p["n_coeffs"] >= 4, "n_coeffs", "must be >= 4")
    if "temps" in p:
        t = p["temps"]
        if isinstance(t, int):
            _check(t >= 2, "temps", "ladder needs at least 2 temperatures")
        else:
            _check(len(t) >= 1 and all(x >= 0 and math.isfinite(x) for x in t), "temps",
                   "temperatures must be finite and >= 0")
            _check(t[-1] == 0.0, "temps", "the last temperature must be 0")
    for key in ("cycles_per_temp", "sweeps_per_step"):
        if key in p:
            _check(p[key] >= 1, key, "must be >= 1")
    if "steps_per_leg" in p:
        _check(p["steps_per_leg"] >= 2, "steps_per_leg", "must be >= 2")
    for key in ("t0", "v_max", "proposal_sigma0", "sigma_floor", "eps2_max"):
        if key in p:
            _check(p[key] > 0, key, "must be positive")
    for key in ("u", "t"):
        if key in p:
            _check(p[key] >= 0, key, "must be >= 0")
    if "t_over_u" in p:
        _check(len(p["t_over_u"]) > 0 and all(x >= 0 for x in p["t_over_u"]), "t_over_u",
               "needs at least one value, all >= 0")
        _check(p["u"] > 0, "u", "must be positive for a t/U grid")
    if "side" in p:
        _check(p["side"] in (-1, 0, 1), "side", "must be -1, 0 or 1")
    if "workers" in p:
        _check(p["workers"] >= 1, "workers", "must be >= 1")
    if p.get("jump_min") is not None:
        _check(p["jump_min"] > 0, "jump_min", "must be positive")


# --- builders --------------------------------------------------------------

def schedule_of(p: dict) -> AnnealSchedule:
    temps = p["temps"]
    temps = linear_ladder(temps) if isinstance(temps, int) else tuple(temps)
    return AnnealSchedule(temps, p["cycles_per_temp"], p["proposal_sigma0"], p["sigma_floor"],
                          p["seed"])


def model_of(p: dict, v0: float = 0.0) -> EnergyModel:
    return EnergyModel(p["gamma"], p["beta"], v0, BoxSpec(p["box_a"], p["n_grid"]))


def cycle_of(p: dict) -> CycleSchedule:
    return CycleSchedule(v_max=p["v_max"], steps_per_leg=p["steps_per_leg"],
                         sweeps_per_step=p["sweeps_per_step"], t0=p["t0"],
                         proposal_sigma0=p["proposal_sigma0"], sigma_floor=p["sigma_floor"])


def summary_footer(s: LoopSummary) -> dict:
    return {
        "threshold_up": s.threshold_up, "threshold_down": s.threshold_down,
        "loop_area": s.loop_area, "jumped_up": s.jumped_up, "jumped_down": s.jumped_down,
        "ambiguous_up": s.ambiguous_up, "ambiguous_down": s.ambiguous_down,
        "jumped": s.jumped, "width": s.width,
    }


def _direction_labels(directions, up: str, down: str) -> list[str]:
    return [up if d > 0 else (down if d < 0 else "start") for d in directions]


# --- commands: each returns the list of files written -----------------------

def run_dimer_ground(p: dict, out: Path) -> list[Path]:
    sched = schedule_of(p)
    rows = []
    for r in sorted(p["t_over_u"]):
        params = DimerParams(p["eps1"], p["eps1"], r * p["u"], p["u"])
        amps = ground_state_numeric(params, sched, complex_amplitudes=p["complex"])
        rows.append((r, ground_state_closed_form(params), asymmetry(amps),
                     dimer_energy(params, amps)))
    cols = ["t_over_u", "s_closed_form", "s_numeric", "energy"]
    return [qio.write_csv(out / "dimer_ground.csv", cols, rows)]


def run_dimer_hysteresis(p: dict, out: Path) -> list[Path]:
    params = DimerParams(p["eps1"], p["eps1"], p["t"], p["u"])
    amp = p["eps2_max"]
    sign = -1.0 if p["mirror"] else 1.0
    sched = p["eps1"] + sign * triangle_schedule(amp, -amp, p["steps_per_leg"])
    trace = bias_sweep(params, sched, p["t0"], p["seed"], start_site=2 if p["mirror"] else 1,
                       sweeps_per_step=p["sweeps_per_step"], sigma0=p["proposal_sigma0"],
                       sigma_floor=p["sigma_floor"], mirror=p["mirror"],
                       complex_amplitudes=p["complex"])
    summary = extract_thresholds(trace, p["jump_min"])
    labels = _direction_labels(trace.directions, "forward", "backward")
    rows = zip(trace.eps2, trace.s, trace.energy, labels)
    files = [qio.write_csv(out / "dimer_hysteresis.csv", ["eps2", "s_signed", "energy", "leg"],
                           rows, summary_footer(summary))]
    if p["svg"]:
        svg = qio.svg_polyline(trace.eps2, trace.s, xlabel="eps2", ylabel="S",
                               title="dimer bias sweep", y_range=(-1.0, 1.0))
        files.append(qio.atomic_write(out / "dimer_hysteresis.svg", svg))
    return files


def run_box_anneal(p: dict, out: Path) -> list[Path]:
    model = model_of(p, p["v0"])
    sched = schedule_of(p)
    coeffs = anneal_box(model, p["n_coeffs"], sched, side=p["side"])
    footer = None
    if p["doubling"]:
        rep = convergence_check(model, sched, m_small=p["n_coeffs"], workers=p["workers"],
                                side=p["side"])
        footer = {"m_small": rep.m_small, "m_large": rep.m_large, "e_small": rep.e_small,
                  "e_large": rep.e_large, "x_mean_small": rep.observable_small,
                  "x_mean_large": rep.observable_large, "energy_delta": rep.energy_delta,
                  "x_mean_delta": rep.observable_delta, "relative_delta": rep.relative_delta}
    row = (energy(coeffs, model), x_mean_of(coeffs, model.box))
    return [qio.write_csv(out / "box_anneal.csv", ["final_energy", "x_mean"], [row], footer),
            qio.write_coefficients(out / "box_coefficients.csv", coeffs)]


def run_box_hysteresis(p: dict, out: Path) -> list[Path]:
    model = model_of(p)
    cycle = cycle_of(p)
    start = prepare_start(model, p["n_coeffs"], cycle, p["seed"], schedule=schedule_of(p))
    try:
        if p["mirror"]:
            trace = mirrored_run(model, start, cycle, p["seed"])
        else:
            trace = run_cycle(model, start, cycle, p["seed"])
    except CycleAborted as exc:
        _write_box_trace(exc.trace, None, out / "box_hysteresis.partial.csv")
        raise
    summary = extract_thresholds(trace, p["jump_min"])
    files = [_write_box_trace(trace, summary, out / "box_hysteresis.csv")]
    if p["svg"]:
        svg = qio.svg_polyline(trace.v0, trace.x_mean, xlabel="V0", ylabel="<x>/a",
                               title=f"box field cycle, beta = {p['beta']:.6g}",
                               y_range=(-0.5, 0.5))
        files.append(qio.atomic_write(out / "box_hysteresis.svg", svg))
    return files


def _write_box_trace(trace, summary, path) -> Path:
    labels = _direction_labels(trace.directions, "up", "down")
    rows = zip(range(len(trace)), trace.v0, trace.x_mean, trace.energy, trace.acceptance,
               labels)
    cols = ["step", "v0", "x_mean", "energy", "acceptance", "leg"]
    return qio.write_csv(path, cols, rows, summary_footer(summary) if summary else None)


def run_beta_scan(p: dict, out: Path) -> list[Path]:
    box = BoxSpec(p["box_a"], p["n_grid"])
    summaries = beta_scan(p["gamma"], p["betas"], box, cycle_of(p), p["seed"],
                          m=p["n_coeffs"], jump_min=p["jump_min"], prep=schedule_of(p),
                          workers=p["workers"])
    errors = [s.error for s in summaries if s.error]
    rows = [(s.beta, s.threshold_up, s.threshold_down, s.loop_area, s.jumped)
            for s in summaries]
    footer = {f"width[{i}]": s.width for i, s in enumerate(summaries)}
    path = qio.write_csv(out / "beta_scan.csv",
                         ["beta", "threshold_up", "threshold_down", "loop_area", "jumped"],
                         rows, footer)
    if errors:
        raise ChainError("; ".join(errors))
    return [path]


RUNNERS = {
    "dimer-ground": run_dimer_ground,
    "dimer-hysteresis": run_dimer_hysteresis,
    "box-anneal": run_box_anneal,
    "box-hysteresis": run_box_hysteresis,
    "beta-scan": run_beta_scan,
}

BOX_COMMANDS = ("box-anneal", "box-hysteresis", "beta-scan")


def execute(command: str, params: dict, out_dir: Path) -> tuple[list[Path], Path]:
    """Run a resolved command; returns (outputs, manifest path)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t_start = time.perf_counter()
    files = RUNNERS[command](params, out_dir)
    duration = time.perf_counter() - t_start
    cal = calibration_version() if command in BOX_COMMANDS else None
    manifest = qio.write_manifest(out_dir / f"{command}.manifest.json", command, params, files,
                                  duration, cal, __version__)
    return files, manifest


def replay(manifest_path, out_dir=None) -> tuple[bool, dict[str, tuple[str, str]]]:
    """Rerun a manifest; returns (all identical, {name: (recorded, replayed) hash})."""
    man = qio.read_manifest(manifest_path)
    command = man["command"]
    if command not in COMMANDS:
        raise ValidationError(f"manifest: unknown command {command!r}")
    params = resolve(command, None, None, man["params"])
    if out_dir is None:
        out_dir = Path(tempfile.mkdtemp(prefix="qhyst-replay-"))
    files, _ = execute(command, params, Path(out_dir))
    fresh = {f.name: qio.sha256(f) for f in files}
    diff = {}
    for name, digest in man["outputs"].items():
        got = fresh.get(name, "missing")
        if got != digest:
            diff[name] = (digest, got)
    return not diff and set(fresh) == set(man["outputs"]), diff


# --- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qhyst", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, keys in COMMANDS.items():
        sp = sub.add_parser(name)
        sp.add_argument("--preset", default=None, help="named parameter bundle")
        sp.add_argument("--config", default=None, help="key = value config file")
        sp.add_argument("--out-dir", default=None, help="output directory")
        for key in keys:
            flag = "--" + key.replace("_", "-")
            par = PARAMS[key]
            if par.kind is _bool:
                sp.add_argument(flag, dest=key, nargs="?", const=True, default=None,
                                type=_bool_arg, help=par.help)
            else:
                sp.add_argument(flag, dest=key, default=None, type=str, help=par.help)
    rp = sub.add_parser("replay", help="rerun a manifest and compare output hashes")
    rp.add_argument("manifest")
    rp.add_argument("--out-dir", default=None)
    return parser


def _bool_arg(text: str) -> bool:
    try:
        return _bool(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def default_out_dir() -> Path:
    return Path(os.environ.get("QHYST_OUT_DIR") or "out")


_NEGATIVE_LIST = re.compile(r"^-[0-9.]+([eE][-+]?[0-9]+)?(,-?[0-9.]+([eE][-+]?[0-9]+)?)*,?$")


def _join_negative_values(argv: list[str]) -> list[str]:
    """Let `--betas -20,0` work: argparse would read '-20,0' as an option."""
    out = []
    for arg in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NEGATIVE_LIST.match(arg):
            out[-1] = f"{out[-1]}={arg}"
        else:
            out.append(arg)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "replay":
            ok, diff = replay(args.manifest, args.out_dir)
            for name, (want, got) in diff.items():
                print(f"{name}: recorded {want[:12]} replayed {got[:12]}", file=sys.stderr)
            print("replay identical" if ok else "replay differs")
            return EXIT_OK if ok else EXIT_RUNTIME
        config = None
        if args.config:
            try:
                config = load_config(args.config)
            except (OSError, ValueError) as exc:
                raise ValidationError(f"--config: {exc}") from exc
        flags = {k: getattr(args, k) for k in COMMANDS[args.command]}
        params = resolve(args.command, args.preset, config, flags)
        out_dir = Path(args.out_dir) if args.out_dir else default_out_dir()
        files, manifest = execute(args.command, params, out_dir)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ChainError, CycleAborted, FloatingPointError, ArithmeticError, OSError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        # library-level validation not caught by the flag checks
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for f in files + [manifest]:
        print(f)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
