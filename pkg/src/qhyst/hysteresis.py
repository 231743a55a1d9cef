"""Field cycles over the nonlinear box, threshold extraction and beta scans."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import annealer
from .annealer import AnnealSchedule, ChainError, ChainState
from .dimer import leg_directions
from .wavefunction import (BoxObjective, BoxSpec, EnergyModel, FourierCoefficients,
                           expectation_x, parity_mirror, to_grid)

CALIBRATION_FILE = Path(__file__).parent / "data" / "calibration.txt"


@dataclass(frozen=True)
class CycleSchedule:
    v_max: float = 200.0
    steps_per_leg: int = 50
    pattern: tuple[float, ...] = (0.0, 1.0, -1.0, 1.0)
    sweeps_per_step: int = 200
    t0: float = 0.05
    proposal_sigma0: float = 0.1
    sigma_floor: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "pattern", tuple(float(p) for p in self.pattern))
        if not self.v_max > 0:
            raise ValueError(f"v_max must be positive, got {self.v_max}")
        if int(self.steps_per_leg) < 2:
            raise ValueError(f"steps_per_leg must be >= 2, got {self.steps_per_leg}")
        if len(self.pattern) < 2:
            raise ValueError("pattern needs at least two turning points")
        if not self.t0 > 0:
            raise ValueError(f"hold temperature t0 must be positive, got {self.t0}")
        if int(self.sweeps_per_step) < 1:
            raise ValueError("sweeps_per_step must be >= 1")

    def values(self) -> tuple[np.ndarray, np.ndarray]:
        """(v0 per step, leg index per step); the first point is the start value."""
        n = int(self.steps_per_leg)
        k = np.arange(1, n + 1)
        vs = [np.array([self.pattern[0] * self.v_max])]
        legs = [np.array([0])]
        for i, (p, q) in enumerate(zip(self.pattern, self.pattern[1:])):
            vs.append((p + (q - p) * k / n) * self.v_max)
            legs.append(np.full(n, i))
        return np.concatenate(vs), np.concatenate(legs)

    def negated(self) -> "CycleSchedule":
        return replace(self, pattern=tuple(-p for p in self.pattern))


@dataclass(frozen=True, eq=False)
class SweepTrace:
    v0: np.ndarray
    x_mean: np.ndarray
    energy: np.ndarray
    acceptance: np.ndarray
    legs: np.ndarray
    seed: int = 0
    model: EnergyModel | None = None
    final: FourierCoefficients | None = None

    @property
    def control(self) -> np.ndarray:
        return self.v0

    @property
    def observable(self) -> np.ndarray:
        return self.x_mean

    @property
    def directions(self) -> np.ndarray:
        return leg_directions(self.v0, self.legs)

    def __len__(self):
        return self.v0.size

    def mirrored(self) -> "SweepTrace":
        return replace(self, v0=-self.v0, x_mean=-self.x_mean)

    def head(self, n: int) -> "SweepTrace":
        return replace(self, v0=self.v0[:n], x_mean=self.x_mean[:n], energy=self.energy[:n],
                       acceptance=self.acceptance[:n], legs=self.legs[:n])


class CycleAborted(RuntimeError):
    def __init__(self, message: str, trace: SweepTrace):
        super().__init__(message)
        self.trace = trace


@dataclass(frozen=True)
class LoopSummary:
    threshold_up: float
    threshold_down: float
    loop_area: float
    jumped_up: bool
    jumped_down: bool
    ambiguous_up: bool = False
    ambiguous_down: bool = False
    beta: float | None = None
    error: str | None = None

    @property
    def jumped(self) -> bool:
        return self.jumped_up and self.jumped_down

    @property
    def width(self) -> float:
        """Coercive width threshold_up - threshold_down, 0 without two jumps."""
        if not self.jumped:
            return 0.0
        return self.threshold_up - self.threshold_down


def x_mean_of(coeffs: FourierCoefficients, box: BoxSpec) -> float:
    return expectation_x(to_grid(coeffs, box))


def start_vector(m: int, side: int = 0) -> np.ndarray:
    """Lowest cosine mode, tilted toward side -1 (left) or +1 (right)."""
    v = np.zeros(2 * m)
    v[0] = 1.0
    v[m] = 0.5 * side
    return v


def anneal_box(model: EnergyModel, m: int, schedule: AnnealSchedule, *, side: int = 0,
               bias: float = 0.0, initial: FourierCoefficients | None = None,
               mirror: bool = False) -> FourierCoefficients:
    """FMC ground state at ``model.v0``; ``bias`` is a transient extra field."""
    if schedule.temps[-1] != 0.0:
        raise ValueError("ground-state schedule must end at T = 0")
    biased = model.with_v0(model.v0 + bias)
    obj = BoxObjective(biased, m)
    v = initial.resized(m).as_vector() if initial is not None else start_vector(m, side)
    state = ChainState.start(obj, v, schedule.seed)
    state = annealer.anneal(obj, state, schedule, mirror=parity_mirror(m) if mirror else None)
    return FourierCoefficients.from_vector(state.params)


PREP_SCHEDULE = AnnealSchedule(cycles_per_temp=500, proposal_sigma0=0.1, sigma_floor=1e-3)


def prepare_start(model: EnergyModel, m: int, cycle: CycleSchedule, seed: int,
                  side: int = -1, schedule: AnnealSchedule = PREP_SCHEDULE,
                  mirror: bool = False) -> FourierCoefficients:
    """Localize the start state on ``side`` with a bias of 1% of v_max."""
    v_first = cycle.values()[0][0]
    bias = 0.01 * cycle.v_max * side
    return anneal_box(model.with_v0(v_first), m, schedule.with_seed(seed), side=side,
                      bias=bias, mirror=mirror)


def run_cycle(model: EnergyModel, coeffs_init: FourierCoefficients, cycle: CycleSchedule,
              seed: int, mirror: bool = False) -> SweepTrace:
    """Step the field through the cycle, holding at T0 after every step."""
    vs, legs = cycle.values()
    m = coeffs_init.m
    mir = parity_mirror(m) if mirror else None
    box = model.box
    rows = []
    params = coeffs_init.as_vector()
    rng_state = ChainState.start(lambda p: 0.0, params, seed).rng_state

    def partial():
        arr = np.array(rows, dtype=float).reshape(-1, 3)
        return SweepTrace(vs[:len(rows)].copy(), arr[:, 0], arr[:, 1], arr[:, 2],
                          legs[:len(rows)].copy(), seed, model,
                          FourierCoefficients.from_vector(params))

    for v in vs:
        obj = BoxObjective(model.with_v0(v), m)
        e = obj(params)
        try:
            if not math.isfinite(e):
                raise ChainError(f"non-finite energy {e} entering V0={v}")
            state = annealer.hold(ChainState(params, e, 0, 0, rng_state), obj, cycle.t0,
                                  cycle.sweeps_per_step, sigma0=cycle.proposal_sigma0,
                                  sigma_floor=cycle.sigma_floor, mirror=mir)
        except ChainError as exc:
            raise CycleAborted(f"cycle aborted at V0={v}: {exc}", partial()) from exc
        params, rng_state = state.params, state.rng_state
        coeffs = FourierCoefficients.from_vector(params)
        rows.append((x_mean_of(coeffs, box), obj(params), state.acceptance))
    return partial()


def _leg_branch(trace, leg: int) -> tuple[np.ndarray, np.ndarray]:
    """Control/observable of one leg, including the turning point before it."""
    sel = np.flatnonzero(trace.legs == leg)
    if sel[0] > 0:
        sel = np.concatenate([[sel[0] - 1], sel])
    return np.asarray(trace.control)[sel], np.asarray(trace.observable)[sel]


def _jumps(ctrl: np.ndarray, obs: np.ndarray, jump_min: float) -> list[float]:
    d = np.diff(obs)
    return [0.5 * (ctrl[i] + ctrl[i + 1]) for i in np.flatnonzero(np.abs(d) > jump_min)]


def loop_area(ctrl_down, obs_down, ctrl_up, obs_up) -> float:
    """Trapezoid of (falling branch - rising branch) over their common range."""
    od, ou = np.argsort(ctrl_down, kind="stable"), np.argsort(ctrl_up, kind="stable")
    cd, xd = np.asarray(ctrl_down)[od], np.asarray(obs_down)[od]
    cu, xu = np.asarray(ctrl_up)[ou], np.asarray(obs_up)[ou]
    lo, hi = max(cd[0], cu[0]), min(cd[-1], cu[-1])
    if not hi > lo:
        return 0.0
    grid = np.union1d(cd, cu)
    grid = grid[(grid >= lo) & (grid <= hi)]
    diff = np.interp(grid, cd, xd) - np.interp(grid, cu, xu)
    return float(np.trapezoid(diff, grid))


def extract_thresholds(trace, jump_min: float = 0.2) -> LoopSummary:
    """Coercive thresholds and loop area from the last rising and falling legs.

    Works for any trace exposing ``control``, ``observable`` and ``legs``
    (box SweepTrace or dimer DimerSweepTrace).
    """
    if len(trace) == 0:
        raise ValueError("empty trace")
    dirs = trace.directions
    legs = np.asarray(trace.legs)
    rising = [lg for lg in np.unique(legs) if dirs[legs == lg][0] > 0]
    falling = [lg for lg in np.unique(legs) if dirs[legs == lg][0] < 0]
    nan = float("nan")
    up = down = nan
    j_up = j_down = amb_up = amb_down = False
    if rising:
        ju = _jumps(*_leg_branch(trace, rising[-1]), jump_min)
        j_up, amb_up = bool(ju), len(ju) > 1
        up = ju[0] if len(ju) == 1 else nan
    if falling:
        jd = _jumps(*_leg_branch(trace, falling[-1]), jump_min)
        j_down, amb_down = bool(jd), len(jd) > 1
        down = jd[0] if len(jd) == 1 else nan
    area = 0.0
    if rising and falling:
        area = loop_area(*_leg_branch(trace, falling[-1]), *_leg_branch(trace, rising[-1]))
    return LoopSummary(up, down, area, j_up, j_down, amb_up, amb_down)


def mirrored_run(model: EnergyModel, coeffs_init: FourierCoefficients, cycle: CycleSchedule,
                 seed: int) -> SweepTrace:
    """Parity image of run_cycle: mirrored start, negated pattern, mirrored proposals."""
    return run_cycle(model, coeffs_init.mirrored(), cycle.negated(), seed, mirror=True)


class _BetaRun:
    def __init__(self, gamma, box, cycle, seed, m, jump_min, prep):
        self.gamma, self.box, self.cycle, self.seed = gamma, box, cycle, seed
        self.m, self.jump_min, self.prep = m, jump_min, prep

    def __call__(self, beta) -> tuple[LoopSummary, SweepTrace | None]:
        model = EnergyModel(self.gamma, float(beta), 0.0, self.box)
        try:
            start = prepare_start(model, self.m, self.cycle, self.seed, schedule=self.prep)
            trace = run_cycle(model, start, self.cycle, self.seed)
        except (ChainError, CycleAborted) as exc:
            nan = float("nan")
            return LoopSummary(nan, nan, nan, False, False, beta=float(beta),
                               error=str(exc)), None
        return replace(extract_thresholds(trace, self.jump_min), beta=float(beta)), trace


def beta_scan(gamma: float, betas, box: BoxSpec, cycle: CycleSchedule, seed: int = 0, *,
              m: int = 20, jump_min: float = 0.2, prep: AnnealSchedule = PREP_SCHEDULE,
              workers: int | None = None, return_traces: bool = False):
    """One LoopSummary per beta, all with the same cycle and seed."""
    betas = [float(b) for b in betas]
    if not betas:
        raise ValueError("betas must be non-empty")
    if any(b > 0 for b in betas):
        raise ValueError("every beta must be <= 0")
    out = annealer.map_chains(_BetaRun(gamma, box, cycle, seed, m, jump_min, prep), betas,
                              workers)
    if return_traces:
        return [s for s, _ in out], [t for _, t in out]
    return [s for s, _ in out]


@dataclass(frozen=True)
class CalibrationRecord:
    gamma: float
    a: float
    betas: tuple[float, ...]
    order_parameter: tuple[float, ...]
    probe_area: tuple[float, ...]
    area_floor: float
    beta_strong: float | None
    probe_cycle: CycleSchedule = field(default_factory=CycleSchedule)
    m: int = 20
    seeds: tuple[int, ...] = (0,)

    @property
    def found(self) -> bool:
        return self.beta_strong is not None


def bifurcation_scan(gamma: float, box: BoxSpec, beta_range, schedule: AnnealSchedule, *,
                     probe_cycle: CycleSchedule | None = None, area_floor: float | None = None,
                     seeds=(0, 1, 2), m: int = 20, workers: int | None = None
                     ) -> CalibrationRecord:
    """Localization order parameter and probe-loop area along a beta range.

    The order parameter is the mean |<x>/a| of FMC ground states at V0 = 0
    annealed from random coefficients.  The returned ``beta_strong`` is the
    weakest beta whose probe-cycle loop area exceeds ``area_floor`` (default:
    5% of the largest possible area, 2 v_max * 1).
    """
    betas = [float(b) for b in beta_range]
    if not betas:
        raise ValueError("beta_range must be non-empty")
    if any(abs(b2) < abs(b1) for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("beta_range must be sorted toward stronger nonlinearity")
    probe = probe_cycle or CycleSchedule(v_max=200.0, steps_per_leg=25, sweeps_per_step=200)
    floor = 0.1 * probe.v_max if area_floor is None else float(area_floor)
    seeds = tuple(int(s) for s in seeds)

    order = []
    for beta in betas:
        model = EnergyModel(gamma, beta, 0.0, box)
        vals = annealer.map_chains(_RandomStartAnneal(model, m, schedule), list(seeds), workers)
        order.append(float(np.mean(np.abs(vals))))
    summaries = beta_scan(gamma, betas, box, probe, seeds[0], m=m, prep=schedule,
                          workers=workers)
    areas = [s.loop_area for s in summaries]
    strong = next((b for b, ar in zip(betas, areas) if ar > floor), None)
    return CalibrationRecord(gamma, box.a, tuple(betas), tuple(order), tuple(areas), floor,
                             strong, probe, m, seeds)


class _RandomStartAnneal:
    def __init__(self, model, m, schedule):
        self.model, self.m, self.schedule = model, m, schedule

    def __call__(self, seed):
        rng = np.random.default_rng(seed)
        init = FourierCoefficients.from_vector(rng.standard_normal(2 * self.m))
        coeffs = anneal_box(self.model, self.m, self.schedule.with_seed(seed), initial=init)
        return x_mean_of(coeffs, self.model.box)


# calibration file: plain `key = value` lines, '#' comments

def write_calibration(record: CalibrationRecord, path=CALIBRATION_FILE,
                      version: str = "1") -> Path:
    from .config import dump_config

    path = Path(path)
    p = record.probe_cycle
    data = {
        "calibration_version": version,
        "gamma": record.gamma, "box_a": record.a, "n_coeffs": record.m,
        "betas": list(record.betas),
        "order_parameter": list(record.order_parameter),
        "probe_area": list(record.probe_area),
        "area_floor": record.area_floor,
        "beta_strong": "none" if record.beta_strong is None else record.beta_strong,
        "probe_v_max": p.v_max, "probe_steps_per_leg": p.steps_per_leg,
        "probe_sweeps_per_step": p.sweeps_per_step, "probe_t0": p.t0,
        "seeds": list(record.seeds),
    }
    header = "calibrated working point of the nonlinear box (weakest beta whose probe loop exceeds the area floor)"
    dump_config(data, path, header=header)
    return path


def load_calibration(path=CALIBRATION_FILE) -> dict:
    from .config import load_config

    return load_config(path)
