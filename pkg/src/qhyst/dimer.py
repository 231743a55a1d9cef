"""Two-site nonlinear Hubbard dimer: ground states and adiabatic bias sweeps.

Mean-field energy of a normalized state (z1, z2):

    E = eps1 n1 + eps2 n2 + 2 t Re(conj(z1) z2) - U (n1^2 + n2^2),   n_i = |z_i|^2

With the optimal relative phase the energy depends only on s = n1 - n2:

    E(s) = (eps1 + eps2)/2 + (eps1 - eps2) s/2 - t sqrt(1 - s^2) - U (1 + s^2)/2
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import annealer
from .annealer import AnnealSchedule, ChainState

NORM_TOL = 1e-12


@dataclass(frozen=True)
class DimerParams:
    eps1: float = 0.0
    eps2: float = 0.0
    t: float = 1.0
    U: float = 1.0

    def __post_init__(self):
        for name in ("eps1", "eps2", "t", "U"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.t < 0 or self.U < 0:
            raise ValueError(f"t and U must be >= 0, got t={self.t}, U={self.U}")

    def with_eps(self, eps1: float | None = None, eps2: float | None = None) -> "DimerParams":
        return DimerParams(self.eps1 if eps1 is None else float(eps1),
                           self.eps2 if eps2 is None else float(eps2), self.t, self.U)


@dataclass(frozen=True)
class DimerAmplitudes:
    z1: complex
    z2: complex

    def __post_init__(self):
        nrm = abs(self.z1) ** 2 + abs(self.z2) ** 2
        if abs(nrm - 1.0) > NORM_TOL:
            raise ValueError(f"amplitudes not normalized: |z1|^2+|z2|^2 = {nrm!r}")

    @classmethod
    def from_vector(cls, v) -> "DimerAmplitudes":
        """Gauge-fixed amplitudes from (Re z1, Im z1, Re z2, Im z2), any scale."""
        v = np.asarray(v, dtype=float)
        if v.size == 2:
            return cls.gauge_fixed(complex(v[0]), complex(v[1]))
        return cls.gauge_fixed(complex(v[0], v[1]), complex(v[2], v[3]))

    @classmethod
    def gauge_fixed(cls, z1: complex, z2: complex) -> "DimerAmplitudes":
        nrm = math.sqrt(abs(z1) ** 2 + abs(z2) ** 2)
        if nrm == 0:
            raise ValueError("zero state")
        z1, z2 = z1 / nrm, z2 / nrm
        ref = z1 if abs(z1) > 0 else z2
        phase = ref / abs(ref)
        z1, z2 = z1 / phase, z2 / phase
        z1 = complex(abs(z1), 0.0) if abs(z1) > 0 else 0j
        if z1 == 0:
            z2 = complex(abs(z2), 0.0)
        # renormalize once more so rounding stays inside the tolerance
        nrm = math.sqrt(abs(z1) ** 2 + abs(z2) ** 2)
        return cls(z1 / nrm, z2 / nrm)

    @property
    def n1(self) -> float:
        return abs(self.z1) ** 2

    @property
    def n2(self) -> float:
        return abs(self.z2) ** 2

    @property
    def signed_s(self) -> float:
        return self.n1 - self.n2

    def as_vector(self) -> np.ndarray:
        return np.array([self.z1.real, self.z1.imag, self.z2.real, self.z2.imag])


def dimer_energy(params: DimerParams, amps: DimerAmplitudes) -> float:
    n1, n2 = amps.n1, amps.n2
    re12 = (amps.z1.conjugate() * amps.z2).real
    return (params.eps1 * n1 + params.eps2 * n2 + 2.0 * params.t * re12
            - params.U * (n1 * n1 + n2 * n2))


def asymmetry(amps: DimerAmplitudes) -> float:
    return abs(amps.n1 - amps.n2)


def energy_profile(params: DimerParams, s) -> np.ndarray:
    """E(s) with the optimal relative phase, Re(z1* z2) = -sqrt(n1 n2)."""
    s = np.asarray(s, dtype=float)
    return (0.5 * (params.eps1 + params.eps2) + 0.5 * (params.eps1 - params.eps2) * s
            - params.t * np.sqrt(np.clip(1.0 - s * s, 0.0, None))
            - 0.5 * params.U * (1.0 + s * s))


def ground_state_closed_form(params: DimerParams) -> float:
    """S of the symmetric dimer: sqrt(1 - (t/U)^2) below t/U = 1, else 0."""
    if params.eps1 != params.eps2:
        raise ValueError("closed form requires eps1 == eps2")
    if params.t == 0 and params.U == 0:
        raise ValueError("t = U = 0 is degenerate: every S is a ground state")
    if params.U == 0:
        return 0.0
    r = params.t / params.U
    return math.sqrt(1.0 - r * r) if r < 1.0 else 0.0


class DimerObjective:
    """Dimer energy of an unnormalized amplitude vector.

    Length 2: real (z1, z2).  Length 4: (Re z1, Im z1, Re z2, Im z2).
    """

    def __init__(self, params: DimerParams):
        self.params = params

    def __call__(self, v) -> float:
        p = self.params
        v = np.asarray(v, dtype=float)
        s = float(v @ v)
        if v.size == 2:
            n1, n2, re12 = v[0] ** 2 / s, v[1] ** 2 / s, v[0] * v[1] / s
        else:
            n1 = (v[0] ** 2 + v[1] ** 2) / s
            n2 = (v[2] ** 2 + v[3] ** 2) / s
            re12 = (v[0] * v[2] + v[1] * v[3]) / s
        return p.eps1 * n1 + p.eps2 * n2 + 2.0 * p.t * re12 - p.U * (n1 * n1 + n2 * n2)

    @staticmethod
    def gauge(v: np.ndarray) -> np.ndarray:
        return v / np.sqrt(v @ v)

    def run_block(self, v, idx, steps, uniforms, temp, sweep_len):
        from ._kernels import dimer_block

        p = self.params
        return dimer_block(v, p.eps1, p.eps2, p.t, p.U, idx, steps, uniforms,
                           float(temp), int(sweep_len))


def site_swap(n: int):
    """Site exchange as a (permutation, signs) mirror on an amplitude vector."""
    perm = np.array([1, 0]) if n == 2 else np.array([2, 3, 0, 1])
    return perm, np.ones(n)

DEFAULT_SCHEDULE = AnnealSchedule(cycles_per_temp=2000, proposal_sigma0=0.5,
                                  sigma_floor=1e-3, seed=0)


def ground_state_numeric(params: DimerParams, schedule: AnnealSchedule = DEFAULT_SCHEDULE,
                         initial=None, complex_amplitudes: bool = False) -> DimerAmplitudes:
    """Anneal in (z1, z2) space and return gauge-fixed amplitudes.

    The real parametrization is the default: ground states are real up to a
    global phase, and the complex one adds a narrow relative-phase valley that
    slows single-coordinate moves near flat minima (t close to U).
    """
    if schedule.temps[-1] != 0.0:
        raise ValueError("ground-state schedule must end at T = 0")
    state = _start(params, schedule.seed, initial, 4 if complex_amplitudes else 2)
    state = annealer.anneal(DimerObjective(params), state, schedule)
    return DimerAmplitudes.from_vector(state.params)


def _start(params: DimerParams, seed: int, initial=None, n: int = 2) -> ChainState:
    obj = DimerObjective(params)
    if initial is None:
        rng = np.random.Generator(np.random.PCG64(seed))
        v = rng.standard_normal(n)
        state = ChainState.start(obj, v, seed)
        return ChainState(v, state.energy, 0, 0, rng.bit_generator.state)
    return ChainState.start(obj, np.asarray(initial, dtype=float), seed)


@dataclass(frozen=True, eq=False)
class DimerSweepTrace:
    eps2: np.ndarray
    s: np.ndarray
    energy: np.ndarray
    legs: np.ndarray
    acceptance: np.ndarray = field(default=None)
    params: DimerParams | None = None
    seed: int = 0

    # generic trace protocol used by hysteresis.extract_thresholds
    @property
    def control(self) -> np.ndarray:
        return self.eps2

    @property
    def observable(self) -> np.ndarray:
        return self.s

    @property
    def directions(self) -> np.ndarray:
        return leg_directions(self.eps2, self.legs)

    def __len__(self):
        return self.eps2.size


def leg_directions(control: np.ndarray, legs: np.ndarray) -> np.ndarray:
    """+1 for legs where the control rises, -1 where it falls, per point."""
    out = np.zeros(control.size, dtype=int)
    for leg in np.unique(legs):
        sel = np.flatnonzero(legs == leg)
        start = sel[0] - 1 if sel[0] > 0 else sel[0]
        diff = control[sel[-1]] - control[start]
        out[sel] = 1 if diff > 0 else (-1 if diff < 0 else 0)
    return out


def split_legs(values) -> np.ndarray:
    """Leg index per point: a new leg starts whenever the sweep reverses."""
    values = np.asarray(values, dtype=float)
    legs = np.zeros(values.size, dtype=int)
    direction = 0
    leg = 0
    for i in range(1, values.size):
        d = np.sign(values[i] - values[i - 1])
        if d != 0 and direction != 0 and d != direction:
            leg += 1
        if d != 0:
            direction = d
        legs[i] = leg
    return legs


def triangle_schedule(start: float, turn: float, steps: int) -> np.ndarray:
    """start -> turn -> start with `steps` steps per leg."""
    k = np.arange(steps + 1)
    out = start + (turn - start) * k / steps
    back = turn + (start - turn) * k[1:] / steps
    return np.concatenate([out, back])


def bias_sweep(params: DimerParams, eps2_schedule, t0: float, seed: int, *,
               start_site: int = 1, sweeps_per_step: int = 200,
               sigma0: float = 0.5, sigma_floor: float = 0.05,
               prep_schedule: AnnealSchedule | None = None,
               mirror: bool = False, complex_amplitudes: bool = False) -> DimerSweepTrace:
    """Follow the state adiabatically while eps2 walks through ``eps2_schedule``.

    The start state is annealed at the first eps2 from the localized vector on
    ``start_site`` with that site lowered by 0.01 U; the bias is then removed.
    ``mirror=True`` applies the site exchange to every proposal (used to check
    the exchange symmetry with identical random streams).
    """
    if not t0 > 0:
        raise ValueError(f"T0 must be positive for the hold phase, got {t0}")
    sched = np.asarray(eps2_schedule, dtype=float)
    if sched.ndim != 1 or sched.size == 0:
        raise ValueError("eps2 schedule must be a non-empty sequence")
    if start_site not in (1, 2):
        raise ValueError("start_site must be 1 or 2")
    n = 4 if complex_amplitudes else 2
    swap = site_swap(n) if mirror else None
    prep = prep_schedule or AnnealSchedule(cycles_per_temp=200, proposal_sigma0=0.5,
                                           sigma_floor=sigma_floor, seed=seed)
    prep = prep.with_seed(seed)
    bias = 0.01 * params.U
    first = params.with_eps(eps2=sched[0])
    if start_site == 1:
        biased = first.with_eps(eps1=first.eps1 - bias)
        v0 = np.eye(n)[0]
    else:
        biased = first.with_eps(eps2=first.eps2 - bias)
        v0 = np.eye(n)[n // 2]
    state = ChainState.start(DimerObjective(biased), v0, seed)
    state = annealer.anneal(DimerObjective(biased), state, prep, mirror=swap)

    s_out, e_out, acc_out = [], [], []
    for eps2 in sched:
        obj = DimerObjective(params.with_eps(eps2=eps2))
        state = ChainState(state.params, obj(state.params), 0, 0, state.rng_state)
        state = annealer.hold(state, obj, t0, sweeps_per_step, sigma0=sigma0,
                              sigma_floor=sigma_floor, mirror=swap)
        amps = DimerAmplitudes.from_vector(state.params)
        s_out.append(amps.signed_s)
        e_out.append(dimer_energy(obj.params, amps))
        acc_out.append(state.acceptance)
    return DimerSweepTrace(sched.copy(), np.array(s_out), np.array(e_out),
                           split_legs(sched), np.array(acc_out), params, seed)


def spinodal_thresholds(params: DimerParams, n_grid: int = 100_001,
                        tol: float = 1e-9) -> tuple[float, float]:
    """(forward, backward) eps2 values where the metastable branch disappears.

    Forward: electron on site 1 (s > 0) while eps2 is lowered.  The existence of
    a local minimum of E(s) with s > 0 is tested on a dense s-grid and the
    boundary is located by bisection in eps2.  Backward follows by exchange
    symmetry about eps1.
    """
    if params.U == 0:
        return params.eps1, params.eps1
    s = np.linspace(-1.0, 1.0, n_grid)

    def has_site1_minimum(eps2: float) -> bool:
        e = energy_profile(params.with_eps(eps2=eps2), s)
        interior = (e[1:-1] <= e[:-2]) & (e[1:-1] <= e[2:])
        cand = np.flatnonzero(interior) + 1
        if e[-1] <= e[-2]:
            cand = np.append(cand, n_grid - 1)
        return bool(np.any(s[cand] > 0))

    hi = params.eps1
    if not has_site1_minimum(hi):
        return params.eps1, params.eps1
    lo = params.eps1 - 2.0 * params.U - 1.0
    while has_site1_minimum(lo):
        lo -= 2.0 * params.U + 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if has_site1_minimum(mid):
            hi = mid
        else:
            lo = mid
    fwd = 0.5 * (lo + hi)
    return fwd, 2.0 * params.eps1 - fwd
