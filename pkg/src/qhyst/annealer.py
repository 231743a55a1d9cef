"""Metropolis simulated annealing over real parameter vectors.

An objective is any callable ``f(params) -> float``.  Objectives may also
provide

* ``gauge(params) -> params``: applied after every full sweep (used to keep
  scale-invariant parametrizations at unit length), and
* ``run_block(params, idx, steps, uniforms, temp, sweep_len)``: a compiled
  fast path returning ``(energy, n_accept, n_done, status)`` that must follow
  exactly the same proposal/acceptance rules as the Python loop below.

Random numbers are drawn in fixed chunks (indices, then normals, then
uniforms) from a PCG64 generator whose state travels with the chain, so a
seed fully determines the trajectory.
"""
from __future__ import annotations

import copy
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

CHUNK_SWEEPS = 1024


class ChainError(RuntimeError):
    """The objective produced a non-finite energy."""


def linear_ladder(n: int = 20, t_max: float = 1.0) -> tuple[float, ...]:
    return tuple(float(t) for t in np.linspace(t_max, 0.0, n))


def geometric_ladder(n: int = 20, t_max: float = 1.0, t_min: float = 1e-3) -> tuple[float, ...]:
    """Geometric descent t_max -> t_min in n-1 steps, followed by T = 0."""
    return tuple(float(t) for t in np.geomspace(t_max, t_min, n - 1)) + (0.0,)


@dataclass(frozen=True)
class AnnealSchedule:
    temps: tuple[float, ...] = linear_ladder(20)
    cycles_per_temp: int = 1000
    proposal_sigma0: float = 0.1
    sigma_floor: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        temps = tuple(float(t) for t in self.temps)
        object.__setattr__(self, "temps", temps)
        if not temps:
            raise ValueError("schedule needs at least one temperature")
        if any(t < 0 or not math.isfinite(t) for t in temps):
            raise ValueError("temperatures must be finite and >= 0")
        if any(b > a for a, b in zip(temps, temps[1:])):
            raise ValueError("temperatures must be non-increasing")
        if int(self.cycles_per_temp) < 1:
            raise ValueError(f"cycles_per_temp must be >= 1, got {self.cycles_per_temp}")
        if not self.sigma_floor > 0 or self.proposal_sigma0 < 0:
            raise ValueError("proposal widths must be positive")

    def sigma(self, temp: float) -> float:
        return proposal_width(temp, self.proposal_sigma0, self.sigma_floor)

    def with_seed(self, seed: int) -> "AnnealSchedule":
        return replace(self, seed=int(seed))


def proposal_width(temp: float, sigma0: float, floor: float) -> float:
    return max(sigma0 * temp, floor)


def accept_move(delta_e: float, temp: float, u: float) -> bool:
    """Metropolis rule; at T = 0 only strictly downhill moves pass."""
    if temp == 0.0:
        return delta_e < 0.0
    if delta_e <= 0.0:
        return True
    return u < math.exp(-delta_e / temp)


@dataclass(frozen=True, eq=False)
class ChainState:
    params: np.ndarray
    energy: float
    accept_count: int = 0
    propose_count: int = 0
    rng_state: dict | None = None

    def __post_init__(self):
        p = np.array(self.params, dtype=float)
        p.setflags(write=False)
        object.__setattr__(self, "params", p)

    @classmethod
    def start(cls, objective: Callable, params, seed: int) -> "ChainState":
        p = np.asarray(params, dtype=float)
        e = float(objective(p))
        if not math.isfinite(e):
            raise ChainError(f"non-finite initial energy {e}")
        rng = np.random.Generator(np.random.PCG64(seed))
        return cls(p, e, 0, 0, rng.bit_generator.state)

    def generator(self) -> np.random.Generator:
        rng = np.random.Generator(np.random.PCG64())
        rng.bit_generator.state = copy.deepcopy(self.rng_state)
        return rng

    @property
    def acceptance(self) -> float:
        return self.accept_count / self.propose_count if self.propose_count else 0.0

    def reset_counts(self) -> "ChainState":
        return replace(self, accept_count=0, propose_count=0)


Mirror = tuple[np.ndarray, np.ndarray]


def _draw(rng: np.random.Generator, n_params: int, n_steps: int, sigma: float,
          mirror: Mirror | None):
    idx = rng.integers(0, n_params, size=n_steps)
    steps = sigma * rng.standard_normal(n_steps)
    uniforms = rng.random(n_steps)
    if mirror is not None:
        perm, signs = mirror
        steps = np.asarray(signs)[idx] * steps
        idx = np.asarray(perm)[idx]
    return idx.astype(np.int64), steps, uniforms


def _python_block(objective, params, energy, idx, steps, uniforms, temp, sweep_len):
    gauge = getattr(objective, "gauge", None)
    n_acc = 0
    for k in range(idx.size):
        trial = params.copy()
        trial[idx[k]] += steps[k]
        e_t = float(objective(trial))
        if not math.isfinite(e_t):
            return params, energy, n_acc, k, 1
        if accept_move(e_t - energy, temp, uniforms[k]):
            params, energy = trial, e_t
            n_acc += 1
        if gauge is not None and (k + 1) % sweep_len == 0:
            params = gauge(params)
            energy = float(objective(params))
    return params, energy, n_acc, idx.size, 0


def _advance(state: ChainState, objective, temp: float, n_sweeps: int, sigma: float,
             mirror: Mirror | None = None, n_steps: int | None = None,
             compiled: bool = True) -> ChainState:
    n = state.params.size
    sweep_len = n
    total = n_sweeps * n if n_steps is None else n_steps
    rng = state.generator()
    params = state.params.copy()
    energy = state.energy
    acc, prop = state.accept_count, state.propose_count
    fast = getattr(objective, "run_block", None) if compiled else None
    chunk = CHUNK_SWEEPS * n
    done = 0
    while done < total:
        size = min(chunk, total - done)
        idx, steps, uniforms = _draw(rng, n, size, sigma, mirror)
        if fast is not None:
            energy, n_acc, n_done, status = fast(params, idx, steps, uniforms, temp, sweep_len)
        else:
            params, energy, n_acc, n_done, status = _python_block(
                objective, params, energy, idx, steps, uniforms, temp, sweep_len)
        acc += int(n_acc)
        prop += int(n_done)
        if status:
            raise ChainError(
                f"non-finite energy at T={temp} after {prop} proposals "
                f"(index {int(idx[n_done])}, step {steps[n_done]:.3g})")
        done += size
    return ChainState(params, float(energy), acc, prop, rng.bit_generator.state)


def metropolis_step(state: ChainState, objective, temp: float, *, sigma0: float = 0.1,
                    sigma_floor: float = 1e-3, mirror: Mirror | None = None) -> ChainState:
    """A single proposal at temperature ``temp``."""
    if temp < 0:
        raise ValueError(f"temperature must be >= 0, got {temp}")
    return _advance(state, objective, temp, 0, proposal_width(temp, sigma0, sigma_floor),
                    mirror, n_steps=1, compiled=False)


def anneal(objective, initial: ChainState, schedule: AnnealSchedule,
           mirror: Mirror | None = None, compiled: bool = True) -> ChainState:
    state = initial
    for temp in schedule.temps:
        state = _advance(state, objective, temp, int(schedule.cycles_per_temp),
                         schedule.sigma(temp), mirror, compiled=compiled)
    return state


def hold(state: ChainState, objective, t0: float, sweeps: int, *, sigma0: float = 0.1,
         sigma_floor: float = 1e-3, mirror: Mirror | None = None,
         compiled: bool = True) -> ChainState:
    """Fixed-temperature sweeps probing the stability of the current state."""
    if not t0 > 0:
        raise ValueError(f"hold temperature must be positive, got T0={t0}")
    if sweeps < 0:
        raise ValueError("sweeps must be >= 0")
    return _advance(state, objective, t0, int(sweeps),
                    proposal_width(t0, sigma0, sigma_floor), mirror, compiled=compiled)


def spawn_seeds(seed: int, n: int) -> list[int]:
    """Independent child seeds for parallel chains (SeedSequence stream splitting)."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [int(c.generate_state(1, np.uint64)[0]) for c in children]


def map_chains(fn: Callable, items: Sequence, workers: int | None = None) -> list:
    """Run independent chains, returning results in input order."""
    if not workers or workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


@dataclass(frozen=True)
class ConvergenceReport:
    m_small: int
    m_large: int
    e_small: float
    e_large: float
    observable_small: float
    observable_large: float
    relative_delta: float
    energy_delta: float = 0.0
    observable_delta: float = 0.0

    def __post_init__(self):
        if self.m_large != 2 * self.m_small:
            raise ValueError("m_large must equal 2 * m_small")


def relative_change(small: float, large: float, floor: float = 0.0) -> float:
    denom = max(abs(large), floor)
    if denom == 0.0:
        return 0.0 if small == large else math.inf
    return abs(small - large) / denom


def convergence_check(problem, schedule: AnnealSchedule, m_small: int = 20,
                      workers: int | None = None, **kwargs) -> ConvergenceReport:
    """Anneal the same problem with m_small and 2*m_small coefficients per family.

    ``problem`` is an EnergyModel (box) or DimerParams (fixed two components,
    so both halves coincide).
    """
    from .dimer import DimerParams, ground_state_numeric, asymmetry, dimer_energy
    from .wavefunction import EnergyModel

    if m_small < 4:
        raise ValueError(f"m_small must be >= 4, got {m_small}")
    if isinstance(problem, DimerParams):
        amps = ground_state_numeric(problem, schedule)
        e, s = dimer_energy(problem, amps), asymmetry(amps)
        return ConvergenceReport(m_small, 2 * m_small, e, e, s, s, 0.0)
    if not isinstance(problem, EnergyModel):
        raise TypeError(f"unsupported problem type {type(problem).__name__}")
    runs = map_chains(_ConvergenceRun(problem, schedule, kwargs), [m_small, 2 * m_small],
                      workers)
    (e1, x1), (e2, x2) = runs
    de = relative_change(e1, e2)
    dx = relative_change(x1, x2, floor=kwargs.get("observable_floor", 0.05))
    return ConvergenceReport(m_small, 2 * m_small, e1, e2, x1, x2, max(de, dx), de, dx)


class _ConvergenceRun:
    def __init__(self, model, schedule, kwargs):
        self.model, self.schedule = model, schedule
        self.kwargs = {k: v for k, v in kwargs.items() if k != "observable_floor"}

    def __call__(self, m):
        from .hysteresis import anneal_box
        from .wavefunction import expectation_x, to_grid, energy

        coeffs = anneal_box(self.model, m, self.schedule, **self.kwargs)
        return energy(coeffs, self.model), expectation_x(to_grid(coeffs, self.model.box))
