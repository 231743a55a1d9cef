"""Fourier-series wavefunctions in a 1D box and the nonlinear energy functional.

The wavefunction is a self-normalizing sum of the odd cosine harmonics
``cos((2n+1) pi x / a)`` and the even sine harmonics ``sin(2(n+1) pi x / a)``,
all of which vanish at ``x = +-a/2``.  Integrals over the grid use a composite
trapezoid rule evaluated as a sum over mirror pairs ``(x_i, -x_i)`` so that a
parity-flipped state produces bit-identical (or exactly negated) results.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np


@dataclass(frozen=True)
class BoxSpec:
    a: float = 0.5
    n_grid: int = 512

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError(f"box length must be positive, got a={self.a}")
        n = int(self.n_grid)
        if n < 64 or n & (n - 1):
            raise ValueError(f"n_grid must be a power of two >= 64, got {self.n_grid}")

    @cached_property
    def nodes(self) -> np.ndarray:
        # integer numerator keeps the grid exactly antisymmetric: x[i] == -x[-1-i]
        n = self.n_grid
        x = (0.5 * self.a) * (2.0 * np.arange(n) - (n - 1)) / (n - 1)
        x.setflags(write=False)
        return x

    @cached_property
    def weights(self) -> np.ndarray:
        w = np.full(self.n_grid, self.a / (self.n_grid - 1))
        w[0] *= 0.5
        w[-1] *= 0.5
        w.setflags(write=False)
        return w


def cos_wavenumbers(m: int, a: float) -> np.ndarray:
    return 2.0 * np.pi / a * (np.arange(m) + 0.5)


def sin_wavenumbers(m: int, a: float) -> np.ndarray:
    return 2.0 * np.pi / a * (np.arange(m) + 1.0)


@dataclass(frozen=True)
class EnergyModel:
    gamma: float = -1.0
    beta: float = -0.1
    v0: float = 0.0
    box: BoxSpec = field(default_factory=BoxSpec)

    def __post_init__(self):
        if not self.gamma < 0:
            raise ValueError(f"gamma must be negative, got {self.gamma}")
        if not self.beta <= 0:
            raise ValueError(f"beta must be <= 0 (self-trapping sign), got {self.beta}")
        if not np.isfinite(self.v0):
            raise ValueError(f"v0 must be finite, got {self.v0}")

    def with_v0(self, v0: float) -> "EnergyModel":
        return EnergyModel(self.gamma, self.beta, float(v0), self.box)


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Cosine coefficients ``a_n`` and sine coefficients ``b_n``, n = 0..M-1."""

    a_n: np.ndarray
    b_n: np.ndarray

    def __post_init__(self):
        a = np.array(self.a_n, dtype=float)
        b = np.array(self.b_n, dtype=float)
        if a.ndim != 1 or a.shape != b.shape or a.size == 0:
            raise ValueError("a_n and b_n must be non-empty 1D arrays of equal length")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients must be finite")
        if not (np.any(a) or np.any(b)):
            raise ValueError("all-zero coefficients do not define a wavefunction")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a_n", a)
        object.__setattr__(self, "b_n", b)

    @property
    def m(self) -> int:
        return self.a_n.size

    @property
    def norm_accum(self) -> float:
        return float(np.sum(self.a_n**2) + np.sum(self.b_n**2))

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.a_n, self.b_n])

    @classmethod
    def from_vector(cls, v) -> "FourierCoefficients":
        v = np.asarray(v, dtype=float)
        if v.ndim != 1 or v.size % 2:
            raise ValueError("coefficient vector must have even length 2M")
        m = v.size // 2
        return cls(v[:m], v[m:])

    @classmethod
    def single_mode(cls, m: int, family: str = "cos", n: int = 0, value: float = 1.0):
        a, b = np.zeros(m), np.zeros(m)
        (a if family == "cos" else b)[n] = value
        return cls(a, b)

    def mirrored(self) -> "FourierCoefficients":
        """Parity image psi(x) -> psi(-x): sine coefficients change sign."""
        return FourierCoefficients(self.a_n, -self.b_n)

    def scaled(self, factor: float) -> "FourierCoefficients":
        return FourierCoefficients(factor * self.a_n, factor * self.b_n)

    def resized(self, m: int) -> "FourierCoefficients":
        """Truncate or zero-pad both families to length m."""
        a, b = np.zeros(m), np.zeros(m)
        k = min(m, self.m)
        a[:k], b[:k] = self.a_n[:k], self.b_n[:k]
        return FourierCoefficients(a, b)


def parity_mirror(m: int) -> tuple[np.ndarray, np.ndarray]:
    """(permutation, signs) describing x -> -x on the coefficient vector."""
    perm = np.arange(2 * m)
    signs = np.concatenate([np.ones(m), -np.ones(m)])
    return perm, signs


def _mode(k: float, sine: bool, x: np.ndarray) -> np.ndarray:
    # evaluate on the left half only and reflect, so cos rows are exactly even
    # and sin rows exactly odd on the grid
    h = x.size // 2
    left = np.sin(k * x[:h]) if sine else np.cos(k * x[:h])
    return np.concatenate([left, (-left if sine else left)[::-1]])


@lru_cache(maxsize=32)
def _basis(m: int, box: BoxSpec) -> np.ndarray:
    x = box.nodes
    rows = [_mode(k, False, x) for k in cos_wavenumbers(m, box.a)]
    rows += [_mode(k, True, x) for k in sin_wavenumbers(m, box.a)]
    out = np.vstack(rows)
    out.setflags(write=False)
    return out


def basis_matrix(m: int, box: BoxSpec) -> np.ndarray:
    """Rows: cos modes 0..m-1 then sin modes 0..m-1, sampled on the grid."""
    return _basis(int(m), box)


def basis_row(index: int, m: int, box: BoxSpec) -> np.ndarray:
    if not 0 <= index < 2 * m:
        raise IndexError(f"basis index {index} out of range for M={m}")
    if index < m:
        return _mode(cos_wavenumbers(m, box.a)[index], False, box.nodes)
    return _mode(sin_wavenumbers(m, box.a)[index - m], True, box.nodes)


def kinetic_weights(m: int, a: float) -> np.ndarray:
    return np.concatenate([cos_wavenumbers(m, a) ** 2, sin_wavenumbers(m, a) ** 2])


def evaluate(coeffs: FourierCoefficients, box: BoxSpec, x) -> np.ndarray | float:
    """Normalized series value at position(s) x."""
    xs = np.asarray(x, dtype=float)
    half = 0.5 * box.a
    if np.any(np.abs(xs) > half * (1 + 1e-12)):
        raise ValueError(f"x outside box [-{half}, {half}]")
    kc = cos_wavenumbers(coeffs.m, box.a)
    ks = sin_wavenumbers(coeffs.m, box.a)
    raw = (np.cos(np.multiply.outer(xs, kc)) @ coeffs.a_n
           + np.sin(np.multiply.outer(xs, ks)) @ coeffs.b_n)
    out = np.sqrt(2.0 / box.a / coeffs.norm_accum) * raw
    return float(out) if out.ndim == 0 else out


def _fold_sum(f: np.ndarray, w: np.ndarray) -> float:
    # sum over mirror pairs; commutative pair sums make the result parity-exact
    h = f.size // 2
    return float(np.sum(w[:h] * (f[:h] + f[::-1][:h])))


def _fold_odd(f: np.ndarray, xw: np.ndarray) -> float:
    # sum of x*w*f with x odd: x_i*(f_i - f_mirror_i) over the left half
    h = f.size // 2
    return float(np.sum(xw[:h] * (f[:h] - f[::-1][:h])))


@dataclass(frozen=True, eq=False)
class GridField:
    """Unnormalized series ``raw`` on the grid plus the cached coefficient norm."""

    raw: np.ndarray
    norm_accum: float
    box: BoxSpec

    @property
    def values(self) -> np.ndarray:
        return np.sqrt(2.0 / self.box.a / self.norm_accum) * self.raw

    @property
    def density(self) -> np.ndarray:
        return (2.0 / self.box.a / self.norm_accum) * self.raw**2


def _accumulate(c: np.ndarray, basis: np.ndarray) -> np.ndarray:
    # row-by-row accumulation (not BLAS) so every grid point sums in the same order
    raw = np.zeros(basis.shape[1])
    for cj, row in zip(c, basis):
        if cj != 0.0:
            raw += cj * row
    return raw


def to_grid(coeffs: FourierCoefficients, box: BoxSpec) -> GridField:
    raw = _accumulate(coeffs.as_vector(), basis_matrix(coeffs.m, box))
    raw.setflags(write=False)
    return GridField(raw, coeffs.norm_accum, box)


def norm(field_: GridField) -> float:
    return _fold_sum(field_.density, field_.box.weights)


def expectation_x(field_: GridField, box: BoxSpec | None = None) -> float:
    """<x>/a by trapezoid quadrature."""
    box = box or field_.box
    return _fold_odd(field_.density, box.nodes * box.weights) / box.a


def apply_coefficient_delta(field_: GridField, coeffs: FourierCoefficients,
                            index: int, delta: float):
    """Shift one coefficient by delta, updating the grid field in O(n_grid)."""
    m = coeffs.m
    row = basis_row(index, m, field_.box)
    v = coeffs.as_vector()
    old = v[index]
    v[index] = old + delta
    if not np.any(v):
        raise ValueError("update would zero every coefficient")
    if delta == 0:
        return field_, coeffs
    raw = field_.raw + delta * row
    raw.setflags(write=False)
    acc = field_.norm_accum + (v[index] ** 2 - old**2)
    return GridField(raw, acc, field_.box), FourierCoefficients.from_vector(v)


def energy_terms(coeffs: FourierCoefficients, model: EnergyModel) -> dict:
    box = model.box
    c = coeffs.as_vector()
    s = float(np.sum(c * c))
    kinetic = abs(model.gamma) * float(np.sum(kinetic_weights(coeffs.m, box.a) * c * c)) / s
    dens = to_grid(coeffs, box).density
    quartic = 0.5 * model.beta * _fold_sum(dens * dens, box.weights)
    potential = -2.0 * model.v0 / box.a * _fold_odd(dens, box.nodes * box.weights)
    return {"kinetic": kinetic, "quartic": quartic, "potential": potential}


def energy(coeffs: FourierCoefficients, model: EnergyModel) -> float:
    """E = |gamma| int psi'^2 + beta/2 int psi^4 - (2 v0/a) int x psi^2."""
    t = energy_terms(coeffs, model)
    return t["kinetic"] + t["quartic"] + t["potential"]


class BoxObjective:
    """Energy of a coefficient vector (cos block then sin block) for annealing."""

    def __init__(self, model: EnergyModel, m: int):
        self.model = model
        self.m = int(m)
        box = model.box
        self._basis = basis_matrix(self.m, box)
        self._kin_w = kinetic_weights(self.m, box.a)
        h = box.n_grid // 2
        self._w = np.ascontiguousarray(box.weights[:h])
        self._xw = np.ascontiguousarray((box.nodes * box.weights)[:h])
        pref = 2.0 / box.a
        self._c_quartic = 0.5 * model.beta * pref * pref
        self._c_pot = -2.0 * model.v0 / box.a * pref

    def __call__(self, params) -> float:
        return energy(FourierCoefficients.from_vector(params), self.model)

    @staticmethod
    def gauge(params: np.ndarray) -> np.ndarray:
        return params / np.sqrt(np.sum(params * params))

    def run_block(self, params, idx, steps, uniforms, temp, sweep_len):
        from ._kernels import box_block

        return box_block(params, self._basis, self._kin_w, self._w, self._xw,
                         abs(self.model.gamma), self._c_quartic, self._c_pot,
                         idx, steps, uniforms, float(temp), int(sweep_len))
