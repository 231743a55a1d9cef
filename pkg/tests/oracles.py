"""Reference computations that share no code with the package.

Frozen numbers were produced by the functions in this file (finite-difference
grids refined until the quoted digits stopped changing).
"""
import math

import mpmath
import numpy as np
from scipy.linalg import eigh_tridiagonal

LINEAR_E0 = 4.0 * math.pi**2  # lowest cosine mode, |gamma| (pi/a)^2 with a = 0.5
SINGLE_MODE_E_BETA_01 = LINEAR_E0 - 0.15  # + beta/2 * 3/(2a) for beta = -0.1
FD_E0 = 39.4784177  # a = 0.5, |gamma| = 1
FD_SLOPE = 1.0972614e-3  # d<x>/a / dV0 at V0 = 0
FD_X_MEAN = {  # <x>/a of the linear ground state at V0
    50.0: 0.0535357350,
    100.0: 0.1003148600,
    200.0: 0.1666622005,
    500.0: 0.2525761522,
    1000.0: 0.3036112977,
}


def fd_linear_box(v0: float, a: float = 0.5, g: float = 1.0, n: int = 4000):
    """(E0, <x>/a) of -g psi'' - (2 v0/a) x psi on a Dirichlet grid."""
    h = a / (n + 1)
    x = -a / 2 + h * np.arange(1, n + 1)
    diag = 2 * g / h**2 - (2 * v0 / a) * x
    off = -g / h**2 * np.ones(n - 1)
    w, v = eigh_tridiagonal(diag, off, select="i", select_range=(0, 0))
    psi = v[:, 0]
    return float(w[0]), float(np.sum(x * psi**2) / np.sum(psi**2) / a)


def dense_quadrature(f, a: float, n: int = 1_000_001) -> float:
    """Simpson's rule on [-a/2, a/2]."""
    x = np.linspace(-a / 2, a / 2, n)
    w = np.ones(n)
    w[1:-1:2], w[2:-1:2] = 4.0, 2.0
    return float(np.sum(w * f(x)) * (x[1] - x[0]) / 3.0)


def series(a_n, b_n, a: float):
    """Normalized series psi(x) written out term by term."""
    a_n, b_n = np.asarray(a_n, float), np.asarray(b_n, float)
    pref = math.sqrt(2.0 / a / (a_n @ a_n + b_n @ b_n))

    def psi(x):
        x = np.asarray(x, float)
        out = np.zeros_like(x)
        for n, c in enumerate(a_n):
            out += c * np.cos((2 * n + 1) * math.pi * x / a)
        for n, c in enumerate(b_n):
            out += c * np.sin(2 * (n + 1) * math.pi * x / a)
        return pref * out

    return psi


def dimer_brute_force_s(eps1: float, eps2: float, t: float, u: float,
                        n_grid: int = 200_001) -> float:
    """|n1 - n2| of the lowest-energy real normalized (z1, z2).

    A dense grid over theta (z1 = cos theta, z2 = sin theta; both signs of z2
    cover the optimal relative phase) brackets the minimum, then golden-section
    search in 60-digit arithmetic refines it.  Extended precision matters at
    t = U, where the energy is quartic in s and double precision cannot
    resolve s below ~1e-4.
    """
    def e(theta, lib=np):
        z1, z2 = lib.cos(theta), lib.sin(theta)
        n1, n2 = z1 * z1, z2 * z2
        return eps1 * n1 + eps2 * n2 + 2 * t * z1 * z2 - u * (n1 * n1 + n2 * n2)

    th = np.linspace(0.0, np.pi, n_grid)
    k = int(np.argmin(e(th)))
    d = th[1] - th[0]
    with mpmath.workdps(60):
        lo, hi = mpmath.mpf(th[k] - d), mpmath.mpf(th[k] + d)
        g = (mpmath.sqrt(5) - 1) / 2
        x1, x2 = hi - g * (hi - lo), lo + g * (hi - lo)
        f1, f2 = e(x1, mpmath), e(x2, mpmath)
        while hi - lo > mpmath.mpf(10) ** -40:
            if f1 < f2:
                hi, x2, f2 = x2, x1, f1
                x1 = hi - g * (hi - lo)
                f1 = e(x1, mpmath)
            else:
                lo, x1, f1 = x1, x2, f2
                x2 = lo + g * (hi - lo)
                f2 = e(x2, mpmath)
        return float(abs(mpmath.cos(2 * (lo + hi) / 2)))


def astroid_spinodal(eps1: float, t: float, u: float) -> tuple[float, float]:
    """Analytic limits of metastability of the mean-field dimer (t < U)."""
    r = t / u
    half_width = 2.0 * u * (1.0 - r ** (2.0 / 3.0)) ** 1.5
    return eps1 - half_width, eps1 + half_width
