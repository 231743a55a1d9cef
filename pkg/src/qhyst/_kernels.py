"""Compiled Metropolis inner loops.

Each kernel consumes pre-drawn proposals (index, step, uniform) so that the
random stream is owned by the caller and identical across the compiled and
pure-Python paths.  Parameters are renormalized to unit length at the end of
every sweep; both objectives are scale invariant.

Return codes: 0 ok, 1 non-finite trial energy (``n_done`` marks where).
"""
import numpy as np
from numba import njit


@njit(cache=True)
def _accept(de, temp, u):
    if temp == 0.0:
        return de < 0.0
    if de <= 0.0:
        return True
    return u < np.exp(-de / temp)


@njit(cache=True)
def _rebuild(c, basis, raw):
    raw[:] = 0.0
    for j in range(c.size):
        cj = c[j]
        if cj != 0.0:
            for i in range(raw.size):
                raw[i] += cj * basis[j, i]


@njit(cache=True)
def _grid_sums(raw, row, delta, w, xw):
    # Q = sum w raw^4, P = sum x w raw^2, both folded over mirror pairs
    n = raw.size
    h = n // 2
    q = 0.0
    p = 0.0
    for i in range(h):
        j = n - 1 - i
        left = raw[i] + delta * row[i]
        right = raw[j] + delta * row[j]
        l2 = left * left
        r2 = right * right
        q += w[i] * (l2 * l2 + r2 * r2)
        p += xw[i] * (l2 - r2)
    return q, p


@njit(cache=True)
def _box_energy(kin, s, q, p, g_abs, c_quartic, c_pot):
    return g_abs * kin / s + c_quartic * q / (s * s) + c_pot * p / s


@njit(cache=True)
def box_block(c, basis, kin_w, w, xw, g_abs, c_quartic, c_pot,
              idx, steps, uniforms, temp, sweep_len):
    """Run len(idx) proposals on the Fourier coefficients ``c`` (in place).

    c_quartic = beta/2 * (2/a)^2 and c_pot = -2 v0/a * (2/a) fold the
    normalization prefactor into the raw-series sums.
    Returns (energy, n_accept, n_done, status).
    """
    n = c.size
    raw = np.empty(basis.shape[1])
    zero_row = np.zeros(basis.shape[1])
    _rebuild(c, basis, raw)
    s = 0.0
    kin = 0.0
    for j in range(n):
        s += c[j] * c[j]
        kin += kin_w[j] * c[j] * c[j]
    q, p = _grid_sums(raw, zero_row, 0.0, w, xw)
    e = _box_energy(kin, s, q, p, g_abs, c_quartic, c_pot)
    n_acc = 0
    for k in range(idx.size):
        j = idx[k]
        d = steps[k]
        old = c[j]
        new = old + d
        ds = new * new - old * old
        s_t = s + ds
        if s_t > 0.0:
            kin_t = kin + kin_w[j] * ds
            q_t, p_t = _grid_sums(raw, basis[j], d, w, xw)
            e_t = _box_energy(kin_t, s_t, q_t, p_t, g_abs, c_quartic, c_pot)
            if not np.isfinite(e_t):
                return e, n_acc, k, 1
            if _accept(e_t - e, temp, uniforms[k]):
                c[j] = new
                row = basis[j]
                for i in range(raw.size):
                    raw[i] += d * row[i]
                s = s_t
                kin = kin_t
                e = e_t
                n_acc += 1
        if (k + 1) % sweep_len == 0:
            nrm = 0.0
            for jj in range(n):
                nrm += c[jj] * c[jj]
            nrm = np.sqrt(nrm)
            for jj in range(n):
                c[jj] /= nrm
            _rebuild(c, basis, raw)
            s = 0.0
            kin = 0.0
            for jj in range(n):
                s += c[jj] * c[jj]
                kin += kin_w[jj] * c[jj] * c[jj]
            q, p = _grid_sums(raw, zero_row, 0.0, w, xw)
            e = _box_energy(kin, s, q, p, g_abs, c_quartic, c_pot)
    return e, n_acc, idx.size, 0


@njit(cache=True)
def dimer_energy_vec(v, eps1, eps2, t, u):
    # v = (z1, z2) real, or (Re z1, Im z1, Re z2, Im z2)
    if v.size == 2:
        s = v[0] * v[0] + v[1] * v[1]
        n1 = v[0] * v[0] / s
        n2 = v[1] * v[1] / s
        re12 = v[0] * v[1] / s
    else:
        s = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]
        n1 = (v[0] * v[0] + v[1] * v[1]) / s
        n2 = (v[2] * v[2] + v[3] * v[3]) / s
        re12 = (v[0] * v[2] + v[1] * v[3]) / s
    return eps1 * n1 + eps2 * n2 + 2.0 * t * re12 - u * (n1 * n1 + n2 * n2)


@njit(cache=True)
def dimer_block(v, eps1, eps2, t, u, idx, steps, uniforms, temp, sweep_len):
    """Metropolis on the dimer amplitude vector; see box_block for returns."""
    e = dimer_energy_vec(v, eps1, eps2, t, u)
    n_acc = 0
    for k in range(idx.size):
        j = idx[k]
        old = v[j]
        v[j] = old + steps[k]
        nz = False
        for jj in range(v.size):
            if v[jj] != 0.0:
                nz = True
        if not nz:
            v[j] = old
        else:
            e_t = dimer_energy_vec(v, eps1, eps2, t, u)
            if not np.isfinite(e_t):
                v[j] = old
                return e, n_acc, k, 1
            if _accept(e_t - e, temp, uniforms[k]):
                e = e_t
                n_acc += 1
            else:
                v[j] = old
        if (k + 1) % sweep_len == 0:
            nrm = 0.0
            for jj in range(v.size):
                nrm += v[jj] * v[jj]
            nrm = np.sqrt(nrm)
            for jj in range(v.size):
                v[jj] /= nrm
            e = dimer_energy_vec(v, eps1, eps2, t, u)
    return e, n_acc, idx.size, 0
