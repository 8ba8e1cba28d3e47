"""Numba-jitted hot kernels; semantics match spimris.kernels._numpy."""

from __future__ import annotations

import numpy as np
from numba import njit

_TINY = 1e-300
_TWO_PI = 2.0 * np.pi


@njit(cache=True)
def _snap(phase, grid_size):
    step = _TWO_PI / grid_size
    wrapped = phase % _TWO_PI
    k = int(np.floor(wrapped / step + 1e-9)) % grid_size
    return k * step


@njit(cache=True)
def ris_sweep(psi, q, sweeps, grid_size):
    psi = psi.copy()
    m_len = psi.shape[0]
    for _ in range(sweeps):
        for m in range(m_len):
            acc = 0.0 + 0.0j
            for j in range(m_len):
                if j != m:
                    acc += q[m, j] * psi[j]
            if abs(acc) <= _TINY:
                continue
            phase = np.angle(acc)
            if grid_size > 0:
                phase = _snap(phase, grid_size)
            psi[m] = complex(np.cos(phase), np.sin(phase))
    return psi


@njit(cache=True)
def _min_margin(t, kappa, sigma2, n_users):
    margin = np.inf
    for u in range(n_users):
        sig = 0.0
        interf = 0.0
        for v in range(n_users):
            val = t[u, v]
            p = val.real * val.real + val.imag * val.imag
            if v == u:
                sig = p
            else:
                interf += p
        sinr = (sig / n_users) / (interf / n_users + sigma2)
        if sinr - kappa[u] < margin:
            margin = sinr - kappa[u]
    return margin


@njit(cache=True)
def mu_greedy_sweep(psi, z, kappa, sigma2, grid_size, passes):
    psi = psi.copy()
    m_len, n_users, _ = z.shape
    grid = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)
    t = np.zeros((n_users, n_users), dtype=np.complex128)
    for m in range(m_len):
        for u in range(n_users):
            for v in range(n_users):
                t[u, v] += psi[m] * z[m, u, v]
    cand = np.empty((n_users, n_users), dtype=np.complex128)
    for _ in range(passes):
        for m in range(m_len):
            best_margin = _min_margin(t, kappa, sigma2, n_users)
            best_c = -1
            for c in range(grid_size):
                shift = grid[c] - psi[m]
                for u in range(n_users):
                    for v in range(n_users):
                        cand[u, v] = t[u, v] + shift * z[m, u, v]
                margin = _min_margin(cand, kappa, sigma2, n_users)
                if margin > best_margin:
                    best_margin = margin
                    best_c = c
            if best_c >= 0:
                shift = grid[best_c] - psi[m]
                for u in range(n_users):
                    for v in range(n_users):
                        t[u, v] += shift * z[m, u, v]
                psi[m] = grid[best_c]
    return psi
