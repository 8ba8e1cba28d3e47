"""Pure-numpy reference implementations of the hot kernels.

These mirror spimris.kernels._numba exactly; the benchmark in
benchmarks/kernel_bench.py compares the two.
"""

from __future__ import annotations

import numpy as np

_TINY = 1e-300


def _snap(phase: float, grid_size: int) -> float:
    """Floor a phase (wrapped to [0, 2pi)) onto the grid of `grid_size` steps."""
    step = 2.0 * np.pi / grid_size
    k = int(np.floor((phase % (2.0 * np.pi)) / step + 1e-9)) % grid_size
    return k * step


def ris_sweep(
    psi: np.ndarray, q: np.ndarray, sweeps: int, grid_size: int
) -> np.ndarray:
    """Cyclic per-element phase updates maximizing psi^H Q psi.

    Element m is set to the phase of its coupling sum sum_{j!=m} Q[m,j]*psi[j]
    (kept unchanged when the sum vanishes), then floor-snapped onto the
    2pi/grid_size lattice when grid_size > 0.
    """
    psi = psi.copy()
    m_len = psi.shape[0]
    for _ in range(sweeps):
        for m in range(m_len):
            acc = q[m] @ psi - q[m, m] * psi[m]
            if abs(acc) <= _TINY:
                continue
            phase = float(np.angle(acc))
            if grid_size > 0:
                phase = _snap(phase, grid_size)
            psi[m] = complex(np.cos(phase), np.sin(phase))
    return psi


def mu_greedy_sweep(
    psi: np.ndarray,
    z: np.ndarray,
    kappa: np.ndarray,
    sigma2: float,
    grid_size: int,
    passes: int,
) -> np.ndarray:
    """Element-wise exhaustive search over the phase grid maximizing the
    worst-user SINR margin min_u(SINR_u - kappa_u).

    z has shape (M, U, U) with SINR numerators/denominators built from the
    bilinear couplings t[u, u'] = sum_m psi[m] * z[m, u, u'].
    """
    psi = psi.copy()
    m_len, n_users, _ = z.shape
    grid = np.exp(2j * np.pi * np.arange(grid_size) / grid_size)

    def min_margin(tmat):
        power = np.abs(tmat) ** 2
        sig = np.diagonal(power, axis1=-2, axis2=-1)
        interf = power.sum(axis=-1) - sig
        sinr = (sig / n_users) / (interf / n_users + sigma2)
        return (sinr - kappa).min(axis=-1)

    t = np.einsum("m,muv->uv", psi, z)
    for _ in range(passes):
        for m in range(m_len):
            keep = min_margin(t)
            cand = t[None, :, :] + (grid - psi[m])[:, None, None] * z[m][None, :, :]
            margins = min_margin(cand)
            best = int(np.argmax(margins))
            if margins[best] > keep:
                t = cand[best]
                psi[m] = grid[best]
    return psi
