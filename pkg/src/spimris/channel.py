"""Saleh-Valenzuela two-hop channels and the RIS-cascaded channel.

Downlink matrices are stored; the uplink maps are their plain transposes
(G_BR = H_BR^T, G_RU = H_RU^T). With that convention the BS-side signature
of an uplink arrival at angle theta is the steering vector a(theta), while
the matched *downlink* transmit vector is its conjugate a(-theta). Callers
that build transmit beamformers from estimated uplink angles must negate
the angles (see spimris.beamforming).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .arrays import UlaSpec, UpaSpec, ula_steering, upa_steering
from .errors import ContractViolation

__all__ = [
    "PathSet",
    "ChannelRealization",
    "generate_channel",
    "generate_channel_mu",
    "cascade",
    "perturb_channel",
]

GAIN_STD = 0.2  # path-gain magnitude draw: |g| ~ max(N(1, 0.2^2), 0), uniform phase


@dataclass(frozen=True)
class PathSet:
    """Per-path geometry and gains for one BS-RIS-user link pair."""

    bs_angles: np.ndarray       # (L,) BS-side angles, degrees
    ris_departure: np.ndarray   # (L, 2) RIS (azimuth, elevation) toward BS link
    ris_arrival: np.ndarray     # (L, 2) RIS (azimuth, elevation) on user link
    ue_angles: np.ndarray       # (L,) user-side angles, degrees
    gains_br: np.ndarray        # (L,) complex BS-RIS gains
    gains_ru: np.ndarray        # (L,) complex RIS-user gains

    @property
    def count(self) -> int:
        return int(self.bs_angles.size)


@dataclass(frozen=True)
class ChannelRealization:
    """Downlink matrices H_BR (M x N) and H_RU (Nbar x M) plus their paths."""

    bs: UlaSpec
    ris: UpaSpec
    ue: UlaSpec
    h_br: np.ndarray
    h_ru: np.ndarray
    paths: PathSet

    @property
    def uplink_br(self) -> np.ndarray:
        """Uplink BS-RIS map G_BR = H_BR^T (N x M)."""
        return self.h_br.T

    @property
    def uplink_ru(self) -> np.ndarray:
        """Uplink RIS-user map G_RU = H_RU^T (M x Nbar)."""
        return self.h_ru.T


def _draw_gains(rng: np.random.Generator, count: int) -> np.ndarray:
    mag = np.maximum(rng.normal(1.0, GAIN_STD, count), 0.0)
    return mag * np.exp(2j * np.pi * rng.uniform(size=count))


def _draw_angles(rng: np.random.Generator, count: int, grid=None) -> np.ndarray:
    if grid is not None:
        return rng.choice(grid.angles_deg, size=count, replace=False)
    return rng.uniform(-90.0, 90.0, count)


def _steering_bank(spec: UlaSpec, angles: np.ndarray) -> np.ndarray:
    return np.stack([ula_steering(spec, a) for a in angles], axis=1)


def _ris_bank(spec: UpaSpec, angle_pairs: np.ndarray) -> np.ndarray:
    return np.stack([upa_steering(spec, az, el) for az, el in angle_pairs], axis=1)


def _uplink_br(bs: UlaSpec, ris: UpaSpec, paths: PathSet, total_paths: int) -> np.ndarray:
    """G_BR = sqrt(N*M/L_BR) * sum_l alpha_l a_BS(theta_l) a_RIS^H(dep_l)."""
    a_bs = _steering_bank(bs, paths.bs_angles)
    a_ris = _ris_bank(ris, paths.ris_departure)
    scale = np.sqrt(bs.num_elements * ris.size / total_paths)
    return scale * (a_bs * paths.gains_br) @ a_ris.conj().T


def _uplink_ru(ris: UpaSpec, ue: UlaSpec, paths: PathSet) -> np.ndarray:
    """G_RU = sqrt(M*Nbar/L_RU) * sum_l beta_l a_RIS(arr_l) a_UE^H(theta_l)."""
    a_ris = _ris_bank(ris, paths.ris_arrival)
    a_ue = _steering_bank(ue, paths.ue_angles)
    scale = np.sqrt(ris.size * ue.num_elements / paths.count)
    return scale * (a_ris * paths.gains_ru) @ a_ue.conj().T


def _draw_paths(
    rng, count, grid=None, gains_br=None, gains_ru=None
) -> PathSet:
    gbr = _draw_gains(rng, count) if gains_br is None else np.asarray(gains_br, complex)
    gru = _draw_gains(rng, count) if gains_ru is None else np.asarray(gains_ru, complex)
    return PathSet(
        bs_angles=_draw_angles(rng, count, grid),
        ris_departure=np.column_stack(
            [_draw_angles(rng, count), _draw_angles(rng, count)]
        ),
        ris_arrival=np.column_stack(
            [_draw_angles(rng, count), _draw_angles(rng, count)]
        ),
        ue_angles=_draw_angles(rng, count),
        gains_br=gbr,
        gains_ru=gru,
    )


def generate_channel(
    bs: UlaSpec,
    ris: UpaSpec,
    ue: UlaSpec,
    num_paths: int,
    rng: np.random.Generator | int,
    grid=None,
    gains_br=None,
    gains_ru=None,
) -> ChannelRealization:
    """Draw one realization with L_BR = L_RU = num_paths.

    Angles are i.i.d. uniform on [-90, 90] degrees unless `grid` is given,
    in which case BS-side angles are drawn from the grid without replacement
    (used by acquisition tests that need on-grid truth). Explicit gain
    vectors override the random draw.
    """
    if num_paths < 1:
        raise ContractViolation("num_paths must be >= 1")
    rng = np.random.default_rng(rng) if isinstance(rng, (int, np.integer)) else rng
    paths = _draw_paths(rng, num_paths, grid, gains_br, gains_ru)
    g_br = _uplink_br(bs, ris, paths, num_paths)
    g_ru = _uplink_ru(ris, ue, paths)
    return ChannelRealization(bs, ris, ue, g_br.T, g_ru.T, paths)


def generate_channel_mu(
    bs: UlaSpec,
    ris: UpaSpec,
    ue: UlaSpec,
    num_paths: int,
    num_users: int,
    rng: np.random.Generator | int,
    grid=None,
) -> list[ChannelRealization]:
    """Multi-user draw: one realization per user sharing the BS-RIS channel.

    The shared H_BR carries L_bar = U*L paths (U independent L-path blocks,
    one per user) with the sqrt(N*M/L_bar) scaling; each user gets its own
    L-path H_RU.
    """
    if num_users < 1:
        raise ContractViolation("num_users must be >= 1")
    rng = np.random.default_rng(rng) if isinstance(rng, (int, np.integer)) else rng
    blocks = [_draw_paths(rng, num_paths, grid) for _ in range(num_users)]
    total = num_users * num_paths
    g_br = sum(_uplink_br(bs, ris, p, total) for p in blocks)
    out = []
    for paths in blocks:
        g_ru = _uplink_ru(ris, ue, paths)
        out.append(ChannelRealization(bs, ris, ue, g_br.T, g_ru.T, paths))
    return out


def cascade(ch: ChannelRealization, psi: np.ndarray) -> np.ndarray:
    """Cascaded downlink channel H = H_RU diag(psi) H_BR (Nbar x N)."""
    psi = np.asarray(psi)
    if psi.shape != (ch.ris.size,):
        raise ContractViolation(
            f"psi length {psi.shape} does not match M={ch.ris.size}"
        )
    return (ch.h_ru * psi[None, :]) @ ch.h_br


def perturb_channel(
    ch: ChannelRealization,
    snr_h_db: float | None,
    rng: np.random.Generator | int,
) -> ChannelRealization:
    """Add white complex Gaussian error to both matrices at the given matrix SNR.

    Per-entry error variance is ||X||_F^2 / (numel(X) * 10^(snr_h/10)).
    `snr_h_db=None` means a perfect channel (returned unchanged). The path
    list is kept verbatim; it describes the unperturbed geometry.
    """
    if snr_h_db is None:
        return ch
    rng = np.random.default_rng(rng) if isinstance(rng, (int, np.integer)) else rng

    def noisy(x: np.ndarray) -> np.ndarray:
        var = np.linalg.norm(x) ** 2 / (x.size * 10.0 ** (snr_h_db / 10.0))
        e = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
        return x + np.sqrt(var / 2.0) * e

    return replace(ch, h_br=noisy(ch.h_br), h_ru=noisy(ch.h_ru))
