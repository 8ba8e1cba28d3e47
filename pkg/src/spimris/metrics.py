"""Spectral-efficiency formulas, evaluated in the log domain.

Every determinant goes through a pivoted-factorization log-determinant and
the pattern sums through log-sum-exp, so the values stay finite where the
plain determinants overflow (Nbar = 16 at high SNR).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .beamforming import FdBeamformer, fd_alignment
from .errors import ContractViolation, NumericError

__all__ = [
    "SeInputs",
    "covariance_mi",
    "logdet2",
    "se_spim",
    "se_spim_from_covariances",
    "se_mimo",
    "se_mimo_from_covariance",
    "se_fd",
    "se_beamformer",
    "theorem1_rhs",
    "se_spim_mu",
    "sinr_mu",
]

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class SeInputs:
    """Cascaded channel, per-pattern beamformers, and the noise floor."""

    h: np.ndarray                 # (Nbar, N)
    f_list: list[np.ndarray]      # S hybrid beamformers, each (N, N_S)
    sigma2: float
    n_s: int

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ContractViolation("sigma2 must be positive")
        if not self.f_list:
            raise ContractViolation("at least one beamformer required")


def covariance_mi(h: np.ndarray, f: np.ndarray, sigma2: float, n_s: int) -> np.ndarray:
    """Received covariance M = sigma2*I + (1/N_S) H F F^H H^H (Hermitian PD)."""
    hf = h @ f
    m = (hf @ hf.conj().T) / n_s
    m = 0.5 * (m + m.conj().T)
    return m + sigma2 * np.eye(h.shape[0])


def logdet2(m: np.ndarray) -> float | np.ndarray:
    """Base-2 log-determinant via pivoted LU; supports stacked matrices."""
    sign, logabs = np.linalg.slogdet(m)
    if np.any(np.real(sign) <= 0) or not np.all(np.isfinite(logabs)):
        raise NumericError("log-determinant of a non-positive-definite matrix")
    return logabs / _LN2


def _lse2(x: np.ndarray, axis=-1) -> np.ndarray:
    """log2(sum(2^x)) along an axis, overflow-safe."""
    peak = np.max(x, axis=axis, keepdims=True)
    out = peak.squeeze(axis) + np.log2(np.sum(np.exp2(x - peak), axis=axis))
    return out


def se_spim_from_covariances(ms: np.ndarray, sigma2: float) -> float:
    """SPIM SE from the stacked pattern covariances (S, Nbar, Nbar):

    log2(S / (2*sigma2)^Nbar) - (1/S) sum_i log2( sum_j 1/|M_i + M_j| ).
    """
    s, n_bar = ms.shape[0], ms.shape[1]
    pair_ld = logdet2(ms[:, None, :, :] + ms[None, :, :, :])  # (S, S)
    inner = _lse2(-pair_ld, axis=1)  # log2 sum_j 1/|Mi+Mj|
    return float(
        np.log2(s) - n_bar * np.log2(2.0 * sigma2) - np.mean(inner)
    )


def se_spim(inputs: SeInputs) -> float:
    """SE of the SPIM-aided link (CCMC term plus index-bit lower bound)."""
    ms = np.stack(
        [covariance_mi(inputs.h, f, inputs.sigma2, inputs.n_s) for f in inputs.f_list]
    )
    return se_spim_from_covariances(ms, inputs.sigma2)


def se_mimo_from_covariance(m1: np.ndarray, sigma2: float) -> float:
    """Conventional-beamforming SE log2|M1/sigma2|."""
    return float(logdet2(m1) - m1.shape[0] * np.log2(sigma2))


def se_mimo(inputs: SeInputs) -> float:
    """SE of the conventional hybrid link (first beamformer in the set)."""
    m1 = covariance_mi(inputs.h, inputs.f_list[0], inputs.sigma2, inputs.n_s)
    return se_mimo_from_covariance(m1, inputs.sigma2)


def se_fd(fd: FdBeamformer, sigma2: float, n_s: int) -> float:
    """FD SE from the singular values: sum_k log2(1 + sigma_k^2/(sigma2*N_S))."""
    snrs = fd.singular_values**2 / (sigma2 * n_s)
    return float(np.sum(np.log1p(snrs)) / _LN2)


def se_beamformer(h: np.ndarray, f: np.ndarray, sigma2: float, n_s: int) -> float:
    """General log-det SE of an arbitrary beamformer on channel h.

    Coincides with se_fd when f holds the top right singular vectors of h;
    used for mismatched beamformers built from imperfect channel estimates.
    """
    return se_mimo_from_covariance(covariance_mi(h, f, sigma2, n_s), sigma2)


def theorem1_rhs(
    fd: FdBeamformer | list[FdBeamformer],
    f_list: list[np.ndarray],
    n_s: int,
) -> float:
    """Lower bound on I_SPIM - I_FD: log2(S/4) - N_S - tau with
    tau = (1/S) log2 prod_i sum_j 2^-(u_i+u_j), u_z = ||V1^H F_z||_F^2.

    A single FdBeamformer scores every pattern against the shared singular
    basis; a list scores each pattern against its own (the relevant basis
    when the RIS is retuned per pattern).
    """
    if isinstance(fd, FdBeamformer):
        u = np.array([fd_alignment(fd, f) for f in f_list])
    else:
        if len(fd) != len(f_list):
            raise ContractViolation("need one basis per pattern")
        u = np.array([fd_alignment(b, f) for b, f in zip(fd, f_list)])
    s = len(f_list)
    tau = float(np.mean(_lse2(-(u[:, None] + u[None, :]), axis=1)))
    return float(np.log2(s / 4.0) - n_s - tau)


def se_spim_mu(gammas: np.ndarray) -> float:
    """Multi-user SPIM SE from the (U, S) table of gamma = 1 + SINR values:

    sum_u [ log2(S/2) - (1/S) sum_i log2( sum_j 1/(gamma_ui + gamma_uj) ) ].

    S = 1 reduces algebraically to sum_u log2(gamma_u); that branch is taken
    exactly.
    """
    gammas = np.atleast_2d(np.asarray(gammas, dtype=float))
    if np.any(gammas < 1.0 - 1e-12):
        raise ContractViolation("gamma = 1 + SINR must be >= 1")
    s = gammas.shape[1]
    if s == 1:
        return float(np.sum(np.log2(gammas[:, 0])))
    inner = _lse2(-np.log2(gammas[:, :, None] + gammas[:, None, :]), axis=2)
    return float(np.sum(np.log2(s / 2.0) - np.mean(inner, axis=1)))


def sinr_mu(
    h_u: np.ndarray,
    analog: np.ndarray,
    digital: np.ndarray,
    combiner: np.ndarray,
    user: int,
    sigma2: float,
) -> float:
    """Per-user SINR of the combiner-projected signal with 1/U power split."""
    n_users = digital.shape[1]
    row = combiner.conj() @ h_u @ analog
    amps = np.abs(row @ digital) ** 2
    signal = amps[user] / n_users
    interference = (amps.sum() - amps[user]) / n_users
    return float(signal / (interference + sigma2))
