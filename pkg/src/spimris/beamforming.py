"""Beamformer construction: FD (SVD), per-pattern hybrid, and multi-user ZF.

The downlink transmit response of a path estimated at uplink angle theta is
the conjugate steering vector, i.e. the steering vector at -theta (sin is
odd). Pass negated uplink angles to build_steering_bank when constructing
transmit banks; see spimris.channel for the convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import UlaSpec, ula_steering
from .errors import ContractViolation, NumericError
from .patterns import PatternBook

__all__ = [
    "FdBeamformer",
    "PatternBeamformer",
    "MultiUserBeamformers",
    "fd_beamformer",
    "build_steering_bank",
    "hybrid_beamformer",
    "subset_beamformer",
    "build_beamformer_set",
    "fd_alignment",
    "mu_combiner",
    "mu_beamformers",
]

PINV_RCOND = 1e-10


@dataclass(frozen=True)
class FdBeamformer:
    """Top right singular vectors of the cascaded channel plus their sigmas."""

    f: np.ndarray                  # (N, N_S), orthonormal columns
    singular_values: np.ndarray    # (N_S,), descending

    @property
    def n_streams(self) -> int:
        return int(self.f.shape[1])


@dataclass(frozen=True)
class PatternBeamformer:
    """One spatial pattern's analog/baseband pair and their product."""

    a: np.ndarray          # (N, N_RF) constant-modulus columns
    b: np.ndarray          # (N_RF, N_S)
    f: np.ndarray          # a @ b, Frobenius power N_S
    degenerate: bool = False


@dataclass(frozen=True)
class MultiUserBeamformers:
    """Shared analog bank, per-user baseband columns, per-user combiners."""

    a: np.ndarray          # (N, U*L_S)
    b: np.ndarray          # (N_RF, U), column u serves user u
    combiners: np.ndarray  # (Nbar, U) constant-modulus columns
    degenerate: bool = False


def fd_beamformer(h: np.ndarray, n_s: int) -> FdBeamformer:
    """Fully digital beamformer: the n_s leading right singular vectors of h."""
    if n_s > min(h.shape):
        raise ContractViolation(f"n_s={n_s} exceeds min(h.shape)={min(h.shape)}")
    if not np.all(np.isfinite(h)):
        raise NumericError("channel matrix contains non-finite entries")
    _, s, vh = np.linalg.svd(h, full_matrices=False)
    return FdBeamformer(vh[:n_s].conj().T, s[:n_s].copy())


def build_steering_bank(angles_deg, spec: UlaSpec) -> np.ndarray:
    """N x L bank whose column l is the steering vector at angles_deg[l]."""
    return np.stack([ula_steering(spec, a) for a in angles_deg], axis=1)


def subset_beamformer(
    a_c: np.ndarray, subset: tuple[int, ...], fd: FdBeamformer
) -> PatternBeamformer:
    """Hybrid beamformer restricted to the given steering-bank columns.

    B = pinv(A) F scaled so ||A B||_F^2 equals the stream count; rank
    deficiency (coincident angles) falls back to the truncated-SVD
    pseudoinverse and is flagged.
    """
    a = a_c[:, list(subset)]
    svals = np.linalg.svd(a, compute_uv=False)
    degenerate = bool(svals[-1] < PINV_RCOND * svals[0])
    b = np.linalg.pinv(a, rcond=PINV_RCOND) @ fd.f
    power = np.linalg.norm(a @ b)
    if power < 1e-30:
        raise NumericError("hybrid beamformer has no overlap with the FD target")
    b = b * (np.sqrt(fd.n_streams) / power)
    return PatternBeamformer(a, b, a @ b, degenerate)


def hybrid_beamformer(
    a_c: np.ndarray, book: PatternBook, index: int, fd: FdBeamformer
) -> PatternBeamformer:
    """Per-pattern hybrid beamformer F_i = A_C E_i B_i."""
    if not 0 <= index < book.size:
        raise ContractViolation(f"pattern index {index} out of range")
    return subset_beamformer(a_c, book.patterns[index], fd)


def build_beamformer_set(
    a_c: np.ndarray, book: PatternBook, fd: FdBeamformer
) -> list[PatternBeamformer]:
    return [subset_beamformer(a_c, p, fd) for p in book.patterns]


def fd_alignment(fd: FdBeamformer, f: np.ndarray) -> float:
    """Alignment u = ||V1^H F||_F^2 used by the SE bound."""
    return float(np.linalg.norm(fd.f.conj().T @ f) ** 2)


def mu_combiner(spec: UlaSpec, angle_deg: float) -> np.ndarray:
    """Constant-modulus user combiner: conjugate steering vector at the path."""
    return ula_steering(spec, angle_deg).conj()


def mu_beamformers(
    cascaded: list[np.ndarray],
    analog: np.ndarray,
    combiners: np.ndarray,
    total_power: float,
    loading: float = 0.0,
) -> MultiUserBeamformers:
    """Zero-forcing baseband on the combiner-projected effective channels.

    Rows g_u = c_u^H H_u A; B = G^H (G G^H)^{-1} with each column rescaled to
    per-user transmit power total_power/U. A singular Gram matrix gets
    diagonal loading 1e-8 * trace/U and the result is flagged; `loading > 0`
    applies that relative load unconditionally (regularized ZF).
    """
    n_users = len(cascaded)
    if combiners.shape[1] != n_users:
        raise ContractViolation("one combiner column per user required")
    g = np.stack(
        [combiners[:, u].conj() @ cascaded[u] @ analog for u in range(n_users)]
    )
    gram = g @ g.conj().T
    svals = np.linalg.svd(gram, compute_uv=False)
    degenerate = bool(svals[-1] <= 1e-12 * svals[0])
    load = loading if loading > 0 else (1e-8 if degenerate else 0.0)
    if load > 0:
        gram = gram + (load * np.real(np.trace(gram)) / n_users) * np.eye(n_users)
    binv = np.linalg.solve(gram, np.eye(n_users, dtype=complex))
    b = g.conj().T @ binv
    per_user = total_power / n_users
    for u in range(n_users):
        nrm = np.linalg.norm(analog @ b[:, u])
        if nrm < 1e-30:
            raise NumericError(f"zero-norm ZF direction for user {u}")
        b[:, u] *= np.sqrt(per_user) / nrm
    return MultiUserBeamformers(analog, b, combiners, degenerate)
