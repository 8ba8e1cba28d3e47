"""Uplink pilot simulation and greedy sparse recovery of BS-side directions.

Both recovery routines solve the multiple-measurement row-sparse problem
min ||R - D X||_F^2 s.t. L nonzero rows, selecting dictionary columns by
row energy of D^H R_res.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import DirectionGrid, UlaSpec, UpaSpec
from .channel import ChannelRealization
from .errors import ContractViolation
from .ris import RisConfig, quantize_phases

__all__ = [
    "PilotPlan",
    "RecoveryResult",
    "default_pilot_plan",
    "simulate_pilots",
    "simulate_pilots_mu",
    "omp",
    "cosamp",
]


@dataclass(frozen=True)
class PilotPlan:
    """Per-slot RIS phases and the user-side training beamformers."""

    ris_phases: np.ndarray   # (T, M) unit-modulus per-slot psi_t
    a_train: np.ndarray      # (Nbar, N_RF) constant-modulus analog
    b_train: np.ndarray      # (N_RF, N_S) baseband
    symbols: np.ndarray      # (N_S, T) pilot symbols

    @property
    def num_slots(self) -> int:
        return int(self.ris_phases.shape[0])

    @property
    def transmit(self) -> np.ndarray:
        """Stacked pilot vectors s_tilde_t = A B s_t, shape (Nbar, T)."""
        return self.a_train @ (self.b_train @ self.symbols)


@dataclass(frozen=True)
class RecoveryResult:
    """Support indices (selection order), their grid angles, and residual."""

    indices: np.ndarray
    angles_deg: np.ndarray
    residual_norm: float
    columns: np.ndarray


def default_pilot_plan(
    ue: UlaSpec,
    ris: UpaSpec,
    num_paths: int,
    rng: np.random.Generator,
    n_rf: int = 1,
    n_s: int = 1,
    delta_bits: int = 3,
    num_slots: int | None = None,
) -> PilotPlan:
    """T = 8L slots of i.i.d. random delta-bit RIS phases, a random
    constant-modulus training analog beamformer, and unit-power all-ones
    pilot symbols."""
    t = 8 * num_paths if num_slots is None else int(num_slots)
    if t < num_paths:
        raise ContractViolation("need at least L pilot slots")
    raw = np.exp(2j * np.pi * rng.uniform(size=(t, ris.size)))
    phases = np.stack(
        [quantize_phases(RisConfig(row), delta_bits).psi for row in raw]
    )
    a_train = np.exp(2j * np.pi * rng.uniform(size=(ue.num_elements, n_rf)))
    a_train /= np.sqrt(ue.num_elements)
    b_train = np.ones((n_rf, n_s), dtype=complex) / np.sqrt(n_rf * n_s)
    symbols = np.ones((n_s, t), dtype=complex) / np.sqrt(n_s)
    return PilotPlan(phases, a_train, b_train, symbols)


def simulate_pilots(
    ch: ChannelRealization,
    plan: PilotPlan,
    noise_var: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Received uplink pilots R (N x T): column t is G_BR Psi_t G_RU s_t + n_t."""
    if plan.ris_phases.shape[1] != ch.ris.size:
        raise ContractViolation("pilot plan RIS size mismatch")
    through_ris = ch.uplink_ru @ plan.transmit        # (M, T)
    r = ch.uplink_br @ (plan.ris_phases.T * through_ris)
    if noise_var > 0:
        n = rng.standard_normal(r.shape) + 1j * rng.standard_normal(r.shape)
        r = r + np.sqrt(noise_var / 2.0) * n
    return r


def simulate_pilots_mu(
    channels: list[ChannelRealization],
    plans: list[PilotPlan],
    noise_var: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Superimposed uplink pilots from U users sharing the per-slot RIS phases.

    The BS-side noise is the sum of U independent per-user noises, i.e.
    per-entry variance U * noise_var.
    """
    if len(plans) != len(channels):
        raise ContractViolation("one pilot plan per user required")
    base = plans[0].ris_phases
    for p in plans[1:]:
        if not np.array_equal(p.ris_phases, base):
            raise ContractViolation("users must share the per-slot RIS phases")
    r = sum(
        simulate_pilots(ch, plan, 0.0, rng) for ch, plan in zip(channels, plans)
    )
    if noise_var > 0:
        total_var = len(channels) * noise_var
        n = rng.standard_normal(r.shape) + 1j * rng.standard_normal(r.shape)
        r = r + np.sqrt(total_var / 2.0) * n
    return r


def _row_energies(d: np.ndarray, r: np.ndarray) -> np.ndarray:
    c = d.conj().T @ r
    return np.sum(np.abs(c) ** 2, axis=1)


def _top_indices(energies: np.ndarray, k: int) -> np.ndarray:
    # stable sort on the negated energies: ties resolve to the lowest index
    return np.argsort(-energies, kind="stable")[:k]


def _result(d, grid, indices, r):
    cols = d[:, indices]
    if indices.size:
        proj, *_ = np.linalg.lstsq(cols, r, rcond=None)
        res = r - cols @ proj
    else:
        res = r
    return RecoveryResult(
        indices=np.asarray(indices),
        angles_deg=grid.angles_deg[np.asarray(indices)],
        residual_norm=float(np.linalg.norm(res)),
        columns=cols,
    )


def omp(
    r: np.ndarray, d: np.ndarray, grid: DirectionGrid, num_paths: int
) -> RecoveryResult:
    """Orthogonal matching pursuit on the stacked observations.

    Selects argmax_l [ (D^H R_res)(D^H R_res)^H ]_ll each round and deflates
    by the least-squares fit of all selected columns, so the residual stays
    orthogonal to their span. A zero observation degenerates to the first L
    dictionary indices.
    """
    if num_paths > min(d.shape[1], r.shape[1]):
        raise ContractViolation("sparsity exceeds dictionary/observation size")
    if np.linalg.norm(r) == 0.0:
        return _result(d, grid, np.arange(num_paths), r)
    chosen: list[int] = []
    res = r
    for _ in range(num_paths):
        energies = _row_energies(d, res)
        energies[chosen] = -1.0  # never reselect
        chosen.append(int(np.argmax(energies)))
        cols = d[:, chosen]
        proj, *_ = np.linalg.lstsq(cols, r, rcond=None)
        res = r - cols @ proj
    return _result(d, grid, np.asarray(chosen), r)


def cosamp(
    r: np.ndarray,
    d: np.ndarray,
    grid: DirectionGrid,
    num_paths: int,
    max_iter: int = 10,
) -> RecoveryResult:
    """CoSaMP for the row-sparse problem: merge top-2L candidates with the
    current support, least-squares on the union, prune back to L rows.
    Stops when the residual norm stops decreasing and keeps the best support.
    """
    if num_paths > min(d.shape[1], r.shape[1]):
        raise ContractViolation("sparsity exceeds dictionary/observation size")
    if np.linalg.norm(r) == 0.0:
        return _result(d, grid, np.arange(num_paths), r)
    support = np.array([], dtype=int)
    res = r
    best_norm = np.inf
    best_support = support
    for _ in range(max_iter):
        energies = _row_energies(d, res)
        candidates = _top_indices(energies, min(2 * num_paths, d.shape[1]))
        union = np.union1d(support, candidates)
        fit, *_ = np.linalg.lstsq(d[:, union], r, rcond=None)
        keep = _top_indices(np.sum(np.abs(fit) ** 2, axis=1), num_paths)
        support = np.sort(union[keep])
        fit2, *_ = np.linalg.lstsq(d[:, support], r, rcond=None)
        res = r - d[:, support] @ fit2
        norm = float(np.linalg.norm(res))
        if norm < best_norm - 1e-12:
            best_norm = norm
            best_support = support
        else:
            break
    return _result(d, grid, best_support, r)
