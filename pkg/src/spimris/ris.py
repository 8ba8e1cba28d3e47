"""RIS phase control: quadratic-form build, coordinate descent, quantization,
and the multi-user SINR-feasibility search.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import ChannelRealization
from .errors import ContractViolation, DomainError

__all__ = [
    "RisConfig",
    "QuadraticForm",
    "build_q",
    "coupling_form",
    "ris_objective",
    "quantize_phases",
    "optimize_ris_su",
    "mu_coupling_vectors",
    "mu_sinrs",
    "optimize_ris_mu",
]


@dataclass(frozen=True)
class RisConfig:
    """Unit-modulus phase vector psi plus its resolution (None = continuous)."""

    psi: np.ndarray
    delta_bits: int | None = None

    def __post_init__(self):
        psi = np.asarray(self.psi, dtype=complex)
        object.__setattr__(self, "psi", psi)
        if psi.ndim != 1:
            raise ContractViolation("psi must be a vector")
        if np.max(np.abs(np.abs(psi) - 1.0)) > 1e-9:
            raise DomainError("psi entries must have unit modulus")
        if self.delta_bits is not None and self.delta_bits < 1:
            raise DomainError("delta_bits must be >= 1 or None")

    @property
    def size(self) -> int:
        return int(self.psi.size)

    @property
    def phases(self) -> np.ndarray:
        """Element phases wrapped to [0, 2pi)."""
        return np.angle(self.psi) % (2.0 * np.pi)

    @classmethod
    def identity(cls, m: int, delta_bits: int | None = None) -> "RisConfig":
        return cls(np.ones(m, dtype=complex), delta_bits)

    @classmethod
    def from_phases(cls, phases, delta_bits: int | None = None) -> "RisConfig":
        return cls(np.exp(1j * np.asarray(phases, dtype=float)), delta_bits)


@dataclass(frozen=True)
class QuadraticForm:
    """Hermitian PSD matrix Q with psi^H Q psi = ||H_RU diag(psi) H_BR||_F^2."""

    q: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=complex)
        object.__setattr__(self, "q", q)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ContractViolation("Q must be square")
        scale = max(np.abs(q).max(), 1.0)
        if np.abs(q - q.conj().T).max() > 1e-10 * scale:
            raise ContractViolation("Q must be Hermitian")


def build_q(ch: ChannelRealization) -> QuadraticForm:
    """Q = (sum_n diag(row_n(H_RU)) H_BR H_BR^H diag(row_n(H_RU))^H)^T.

    Written as a Hadamard product: with B = H_BR H_BR^H and
    G = sum_n row_n^T conj(row_n), Q = (B * G)^T.
    """
    b = ch.h_br @ ch.h_br.conj().T
    g = ch.h_ru.T @ ch.h_ru.conj()
    q = (b * g).T
    q = 0.5 * (q + q.conj().T)
    return QuadraticForm(q)


def coupling_form(ch: ChannelRealization, target: np.ndarray) -> QuadraticForm:
    """Quadratic form of the cascade restricted to a transmit target.

    With w = H_BR @ target (M x k), psi^H Q psi = ||H_RU diag(psi) w||_F^2,
    the received energy of the beams in `target`. build_q is the special
    case target = I_N.
    """
    w = ch.h_br @ target
    b = w @ w.conj().T
    g = ch.h_ru.T @ ch.h_ru.conj()
    q = (b * g).T
    q = 0.5 * (q + q.conj().T)
    return QuadraticForm(q)


def ris_objective(psi: np.ndarray, form: QuadraticForm) -> float:
    """Real quadratic form psi^H Q psi."""
    return float(np.real(np.vdot(psi, form.q @ psi)))


def _grid_size(delta_bits: int | None) -> int:
    return 0 if delta_bits is None else 1 << delta_bits


def quantize_phases(cfg: RisConfig, delta_bits: int) -> RisConfig:
    """Floor each phase (wrapped to [0, 2pi)) onto the 2pi/2^delta grid."""
    if delta_bits < 1:
        raise DomainError("delta_bits must be >= 1")
    size = 1 << delta_bits
    step = 2.0 * np.pi / size
    k = np.floor(cfg.phases / step + 1e-9).astype(int) % size
    return RisConfig.from_phases(k * step, delta_bits)


def optimize_ris_su(
    form: QuadraticForm,
    delta_bits: int | None,
    init: RisConfig,
    sweeps: int = 1,
) -> RisConfig:
    """Per-element coordinate ascent on psi^H Q psi under |psi_m| = 1.

    Each element is set to the phase of its coupling sum (ties keep the
    current phase); in discrete mode the update is floor-snapped inside the
    sweep. With continuous phases the objective is non-decreasing per update.
    """
    if sweeps < 1:
        raise ContractViolation("sweeps must be >= 1")
    if init.size != form.q.shape[0]:
        raise ContractViolation("init length does not match Q")
    psi = kernels.ris_sweep(
        np.ascontiguousarray(init.psi, dtype=complex),
        np.ascontiguousarray(form.q, dtype=complex),
        int(sweeps),
        _grid_size(delta_bits),
    )
    if delta_bits is not None:
        # snapped in-sweep already; re-snap to canonicalize representations
        return quantize_phases(RisConfig(psi), delta_bits)
    return RisConfig(psi, None)


def mu_coupling_vectors(
    channels: list[ChannelRealization],
    combiners: np.ndarray,
    analog: np.ndarray,
    digital: np.ndarray,
) -> np.ndarray:
    """Couplings z[m, u, v] with c_u^H H_u(psi) A b_v = sum_m psi[m] z[m, u, v].

    z[:, u, v] = diag(c_u^H H_RU_u) H_BR A b_v; the first user index selects
    the receiving user's RIS-user channel.
    """
    n_users = len(channels)
    m = channels[0].ris.size
    w = channels[0].h_br @ (analog @ digital)  # (M, U) columns per stream
    z = np.empty((m, n_users, n_users), dtype=complex)
    for u, ch in enumerate(channels):
        r = combiners[:, u].conj() @ ch.h_ru  # (M,)
        z[:, u, :] = r[:, None] * w
    return z


def mu_sinrs(psi: np.ndarray, z: np.ndarray, sigma2: float) -> np.ndarray:
    """Per-user SINR at a given psi from the coupling tensor."""
    n_users = z.shape[1]
    t = np.einsum("m,muv->uv", psi, z)
    power = np.abs(t) ** 2
    sig = np.diag(power)
    interf = power.sum(axis=1) - sig
    return (sig / n_users) / (interf / n_users + sigma2)


def optimize_ris_mu(
    channels: list[ChannelRealization],
    combiners: np.ndarray,
    analog: np.ndarray,
    digital: np.ndarray,
    kappa: np.ndarray,
    sigma2: float,
    delta_bits: int | None,
    init: RisConfig | None = None,
    budget: int = 2,
    randomizations: int = 100,
    rng: np.random.Generator | None = None,
) -> tuple[RisConfig, bool, np.ndarray]:
    """Search for psi with SINR_u >= kappa_u for all users.

    Three stages: coordinate-descent warm start on the summed signal
    quadratic form, `budget` element-wise greedy passes over the phase
    alphabet maximizing the min-SINR margin, then optional phase-perturbed
    randomization around the incumbent. Infeasibility is reported, not
    raised; the best psi found is returned either way.
    """
    kappa = np.asarray(kappa, dtype=float)
    z = mu_coupling_vectors(channels, combiners, analog, digital)
    m = z.shape[0]
    grid_size = _grid_size(delta_bits) or 64  # greedy needs a finite alphabet

    # (a) warm start: maximize total signal power sum_u |psi^T z_uu|^2
    z_sig = np.conj(np.stack([z[:, u, u] for u in range(len(channels))], axis=1))
    q = QuadraticForm(z_sig @ z_sig.conj().T)
    start = init if init is not None else RisConfig.identity(m)
    psi = optimize_ris_su(q, delta_bits, RisConfig(start.psi), sweeps=2).psi

    # (b) greedy min-margin passes
    if budget > 0:
        psi = kernels.mu_greedy_sweep(
            np.ascontiguousarray(psi, dtype=complex),
            np.ascontiguousarray(z, dtype=complex),
            np.ascontiguousarray(kappa, dtype=float),
            float(sigma2),
            grid_size,
            int(budget),
        )

    def margin(p):
        return float(np.min(mu_sinrs(p, z, sigma2) - kappa))

    best_psi, best_margin = psi, margin(psi)

    # (c) randomization around the incumbent
    if randomizations > 0 and best_margin < np.inf:
        rng = np.random.default_rng(0) if rng is None else rng
        step = 2.0 * np.pi / grid_size
        base = np.angle(best_psi)
        for _ in range(randomizations):
            if best_margin >= 0:
                break
            cand = np.exp(1j * (base + rng.normal(0.0, step / 2.0, m)))
            if delta_bits is not None:
                cand = quantize_phases(RisConfig(cand), delta_bits).psi
            m_cand = margin(cand)
            if m_cand > best_margin:
                best_psi, best_margin = cand, m_cand

    cfg = RisConfig(best_psi, delta_bits)
    sinrs = mu_sinrs(best_psi, z, sigma2)
    return cfg, bool(np.all(sinrs >= kappa)), sinrs
