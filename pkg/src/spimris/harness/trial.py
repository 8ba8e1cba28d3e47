"""One Monte Carlo trial: acquire, beamform, set the RIS, evaluate, detect.

Per-trial randomness derives from SeedSequence([seed, sweep_index, trial]),
spawned into independent named streams so that changing one stage (e.g. the
acquisition mode) never shifts the draws of another.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .. import metrics
from ..acquisition import cosamp, default_pilot_plan, omp, simulate_pilots
from ..arrays import UlaSpec, UpaSpec, build_bs_dictionary, default_direction_grid
from ..beamforming import (
    build_steering_bank,
    fd_beamformer,
    mu_beamformers,
    mu_combiner,
    subset_beamformer,
)
from ..channel import cascade, generate_channel, generate_channel_mu, perturb_channel
from ..errors import SpimError
from ..patterns import build_pattern_book
from ..receiver import build_pattern_lookup, detect_pattern, index_bit_error_rate
from ..ris import (
    QuadraticForm,
    RisConfig,
    build_q,
    coupling_form,
    optimize_ris_mu,
    optimize_ris_su,
)
from .config import ScenarioConfig

__all__ = ["ResultRow", "run_trial", "CSV_HEADER"]

CSV_HEADER = (
    "scenario,sweep_name,sweep_value,trial,method,snr_db,se_bits,"
    "bound_rhs,pattern_error_rate"
)

METHOD_SPIM = "SPIM"
METHOD_HYBRID = "HYBRID"
METHOD_FD = "FD"


@dataclass(frozen=True)
class ResultRow:
    scenario: str
    sweep_name: str
    sweep_value: float | int | str
    trial: int
    method: str
    snr_db: float
    se_bits: float
    bound_rhs: float | None = None
    pattern_error_rate: float | None = None

    def to_csv(self) -> str:
        def opt(v):
            return "" if v is None else f"{v:.10g}"

        return (
            f"{self.scenario},{self.sweep_name},{self.sweep_value},"
            f"{self.trial},{self.method},{self.snr_db:.10g},"
            f"{self.se_bits:.10g},{opt(self.bound_rhs)},{opt(self.pattern_error_rate)}"
        )


def _streams(cfg: ScenarioConfig, sweep_index: int, trial: int):
    root = np.random.SeedSequence([cfg.seed, sweep_index, trial])
    names = ("channel", "pilot", "detect", "misc")
    children = root.spawn(len(names))
    return {n: np.random.default_rng(c) for n, c in zip(names, children)}


def _specs(cfg: ScenarioConfig):
    return (
        UlaSpec(cfg.n),
        UpaSpec(cfg.m_rows, cfg.m_cols),
        UlaSpec(cfg.n_bar),
    )


def _acquire_angles(cfg, est, rng_pilot, hold_psi=None):
    """Estimated BS-side uplink angles (acquisition order) plus the
    true-path map used to attach user-side angles for detection."""
    if cfg.acquisition == "bypass":
        return est.paths.bs_angles.copy(), np.arange(est.paths.count)
    grid = default_direction_grid(est.bs, cfg.p_bs)
    d = build_bs_dictionary(est.bs, grid)
    plan = default_pilot_plan(
        est.ue,
        est.ris,
        cfg.l,
        rng_pilot,
        delta_bits=cfg.delta_bits,
        num_slots=cfg.t_slots,
    )
    if cfg.pilot_ris == "hold" and hold_psi is not None:
        # acquisition under the service RIS configuration: no slot diversity
        plan = replace(plan, ris_phases=np.tile(hold_psi, (plan.num_slots, 1)))
    r = simulate_pilots(est, plan, cfg.pilot_noise_var, rng_pilot)
    if cfg.snr_h_db is not None:
        # one SNR_H convention for the whole acquisition chain: the pilot
        # observations carry the same relative noise as the channel matrices,
        # doubled because both hop estimates err independently at SNR_H
        var = 2.0 * np.linalg.norm(r) ** 2 / (r.size * 10.0 ** (cfg.snr_h_db / 10.0))
        noise = rng_pilot.standard_normal(r.shape) + 1j * rng_pilot.standard_normal(
            r.shape
        )
        r = r + np.sqrt(var / 2.0) * noise
    solver = omp if cfg.acquisition == "omp" else cosamp
    rec = solver(r, d, grid, cfg.l)
    # attach each estimate to its nearest true path (sin domain)
    sin_hat = np.sin(np.deg2rad(rec.angles_deg))
    sin_true = np.sin(np.deg2rad(est.paths.bs_angles))
    gap = np.abs(sin_hat[:, None] - sin_true[None, :])
    nearest = np.argmin(np.minimum(gap, 2.0 - gap), axis=1)  # sin is 2-periodic
    return rec.angles_deg, nearest


def _pattern_error_rate(cfg, book, h_true_i, beams, lookup, rng) -> float:
    """Monte Carlo index-bit detection over cfg.detect_symbols transmissions."""
    if cfg.detect_symbols <= 0 or book.size == 1:
        return 0.0
    sigma2 = 10.0 ** (-cfg.snr_db / 10.0)
    n_bar = h_true_i[0].shape[0]
    results = []
    for _ in range(cfg.detect_symbols):
        i = int(rng.integers(book.size))
        s = (
            rng.standard_normal(cfg.n_s) + 1j * rng.standard_normal(cfg.n_s)
        ) / np.sqrt(2.0)
        noise = (
            rng.standard_normal(n_bar) + 1j * rng.standard_normal(n_bar)
        ) * np.sqrt(sigma2 / 2.0)
        y = h_true_i[i] @ beams[i].f @ s + noise
        results.append(detect_pattern(y, lookup, book, true_pattern=i))
    return index_bit_error_rate(results, book)


def _run_trial_su(cfg: ScenarioConfig, sweep_value, sweep_index: int, trial: int):
    rngs = _streams(cfg, sweep_index, trial)
    bs, ris, ue = _specs(cfg)
    sigma2 = 10.0 ** (-cfg.snr_db / 10.0)

    gains_br = gains_ru = None
    if cfg.gain_split is not None:
        # constrained two-path experiment: per-path power split, unit RU gains
        gains_br = np.array(
            [np.sqrt(cfg.gain_split), np.sqrt(1.0 - cfg.gain_split)], complex
        )
        gains_ru = np.ones(cfg.l, dtype=complex)
    grid = default_direction_grid(bs, cfg.p_bs) if cfg.on_grid else None
    true = generate_channel(
        bs, ris, ue, cfg.l, rngs["channel"], grid=grid,
        gains_br=gains_br, gains_ru=gains_ru,
    )
    est = perturb_channel(true, cfg.snr_h_db, rngs["channel"])

    # channel-level RIS configuration: serves acquisition and the FD baseline
    psi_chan = optimize_ris_su(
        build_q(est), cfg.delta_bits, RisConfig.identity(cfg.m), cfg.ris_sweeps
    ).psi

    angles_hat, nearest_true = _acquire_angles(
        cfg, est, rngs["pilot"], hold_psi=psi_chan
    )
    # downlink transmit response through G^T channels: conjugate steering
    a_c = build_steering_bank(-angles_hat, bs)

    # per-path symbol-rate RIS retunes (coarse grid, one sweep) and the
    # resulting strongest-first canonical path order
    def retune(target):
        form = coupling_form(est, target)
        return optimize_ris_su(
            form, cfg.pattern_delta_bits, RisConfig.identity(cfg.m),
            cfg.pattern_sweeps,
        ).psi

    path_psi = [retune(a_c[:, [k]]) for k in range(cfg.l)]
    strength = np.array(
        [
            np.linalg.norm(cascade(est, path_psi[k]) @ a_c[:, k]) ** 2
            for k in range(cfg.l)
        ]
    )

    h_chan_true = cascade(true, psi_chan)
    h_chan_est = cascade(est, psi_chan)
    fd_est = fd_beamformer(h_chan_est, cfg.n_s)
    fd_true = fd_beamformer(h_chan_true, cfg.n_s)

    book = build_pattern_book(cfg.l, cfg.l_s)
    beams, h_true_i, fd_own = [], [], []
    for pat in book.patterns:
        psi_i = (
            path_psi[pat[0]]
            if cfg.l_s == 1
            else retune(a_c[:, list(pat)])
        )
        h_i_est = cascade(est, psi_i)
        h_i_true = cascade(true, psi_i)
        beam = subset_beamformer(a_c, pat, fd_beamformer(h_i_est, cfg.n_s))
        beams.append(beam)
        h_true_i.append(h_i_true)
        fd_own.append(fd_beamformer(h_i_true, cfg.n_s))

    ms = np.stack(
        [
            metrics.covariance_mi(h_i, b.f, sigma2, cfg.n_s)
            for h_i, b in zip(h_true_i, beams)
        ]
    )
    i_spim = metrics.se_spim_from_covariances(ms, sigma2)

    # conventional hybrid steers the RF chains to the strongest paths
    conv_subset = tuple(sorted(np.argsort(-strength, kind="stable")[: cfg.l_s]))
    conv_idx = book.index_of(conv_subset)
    if conv_idx is not None:
        m_conv = ms[conv_idx]
    else:
        psi_c = (
            path_psi[conv_subset[0]]
            if cfg.l_s == 1
            else retune(a_c[:, list(conv_subset)])
        )
        beam_c = subset_beamformer(
            a_c, conv_subset, fd_beamformer(cascade(est, psi_c), cfg.n_s)
        )
        m_conv = metrics.covariance_mi(
            cascade(true, psi_c), beam_c.f, sigma2, cfg.n_s
        )
    i_mimo = metrics.se_mimo_from_covariance(m_conv, sigma2)

    if cfg.snr_h_db is None and cfg.acquisition == "bypass":
        i_fd = metrics.se_fd(fd_true, sigma2, cfg.n_s)
    else:
        i_fd = metrics.se_beamformer(h_chan_true, fd_est.f, sigma2, cfg.n_s)

    bound = metrics.theorem1_rhs(fd_own, [b.f for b in beams], cfg.n_s)

    lookup = build_pattern_lookup(ue, true.paths.ue_angles[nearest_true])
    per = _pattern_error_rate(
        cfg, book, h_true_i, beams, lookup, rngs["detect"]
    )

    common = dict(
        scenario=cfg.name,
        sweep_name=cfg.sweep_name,
        sweep_value=sweep_value,
        trial=trial,
        snr_db=cfg.snr_db,
    )
    return [
        ResultRow(
            method=METHOD_SPIM, se_bits=i_spim, bound_rhs=bound,
            pattern_error_rate=per, **common,
        ),
        ResultRow(method=METHOD_HYBRID, se_bits=i_mimo, **common),
        ResultRow(method=METHOD_FD, se_bits=i_fd, **common),
    ]


def _mu_pattern_beams(a_c_users, combiners, book, i, n_users):
    """Analog bank and combiner set for the joint pattern i."""
    cols = [a_c_users[u][:, book.patterns[i][0]] for u in range(n_users)]
    analog = np.stack(cols, axis=1)
    comb = np.stack([combiners[u][i] for u in range(n_users)], axis=1)
    return analog, comb


def _run_trial_mu(cfg: ScenarioConfig, sweep_value, sweep_index: int, trial: int):
    rngs = _streams(cfg, sweep_index, trial)
    bs, ris, ue = _specs(cfg)
    sigma2 = 10.0 ** (-cfg.snr_db / 10.0)
    n_users = cfg.u
    kappa = np.full(n_users, 10.0 ** (cfg.kappa_db / 10.0))
    total_power = float(n_users)  # one unit-power stream per user

    channels = generate_channel_mu(bs, ris, ue, cfg.l, n_users, rngs["channel"])
    book = build_pattern_book(cfg.l, 1)
    s = book.size

    # per-user transmit banks (conjugated) and per-(user, pattern) combiners
    a_c_users = [build_steering_bank(-ch.paths.bs_angles, bs) for ch in channels]
    combiners = [
        [mu_combiner(ue, ch.paths.ue_angles[book.patterns[i][0]]) for i in range(s)]
        for ch in channels
    ]
    strongest = [
        int(np.argmax(np.abs(ch.paths.gains_br) * np.abs(ch.paths.gains_ru)))
        for ch in channels
    ]
    ref_pattern = min(
        range(s),
        key=lambda i: sum(
            (book.patterns[i][0] != strongest[u]) for u in range(n_users)
        ),
    )

    def tune_pattern(i, init_cfg):
        """Alternate ZF beamformers and the feasibility RIS search for one
        joint pattern; returns (psi, gammas at that pattern)."""
        analog, comb = _mu_pattern_beams(a_c_users, combiners, book, i, n_users)
        psi_cfg = init_cfg
        prev_rate = None
        for _ in range(max(cfg.outer_iters, 1)):
            cas = [cascade(ch, psi_cfg.psi) for ch in channels]
            beams = mu_beamformers(cas, analog, comb, total_power)
            psi_cfg, _feasible, sinrs = optimize_ris_mu(
                channels,
                comb,
                analog,
                beams.b,
                kappa,
                sigma2,
                cfg.delta_bits,
                init=psi_cfg,
                budget=cfg.mu_budget,
                randomizations=cfg.mu_randomizations,
                rng=rngs["misc"],
            )
            rate = float(np.sum(np.log2(1.0 + sinrs)))
            if prev_rate is not None and abs(rate - prev_rate) < 1e-4:
                break
            prev_rate = rate
        cas = [cascade(ch, psi_cfg.psi) for ch in channels]
        beams = mu_beamformers(cas, analog, comb, total_power)
        gam = np.array(
            [
                1.0
                + metrics.sinr_mu(cas[u], analog, beams.b, comb[:, u], u, sigma2)
                for u in range(n_users)
            ]
        )
        return psi_cfg, cas, beams, gam

    # symbol-rate RIS: each joint pattern gets its own feasibility-tuned psi
    init = RisConfig.identity(cfg.m, cfg.delta_bits)
    gammas = np.empty((n_users, s))
    pattern_state = []
    for i in range(s):
        psi_i, cas_i, beams_i, gam_i = tune_pattern(i, init)
        gammas[:, i] = gam_i
        pattern_state.append((psi_i, cas_i, beams_i))
    i_spim = metrics.se_spim_mu(gammas) / n_users

    # conventional hybrid: the joint pattern closest to per-user strongest paths
    i_hybrid = float(np.sum(np.log2(gammas[:, ref_pattern]))) / n_users

    # FD baseline: unconstrained ZF at the channel-level RIS optimum
    q_sum = QuadraticForm(sum(build_q(ch).q for ch in channels))
    psi_fd = optimize_ris_su(
        q_sum, cfg.delta_bits, RisConfig.identity(cfg.m), cfg.ris_sweeps
    ).psi
    cascades = [cascade(ch, psi_fd) for ch in channels]
    _, comb = _mu_pattern_beams(a_c_users, combiners, book, ref_pattern, n_users)
    analog_fd = np.eye(cfg.n, dtype=complex)
    beams_fd = mu_beamformers(cascades, analog_fd, comb, total_power)
    gam_fd = np.array(
        [
            1.0
            + metrics.sinr_mu(
                cascades[u], analog_fd, beams_fd.b, comb[:, u], u, sigma2
            )
            for u in range(n_users)
        ]
    )
    i_fd = float(np.sum(np.log2(gam_fd))) / n_users

    # per-user detection over random joint patterns
    per = None
    if cfg.detect_symbols > 0 and s > 1:
        rng = rngs["detect"]
        results = []
        lookups = [
            build_pattern_lookup(ue, ch.paths.ue_angles) for ch in channels
        ]
        for _ in range(cfg.detect_symbols):
            i = int(rng.integers(s))
            _, cas_i, beams_i = pattern_state[i]
            sym = (
                rng.standard_normal(n_users) + 1j * rng.standard_normal(n_users)
            ) / np.sqrt(2.0)
            x = beams_i.a @ (beams_i.b @ sym) / np.sqrt(n_users)
            for u in range(n_users):
                noise = (
                    rng.standard_normal(cfg.n_bar)
                    + 1j * rng.standard_normal(cfg.n_bar)
                ) * np.sqrt(sigma2 / 2.0)
                y = cas_i[u] @ x + noise
                results.append(detect_pattern(y, lookups[u], book, true_pattern=i))
        per = index_bit_error_rate(results, book)

    common = dict(
        scenario=cfg.name,
        sweep_name=cfg.sweep_name,
        sweep_value=sweep_value,
        trial=trial,
        snr_db=cfg.snr_db,
    )
    return [
        ResultRow(method=METHOD_SPIM, se_bits=i_spim, pattern_error_rate=per, **common),
        ResultRow(method=METHOD_HYBRID, se_bits=i_hybrid, **common),
        ResultRow(method=METHOD_FD, se_bits=i_fd, **common),
    ]


def run_trial(
    cfg: ScenarioConfig, sweep_value, sweep_index: int, trial: int
) -> list[ResultRow]:
    """Execute one trial at one sweep point; deterministic in (seed, indices)."""
    try:
        bound = cfg.at_sweep_point(sweep_value)
        bound.check_bound()
        mu_mode = bound.u > 1 or cfg.sweep_name == "u" or cfg.variant_name == "u"
        if mu_mode:
            return _run_trial_mu(bound, sweep_value, sweep_index, trial)
        return _run_trial_su(bound, sweep_value, sweep_index, trial)
    except SpimError as exc:
        raise type(exc)(
            f"scenario {cfg.name!r} sweep {cfg.sweep_name}={sweep_value} "
            f"trial {trial}: {exc}"
        ) from exc
