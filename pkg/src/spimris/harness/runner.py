"""Scenario execution: trial fan-out, sorted CSV emission, channel dumps."""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from ..errors import ConfigError
from .config import ScenarioConfig
from .summarize import summarize_rows, write_summary
from .trial import CSV_HEADER, ResultRow, run_trial

__all__ = ["run_scenario", "expand_jobs"]


def expand_jobs(cfg: ScenarioConfig) -> list[tuple[ScenarioConfig, object, int]]:
    """All (variant config, sweep value, sweep index) combinations, skipping
    sweep points that violate the config invariants (e.g. L_S > L)."""
    jobs = []
    for _, vcfg in cfg.variants():
        for k, value in enumerate(vcfg.sweep_values):
            try:
                vcfg.at_sweep_point(value).check_bound()
            except ConfigError:
                continue
            jobs.append((vcfg, value, k))
    return jobs


def _job_rows(args) -> list[ResultRow]:
    vcfg, value, k, trials = args
    rows: list[ResultRow] = []
    for t in range(trials):
        rows.extend(run_trial(vcfg, value, k, t))
    return rows


def run_scenario(
    cfg: ScenarioConfig,
    out_dir: str | Path,
    trials: int | None = None,
    workers: int = 1,
    dump_channels: bool = False,
) -> Path:
    """Run every variant x sweep point x trial and write `<name>.csv` plus
    `<name>_summary.csv` under out_dir. Returns the results path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_trials = cfg.trials if trials is None else int(trials)

    jobs = [(vcfg, value, k, n_trials) for vcfg, value, k in expand_jobs(cfg)]
    if not jobs:
        raise ConfigError(f"scenario {cfg.name!r} has no valid sweep points")
    rows: list[ResultRow] = []
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_job_rows, jobs):
                rows.extend(chunk)
    else:
        for job in jobs:
            rows.extend(_job_rows(job))

    rows.sort(key=lambda r: (r.scenario, str(r.sweep_value), r.trial, r.method))
    path = out_dir / f"{cfg.name}.csv"
    with path.open("w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(row.to_csv() + "\n")

    write_summary(summarize_rows(rows), out_dir / f"{cfg.name}_summary.csv")
    if dump_channels:
        _dump_channels(cfg, out_dir / f"{cfg.name}_channels.csv", n_trials)
    return path


def _dump_channels(cfg: ScenarioConfig, path: Path, n_trials: int):
    """Debug dump of per-trial path parameters (first sweep point only).

    Schema: trial,link,path,bs_angle,ue_angle,ris_az,ris_el,gain_re,gain_im.
    """
    import numpy as np

    from ..arrays import UlaSpec, UpaSpec
    from ..channel import generate_channel

    bound = cfg.variants()[0][1].at_sweep_point(cfg.sweep_values[0])
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "trial", "link", "path", "bs_angle", "ue_angle",
                "ris_az", "ris_el", "gain_re", "gain_im",
            ]
        )
        for t in range(n_trials):
            root = np.random.SeedSequence([bound.seed, 0, t])
            rng = np.random.default_rng(root.spawn(1)[0])
            ch = generate_channel(
                UlaSpec(bound.n),
                UpaSpec(bound.m_rows, bound.m_cols),
                UlaSpec(bound.n_bar),
                bound.l,
                rng,
            )
            p = ch.paths
            for link, angles, pairs, gains in (
                ("br", p.bs_angles, p.ris_departure, p.gains_br),
                ("ru", p.ue_angles, p.ris_arrival, p.gains_ru),
            ):
                for i in range(p.count):
                    ue_angle = p.ue_angles[i] if link == "ru" else ""
                    bs_angle = p.bs_angles[i] if link == "br" else ""
                    writer.writerow(
                        [
                            t, link, i, bs_angle, ue_angle,
                            f"{pairs[i][0]:.6f}", f"{pairs[i][1]:.6f}",
                            f"{gains[i].real:.6f}", f"{gains[i].imag:.6f}",
                        ]
                    )
