"""Aggregation of result CSVs: per-(scenario, method, sweep point) means."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

from ..errors import ConfigError
from .trial import CSV_HEADER, ResultRow

__all__ = ["SummaryRow", "read_rows", "summarize_rows", "summarize_csv", "write_summary"]

SUMMARY_HEADER = "scenario,sweep_name,sweep_value,method,n,mean_se,std_se,ci95_lo,ci95_hi"


@dataclass(frozen=True)
class SummaryRow:
    scenario: str
    sweep_name: str
    sweep_value: str
    method: str
    n: int
    mean_se: float
    std_se: float

    @property
    def ci95(self) -> tuple[float, float]:
        half = 1.96 * self.std_se / math.sqrt(self.n) if self.n > 1 else 0.0
        return (self.mean_se - half, self.mean_se + half)


def read_rows(path: str | Path) -> list[ResultRow]:
    """Parse a results CSV; malformed content reports the offending line."""
    path = Path(path)
    rows: list[ResultRow] = []
    with path.open() as fh:
        header = fh.readline().rstrip("\n")
        if header != CSV_HEADER:
            raise ConfigError(f"{path}:1: unexpected header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 9:
                raise ConfigError(f"{path}:{lineno}: expected 9 fields")
            try:
                rows.append(
                    ResultRow(
                        scenario=parts[0],
                        sweep_name=parts[1],
                        sweep_value=parts[2],
                        trial=int(parts[3]),
                        method=parts[4],
                        snr_db=float(parts[5]),
                        se_bits=float(parts[6]),
                        bound_rhs=float(parts[7]) if parts[7] else None,
                        pattern_error_rate=float(parts[8]) if parts[8] else None,
                    )
                )
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return rows


def summarize_rows(rows: list[ResultRow]) -> list[SummaryRow]:
    groups: dict[tuple, list[float]] = {}
    meta: dict[tuple, str] = {}
    for r in rows:
        key = (r.scenario, str(r.sweep_value), r.method)
        groups.setdefault(key, []).append(r.se_bits)
        meta[key] = r.sweep_name
    out = []
    for key in sorted(groups):
        vals = groups[key]
        n = len(vals)
        mean = sum(vals) / n
        var = sum((v - mean) ** 2 for v in vals) / (n - 1) if n > 1 else 0.0
        out.append(
            SummaryRow(
                scenario=key[0],
                sweep_name=meta[key],
                sweep_value=key[1],
                method=key[2],
                n=n,
                mean_se=mean,
                std_se=math.sqrt(var),
            )
        )
    return out


def summarize_csv(path: str | Path) -> list[SummaryRow]:
    return summarize_rows(read_rows(path))


def write_summary(summary: list[SummaryRow], path: str | Path):
    with Path(path).open("w", newline="") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        writer = csv.writer(fh)
        for s in summary:
            lo, hi = s.ci95
            writer.writerow(
                [
                    s.scenario, s.sweep_name, s.sweep_value, s.method, s.n,
                    f"{s.mean_se:.10g}", f"{s.std_se:.10g}",
                    f"{lo:.10g}", f"{hi:.10g}",
                ]
            )
