"""Scenario configuration: dataclass, flat key/value file parser, registry glue.

Scenario files are plain text, one `key = value` per line, `#` comments.
List values are comma separated. Keys mirror ScenarioConfig field names.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from pathlib import Path

from ..errors import ConfigError

__all__ = ["ScenarioConfig", "parse_scenario_file", "format_scenario"]

_SWEEPABLE = {"snr_db", "snr_h_db", "l", "l_s", "m", "u", "alpha1"}
_VARIANTS = {"ls", "l_s", "u", "ns", "alg", "l", "m"}
_ACQUISITIONS = {"bypass", "omp", "cosamp"}


@dataclass(frozen=True)
class ScenarioConfig:
    """One named experiment: geometry, sweep, and Monte Carlo settings.

    `sweep_name`/`sweep_values` name the x-axis; `variants` (e.g. L_S or U
    choices) each produce a scenario-column suffix like `fig3:ls=2`.
    SNR convention: transmit SNR = 1/sigma_n^2 with unit-power symbols, so
    sigma_n^2 = 10^(-snr_db/10).
    """

    name: str
    n: int = 128                    # BS antennas
    n_bar: int = 16                 # user antennas
    m_rows: int = 8                 # RIS rows (z)
    m_cols: int = 8                 # RIS cols (y)
    l: int = 8                      # paths per link
    l_s: int = 1                    # selected paths (= N_RF)
    n_s: int = 1                    # data streams
    u: int = 1                      # users (1 = single-user mode)
    snr_db: float = 0.0             # data SNR when not swept
    snr_h_db: float | None = None   # channel-estimate SNR; None = perfect
    delta_bits: int = 3             # RIS phase resolution
    trials: int = 500
    seed: int = 1234
    acquisition: str = "bypass"     # bypass | omp | cosamp
    sweep_name: str = "snr_db"
    sweep_values: tuple = (0.0,)
    variant_name: str = ""          # e.g. "ls" or "u"; "" = no variants
    variant_values: tuple = ()
    p_bs: int | None = None         # dictionary size, default 2N
    t_slots: int | None = None      # pilot slots, default 8L
    pilot_ris: str = "random"       # per-slot RIS during pilots: random | hold
    ris_sweeps: int = 3             # coordinate-descent sweeps, channel stage
    pattern_delta_bits: int = 2     # phase grid of the symbol-rate retune stage
    pattern_sweeps: int = 1         # descent sweeps of the retune stage
    outer_iters: int = 3            # beamformer/RIS alternations
    detect_symbols: int = 32        # detections per trial for the PER column
    pilot_noise_var: float = 0.0
    kappa_db: float = 0.0           # multi-user SINR floor
    mu_budget: int = 2              # greedy passes in the MU RIS search
    mu_randomizations: int = 20
    on_grid: bool = False           # draw BS angles on the dictionary grid
    gain_split: float | None = None  # fig7: path-power split alpha1 (L = 2)

    def __post_init__(self):
        if self.acquisition not in _ACQUISITIONS:
            raise ConfigError(f"unknown acquisition mode {self.acquisition!r}")
        if self.pilot_ris not in {"random", "hold"}:
            raise ConfigError(f"unknown pilot_ris mode {self.pilot_ris!r}")
        if self.sweep_name not in _SWEEPABLE:
            raise ConfigError(f"cannot sweep over {self.sweep_name!r}")
        if self.variant_name and self.variant_name not in _VARIANTS:
            raise ConfigError(f"cannot build variants over {self.variant_name!r}")
        if not self.sweep_values:
            raise ConfigError("sweep_values must be non-empty")
        if self.l_s > self.l:
            raise ConfigError("l_s cannot exceed l")
        l_s_pending = self.sweep_name in {"l_s", "ls"}
        if self.n_s > self.l_s and self.u == 1 and not l_s_pending:
            raise ConfigError("n_s cannot exceed l_s (= N_RF)")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.gain_split is not None:
            if self.l != 2:
                raise ConfigError("gain_split requires exactly L = 2 paths")
            if not 0.0 < self.gain_split < 1.0:
                raise ConfigError("gain_split must lie in (0, 1)")

    @property
    def m(self) -> int:
        return self.m_rows * self.m_cols

    def variants(self) -> list[tuple[str, "ScenarioConfig"]]:
        """Expand variant values into (scenario label, concrete config) pairs."""
        if not self.variant_name:
            return [(self.name, self)]
        out = []
        for v in self.variant_values:
            label = f"{self.name}:{self.variant_name}={_fmt(v)}"
            bound = replace(_apply_axis(self, self.variant_name, v), name=label)
            out.append((label, bound))
        return out

    def at_sweep_point(self, value) -> "ScenarioConfig":
        return _apply_axis(self, self.sweep_name, value)

    def check_bound(self):
        # invariants that only hold once every sweep axis is bound
        if self.l_s > self.l:
            raise ConfigError("l_s cannot exceed l")
        if self.n_s > self.l_s and self.u == 1:
            raise ConfigError("n_s cannot exceed l_s (= N_RF)")


def _fmt(v) -> str:
    if isinstance(v, float) and v == int(v):
        return str(int(v))
    return str(v)


def _apply_axis(cfg: ScenarioConfig, axis: str, value) -> ScenarioConfig:
    """Bind one sweep/variant axis to a concrete value."""
    if axis == "snr_db":
        return replace(cfg, snr_db=float(value))
    if axis == "snr_h_db":
        return replace(cfg, snr_h_db=float(value))
    if axis == "l":
        return replace(cfg, l=int(value))
    if axis in {"ls", "l_s"}:
        return replace(cfg, l_s=int(value))
    if axis == "alg":
        return replace(cfg, acquisition=str(value))
    if axis == "m":
        rows, cols = _ris_shape(int(value))
        return replace(cfg, m_rows=rows, m_cols=cols)
    if axis == "u":
        return replace(cfg, u=int(value))
    if axis == "alpha1":
        return replace(cfg, gain_split=float(value))
    if axis == "ns":
        return replace(cfg, n_s=int(value))
    raise ConfigError(f"unknown axis {axis!r}")


def _ris_shape(m: int) -> tuple[int, int]:
    """Split M into the most-square (rows, cols) factor pair."""
    best = (1, m)
    for rows in range(1, int(m**0.5) + 1):
        if m % rows == 0:
            best = (rows, m // rows)
    return best


_BOOL = {"true": True, "1": True, "yes": True, "false": False, "0": False, "no": False}


def _convert(name: str, kind, raw: str):
    raw = raw.strip()
    if raw.lower() in {"none", "perfect"}:
        return None
    if kind is bool or name == "on_grid":
        if raw.lower() not in _BOOL:
            raise ConfigError(f"bad boolean for {name}: {raw!r}")
        return _BOOL[raw.lower()]
    if name in {"sweep_values", "variant_values"}:
        vals = []
        for tok in raw.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                vals.append(int(tok))
            except ValueError:
                try:
                    vals.append(float(tok))
                except ValueError:
                    vals.append(tok)
        return tuple(vals)
    try:
        if kind is int or kind == "int":
            return int(raw)
        if kind is float or kind == "float":
            return float(raw)
    except ValueError as exc:
        raise ConfigError(f"bad value for {name}: {raw!r}") from exc
    return raw


def parse_scenario_file(path: str | Path) -> ScenarioConfig:
    """Parse the flat key/value grammar into a ScenarioConfig."""
    text = Path(path).read_text()
    known = {f.name: f for f in fields(ScenarioConfig)}
    kwargs = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in body.split("=", 1))
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        f = known[key]
        base = f.type if isinstance(f.type, type) else None
        if base is None:
            tname = str(f.type)
            base = int if "int" in tname else float if "float" in tname else str
        kwargs[key] = _convert(key, base, raw)
    if "name" not in kwargs:
        kwargs["name"] = Path(path).stem
    try:
        return ScenarioConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def format_scenario(cfg: ScenarioConfig) -> str:
    """Serialize a config back into the flat key/value grammar."""
    lines = []
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            v = "none"
        elif isinstance(v, tuple):
            v = ", ".join(_fmt(x) for x in v)
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"
