"""Built-in scenario registry reproducing the reported figure sweeps."""

from __future__ import annotations

from ..errors import ConfigError
from .config import ScenarioConfig

__all__ = ["SCENARIOS", "get_scenario", "list_scenarios"]


def _snr_grid(lo: int, hi: int, step: int = 5) -> tuple:
    return tuple(float(v) for v in range(lo, hi + 1, step))


SCENARIOS: dict[str, ScenarioConfig] = {
    # SE vs SNR, L=8, L_S in {1,2}; hybrid/FD baselines alongside
    "fig3": ScenarioConfig(
        name="fig3",
        sweep_name="snr_db",
        sweep_values=_snr_grid(-20, 10),
        variant_name="ls",
        variant_values=(1, 2),
    ),
    # SE vs channel-estimate SNR with OMP/CoSaMP acquisition, L=8, L_S=1
    "fig4": ScenarioConfig(
        name="fig4",
        sweep_name="snr_h_db",
        sweep_values=_snr_grid(0, 30),
        variant_name="alg",
        variant_values=("omp", "cosamp"),
        acquisition="omp",
        pilot_ris="hold",
        t_slots=8,
        snr_db=-10.0,
    ),
    # SE vs number of paths at SNR in {-10, 0} dB, L_S = N_S = 1
    "fig5": ScenarioConfig(
        name="fig5",
        sweep_name="l",
        sweep_values=(1, 2, 3, 4, 5, 6, 7, 8),
        snr_db=0.0,
    ),
    "fig5_snr-10": ScenarioConfig(
        name="fig5_snr-10",
        sweep_name="l",
        sweep_values=(1, 2, 3, 4, 5, 6, 7, 8),
        snr_db=-10.0,
    ),
    # SE vs L_S at SNR 0 dB, L = 8, N_S in {1, 2}
    "fig6": ScenarioConfig(
        name="fig6",
        sweep_name="l_s",
        sweep_values=(1, 2, 3, 4, 5, 6, 7, 8),
        variant_name="ns",
        variant_values=(1, 2),
    ),
    # SE vs path-power split alpha1 (alpha1 + alpha2 = 1), L=2, L_S=1
    "fig7": ScenarioConfig(
        name="fig7",
        l=2,
        sweep_name="alpha1",
        sweep_values=(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9),
    ),
    # SE vs RIS size M for L in {2,4,8}, L_S=1
    "fig8": ScenarioConfig(
        name="fig8",
        sweep_name="m",
        sweep_values=(16, 32, 64, 128, 256),
        variant_name="l",
        variant_values=(2, 4, 8),
    ),
    # Theorem bound vs L for L_S in {1..4}
    "fig9": ScenarioConfig(
        name="fig9",
        sweep_name="l",
        sweep_values=(2, 3, 4, 5, 6, 7, 8),
        variant_name="ls",
        variant_values=(1, 2, 3, 4),
        n_s=1,
    ),
    # multi-user SE vs L for U in {1,3,8}
    "fig10": ScenarioConfig(
        name="fig10",
        sweep_name="l",
        sweep_values=(1, 2, 4, 8),
        variant_name="u",
        variant_values=(1, 3, 8),
        u=1,
        trials=200,
    ),
    # multi-user SE vs U for L in {1,4,8}
    "fig11": ScenarioConfig(
        name="fig11",
        sweep_name="u",
        sweep_values=(1, 2, 3, 4, 5, 6, 7, 8),
        variant_name="l",
        variant_values=(1, 4, 8),
        trials=200,
    ),
}


def get_scenario(name: str) -> ScenarioConfig:
    try:
        return SCENARIOS[name]
    except KeyError:
        raise ConfigError(
            f"unknown scenario {name!r}; known: {', '.join(sorted(SCENARIOS))}"
        ) from None


def list_scenarios() -> list[str]:
    return sorted(SCENARIOS)
