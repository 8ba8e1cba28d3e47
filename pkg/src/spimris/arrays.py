"""Array geometry: ULA/UPA steering vectors and direction dictionaries.

Angles cross the API in degrees and are converted to radians internally.
All steering vectors are unit-norm with the first element at zero phase.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, DomainError

__all__ = [
    "UlaSpec",
    "UpaSpec",
    "DirectionGrid",
    "ula_steering",
    "upa_steering",
    "build_bs_dictionary",
    "default_direction_grid",
]


@dataclass(frozen=True)
class UlaSpec:
    """Uniform linear array: element count and spacing in wavelengths."""

    num_elements: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if self.num_elements < 1:
            raise DomainError(f"num_elements must be >= 1, got {self.num_elements}")
        if self.spacing_over_wavelength <= 0:
            raise DomainError("spacing_over_wavelength must be positive")


@dataclass(frozen=True)
class UpaSpec:
    """Uniform planar array on the yz-plane, rows along z and columns along y."""

    rows: int
    cols: int
    spacing_over_wavelength: float = 0.5

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise DomainError("UPA rows and cols must be >= 1")
        if self.spacing_over_wavelength <= 0:
            raise DomainError("spacing_over_wavelength must be positive")

    @property
    def size(self) -> int:
        return self.rows * self.cols


@dataclass(frozen=True)
class DirectionGrid:
    """Ordered dictionary grid of candidate directions, in degrees."""

    angles_deg: np.ndarray = field(repr=False)

    def __post_init__(self):
        angles = np.asarray(self.angles_deg, dtype=float)
        object.__setattr__(self, "angles_deg", angles)
        if angles.ndim != 1 or angles.size < 1:
            raise DomainError("grid must be a non-empty 1-D angle list")
        if np.any(angles < -90.0) or np.any(angles > 90.0):
            raise DomainError("grid angles must lie in [-90, 90] degrees")
        if np.any(np.diff(angles) <= 0):
            raise DomainError("grid angles must be strictly increasing")

    @property
    def size(self) -> int:
        return int(self.angles_deg.size)


def _check_angle(angle_deg: float, name: str = "angle"):
    if not (-90.0 <= angle_deg <= 90.0):
        raise DomainError(f"{name} must lie in [-90, 90] degrees, got {angle_deg}")


def ula_steering(spec: UlaSpec, angle_deg: float) -> np.ndarray:
    """Unit-norm ULA response (1/sqrt(N)) * exp(j*2*pi*(d/lambda)*n*sin(theta))."""
    _check_angle(angle_deg)
    n = np.arange(spec.num_elements)
    phase = 2.0 * np.pi * spec.spacing_over_wavelength * n * np.sin(np.deg2rad(angle_deg))
    return np.exp(1j * phase) / np.sqrt(spec.num_elements)


def upa_steering(
    spec: UpaSpec,
    azimuth_deg: float,
    elevation_deg: float,
    z_cos_factor: bool = False,
) -> np.ndarray:
    """Unit-norm UPA response for azimuth theta and elevation phi.

    Element ordering is column-major over (m1 in 1..cols, m2 in 1..rows) with
    m1 (the y-axis index) fastest; the phase exponent is
    2*pi*(d/lambda)*[(m1-1)*cos(phi)*sin(theta) + (m2-1)*sin(phi)].
    `z_cos_factor=True` multiplies the (m2-1) term by cos(phi) instead
    (the more common form); it is off by default.
    """
    _check_angle(azimuth_deg, "azimuth")
    _check_angle(elevation_deg, "elevation")
    theta = np.deg2rad(azimuth_deg)
    phi = np.deg2rad(elevation_deg)
    m1 = np.arange(spec.cols)
    m2 = np.arange(spec.rows)
    y_term = m1 * np.cos(phi) * np.sin(theta)
    z_term = m2 * (np.sin(phi) * np.cos(phi) if z_cos_factor else np.sin(phi))
    # m1 fastest: element index k = m1 + m2*cols
    exponent = y_term[None, :] + z_term[:, None]
    phase = 2.0 * np.pi * spec.spacing_over_wavelength * exponent.ravel()
    return np.exp(1j * phase) / np.sqrt(spec.size)


def build_bs_dictionary(spec: UlaSpec, grid: DirectionGrid) -> np.ndarray:
    """N x P dictionary whose column p is the steering vector at grid angle p."""
    n = np.arange(spec.num_elements)[:, None]
    sines = np.sin(np.deg2rad(grid.angles_deg))[None, :]
    phase = 2.0 * np.pi * spec.spacing_over_wavelength * n * sines
    return np.exp(1j * phase) / np.sqrt(spec.num_elements)


def default_direction_grid(spec: UlaSpec, size: int | None = None) -> DirectionGrid:
    """Grid of `size` points uniform in sin(theta) over [-1, 1).

    Uniform sin-spacing keeps the ULA dictionary coherence constant; the
    half-open interval avoids the duplicate column sin = -1 vs sin = +1
    would create. Default size is 2N.
    """
    p = 2 * spec.num_elements if size is None else int(size)
    if p < 1:
        raise ContractViolation("grid size must be >= 1")
    sines = -1.0 + 2.0 * np.arange(p) / p
    return DirectionGrid(np.rad2deg(np.arcsin(sines)))
