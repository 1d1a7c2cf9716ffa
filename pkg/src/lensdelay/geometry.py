"""Point-lens geometry: image positions, magnification, time delay,
Einstein crossing time, and the finite-source wavelength bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import C_LIGHT, G

__all__ = [
    "LensGeometry",
    "SourceGeometry",
    "einstein_radius",
    "crossing_time",
    "image_positions",
    "magnification",
    "delay_factor",
    "time_delay",
    "finite_source_lambda_min",
]


@dataclass(frozen=True)
class LensGeometry:
    """Single point lens between observer and source.

    M: lens mass (kg); D_L, D_S: lens and source distances (m);
    v_T: relative transverse velocity (m/s); u: impact parameter in units
    of the Einstein radius.
    """

    M: float
    D_L: float
    D_S: float
    v_T: float = 0.0
    u: float = 1.0

    def __post_init__(self):
        if not 0 < self.D_L < self.D_S:
            raise ValueError("need 0 < D_L < D_S")
        if self.M <= 0:
            raise ValueError("lens mass must be positive")
        if self.u < 0:
            raise ValueError("impact parameter must be >= 0")


@dataclass(frozen=True)
class SourceGeometry:
    """Emitting region: physical radius R_S (m) at distance D_S (m)."""

    R_S: float
    D_S: float

    def __post_init__(self):
        if self.R_S <= 0 or self.D_S <= 0:
            raise ValueError("source radius and distance must be positive")


def einstein_radius(geom: LensGeometry) -> float:
    """Angular Einstein radius theta_E = sqrt(4GM(1 - D_L/D_S)/(D_L c^2))."""
    return math.sqrt(4.0 * G * geom.M * (1.0 - geom.D_L / geom.D_S) / (geom.D_L * C_LIGHT**2))


def crossing_time(geom: LensGeometry) -> float:
    """Einstein crossing timescale t_E = theta_E * D_L / v_T (s)."""
    if geom.v_T <= 0:
        raise ValueError("transverse velocity must be positive")
    return einstein_radius(geom) * geom.D_L / geom.v_T


def image_positions(beta: float, theta_E: float) -> tuple[float, float]:
    """Major/minor image angles theta_+- = (beta +- sqrt(beta^2 + 4 theta_E^2))/2.

    Satisfies theta_+ * |theta_-| = theta_E^2.  The minor image is
    evaluated as -theta_E^2/theta_+, which avoids the cancellation the
    direct difference suffers for beta >> theta_E.
    """
    if theta_E <= 0:
        raise ValueError("Einstein radius must be positive")
    root = math.sqrt(beta * beta + 4.0 * theta_E * theta_E)
    plus = 0.5 * (beta + root)
    return plus, -theta_E * theta_E / plus


def magnification(u: float) -> tuple[float, float, float]:
    """Total and per-image magnification of the point lens.

    Returns (A, A_plus, A_minus) with A = (u^2+2)/(u sqrt(u^2+4)) and
    A_+- = A/2 +- 1/2.  Diverges as u -> 0 (perfect alignment).
    """
    if u <= 0:
        raise ValueError("magnification diverges at u = 0 (perfect alignment)")
    A = (u * u + 2.0) / (u * math.sqrt(u * u + 4.0))
    return A, 0.5 * A + 0.5, 0.5 * A - 0.5


def delay_factor(u) -> float | np.ndarray:
    """Dimensionless delay factor
    f(u) = u*sqrt(u^2+4)/2 + ln((sqrt(u^2+4)+u)/(sqrt(u^2+4)-u))."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise ValueError("impact parameter must be >= 0")
    root = np.sqrt(u * u + 4.0)
    out = 0.5 * u * root + np.log((root + u) / (root - u))
    return out if out.ndim else float(out)


def time_delay(M: float, u: float) -> float:
    """Lensing time delay Delta_t = (4GM/c^3) f(u) (s); distance-free."""
    if M <= 0:
        raise ValueError("lens mass must be positive")
    return 4.0 * G * M / C_LIGHT**3 * delay_factor(u)


def finite_source_lambda_min(src: SourceGeometry, A: float = 1.34) -> float:
    """Coarse finite-source bound on usable wavelength:
    delta_lambda >= 2 R_S^2 A / D_S (m).

    Path-length spread across the emitting region; fringes survive only
    for wavelengths above it.
    """
    if A < 1.0:
        raise ValueError("magnification must be >= 1")
    return 2.0 * src.R_S**2 * A / src.D_S
