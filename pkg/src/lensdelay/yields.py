"""Expected photon yields from microlensed M-dwarf flares, flare rates,
and the interstellar-medium phase-noise magnitude.

Signal photons come from the hot flare region (blackbody at T_flare over
area ~R_flare^2), background photons from the host dwarf; both are
integrated over the telescope passband with dust+atmosphere extinction:

    n = A_tel * tau_flare * (R/(c D_S))^2
        * Int e^(-tau(f)) * 2 pi f^2 / (exp(hf/kT) - 1) df.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from importlib import resources

import numpy as np
from scipy import integrate

from .constants import C_LIGHT, H_PLANCK, KPC, K_BOLTZMANN, K_DM, R_SUN

__all__ = [
    "FlareModel",
    "TelescopeSpec",
    "ExtinctionCurve",
    "default_extinction",
    "photons_per_flare",
    "telescope_examples",
    "flare_rate",
    "ism_phase_sigma",
    "passband_lambda_min",
]


@dataclass(frozen=True)
class FlareModel:
    """Fiducial flaring M5V dwarf in the Galactic Bulge.

    Rate power law: cumulative flares/day above energy E is
    rate_amplitude * (E / 1e30 erg)^rate_index.
    """

    R_flare: float = 3.0e6          # m (3000 km)
    T_flare: float = 1.0e4          # K
    duration: float = 60.0          # s
    R_dwarf: float = 0.2 * R_SUN    # m
    T_dwarf: float = 3060.0         # K
    D_S: float = 8.0 * KPC          # m
    rate_amplitude: float = 3.0     # /day at 1e30 erg
    rate_index: float = -0.65

    def __post_init__(self):
        for name in ("R_flare", "T_flare", "duration", "R_dwarf", "T_dwarf", "D_S",
                     "rate_amplitude"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class TelescopeSpec:
    """Collecting area (m^2) and passband [lambda_min, lambda_max] (m)."""

    area: float
    lambda_min: float = 365e-9
    lambda_max: float = 510e-9

    def __post_init__(self):
        if self.area <= 0:
            raise ValueError("collecting area must be positive")
        if not 0 < self.lambda_min < self.lambda_max:
            raise ValueError("need 0 < lambda_min < lambda_max")


class ExtinctionCurve:
    """Tabulated optical depth tau(lambda), interpolated log-linearly in
    wavelength; no extrapolation outside the table."""

    def __init__(self, wavelengths_nm, tau):
        lam = np.asarray(wavelengths_nm, dtype=float)
        tau = np.asarray(tau, dtype=float)
        if lam.ndim != 1 or lam.size < 2 or lam.shape != tau.shape:
            raise ValueError("need matching 1-D wavelength and tau arrays")
        order = np.argsort(lam)
        lam, tau = lam[order], tau[order]
        if np.any(np.diff(lam) <= 0):
            raise ValueError("wavelength table must be strictly ordered")
        if np.any(tau < 0):
            raise ValueError("optical depth must be nonnegative")
        self.wavelengths_nm = lam
        self.tau_table = tau

    @classmethod
    def from_file(cls, path) -> "ExtinctionCurve":
        """Load a two-column (wavelength_nm, tau) text table; '#' comments."""
        data = np.loadtxt(path, comments="#")
        if data.ndim != 2 or data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns (wavelength_nm, tau)")
        return cls(data[:, 0], data[:, 1])

    @classmethod
    def zero(cls) -> "ExtinctionCurve":
        return cls([1.0, 1e7], [0.0, 0.0])

    def __add__(self, other: "ExtinctionCurve") -> "ExtinctionCurve":
        lam = np.unique(np.concatenate([self.wavelengths_nm, other.wavelengths_nm]))
        lo = max(self.wavelengths_nm[0], other.wavelengths_nm[0])
        hi = min(self.wavelengths_nm[-1], other.wavelengths_nm[-1])
        lam = lam[(lam >= lo) & (lam <= hi)]
        return ExtinctionCurve(lam, self.tau_lambda(lam * 1e-9) + other.tau_lambda(lam * 1e-9))

    def tau_lambda(self, lam_m):
        """Optical depth at wavelength lam_m (m); raises outside the table."""
        lam_nm = np.asarray(lam_m, dtype=float) * 1e9
        if np.any(lam_nm < self.wavelengths_nm[0]) or np.any(lam_nm > self.wavelengths_nm[-1]):
            raise ValueError(
                f"wavelength outside extinction table "
                f"[{self.wavelengths_nm[0]:g}, {self.wavelengths_nm[-1]:g}] nm"
            )
        return np.interp(np.log(lam_nm), np.log(self.wavelengths_nm), self.tau_table)

    def tau_frequency(self, f_hz):
        return self.tau_lambda(C_LIGHT / np.asarray(f_hz, dtype=float))


def default_extinction() -> ExtinctionCurve:
    """Shipped Bulge dust + Mauna-Kea atmosphere reconstruction."""
    ref = resources.files("lensdelay").joinpath("data/extinction_bulge.txt")
    with resources.as_file(ref) as path:
        return ExtinctionCurve.from_file(path)


def photons_per_flare(model: FlareModel, tel: TelescopeSpec, ext: ExtinctionCurve,
                      which: str) -> float:
    """Expected photon count per flare from the flare region ("signal") or
    the host dwarf ("background"), by adaptive quadrature to 1e-8 relative.
    """
    if which == "signal":
        R, T = model.R_flare, model.T_flare
    elif which == "background":
        R, T = model.R_dwarf, model.T_dwarf
    else:
        raise ValueError("which must be 'signal' or 'background'")
    f_lo = C_LIGHT / tel.lambda_max
    f_hi = C_LIGHT / tel.lambda_min
    ext.tau_lambda(np.array([tel.lambda_min, tel.lambda_max]))  # no extrapolation

    def integrand(f):
        return math.exp(-float(ext.tau_frequency(f))) * 2.0 * math.pi * f * f / math.expm1(
            H_PLANCK * f / (K_BOLTZMANN * T)
        )

    # integrate piecewise between table knots: the log-linear interpolation
    # kinks there, which defeats a single adaptive pass
    knots = C_LIGHT / (ext.wavelengths_nm * 1e-9)
    cuts = np.concatenate([[f_lo], np.sort(knots[(knots > f_lo) & (knots < f_hi)]), [f_hi]])
    val = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        piece, _ = integrate.quad(integrand, a, b, epsrel=1e-9, limit=100)
        val += piece
    return tel.area * model.duration * (R / (C_LIGHT * model.D_S)) ** 2 * val


def telescope_examples(tel_area: float, model: FlareModel | None = None,
                       ext: ExtinctionCurve | None = None) -> tuple[float, float, float]:
    """(n_sig, n_bg, Q) for a telescope of the given collecting area under
    the fiducial model; Q = n_sig/(n_sig + n_bg) is area-independent."""
    model = model or FlareModel()
    ext = ext or default_extinction()
    tel = TelescopeSpec(area=tel_area)
    n_sig = photons_per_flare(model, tel, ext, "signal")
    n_bg = photons_per_flare(model, tel, ext, "background")
    return n_sig, n_bg, n_sig / (n_sig + n_bg)


def flare_rate(E_min_erg: float, model: FlareModel | None = None) -> float:
    """Cumulative rate (per day) of flares with energy >= E_min_erg."""
    model = model or FlareModel()
    if E_min_erg <= 0:
        raise ValueError("energy must be positive")
    if not 1e29 <= E_min_erg <= 1e32:
        warnings.warn(
            f"flare energy {E_min_erg:g} erg outside the power law's validity "
            "range 1e29-1e32 erg", stacklevel=2,
        )
    return model.rate_amplitude * (E_min_erg / 1e30) ** model.rate_index


def ism_phase_sigma(D_DM_ref: float, tau: float, D_S: float, nu: float,
                    D_S_ref: float = KPC, tau_ref: float = 60.0) -> float:
    """RMS interstellar phase wander (rad) over an observation of length tau.

    Scaling law sigma_phi = (2 pi / (K_DM nu)) sqrt(D_DM_ref * D_S/D_S_ref)
    * (tau/tau_ref)^(5/6), with D_DM_ref the dispersion-measure structure
    function (pc^2/cm^6, 1000-day scale) measured on a reference sightline
    of length D_S_ref, and tau_ref = 1 min the normalization timescale of
    the quoted coefficient.  Exact nu^-1, tau^(5/6), D_S^(1/2) scalings.
    """
    if min(D_DM_ref, tau, D_S, nu, D_S_ref, tau_ref) <= 0:
        raise ValueError("all ISM parameters must be positive")
    nu_mhz = nu / 1e6
    return (
        2.0 * math.pi / (K_DM * nu_mhz)
        * math.sqrt(D_DM_ref * D_S / D_S_ref)
        * (tau / tau_ref) ** (5.0 / 6.0)
    )


def passband_lambda_min(R_region: float, D_S: float, eps: float = 0.2,
                        A: float = 1.0) -> float:
    """Blue cutoff of the usable passband: the finite-source bound
    2 R^2 A / D_S divided by the safety prefactor eps.

    With the fiducial flare (R = 3000 km, D_S = 8 kpc, A omitted) this
    reproduces the 365 nm cutoff of the fiducial passband.
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    return 2.0 * R_region**2 * A / D_S / eps


def expected_flares(observation_days: float, E_min_erg: float,
                    model: FlareModel | None = None) -> float:
    """Expected number of usable flares in an observing campaign."""
    if observation_days <= 0:
        raise ValueError("observation length must be positive")
    return observation_days * flare_rate(E_min_erg, model)
