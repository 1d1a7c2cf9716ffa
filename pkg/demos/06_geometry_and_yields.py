"""Astrophysical bookkeeping: lens geometry, photon yields, robustness.

Headline numbers for the fiducial Bulge scenario: a Jupiter-mass lens
crosses in ~4 days; a solar-mass lens at u=1 delays the minor image by
~41 microseconds; the fiducial flare delivers ~0.44 signal and ~0.69
background photons per square meter of telescope.
"""

from lensdelay import (
    FlareModel,
    LensGeometry,
    SourceGeometry,
    crossing_time,
    delay_factor,
    einstein_radius,
    finite_source_lambda_min,
    flare_rate,
    ism_phase_sigma,
    magnification,
    passband_lambda_min,
    telescope_examples,
    time_delay,
)
from lensdelay.constants import KPC, M_JUP, M_SUN, R_EARTH, R_SUN

geom = LensGeometry(M=M_JUP, D_L=4 * KPC, D_S=8 * KPC, v_T=55e3)
print(f"theta_E(M_Jup, 4/8 kpc) = {einstein_radius(geom):.3e} rad")
print(f"t_E = {crossing_time(geom) / 86400:.2f} days")

A, A_plus, A_minus = magnification(1.0)
print(f"u=1: A = {A:.4f} (A+ = {A_plus:.4f}, A- = {A_minus:.4f}), "
      f"f(u) = {float(delay_factor(1.0)):.4f}")
print(f"delta_t(M_sun, u=1) = {time_delay(M_SUN, 1.0):.3e} s")

for label, radius in (("R_sun", R_SUN), ("R_earth", R_EARTH)):
    lam = finite_source_lambda_min(SourceGeometry(radius, 8 * KPC), A)
    print(f"finite-source wavelength bound at {label}: {lam:.3e} m")
print(f"fiducial flare blue cutoff (eps = 0.2): "
      f"{passband_lambda_min(3e6, 8 * KPC) * 1e9:.0f} nm")

model = FlareModel()
for area, name in ((1.0, "1 m^2"), (152.0, "Keck pair"), (978.0, "ELT")):
    n_sig, n_bg, q = telescope_examples(area)
    print(f"{name:9s}: n_sig = {n_sig:7.2f}, n_bg = {n_bg:7.2f}, Q = {q:.3f}")
print(f"flares above 1e31 erg: {flare_rate(1e31):.2f} per day")
print(f"ISM phase wander over one minute: "
      f"{ism_phase_sigma(1e-6, 60.0, 8 * KPC, 750e12):.2e} rad")
