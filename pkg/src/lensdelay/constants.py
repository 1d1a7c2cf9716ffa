"""Physical constants (SI) used across the package.

Values are fixed at the rounded CODATA-style figures the rest of the
package is calibrated against; quoted-tolerance tests budget for this
rounding.
"""

G = 6.674e-11          # gravitational constant, m^3 kg^-1 s^-2
C_LIGHT = 2.998e8      # speed of light, m/s
H_PLANCK = 6.62607015e-34   # Planck constant, J s
K_BOLTZMANN = 1.380649e-23  # Boltzmann constant, J/K

M_SUN = 1.989e30       # solar mass, kg
M_JUP = 1.898e27       # Jupiter mass, kg
R_SUN = 6.957e8        # solar radius, m
R_EARTH = 6.371e6      # Earth radius, m

PARSEC = 3.086e16      # m
KPC = 1e3 * PARSEC
DAY = 86400.0          # s
ERG = 1e-7             # J

# Dispersion constant: DM [pc cm^-3] / (K_DM * nu[MHz]^2) = delay [s].
K_DM = 2.41e-4         # cm^-3 pc MHz^-2 s^-1
