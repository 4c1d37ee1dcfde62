"""Physical constants used throughout the package (SI units)."""

from scipy import constants as _sc

#: vacuum permeability [H/m]
MU0 = _sc.mu_0

#: Boltzmann constant [J/K]
KB = _sc.k

#: gyromagnetic factor in LLG field units [m/(A s)];
#: equals 1.76e11 rad/(s T) times mu0
GAMMA = 2.211e5
