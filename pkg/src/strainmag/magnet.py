"""Analytic energy landscape of a strained elliptical nanomagnet.

The in-plane potential energy of a thin elliptical magnet with uniaxial
stress sigma applied along the major axis is

    E(theta) = (mu0/2) Ms^2 V [N1 cos^2(theta) + N2 sin^2(theta)]
               - (3/2) lambda_s Y eps V cos^2(theta)

with theta the angle between the magnetization and the major axis,
eps = sigma/Y the strain, and N1/N2 the in-plane demagnetization factors
of the ellipse (truncated series in t/a and (a-b)/a).  Sign convention:
sigma > 0 is tensile along the major axis, so for a negative-
magnetostriction material (e.g. Co) tensile stress lowers the barrier.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .constants import KB, MU0


@dataclass(frozen=True)
class MagnetSpec:
    """Geometry and material parameters of one elliptical nanomagnet.

    Lengths are full axis lengths (diameters), all SI units.
    """

    major_axis: float        # a [m]
    minor_axis: float        # b [m]
    thickness: float         # t [m]
    saturation_magnetization: float   # Ms [A/m]
    magnetostriction: float  # lambda_s, dimensionless (Co: -35e-6)
    youngs_modulus: float    # Y [Pa]
    gilbert_damping: float   # alpha, dimensionless
    temperature: float = 300.0  # T [K]

    def __post_init__(self):
        if not (self.major_axis >= self.minor_axis > 0.0):
            raise ValueError(
                "require major_axis >= minor_axis > 0; orient the ellipse "
                "with the long axis first"
            )
        if not (0.0 < self.thickness < self.minor_axis):
            raise ValueError("require 0 < thickness < minor_axis (thin ellipse)")
        if self.saturation_magnetization <= 0.0:
            raise ValueError("saturation_magnetization must be positive")
        if self.youngs_modulus <= 0.0:
            raise ValueError("youngs_modulus must be positive")
        if self.gilbert_damping <= 0.0:
            raise ValueError("gilbert_damping must be positive")
        if self.temperature < 0.0:
            raise ValueError("temperature must be non-negative")

    @property
    def volume(self) -> float:
        """Ellipse volume pi*(a/2)*(b/2)*t [m^3]."""
        return math.pi * (self.major_axis / 2) * (self.minor_axis / 2) * self.thickness

    def thermal_energy(self) -> float:
        """kT at the device temperature [J]."""
        return KB * self.temperature


@dataclass(frozen=True)
class DemagFactors:
    """In-plane (n1, n2) and out-of-plane (n3) demagnetization factors."""

    n1: float
    n2: float
    n3: float


@dataclass(frozen=True)
class StressState:
    """Signed uniaxial stress along the major axis and its strain."""

    stress: float  # sigma [Pa], positive = tensile along the major axis
    strain: float  # eps = sigma/Y, dimensionless

    @classmethod
    def from_stress(cls, stress: float, youngs_modulus: float) -> "StressState":
        return cls(stress=stress, strain=stress / youngs_modulus)


def _as_stress(stress: "StressState | float", spec: MagnetSpec) -> StressState:
    if isinstance(stress, StressState):
        return stress
    return StressState.from_stress(float(stress), spec.youngs_modulus)


def demag_factors(spec: MagnetSpec) -> DemagFactors:
    """Demagnetization factors of a thin elliptical disk.

    Truncated series in (t/a) and the relative eccentricity (a-b)/a;
    n3 is defined as 1 - n1 - n2 so the sum is exact.
    """
    a, b, t = spec.major_axis, spec.minor_axis, spec.thickness
    e = (a - b) / a
    n1 = (math.pi / 4) * (t / a) * (1 - e / 4 - 3 * e * e / 16)
    n2 = (math.pi / 4) * (t / a) * (1 + 5 * e / 4 + 21 * e * e / 16)
    return DemagFactors(n1=n1, n2=n2, n3=1.0 - n1 - n2)


def shape_anisotropy_density(spec: MagnetSpec) -> float:
    """In-plane shape anisotropy energy density (mu0/2) Ms^2 (N2 - N1) [J/m^3]."""
    d = demag_factors(spec)
    return 0.5 * MU0 * spec.saturation_magnetization**2 * (d.n2 - d.n1)


def _well_coefficient(spec: MagnetSpec, stress: StressState) -> float:
    """Coefficient [J/m^3] of the double-well term.

    Positive value = depth of the easy-axis wells per unit volume; the
    stress term 1.5*lambda_s*sigma lowers it when lambda_s*sigma < 0.
    """
    return shape_anisotropy_density(spec) + 1.5 * spec.magnetostriction * stress.stress


def energy(spec: MagnetSpec, stress: "StressState | float", theta) -> np.ndarray | float:
    """In-plane potential energy E(theta) [J]; vectorized over theta."""
    st = _as_stress(stress, spec)
    d = demag_factors(spec)
    ms, vol = spec.saturation_magnetization, spec.volume
    c2 = np.cos(theta) ** 2
    shape = 0.5 * MU0 * ms * ms * vol * (d.n1 * c2 + d.n2 * (1.0 - c2))
    strain = -1.5 * spec.magnetostriction * spec.youngs_modulus * st.strain * vol * c2
    return shape + strain


def barrier_height(spec: MagnetSpec, stress: "StressState | float") -> float:
    """Energy barrier separating the two easy-axis wells [J].

    Closed form: volume * max(0, (mu0/2) Ms^2 (N2-N1) + 1.5 lambda_s sigma).
    Zero once the double-well feature has vanished (at and beyond the
    critical stress); a barrier-raising stress increases it.
    """
    st = _as_stress(stress, spec)
    return spec.volume * max(0.0, _well_coefficient(spec, st))


def critical_stress(spec: MagnetSpec) -> float:
    """Signed stress at which the double-well feature vanishes [Pa].

    Tensile (positive) for negative magnetostriction, compressive for
    positive magnetostriction.
    """
    if spec.magnetostriction == 0.0:
        raise ValueError("not magnetostrictive: magnetostriction is zero")
    return -shape_anisotropy_density(spec) / (1.5 * spec.magnetostriction)


def landscape_table(
    spec: MagnetSpec,
    stresses: Iterable[float],
    thetas: Sequence[float],
) -> np.ndarray:
    """Rows (stress_Pa, theta_rad, E - E_min) for plotting landscape curves.

    E_min is computed per stress value from the closed form (the extrema
    of A + B cos^2 theta sit at theta = 0 and pi/2).
    """
    thetas = np.asarray(thetas, dtype=float)
    if thetas.size == 0:
        raise ValueError("theta grid must be nonempty")
    rows = []
    for sigma in stresses:
        e = np.asarray(energy(spec, sigma, thetas))
        e_min = min(energy(spec, sigma, 0.0), energy(spec, sigma, math.pi / 2))
        rows.append(np.column_stack([np.full_like(thetas, sigma), thetas, e - e_min]))
    return np.vstack(rows)


def write_landscape_csv(table: np.ndarray, stream: TextIO) -> None:
    """Serialize a landscape table as CSV."""
    writer = csv.writer(stream)
    writer.writerow(["stress_Pa", "theta_rad", "energy_minus_min_J"])
    for sigma, theta, e in table:
        writer.writerow([repr(float(sigma)), repr(float(theta)), repr(float(e))])
