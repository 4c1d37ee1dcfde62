"""Lumped-element reconfiguration energetics and Arrhenius retention planning.

Gate-side electrostatics of the piezoelectric actuator (gate voltage for
a target stress, pad capacitance, switching energy, thermal noise
margin) and retention-time planning via the Arrhenius law
tau = tau0 exp(barrier / kT), including per-device barrier equalization
across fabrication spread.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, TextIO

from scipy.constants import epsilon_0

from .constants import KB
from .errors import InfeasiblePlanError
from .magnet import MagnetSpec, shape_anisotropy_density

#: order-of-magnitude literature estimate for the reconfiguration energy of
#: the reference PMN-PT stack; the lumped-element formula below gives
#: ~1.6e-20 J for the same inputs, and the gap is not reconciled here.
LITERATURE_RECONFIG_ENERGY_ESTIMATE_J = 8.5e-20


@dataclass(frozen=True)
class PiezoStack:
    """Piezoelectric layer and gate-pad parameters."""

    d33: float                   # [C/N]
    relative_permittivity: float
    layer_thickness: float       # d [m]
    pad_area: float              # A [m^2]
    pad_count: int = 2

    def __post_init__(self):
        if min(self.d33, self.relative_permittivity, self.layer_thickness, self.pad_area) <= 0:
            raise ValueError("all piezo stack parameters must be positive")
        if self.pad_count < 1:
            raise ValueError("pad_count must be >= 1")


def gate_voltage(stack: PiezoStack, spec: MagnetSpec, stress: float) -> float:
    """Gate voltage [V] needed to generate the given stress: sigma d / (Y d33)."""
    return stress * stack.layer_thickness / (spec.youngs_modulus * stack.d33)


def pad_capacitance(stack: PiezoStack) -> float:
    """Total gate-pad capacitance [F]: pad_count * eps * A / d."""
    return (
        stack.pad_count
        * epsilon_0
        * stack.relative_permittivity
        * stack.pad_area
        / stack.layer_thickness
    )


def reconfig_energy(stack: PiezoStack, spec: MagnetSpec, stress: float) -> float:
    """Energy cost of one reconfiguration [J]: (1/2) C V_g^2."""
    return 0.5 * pad_capacitance(stack) * gate_voltage(stack, spec, stress) ** 2


def noise_voltage(stack: PiezoStack, temperature: float) -> float:
    """Thermal noise voltage on the gate capacitance [V]: sqrt(kT/C)."""
    if temperature < 0.0:
        raise ValueError("temperature must be non-negative")
    return math.sqrt(KB * temperature / pad_capacitance(stack))


def reconfig_report(
    stack: PiezoStack, spec: MagnetSpec, stress: float, temperature: float = 300.0
) -> dict:
    """Summary of the reconfiguration operating point."""
    v_g = gate_voltage(stack, spec, stress)
    v_n = noise_voltage(stack, temperature)
    return {
        "gate_voltage_V": v_g,
        "capacitance_F": pad_capacitance(stack),
        "reconfig_energy_J": reconfig_energy(stack, spec, stress),
        "literature_energy_estimate_J": LITERATURE_RECONFIG_ENERGY_ESTIMATE_J,
        "noise_voltage_V": v_n,
        "margin_ratio": v_g / v_n if v_n > 0 else math.inf,
    }


def retention_time(barrier: float, temperature: float, attempt_time: float) -> float:
    """Arrhenius retention time [s]: tau0 * exp(barrier / kT)."""
    if barrier < 0.0:
        raise ValueError("barrier must be non-negative")
    if attempt_time <= 0.0 or temperature <= 0.0:
        raise ValueError("attempt_time and temperature must be positive")
    return attempt_time * math.exp(barrier / (KB * temperature))


def barrier_for_retention(tau_target: float, temperature: float, attempt_time: float) -> float:
    """Barrier [J] whose Arrhenius retention time equals tau_target."""
    if attempt_time <= 0.0 or temperature <= 0.0:
        raise ValueError("attempt_time and temperature must be positive")
    if tau_target < attempt_time:
        raise ValueError("tau_target must be >= attempt_time")
    return KB * temperature * math.log(tau_target / attempt_time)


def stress_for_barrier(
    spec: MagnetSpec, barrier_target: float, allow_barrier_raising: bool = True
) -> float:
    """Stress [Pa] at which the double-well barrier equals the target.

    Barrier-lowering stresses solve targets below the zero-stress
    barrier; larger targets need a stress of the opposite (barrier-
    raising) sign, which can be disallowed.
    """
    if barrier_target < 0.0:
        raise ValueError("barrier_target must be non-negative")
    if spec.magnetostriction == 0.0:
        raise ValueError("not magnetostrictive: magnetostriction is zero")
    zero_stress = spec.volume * shape_anisotropy_density(spec)
    if barrier_target > zero_stress and not allow_barrier_raising:
        raise InfeasiblePlanError(
            f"barrier target {barrier_target:.3e} J exceeds the zero-stress "
            f"barrier {zero_stress:.3e} J: unreachable without barrier-raising strain"
        )
    # barrier = V * (K + 1.5 lambda_s sigma)  =>  solve for sigma
    return (barrier_target / spec.volume - shape_anisotropy_density(spec)) / (
        1.5 * spec.magnetostriction
    )


def equalize_barriers(
    specs: Sequence[MagnetSpec],
    barrier_target: float,
    allow_barrier_raising: bool = True,
) -> list[float]:
    """Per-device stresses [Pa] equalizing all barriers to the target."""
    stresses = []
    failures = []
    for i, spec in enumerate(specs):
        try:
            stresses.append(stress_for_barrier(spec, barrier_target, allow_barrier_raising))
        except InfeasiblePlanError as exc:
            failures.append((i, str(exc)))
    if failures:
        detail = "; ".join(f"device {i}: {msg}" for i, msg in failures)
        raise InfeasiblePlanError(f"{len(failures)} device(s) cannot reach the target: {detail}")
    return stresses


def retention_plan(
    spec: MagnetSpec,
    targets: Mapping[str, float],
    temperature: float,
    attempt_time: float,
    allow_barrier_raising: bool = True,
) -> list[dict]:
    """Memory-hierarchy plan: per-section barrier and stress for target retention."""
    rows = []
    for section, tau in targets.items():
        barrier = barrier_for_retention(tau, temperature, attempt_time)
        stress = stress_for_barrier(spec, barrier, allow_barrier_raising)
        rows.append(
            {
                "section": section,
                "target_retention_s": tau,
                "barrier_J": barrier,
                "barrier_kT": barrier / (KB * temperature),
                "stress_Pa": stress,
            }
        )
    return rows


def write_retention_plan_csv(rows: Iterable[dict], stream: TextIO) -> None:
    writer = csv.writer(stream)
    writer.writerow(["section", "target_retention_s", "barrier_J", "barrier_kT", "stress_Pa"])
    for row in rows:
        writer.writerow(
            [
                row["section"],
                repr(float(row["target_retention_s"])),
                repr(float(row["barrier_J"])),
                repr(float(row["barrier_kT"])),
                repr(float(row["stress_Pa"])),
            ]
        )
