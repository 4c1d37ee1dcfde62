"""Strain-reconfigurable stochastic nanomagnet neuron toolkit."""

from .magnet import (
    DemagFactors,
    MagnetSpec,
    StressState,
    barrier_height,
    critical_stress,
    demag_factors,
    energy,
    landscape_table,
)
from .sllg import (
    MagnetizationState,
    SimulationConfig,
    Trajectory,
    effective_field,
    ensemble,
    llg_step,
    simulate,
    thermal_field,
)
from .analysis import Regime, RegimeReport, classify_regime, dwell_times
from .neuron import AsnParams, asn_output, bsn_sample, fit_noise_profile, noise_profile
from .energetics import (
    PiezoStack,
    barrier_for_retention,
    equalize_barriers,
    gate_voltage,
    noise_voltage,
    pad_capacitance,
    reconfig_energy,
    retention_time,
    stress_for_barrier,
)
from .annealer import (
    AnnealSchedule,
    IsingProblem,
    anneal,
    brute_force,
    from_stress_profile,
    global_linear,
    local_field,
    per_neuron_table,
    sweep,
)

__version__ = "0.1.0"
