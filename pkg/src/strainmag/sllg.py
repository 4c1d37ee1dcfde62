"""Finite-temperature stochastic LLG integration of one macrospin.

The magnetization unit vector m evolves under

    dm/dt = -gamma (m x H) - alpha gamma [m (m.H) - H]

with the effective field (major axis along y, film normal along z)

    H_x = -Ms N2 m_x + h_x
    H_y = -Ms N1 m_y + h_y + 3 lambda_s eps Y / (mu0 Ms) m_y
    H_z = -Ms N3 m_z + h_z

and thermal field components h_i drawn each step as independent
Gaussians with standard deviation

    sqrt(2 alpha kT / (gamma (1 + alpha^2) mu0 Ms V dt)).

The default integrator is an explicit Euler finite-difference step with
renormalization after every step; a Heun predictor-corrector is
available for convergence cross-checks.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from typing import TextIO

import numpy as np
from numba import njit

from .constants import GAMMA, KB, MU0
from .errors import DivergenceError
from .magnet import MagnetSpec, StressState, _as_stress, demag_factors

#: initial orientation used for the "near-easy-axis" token: tilted 1 degree
#: off the major axis to avoid the noise-free unstable equilibrium.
NEAR_EASY_AXIS = (math.sin(math.radians(1.0)), math.cos(math.radians(1.0)), 0.0)

#: relative norm drift beyond which a step is treated as diverged
NORM_DRIFT_LIMIT = 1e-3

_CHUNK_STEPS = 1 << 18


@dataclass(frozen=True)
class MagnetizationState:
    """Unit magnetization vector, components normalized to Ms."""

    m_x: float
    m_y: float
    m_z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.m_x, self.m_y, self.m_z], dtype=float)

    @classmethod
    def from_array(cls, m) -> "MagnetizationState":
        return cls(float(m[0]), float(m[1]), float(m[2]))


@dataclass(frozen=True)
class SimulationConfig:
    """Run parameters for one stochastic trajectory."""

    time_step: float = 1e-13       # dt [s]
    duration: float = 1e-6         # [s]
    seed: int = 0
    decimation: int = 1000         # store every k-th step
    stress: float = 0.0            # sigma [Pa]
    temperature: float = 300.0     # [K]
    initial_state: "MagnetizationState | str" = "near-easy-axis"
    integrator: str = "euler"      # "euler" or "heun"

    def __post_init__(self):
        if self.time_step <= 0.0:
            raise ValueError("time_step must be positive")
        if self.duration < self.time_step:
            raise ValueError("duration must be at least one time step")
        if self.decimation < 1:
            raise ValueError("decimation must be >= 1")
        if self.temperature < 0.0:
            raise ValueError("temperature must be non-negative")
        if self.integrator not in ("euler", "heun"):
            raise ValueError("integrator must be 'euler' or 'heun'")
        if isinstance(self.initial_state, str) and self.initial_state != "near-easy-axis":
            raise ValueError("initial_state must be a MagnetizationState or 'near-easy-axis'")

    def initial_vector(self) -> np.ndarray:
        if isinstance(self.initial_state, MagnetizationState):
            m = self.initial_state.as_array()
        else:
            m = np.array(NEAR_EASY_AXIS)
        return m / np.linalg.norm(m)


@dataclass(frozen=True)
class Trajectory:
    """Decimated time series of magnetization states plus run metadata."""

    times: np.ndarray      # [s], shape (n,)
    states: np.ndarray     # shape (n, 3), columns m_x, m_y, m_z
    config: SimulationConfig
    spec: MagnetSpec

    @property
    def m_y(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def sample_interval(self) -> float:
        return self.config.decimation * self.config.time_step

    def in_plane_angle(self) -> np.ndarray:
        """Angle between the in-plane magnetization and the major axis, (-pi, pi]."""
        return np.arctan2(self.states[:, 0], self.states[:, 1])

    def write_csv(self, stream: TextIO) -> None:
        header = {
            "spec": vars(self.spec),
            "config": {
                k: (v if not isinstance(v, MagnetizationState) else list(v.as_array()))
                for k, v in vars(self.config).items()
            },
        }
        stream.write("# " + json.dumps(header) + "\n")
        writer = csv.writer(stream)
        writer.writerow(["time_s", "mx", "my", "mz"])
        for t, (mx, my, mz) in zip(self.times, self.states):
            writer.writerow([repr(float(t)), repr(float(mx)), repr(float(my)), repr(float(mz))])

    @classmethod
    def read_csv(cls, stream: TextIO) -> "Trajectory":
        """Rebuild a trajectory from write_csv output."""
        first = stream.readline()
        if not first.startswith("# "):
            raise ValueError("missing trajectory metadata header")
        meta = json.loads(first[2:])
        spec = MagnetSpec(**meta["spec"])
        cfg_kwargs = dict(meta["config"])
        if isinstance(cfg_kwargs.get("initial_state"), list):
            cfg_kwargs["initial_state"] = MagnetizationState(*cfg_kwargs["initial_state"])
        config = SimulationConfig(**cfg_kwargs)
        rows = list(csv.reader(stream))
        data = np.array(rows[1:], dtype=float)
        return cls(times=data[:, 0], states=data[:, 1:4], config=config, spec=spec)


def thermal_field_amplitude(spec: MagnetSpec, dt: float, temperature: float | None = None) -> float:
    """Per-component standard deviation of the thermal field [A/m]."""
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    T = spec.temperature if temperature is None else temperature
    alpha = spec.gilbert_damping
    return math.sqrt(
        2.0 * alpha * KB * T
        / (GAMMA * (1.0 + alpha**2) * MU0 * spec.saturation_magnetization * spec.volume * dt)
    )


def thermal_field(spec: MagnetSpec, dt: float, gaussians, temperature: float | None = None) -> np.ndarray:
    """Thermal noise field for one step given three standard-normal draws."""
    return thermal_field_amplitude(spec, dt, temperature) * np.asarray(gaussians, dtype=float)


def _field_coefficients(spec: MagnetSpec, stress: StressState) -> tuple[float, float, float]:
    """Linear coefficients (cx, cy, cz) such that H_i = c_i m_i + noise."""
    d = demag_factors(spec)
    ms = spec.saturation_magnetization
    cy_strain = 3.0 * spec.magnetostriction * stress.strain * spec.youngs_modulus / (MU0 * ms)
    return (-ms * d.n2, -ms * d.n1 + cy_strain, -ms * d.n3)


def effective_field(
    spec: MagnetSpec,
    stress: "StressState | float",
    state: "MagnetizationState | np.ndarray",
    noise=(0.0, 0.0, 0.0),
) -> np.ndarray:
    """Effective field (H_x, H_y, H_z) [A/m] at the given state."""
    st = _as_stress(stress, spec)
    m = state.as_array() if isinstance(state, MagnetizationState) else np.asarray(state, dtype=float)
    cx, cy, cz = _field_coefficients(spec, st)
    return np.array([cx, cy, cz]) * m + np.asarray(noise, dtype=float)


def state_energy(spec: MagnetSpec, stress: "StressState | float", state) -> float:
    """Full 3D energy of a magnetization state [J], including the N3 term."""
    st = _as_stress(stress, spec)
    m = state.as_array() if isinstance(state, MagnetizationState) else np.asarray(state, dtype=float)
    d = demag_factors(spec)
    ms, vol = spec.saturation_magnetization, spec.volume
    shape = 0.5 * MU0 * ms * ms * vol * (d.n2 * m[0] ** 2 + d.n1 * m[1] ** 2 + d.n3 * m[2] ** 2)
    strain = -1.5 * spec.magnetostriction * spec.youngs_modulus * st.strain * vol * m[1] ** 2
    return shape + strain


@njit(cache=True, nogil=True)
def _advance(m, noise, dt, gamma, alpha, cx, cy, cz, h_amp, heun,
             decim, step_offset, out):
    """Advance len(noise) steps in place; returns (new_step_offset, ok)."""
    mx, my, mz = m[0], m[1], m[2]
    g = step_offset
    for k in range(noise.shape[0]):
        hx = cx * mx + h_amp * noise[k, 0]
        hy = cy * my + h_amp * noise[k, 1]
        hz = cz * mz + h_amp * noise[k, 2]
        mdh = mx * hx + my * hy + mz * hz
        dx = -gamma * (hz * my - hy * mz) - alpha * gamma * (mx * mdh - hx)
        dy = -gamma * (hx * mz - hz * mx) - alpha * gamma * (my * mdh - hy)
        dz = -gamma * (hy * mx - hx * my) - alpha * gamma * (mz * mdh - hz)
        if heun:
            px = mx + dt * dx
            py = my + dt * dy
            pz = mz + dt * dz
            hx2 = cx * px + h_amp * noise[k, 0]
            hy2 = cy * py + h_amp * noise[k, 1]
            hz2 = cz * pz + h_amp * noise[k, 2]
            mdh2 = px * hx2 + py * hy2 + pz * hz2
            dx2 = -gamma * (hz2 * py - hy2 * pz) - alpha * gamma * (px * mdh2 - hx2)
            dy2 = -gamma * (hx2 * pz - hz2 * px) - alpha * gamma * (py * mdh2 - hy2)
            dz2 = -gamma * (hy2 * px - hx2 * py) - alpha * gamma * (pz * mdh2 - hz2)
            nx = mx + 0.5 * dt * (dx + dx2)
            ny = my + 0.5 * dt * (dy + dy2)
            nz = mz + 0.5 * dt * (dz + dz2)
        else:
            nx = mx + dt * dx
            ny = my + dt * dy
            nz = mz + dt * dz
        norm = math.sqrt(nx * nx + ny * ny + nz * nz)
        if not math.isfinite(norm) or abs(norm - 1.0) > NORM_DRIFT_LIMIT:
            return g, False
        mx, my, mz = nx / norm, ny / norm, nz / norm
        g += 1
        if g % decim == 0:
            i = g // decim
            out[i, 0] = mx
            out[i, 1] = my
            out[i, 2] = mz
    m[0], m[1], m[2] = mx, my, mz
    return g, True


def llg_step(
    spec: MagnetSpec,
    stress: "StressState | float",
    state: "MagnetizationState | np.ndarray",
    dt: float,
    rng: np.random.Generator,
    temperature: float | None = None,
    integrator: str = "euler",
) -> MagnetizationState:
    """One finite-difference step with fresh noise draws, renormalized."""
    st = _as_stress(stress, spec)
    m = state.as_array() if isinstance(state, MagnetizationState) else np.array(state, dtype=float)
    cx, cy, cz = _field_coefficients(spec, st)
    T = spec.temperature if temperature is None else temperature
    h_amp = thermal_field_amplitude(spec, dt, T) if T > 0.0 else 0.0
    noise = rng.standard_normal((1, 3)) if h_amp > 0.0 else np.zeros((1, 3))
    out = np.empty((2, 3))
    _, ok = _advance(
        m, noise, dt, GAMMA, spec.gilbert_damping, cx, cy, cz,
        h_amp, integrator == "heun", 1 << 62, 0, out,
    )
    if not ok:
        raise DivergenceError("integration diverged: time step too large")
    return MagnetizationState.from_array(m)


def simulate(spec: MagnetSpec, config: SimulationConfig) -> Trajectory:
    """Integrate one trajectory; bit-identical for identical (spec, config)."""
    n_steps = int(round(config.duration / config.time_step))
    decim = config.decimation
    st = StressState.from_stress(config.stress, spec.youngs_modulus)
    cx, cy, cz = _field_coefficients(spec, st)
    h_amp = (
        thermal_field_amplitude(spec, config.time_step, config.temperature)
        if config.temperature > 0.0
        else 0.0
    )
    m = config.initial_vector()
    n_samples = n_steps // decim + 1
    out = np.empty((n_samples, 3))
    out[0] = m
    rng = np.random.default_rng(config.seed)
    heun = config.integrator == "heun"
    step = 0
    while step < n_steps:
        k = min(_CHUNK_STEPS, n_steps - step)
        if h_amp > 0.0:
            noise = rng.standard_normal((k, 3))
        else:
            noise = np.zeros((k, 3))
        step, ok = _advance(
            m, noise, config.time_step, GAMMA, spec.gilbert_damping,
            cx, cy, cz, h_amp, heun, decim, step, out,
        )
        if not ok:
            raise DivergenceError(
                f"integration diverged at step {step}: time step too large"
            )
    times = np.arange(n_samples) * (decim * config.time_step)
    return Trajectory(times=times, states=out, config=config, spec=spec)


def derive_seed(seed_base: int, run_index: int) -> int:
    """Per-run seed: SeedSequence entropy (seed_base, run_index), fixed mixing."""
    ss = np.random.SeedSequence([int(seed_base), int(run_index)])
    return int(ss.generate_state(1, np.uint64)[0])


def ensemble(
    spec: MagnetSpec,
    config: SimulationConfig,
    n_runs: int,
    seed_base: int,
    workers: int | None = None,
) -> list[Trajectory]:
    """Independent trajectories with per-run derived seeds.

    Results depend only on (spec, config, n_runs, seed_base), not on the
    execution order or the number of workers.
    """
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    configs = [replace(config, seed=derive_seed(seed_base, i)) for i in range(n_runs)]
    if workers is not None and workers > 1 and n_runs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: simulate(spec, c), configs))
    return [simulate(spec, c) for c in configs]
