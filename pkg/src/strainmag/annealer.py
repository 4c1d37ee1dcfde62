"""Ising / p-bit network solver with per-neuron annealing schedules.

Spins are updated by sequential Gibbs sweeps in fixed ascending index
order, each spin drawn from the sigmoidal p-bit rule with its own
inverse temperature beta_i(t).  Schedules may be global, tabulated per
neuron, or derived from a physical stress profile through the
strained-magnet barrier height (beta = barrier / kT).

Energy convention: E(s) = -1/2 s^T J s - h^T s.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, TextIO

import numpy as np
from numba import njit

from .constants import KB
from .errors import ConfigError
from .magnet import MagnetSpec, barrier_height, critical_stress
from .neuron import bsn_sample

BRUTE_FORCE_MAX_SPINS = 24
_ENUM_CHUNK = 1 << 16


@dataclass(frozen=True)
class IsingProblem:
    """Symmetric coupling matrix (zero diagonal) and bias vector."""

    couplings: np.ndarray
    biases: np.ndarray

    def __post_init__(self):
        J = np.asarray(self.couplings, dtype=float)
        h = np.asarray(self.biases, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1]:
            raise ValueError("couplings must be a square matrix")
        if h.shape != (J.shape[0],):
            raise ValueError("biases length must match the coupling matrix")
        if not np.allclose(J, J.T):
            raise ValueError("couplings must be symmetric")
        if np.any(np.diag(J) != 0.0):
            raise ValueError("coupling diagonal must be zero")
        object.__setattr__(self, "couplings", J)
        object.__setattr__(self, "biases", h)

    @property
    def n(self) -> int:
        return self.couplings.shape[0]

    def energy(self, state) -> float:
        s = np.asarray(state, dtype=float)
        return float(-0.5 * s @ self.couplings @ s - self.biases @ s)


def parse_problem(text: str) -> IsingProblem:
    """Parse the edge-list format: `i j J_ij` lines plus `# h i value` biases."""
    edges = []
    biases = {}
    max_idx = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "h":
                if len(parts) != 3:
                    raise ConfigError(f"line {lineno}: bias lines must be '# h i value'")
                i, val = int(parts[1]), float(parts[2])
                biases[i] = biases.get(i, 0.0) + val
                max_idx = max(max_idx, i)
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ConfigError(f"line {lineno}: expected 'i j J_ij'")
        i, j, val = int(parts[0]), int(parts[1]), float(parts[2])
        if i == j:
            raise ConfigError(f"line {lineno}: self-coupling is not allowed")
        edges.append((i, j, val))
        max_idx = max(max_idx, i, j)
    if max_idx < 0:
        raise ConfigError("empty problem")
    n = max_idx + 1
    J = np.zeros((n, n))
    for i, j, val in edges:
        J[i, j] += val
        J[j, i] += val
    h = np.zeros(n)
    for i, val in biases.items():
        h[i] = val
    return IsingProblem(couplings=J, biases=h)


def problem_to_text(problem: IsingProblem) -> str:
    lines = []
    J, h = problem.couplings, problem.biases
    for i in range(problem.n):
        for j in range(i + 1, problem.n):
            if J[i, j] != 0.0:
                lines.append(f"{i} {j} {float(J[i, j])!r}")
    for i in range(problem.n):
        if h[i] != 0.0:
            lines.append(f"# h {i} {float(h[i])!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AnnealSchedule:
    """Per-neuron inverse-temperature profile over the sweep index."""

    mode: str  # "Global" or "PerNeuron"
    _fn: Callable[[int, int, int], np.ndarray] = field(repr=False)
    n_rows: int | None = None  # fixed sweep count for tabulated schedules

    def betas(self, t: int, n_sweeps: int, n_spins: int) -> np.ndarray:
        """Inverse temperatures for sweep t (0-based) of an n_sweeps run."""
        if self.n_rows is not None and n_sweeps != self.n_rows:
            raise ValueError(
                f"tabulated schedule has {self.n_rows} rows but the run asks "
                f"for {n_sweeps} sweeps"
            )
        b = np.asarray(self._fn(t, n_sweeps, n_spins), dtype=float)
        if b.shape == ():
            b = np.full(n_spins, float(b))
        return b

    def beta_matrix(self, n_sweeps: int, n_spins: int) -> np.ndarray:
        return np.vstack([self.betas(t, n_sweeps, n_spins) for t in range(n_sweeps)])


def global_linear(beta_start: float, beta_end: float) -> AnnealSchedule:
    """Single global profile interpolated linearly over the run."""
    for b in (beta_start, beta_end):
        if not (b >= 0.0):
            raise ValueError("beta values must be non-negative")
    if math.isinf(beta_start) != math.isinf(beta_end):
        raise ValueError("cannot interpolate between finite and infinite beta")

    def fn(t, n_sweeps, n_spins):
        if beta_start == beta_end:
            return np.full(n_spins, beta_start)
        frac = t / (n_sweeps - 1) if n_sweeps > 1 else 1.0
        return np.full(n_spins, beta_start + (beta_end - beta_start) * frac)

    return AnnealSchedule(mode="Global", _fn=fn)


def per_neuron_table(matrix) -> AnnealSchedule:
    """Explicit (n_sweeps, n_spins) table of inverse temperatures."""
    table = np.asarray(matrix, dtype=float)
    if table.ndim != 2:
        raise ValueError("schedule table must be 2-D (n_sweeps, n_spins)")
    if np.any(np.isnan(table)) or np.any(table < 0.0):
        raise ValueError("beta values must be non-negative (+inf allowed for greedy)")

    def fn(t, n_sweeps, n_spins):
        if n_spins != table.shape[1]:
            raise ValueError("schedule table width does not match the problem size")
        return table[t]

    return AnnealSchedule(mode="PerNeuron", _fn=fn, n_rows=table.shape[0])


def from_stress_profile(
    spec: MagnetSpec, stress_curves, temperature: float | None = None
) -> AnnealSchedule:
    """Map per-neuron stress curves to inverse temperatures beta = barrier/kT.

    stress_curves has shape (n_sweeps, n_spins) in Pa.  Stresses beyond
    ten times the critical stress magnitude are rejected as outside the
    linear magnetostriction regime the barrier formula assumes.
    """
    stresses = np.asarray(stress_curves, dtype=float)
    if stresses.ndim != 2:
        raise ValueError("stress_curves must be 2-D (n_sweeps, n_spins)")
    T = spec.temperature if temperature is None else temperature
    if T <= 0.0:
        raise ValueError("temperature must be positive")
    limit = 10.0 * abs(critical_stress(spec))
    if np.any(np.abs(stresses) > limit):
        raise ValueError(f"stress beyond admissible range (+-{limit:.3e} Pa)")
    kt = KB * T
    table = np.empty_like(stresses)
    for idx, sigma in np.ndenumerate(stresses):
        table[idx] = barrier_height(spec, sigma) / kt
    return per_neuron_table(table)


def local_field(problem: IsingProblem, state, i: int) -> float:
    """Input to spin i: sum_j J_ij s_j + h_i."""
    s = np.asarray(state, dtype=float)
    return float(problem.couplings[i] @ s + problem.biases[i])


def sweep(
    problem: IsingProblem,
    state,
    betas,
    rng: np.random.Generator,
) -> np.ndarray:
    """One sequential Gibbs sweep in ascending spin order."""
    s = np.array(state, dtype=np.int8)
    b = np.asarray(betas, dtype=float)
    for i in range(problem.n):
        f = local_field(problem, s, i)
        bias = 0.0 if f == 0.0 else b[i] * f
        s[i] = bsn_sample(bias, rng)
    return s


@njit(cache=True, nogil=True)
def _anneal_kernel(J, h, state, betas, uniforms, trace, best_state, states_out, record):
    n = state.shape[0]
    best_e = np.inf
    for t in range(betas.shape[0]):
        for i in range(n):
            f = h[i]
            for j in range(n):
                f += J[i, j] * state[j]
            arg = 0.0 if f == 0.0 else betas[t, i] * f
            p = 0.5 * (1.0 + math.tanh(arg))
            state[i] = 1 if uniforms[t, i] < p else -1
        if record:
            for i in range(n):
                states_out[t, i] = state[i]
        e = 0.0
        for i in range(n):
            row = 0.0
            for j in range(n):
                row += J[i, j] * state[j]
            e += state[i] * (0.5 * row + h[i])
        e = -e
        trace[t] = e
        if e < best_e:
            best_e = e
            for i in range(n):
                best_state[i] = state[i]
    return best_e


@dataclass(frozen=True)
class AnnealResult:
    best_state: np.ndarray
    best_energy: float
    energy_trace: np.ndarray
    sweeps: int
    seed: int
    visited_states: np.ndarray | None = None  # (n_sweeps, n) when recorded

    def to_json(self) -> str:
        return json.dumps(
            {
                "best_state": [int(s) for s in self.best_state],
                "best_energy": self.best_energy,
                "sweeps": self.sweeps,
                "seed": self.seed,
            }
        )

    def write_trace_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream)
        writer.writerow(["sweep", "energy"])
        for t, e in enumerate(self.energy_trace):
            writer.writerow([t, repr(float(e))])


def initial_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random +-1 start; consumes n uniform draws."""
    return np.where(rng.random(n) < 0.5, 1, -1).astype(np.int8)


def anneal(
    problem: IsingProblem,
    schedule: AnnealSchedule,
    n_sweeps: int,
    seed: int,
    record_states: bool = False,
) -> AnnealResult:
    """Run the schedule from a random start; deterministic per seed.

    Equivalent to repeated `sweep` calls against a generator seeded the
    same way: the run consumes n uniforms for the start state, then one
    uniform per spin update.  With record_states=True the state after
    every sweep is kept (for stationary-distribution checks).
    """
    if n_sweeps < 1:
        raise ValueError("n_sweeps must be >= 1")
    rng = np.random.default_rng(seed)
    state = initial_state(problem.n, rng)
    betas = schedule.beta_matrix(n_sweeps, problem.n)
    uniforms = rng.random((n_sweeps, problem.n))
    trace = np.empty(n_sweeps)
    best_state = np.empty(problem.n, dtype=np.int8)
    states_out = np.empty((n_sweeps if record_states else 1, problem.n), dtype=np.int8)
    best_e = _anneal_kernel(
        problem.couplings, problem.biases, state, betas, uniforms, trace,
        best_state, states_out, record_states,
    )
    return AnnealResult(
        best_state=best_state.astype(int),
        best_energy=float(best_e),
        energy_trace=trace,
        sweeps=n_sweeps,
        seed=seed,
        visited_states=states_out if record_states else None,
    )


def anneal_restarts(
    problem: IsingProblem,
    schedule: AnnealSchedule,
    n_sweeps: int,
    seeds: Sequence[int],
    workers: int | None = None,
) -> AnnealResult:
    """Best result over independent seeded restarts (ties: lowest seed)."""
    if not seeds:
        raise ValueError("need at least one seed")
    if workers is not None and workers > 1 and len(seeds) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda s: anneal(problem, schedule, n_sweeps, s), seeds))
    else:
        results = [anneal(problem, schedule, n_sweeps, s) for s in seeds]
    return min(results, key=lambda r: (r.best_energy, r.seed))


def brute_force(problem: IsingProblem) -> tuple[np.ndarray, float]:
    """Exhaustive ground-state search; ties resolved lexicographically.

    Enumeration runs in lexicographic order over (-1, +1) spin tuples,
    so the first minimum found is the lexicographically smallest.
    """
    n = problem.n
    if n > BRUTE_FORCE_MAX_SPINS:
        raise ValueError(f"instance too large for oracle (n > {BRUTE_FORCE_MAX_SPINS})")
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    best_e = np.inf
    best_state = None
    for start in range(0, 1 << n, _ENUM_CHUNK):
        k = np.arange(start, min(start + _ENUM_CHUNK, 1 << n), dtype=np.uint64)
        states = (((k[:, None] >> shifts) & 1) * 2 - 1).astype(np.int8)
        s = states.astype(float)
        energies = -0.5 * np.einsum("ij,jk,ik->i", s, problem.couplings, s) - s @ problem.biases
        idx = int(np.argmin(energies))
        if energies[idx] < best_e:
            best_e = float(energies[idx])
            best_state = states[idx].astype(int)
    return best_state, best_e
