"""Quantitative fluctuation-regime analysis of magnetization trajectories.

Turns m_y(t) traces into a regime classification (binary / analog /
intermediate telegraph behavior), dwell-time statistics and correlation
times.  The classifier uses Sarle's bimodality coefficient
(skewness^2 + 1)/kurtosis, for which a uniform distribution scores 5/9;
rail-to-rail telegraph signals score close to 1.
"""

from __future__ import annotations

import csv
import enum
import json
import warnings
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .sllg import Trajectory

# Classifier constants. For the thin in-plane ellipse the equilibrium m_y
# distribution keeps integrable peaks at +-1 even for a nearly flat
# landscape (the in-plane angle is uniform, m_y = cos(angle) is
# arcsine-distributed, coefficient 2/3), so the analog cutoff sits well
# above the uniform benchmark of 5/9.
BINARY_MIN_BIMODALITY = 0.87
ANALOG_MAX_BIMODALITY = 0.77
BINARY_MIN_MODE_SEPARATION = 1.0

#: minimum trajectory length, in autocorrelation times, for a confident call
MIN_COVERAGE = 100.0

DEFAULT_BINS = 64


class Regime(enum.Enum):
    BINARY = "Binary"
    ANALOG = "Analog"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class RegimeReport:
    """Classification summary of one trajectory."""

    bin_centers: np.ndarray
    density: np.ndarray
    bimodality_coefficient: float
    mode_separation: float
    mean_dwell_time: float      # [s]; nan if no completed dwells
    autocorrelation_time: float  # [s]
    regime: Regime
    too_short: bool = False

    def to_json(self) -> str:
        return json.dumps(
            {
                "regime": self.regime.value,
                "bimodality_coefficient": self.bimodality_coefficient,
                "mode_separation": self.mode_separation,
                "mean_dwell_time_s": self.mean_dwell_time,
                "autocorrelation_time_s": self.autocorrelation_time,
                "too_short": self.too_short,
                "histogram": {
                    "bin_centers": self.bin_centers.tolist(),
                    "density": self.density.tolist(),
                },
            }
        )

    def write_histogram_csv(self, stream: TextIO) -> None:
        writer = csv.writer(stream)
        writer.writerow(["bin_center", "density"])
        for c, d in zip(self.bin_centers, self.density):
            writer.writerow([repr(float(c)), repr(float(d))])


def _samples(traj) -> np.ndarray:
    if isinstance(traj, Trajectory):
        return traj.m_y
    return np.asarray(traj, dtype=float)


def histogram(traj, n_bins: int = DEFAULT_BINS) -> tuple[np.ndarray, np.ndarray]:
    """Normalized density of m_y over [-1, 1]; returns (bin_centers, density)."""
    if n_bins < 2:
        raise ValueError("need at least 2 bins")
    x = _samples(traj)
    if x.size == 0:
        raise ValueError("empty trajectory")
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    counts, _ = np.histogram(np.clip(x, -1.0, 1.0), bins=edges)
    width = 2.0 / n_bins
    density = counts / (x.size * width)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return centers, density


def bimodality_coefficient(traj) -> float:
    """Sarle's coefficient (skewness^2 + 1) / kurtosis of the m_y samples."""
    x = _samples(traj)
    mu = x.mean()
    d = x - mu
    m2 = np.mean(d**2)
    if m2 == 0.0:
        raise ValueError("zero variance")
    skew = np.mean(d**3) / m2**1.5
    kurt = np.mean(d**4) / m2**2
    return (skew**2 + 1.0) / kurt


#: a secondary mode counts only if the histogram dips below this fraction of
#: its density somewhere between it and the main mode (prominence filter
#: against bin-count noise)
MODE_VALLEY_FRACTION = 0.5


def mode_separation(traj, n_bins: int = DEFAULT_BINS) -> float:
    """Distance between the two highest-density local maxima of the histogram.

    Returns 0 for single-mode histograms.  A candidate second mode is
    rejected unless a genuine valley separates it from the main mode.
    """
    centers, density = histogram(traj, n_bins)
    padded = np.concatenate([[-np.inf], density, [-np.inf]])
    peaks = [
        i
        for i in range(len(density))
        if padded[i + 1] >= padded[i]
        and padded[i + 1] >= padded[i + 2]
        and (padded[i + 1] > padded[i] or padded[i + 1] > padded[i + 2])
    ]
    if len(peaks) < 2:
        return 0.0
    peaks.sort(key=lambda i: density[i], reverse=True)
    main = peaks[0]
    for second in peaks[1:]:
        if density[second] <= 0.0:
            continue
        lo, hi = sorted((main, second))
        valley = density[lo : hi + 1].min()
        if valley <= MODE_VALLEY_FRACTION * density[second]:
            return float(abs(centers[main] - centers[second]))
    return 0.0


def dwell_times(traj, upper: float = 0.5, lower: float = -0.5) -> np.ndarray:
    """Dwell intervals [s] between well-to-well switches.

    Uses two-threshold hysteresis: a switch is counted only when the
    signal crosses from beyond one threshold to beyond the other, so
    chatter around a single threshold never produces spurious switches.
    Boundary-truncated dwells (before the first and after the last
    switch) are not included.
    """
    if not (-1.0 < lower < upper < 1.0):
        raise ValueError("thresholds must satisfy -1 < lower < upper < 1")
    x = _samples(traj)
    dt = traj.sample_interval if isinstance(traj, Trajectory) else 1.0
    well = 0  # +1 high, -1 low, 0 undecided
    switch_indices = []
    for i, v in enumerate(x):
        if v >= upper:
            if well == -1:
                switch_indices.append(i)
            well = 1
        elif v <= lower:
            if well == 1:
                switch_indices.append(i)
            well = -1
    if len(switch_indices) < 2:
        return np.empty(0)
    return np.diff(switch_indices) * dt


def autocorrelation_time(traj) -> float:
    """Integrated autocorrelation time of m_y [s].

    Sum of the normalized autocorrelation from lag 0 up to (excluding)
    its first non-positive value, times the sample interval.
    """
    x = _samples(traj)
    if x.size < 1000:
        raise ValueError("need at least 1000 samples")
    dt = traj.sample_interval if isinstance(traj, Trajectory) else 1.0
    d = x - x.mean()
    var = np.dot(d, d)
    if var == 0.0:
        raise ValueError("zero variance")
    n = len(d)
    nfft = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(d, nfft)
    acf = np.fft.irfft(f * np.conj(f), nfft)[:n].real / var
    nonpos = np.nonzero(acf <= 0.0)[0]
    cutoff = nonpos[0] if nonpos.size else n
    return float(acf[:cutoff].sum() * dt)


def classify_regime(traj, n_bins: int = DEFAULT_BINS) -> RegimeReport:
    """Classify a trajectory as Binary, Analog or Intermediate."""
    x = _samples(traj)
    centers, density = histogram(x, n_bins)
    bc = bimodality_coefficient(x)
    sep = mode_separation(x, n_bins)
    dwells = dwell_times(traj)
    mean_dwell = float(dwells.mean()) if dwells.size else float("nan")
    tau = autocorrelation_time(traj)
    dt = traj.sample_interval if isinstance(traj, Trajectory) else 1.0
    duration = len(x) * dt
    too_short = duration < MIN_COVERAGE * tau
    if too_short:
        warnings.warn(
            f"trajectory covers only {duration / tau:.1f} autocorrelation times; "
            f"classification may be unreliable",
            stacklevel=2,
        )
    if bc > BINARY_MIN_BIMODALITY and sep > BINARY_MIN_MODE_SEPARATION:
        regime = Regime.BINARY
    elif bc < ANALOG_MAX_BIMODALITY:
        regime = Regime.ANALOG
    else:
        regime = Regime.INTERMEDIATE
    return RegimeReport(
        bin_centers=centers,
        density=density,
        bimodality_coefficient=float(bc),
        mode_separation=sep,
        mean_dwell_time=mean_dwell,
        autocorrelation_time=tau,
        regime=regime,
        too_short=too_short,
    )
