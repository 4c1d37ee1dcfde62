"""Behavioral stochastic neuron models.

Binary stochastic neuron (BSN) sampling with the standard sigmoidal
activation, and an analog stochastic neuron (ASN) transfer model

    V_out = tanh(beta V_in) + alpha(V_in) V0_noise

where the noise band alpha(V_in) = kappa exp(-nu V_in^2 / sigma_Vn^2)
is maximal at the middle of the transfer curve and shrinks toward the
rails.  The literal single-power form exp(-nu V_in / sigma_Vn^2) is
available with symmetric_profile=False.  The normalized noise V0_noise
is drawn uniformly in [-1/2, +1/2] of V_DD (truncated-Gaussian draws
optional).
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import OptimizeWarning, curve_fit


@dataclass(frozen=True)
class AsnParams:
    """Transfer and noise-band parameters of one analog stochastic neuron."""

    gain: float                 # beta
    noise_scale: float          # kappa
    noise_shape: float          # nu [1/V]
    noise_std: float            # sigma_Vn [V]
    supply: float               # V_DD [V]
    symmetric_profile: bool = True

    def __post_init__(self):
        if self.gain <= 0.0 or self.noise_std <= 0.0 or self.supply <= 0.0:
            raise ValueError("gain, noise_std and supply must be positive")
        if self.noise_scale < 0.0:
            raise ValueError("noise_scale must be non-negative")


def noise_profile(params: AsnParams, v_in) -> np.ndarray | float:
    """Dimensionless noise-band amplitude alpha(V_in)."""
    v = np.asarray(v_in, dtype=float)
    arg = v * v if params.symmetric_profile else v
    out = params.noise_scale * np.exp(-params.noise_shape * arg / params.noise_std**2)
    return float(out) if np.isscalar(v_in) else out


def asn_output(params: AsnParams, v_in, noise_draw) -> np.ndarray | float:
    """Instantaneous output voltage for normalized draws in [-1/2, 1/2]."""
    v = np.asarray(v_in, dtype=float)
    out = np.tanh(params.gain * v) + noise_profile(params, v) * np.asarray(noise_draw) * params.supply
    return float(out) if np.isscalar(v_in) else out


def draw_noise(
    params: AsnParams,
    size,
    rng: np.random.Generator,
    gaussian: bool = False,
) -> np.ndarray:
    """Normalized noise draws in [-1/2, 1/2] (uniform, or truncated Gaussian)."""
    if not gaussian:
        return rng.uniform(-0.5, 0.5, size)
    draws = rng.standard_normal(size) / 4.0  # std 1/4, then truncated at the rails
    return np.clip(draws, -0.5, 0.5)


def asn_trace(
    params: AsnParams,
    v_in: Sequence[float],
    rng: np.random.Generator,
    kernel: "np.ndarray | None" = None,
    gaussian_noise: bool = False,
) -> np.ndarray:
    """Output trace for an input sequence.

    The default applies the noise memorylessly, sample by sample.  An
    optional finite-impulse-response kernel convolves the noise sequence
    before it is applied, as a hook for temporally correlated noise.
    """
    v = np.asarray(v_in, dtype=float)
    draws = draw_noise(params, v.shape, rng, gaussian=gaussian_noise)
    if kernel is not None:
        draws = np.convolve(draws, np.asarray(kernel, dtype=float), mode="same")
    return asn_output(params, v, draws)


@dataclass(frozen=True)
class NoiseFitResult:
    """Fitted noise-band parameters plus fit quality."""

    params: AsnParams
    residual_norm: float
    n_samples: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "kappa": self.params.noise_scale,
                "nu": self.params.noise_shape,
                "sigma_vn": self.params.noise_std,
                "residual_norm": self.residual_norm,
                "sample_count": self.n_samples,
            }
        )


def fit_noise_profile(
    samples: Sequence[tuple[float, float]],
    gain: float,
    noise_std: float,
    supply: float = 1.0,
    n_bins: int = 20,
    symmetric_profile: bool = True,
) -> NoiseFitResult:
    """Fit (kappa, nu) of the noise band to observed (v_in, v_out) pairs.

    Residuals about tanh(gain * v_in) are binned by input voltage; the
    per-bin standard deviation is least-squares fitted to the noise-band
    profile.  Draws are assumed uniform in [-1/2, 1/2], so the band
    amplitude maps to a residual std of alpha * V_DD / sqrt(12).
    """
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 100:
        raise ValueError("need at least 100 (v_in, v_out) samples")
    v, out = data[:, 0], data[:, 1]
    resid = out - np.tanh(gain * v)
    edges = np.linspace(v.min(), v.max(), n_bins + 1)
    idx = np.clip(np.digitize(v, edges) - 1, 0, n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    empty = np.nonzero(counts < 2)[0]
    if empty.size:
        raise ValueError(f"degenerate binning, empty bins: {empty.tolist()}")
    centers = 0.5 * (edges[:-1] + edges[1:])
    stds = np.array([resid[idx == i].std() for i in range(n_bins)])

    scale = supply / math.sqrt(12.0)

    def model(vc, kappa, nu):
        arg = vc * vc if symmetric_profile else vc
        return kappa * np.exp(-nu * arg / noise_std**2) * scale

    with warnings.catch_warnings():
        # noiseless data makes the covariance singular; the point estimate is fine
        warnings.simplefilter("ignore", OptimizeWarning)
        (kappa, nu), _ = curve_fit(
            model, centers, stds, p0=[max(stds.max() / scale, 1e-12), 0.0]
        )
    kappa = max(kappa, 0.0)
    residual_norm = float(np.linalg.norm(stds - model(centers, kappa, nu)))
    params = AsnParams(
        gain=gain,
        noise_scale=float(kappa),
        noise_shape=float(nu),
        noise_std=noise_std,
        supply=supply,
        symmetric_profile=symmetric_profile,
    )
    return NoiseFitResult(params=params, residual_norm=residual_norm, n_samples=len(v))


def bsn_sample(bias: float, rng: np.random.Generator) -> int:
    """One binary stochastic neuron draw: +1 with probability (1+tanh(bias))/2."""
    p_up = 0.5 * (1.0 + math.tanh(bias))
    return 1 if rng.random() < p_up else -1
