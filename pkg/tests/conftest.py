import numpy as np
import pytest

from strainmag import MagnetSpec, PiezoStack

# Reference Co ellipse: 100 x 99 x 5 nm, Ms = 1e6 A/m, lambda_s = -35 ppm,
# Y = 209 GPa, alpha = 0.01, room temperature.
CO_KWARGS = dict(
    major_axis=100e-9,
    minor_axis=99e-9,
    thickness=5e-9,
    saturation_magnetization=1e6,
    magnetostriction=-35e-6,
    youngs_modulus=209e9,
    gilbert_damping=0.01,
    temperature=300.0,
)


@pytest.fixture
def co_spec() -> MagnetSpec:
    return MagnetSpec(**CO_KWARGS)


@pytest.fixture
def pmn_pt_stack() -> PiezoStack:
    # PMN-PT reference stack: d33 = 2500 pC/N, eps_r = 4000, 300 nm layer,
    # two 100 x 100 nm gate pads
    return PiezoStack(
        d33=2500e-12,
        relative_permittivity=4000.0,
        layer_thickness=300e-9,
        pad_area=100e-9 * 100e-9,
    )


def grid_scan_barrier(spec: MagnetSpec, stress: float, n: int = 10_000) -> float:
    """Independent barrier oracle: dense theta scan of the energy closed form."""
    from strainmag.magnet import energy

    thetas = np.linspace(0.0, np.pi, n)
    e = np.asarray(energy(spec, stress, thetas))
    return float(e.max() - e.min())


def boltzmann_angle_density(spec: MagnetSpec, stress: float, edges: np.ndarray) -> np.ndarray:
    """Quadrature oracle: normalized Boltzmann weight of the in-plane angle per bin."""
    from strainmag.magnet import energy

    kT = spec.thermal_energy()
    probs = np.empty(len(edges) - 1)
    for i in range(len(probs)):
        th = np.linspace(edges[i], edges[i + 1], 400)
        w = np.exp(-np.asarray(energy(spec, stress, th)) / kT)
        probs[i] = np.trapezoid(w, th)
    return probs / probs.sum()
