"""Shared comparison helpers: RK4 reference runs and parameter sampling.

The RK4 integrator knows nothing about the closed-form channels, so
integrating the master equation and comparing entrywise is an
independent cross-check of every closed form in the package.
"""
import numpy as np

from zenocav.core import DensityMatrix, SystemParams
from zenocav.dynamics import tau_pi
from zenocav.lindblad import (
    coupled_cavities_generator,
    default_step,
    integrate,
    jaynes_cummings_generator,
)


def max_abs(a: DensityMatrix, b: DensityMatrix) -> float:
    return float(np.max(np.abs(a.mat - b.mat)))


def rk4_exchange(params: SystemParams, rho: DensityMatrix, t: float) -> DensityMatrix:
    return integrate(coupled_cavities_generator(params), rho, t, default_step(params))


def rk4_pulse(params: SystemParams, rho: DensityMatrix) -> DensityMatrix:
    duration = tau_pi(params.omega0, params.k)
    return integrate(jaynes_cummings_generator(params), rho, duration, default_step(params))


def random_lossy_params(rng) -> SystemParams:
    """Random parameter set with k/g in [0, 1] and omega0 at least 10 k."""
    g = rng.uniform(500.0, 2000.0)
    k = g * rng.uniform(0.0, 1.0)
    omega0 = max(10.0 * k, 1.0e4) * rng.uniform(1.0, 3.0)
    omega = rng.uniform(-2.0e3, 2.0e3)
    return SystemParams(g=g, k=k, omega0=omega0, omega=omega)
