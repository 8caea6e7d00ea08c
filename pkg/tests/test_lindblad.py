import math

import numpy as np
import pytest

from _oracles import max_abs, random_lossy_params, rk4_exchange, rk4_pulse
from zenocav.core import BasisState, DensityMatrix, SystemParams, new_pure, population
from zenocav.dynamics import evolve_coupled_lossy, pi_pulse_lossy
from zenocav.lindblad import (
    GeneratorSpec,
    IntegrationError,
    coupled_cavities_generator,
    default_step,
    integrate,
    jaynes_cummings_generator,
)


def test_generator_spec_rejects_nonhermitian_hamiltonian():
    h = np.zeros((4, 4), dtype=complex)
    h[0, 1] = 1.0
    with pytest.raises(ValueError):
        GeneratorSpec(hamiltonian=h, jump_ops=())


def test_generator_spec_rejects_negative_rate():
    with pytest.raises(ValueError):
        GeneratorSpec(hamiltonian=np.zeros((4, 4)), jump_ops=((np.eye(4), -1.0),))


def test_zero_generator_is_identity(random_rho):
    spec = GeneratorSpec(hamiltonian=np.zeros((4, 4)), jump_ops=())
    rho = random_rho()
    out = integrate(spec, rho, 1.0e-3, 1.0e-5)
    np.testing.assert_allclose(out.mat, rho.mat, atol=1e-12)


def test_integrate_time_validation(random_rho):
    params = SystemParams(g=1.0e3)
    spec = coupled_cavities_generator(params)
    rho = random_rho()
    with pytest.raises(ValueError):
        integrate(spec, rho, -1.0e-4, 1.0e-6)
    with pytest.raises(ValueError):
        integrate(spec, rho, 1.0e-4, 0.0)
    with pytest.raises(ValueError):
        integrate(spec, rho, 1.0e-4, 2.0e-4)


def test_integrate_zero_time_returns_input(random_rho):
    params = SystemParams(g=1.0e3)
    rho = random_rho()
    out = integrate(coupled_cavities_generator(params), rho, 0.0, 1.0e-6)
    np.testing.assert_array_equal(out.mat, rho.mat)


def test_unstable_step_raises():
    params = SystemParams(g=1.0e3)
    rho = new_pure(BasisState.KET_10G)
    with pytest.raises(IntegrationError):
        integrate(coupled_cavities_generator(params), rho, 1.0, 0.01)


def test_survival_population_matches_closed_form():
    # d/dt of |1,0;g> occupation follows e^(-2kt) cos^2(gt)
    params = SystemParams(g=1.0e3, k=10.0)
    rho = new_pure(BasisState.KET_10G)
    t = 9.0e-4
    out = rk4_exchange(params, rho, t)
    expected = math.exp(-2.0 * params.k * t) * math.cos(params.g * t) ** 2
    assert population(out, BasisState.KET_10G) == pytest.approx(expected, abs=1e-7)


def test_lossless_oscillation_matches_cos_squared():
    params = SystemParams(g=1.0e3)
    rho = new_pure(BasisState.KET_10G)
    for t in (1.0e-4, 5.0e-4, 1.3e-3):
        out = rk4_exchange(params, rho, t)
        assert population(out, BasisState.KET_10G) == pytest.approx(
            math.cos(params.g * t) ** 2, abs=1e-7
        )


def test_exchange_channel_matches_rk4(rng, random_rho):
    for _ in range(10):
        params = random_lossy_params(rng)
        rho = random_rho()
        t = rng.uniform(0.1, 1.5) / params.g
        exact = evolve_coupled_lossy(rho, params, t)
        numeric = rk4_exchange(params, rho, t)
        assert max_abs(exact, numeric) < 1e-7


def test_pulse_channel_matches_rk4(rng, random_rho):
    for _ in range(10):
        params = random_lossy_params(rng)
        rho = random_rho()
        exact = pi_pulse_lossy(rho, params)
        numeric = rk4_pulse(params, rho)
        assert max_abs(exact, numeric) < 1e-7


def test_jc_generator_ignores_cavity_detuning(random_rho):
    # the extraction pulse model is resonant; omega only enters the
    # exchange Hamiltonian
    with_omega = jaynes_cummings_generator(SystemParams(g=1.0e3, omega=2.0e3, omega0=1.0e5))
    without = jaynes_cummings_generator(SystemParams(g=1.0e3, omega0=1.0e5))
    np.testing.assert_array_equal(with_omega.hamiltonian, without.hamiltonian)


def test_trace_preserved_over_long_run():
    params = SystemParams(g=1.0e3, k=100.0)
    rho = new_pure(BasisState.KET_10G)
    out = integrate(coupled_cavities_generator(params), rho, 10.0 / params.g, default_step(params))
    assert np.trace(out.mat).real == pytest.approx(1.0, abs=1e-9)


def test_rk4_convergence_order():
    params = SystemParams(g=1.0e3, k=50.0)
    amps = np.array([0.6, 0.48j, 0.4, -0.5j])
    amps = amps / np.linalg.norm(amps)
    rho = DensityMatrix(np.outer(amps, amps.conj()))
    t = 1.1 / params.g
    exact = evolve_coupled_lossy(rho, params, t)
    spec = coupled_cavities_generator(params)

    def err(n_steps):
        return max_abs(exact, integrate(spec, rho, t, t / n_steps))

    order = math.log2(err(24) / err(48))
    assert 3.7 <= order <= 4.3


def test_default_step_scales():
    params = SystemParams(g=1.0e3, k=10.0, omega0=1.0e5)
    dt = default_step(params)
    assert dt <= 1.0 / (50.0 * params.omega0)
    assert dt <= 1.0 / (50.0 * params.g)
