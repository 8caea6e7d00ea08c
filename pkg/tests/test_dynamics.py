import cmath
import math

import numpy as np
import pytest

from zenocav.core import BasisState, DensityMatrix, SystemParams, new_pure, population, require_valid
from zenocav.dynamics import (
    evolve_coupled_lossy,
    evolve_coupled_unitary,
    exchange_amplitudes,
    lossy_amplitudes,
    pi_pulse_ideal,
    pi_pulse_ideal_mode_a,
    pi_pulse_lossy,
    tau_pi,
)


def test_exchange_amplitudes_values():
    c1, c2 = exchange_amplitudes(1.0e3, math.pi / 4000.0)
    assert c1 == pytest.approx(math.cos(math.pi / 4), rel=1e-15)
    assert c2 == pytest.approx(-1j * math.sin(math.pi / 4), rel=1e-15)


def test_exchange_amplitudes_normalized(rng):
    for _ in range(25):
        g = rng.uniform(100.0, 5000.0)
        t = rng.uniform(0.0, 10.0 / g)
        c1, c2 = exchange_amplitudes(g, t)
        assert abs(c1) ** 2 + abs(c2) ** 2 == pytest.approx(1.0, abs=1e-14)


def test_exchange_amplitudes_domain():
    with pytest.raises(ValueError):
        exchange_amplitudes(0.0, 1.0)
    with pytest.raises(ValueError):
        exchange_amplitudes(1.0e3, -1.0e-6)


def test_lossy_amplitude_survival_value():
    # e^(-2kt) cos^2(gt) at g t = pi/4, 2 k t = pi/200
    params = SystemParams(g=1.0e3, k=10.0)
    f1, _ = lossy_amplitudes(params, math.pi / 4000.0)
    assert abs(f1) ** 2 == pytest.approx(0.492207381675857, rel=1e-14)


def test_lossy_amplitude_transfer_value():
    # full transfer at g t = pi/2: |l2|^2 = e^(-2kt) = e^(-pi/100)
    params = SystemParams(g=1.0e3, k=10.0)
    _, l2 = lossy_amplitudes(params, math.pi / 2000.0)
    assert abs(l2) ** 2 == pytest.approx(0.9690724263048106, rel=1e-14)
    assert abs(l2) ** 2 == pytest.approx(math.exp(-math.pi / 100.0), rel=1e-14)


def test_lossy_amplitudes_decay_identity(rng):
    # |f1|^2 + |l2|^2 = e^(-2kt) regardless of parameters
    for _ in range(50):
        g = rng.uniform(100.0, 5000.0)
        k = rng.uniform(0.0, g)
        t = rng.uniform(0.0, 5.0 / g)
        params = SystemParams(g=g, k=k, omega0=20.0 * max(k, 1.0))
        f1, l2 = lossy_amplitudes(params, t)
        assert abs(f1) ** 2 + abs(l2) ** 2 == pytest.approx(math.exp(-2.0 * k * t), abs=1e-12)


def test_lossy_amplitudes_carry_detuning_phase():
    params = SystemParams(g=1.0e3, k=10.0, omega=2.0e3)
    t = 3.0e-4
    f1, l2 = lossy_amplitudes(params, t)
    envelope = cmath.exp(-(10.0 + 2.0e3j) * t)
    assert f1 == pytest.approx(envelope * math.cos(1.0e3 * t), rel=1e-13)
    assert l2 == pytest.approx(envelope * -1j * math.sin(1.0e3 * t), rel=1e-13)


def test_unitary_evolution_semigroup(random_rho):
    params = SystemParams(g=1.0e3)
    rho = random_rho()
    t1, t2 = 2.3e-4, 4.1e-4
    once = evolve_coupled_unitary(rho, params, t1 + t2)
    twice = evolve_coupled_unitary(evolve_coupled_unitary(rho, params, t1), params, t2)
    np.testing.assert_allclose(once.mat, twice.mat, atol=1e-14)


def test_lossy_evolution_semigroup(random_rho):
    params = SystemParams(g=1.0e3, k=200.0, omega=500.0)
    rho = random_rho()
    t1, t2 = 2.3e-4, 4.1e-4
    once = evolve_coupled_lossy(rho, params, t1 + t2)
    twice = evolve_coupled_lossy(evolve_coupled_lossy(rho, params, t1), params, t2)
    np.testing.assert_allclose(once.mat, twice.mat, atol=1e-14)


def test_lossy_matches_unitary_at_tiny_k(random_rho):
    params_lossy = SystemParams(g=1.0e3, k=1.0e-6)
    params_unitary = SystemParams(g=1.0e3)
    rho = random_rho()
    t = 5.0e-4
    lossy = evolve_coupled_lossy(rho, params_lossy, t)
    unitary = evolve_coupled_unitary(rho, params_unitary, t)
    assert np.max(np.abs(lossy.mat - unitary.mat)) < 1e-9


def test_lossy_evolution_preserves_trace(random_rho):
    # the vacuum refill keeps total probability at one
    params = SystemParams(g=1.0e3, k=300.0)
    for _ in range(20):
        rho = random_rho()
        out = evolve_coupled_lossy(rho, params, 7.0e-4)
        assert np.trace(out.mat).real == pytest.approx(1.0, abs=1e-12)
        require_valid(out, "lossy evolution output")


def test_full_transfer_after_quarter_period():
    params = SystemParams(g=1.0e3)
    rho = evolve_coupled_unitary(new_pure(BasisState.KET_10G), params, math.pi / 2000.0)
    assert population(rho, BasisState.KET_01G) == pytest.approx(1.0, abs=1e-15)


def test_pi_pulse_ideal_swaps_b_and_atom():
    rho = pi_pulse_ideal(new_pure(BasisState.KET_01G))
    assert population(rho, BasisState.KET_00E) == pytest.approx(1.0, abs=1e-15)
    back = pi_pulse_ideal(rho)
    assert population(back, BasisState.KET_01G) == pytest.approx(1.0, abs=1e-15)


def test_pi_pulse_ideal_double_application_is_2pi_rotation(random_rho):
    # two pi pulses rotate the swapped pair by 2 pi: populations return
    # but coherences against the untouched states pick up a minus sign
    rho = random_rho()
    out = pi_pulse_ideal(pi_pulse_ideal(rho))
    signs = np.diag([1.0, -1.0, -1.0, 1.0])
    np.testing.assert_allclose(out.mat, signs @ rho.mat @ signs, atol=1e-14)


def test_pi_pulse_mode_a_swaps_a_and_atom():
    rho = pi_pulse_ideal_mode_a(new_pure(BasisState.KET_10G))
    assert population(rho, BasisState.KET_00E) == pytest.approx(1.0, abs=1e-15)


def test_tau_pi_values():
    assert tau_pi(1.0e5, 0.0) == pytest.approx(math.pi / 1.0e5, rel=1e-15)
    assert tau_pi(1.0e5, 10.0) == pytest.approx(3.1413926692964754e-05, rel=1e-14)
    assert tau_pi(1.0e5, 1.0e3) == pytest.approx(3.121748411564419e-05, rel=1e-14)


def test_tau_pi_domain():
    with pytest.raises(ValueError):
        tau_pi(10.0, 10.0)
    with pytest.raises(ValueError):
        tau_pi(5.0, 10.0)


def test_pi_pulse_lossy_reduces_to_ideal_at_zero_k(random_rho):
    params = SystemParams(g=1.0e3, k=0.0, omega0=1.0e5)
    rho = random_rho()
    np.testing.assert_allclose(
        pi_pulse_lossy(rho, params).mat, pi_pulse_ideal(rho).mat, atol=1e-14
    )


def test_pi_pulse_lossy_transfer_weight():
    # |0,1;g> -> |0,0;e> with population factor e^(-k tau)
    params = SystemParams(g=1.0e3, k=10.0, omega0=1.0e5)
    out = pi_pulse_lossy(new_pure(BasisState.KET_01G), params)
    expected = math.exp(-10.0 * tau_pi(1.0e5, 10.0))
    assert expected == pytest.approx(0.9996859100696436, rel=1e-14)
    assert population(out, BasisState.KET_00E) == pytest.approx(expected, rel=1e-13)


def test_pi_pulse_lossy_coherence_factor():
    # the A-B coherence becomes an A-atom coherence scaled by
    # i e^(-3 k tau / 2)
    params = SystemParams(g=1.0e3, k=10.0, omega0=1.0e5)
    amps = np.array([0.8, 0.6, 0.0, 0.0], dtype=complex)
    rho = DensityMatrix(np.outer(amps, amps.conj()))
    out = pi_pulse_lossy(rho, params)
    tau = tau_pi(params.omega0, params.k)
    expected = 1j * math.exp(-1.5 * params.k * tau) * rho.mat[0, 1]
    assert out.mat[0, 2] == pytest.approx(expected, rel=1e-12)


def test_pi_pulse_lossy_preserves_trace(random_rho):
    params = SystemParams(g=1.0e3, k=500.0, omega0=1.0e5)
    for _ in range(20):
        out = pi_pulse_lossy(random_rho(), params)
        assert np.trace(out.mat).real == pytest.approx(1.0, abs=1e-12)
        require_valid(out, "lossy pulse output")


def test_negative_time_rejected(random_rho):
    params = SystemParams(g=1.0e3)
    with pytest.raises(ValueError):
        evolve_coupled_unitary(random_rho(), params, -1.0e-6)
    with pytest.raises(ValueError):
        evolve_coupled_lossy(random_rho(), params, -1.0e-6)
