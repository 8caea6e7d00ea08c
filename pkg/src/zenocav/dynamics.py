"""Closed-form propagators for the photon exchange and the probe pulses.

Two coupled degenerate cavities exchange a single photon coherently:
starting from |1,0>, the amplitudes after a time t are

    c1(t) = cos(g t)          on |1,0>
    c2(t) = -i sin(g t)       on |0,1>

With field decay at rate k in both mirrors the amplitudes pick up a
common envelope exp[-(k + i omega) t]:

    f1(t) = exp[-(k + i omega) t] cos(g t)
    l2(t) = -i exp[-(k + i omega) t] sin(g t)

so |f1|^2 + |l2|^2 = exp(-2 k t): the single-photon manifold drains into
the vacuum, which is refilled classically.  These closed forms are exact
solutions of the dissipative master equation (see the lindblad module
for the independent integrator used to check that claim).

A probe atom crossing cavity B undergoes a resonant vacuum Rabi pulse of
angular frequency omega0.  Tuned to the first zero of the damped Rabi
oscillation, the pulse empties mode B into the atom.  The ideal
(instantaneous, lossless) version swaps |0,1;g> and |0,0;e> with the
-i sigma_x phase convention; the dissipative version is the exact
no-click propagator of the damped exchange over the duration tau_pi.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .core import DensityMatrix, SystemParams, require_valid


class ExchangeAmplitudes(NamedTuple):
    c1: complex
    c2: complex


class LossyAmplitudes(NamedTuple):
    f1: complex
    l2: complex


def exchange_amplitudes(g: float, t: float) -> ExchangeAmplitudes:
    """Lossless single-photon exchange amplitudes after time t.

    Returns (cos(gt), -i sin(gt)); the moduli squared are the two cavity
    occupation probabilities.
    """
    if g <= 0.0:
        raise ValueError(f"coupling g must be positive, got {g}")
    if t < 0.0:
        raise ValueError(f"time t must be nonnegative, got {t}")
    angle = g * t
    return ExchangeAmplitudes(complex(math.cos(angle)), -1j * math.sin(angle))


def lossy_amplitudes(params: SystemParams, t: float) -> LossyAmplitudes:
    """Damped exchange amplitudes exp[-(k+i omega)t] (cos(gt), -i sin(gt))."""
    if t < 0.0:
        raise ValueError(f"time t must be nonnegative, got {t}")
    envelope = np.exp(-(params.k + 1j * params.omega) * t)
    c1, c2 = exchange_amplitudes(params.g, t)
    return LossyAmplitudes(complex(envelope * c1), complex(envelope * c2))


def _rotation_block(c1: complex, c2: complex) -> np.ndarray:
    """2x2 exchange matrix acting on the (|1,0>, |0,1>) amplitudes."""
    return np.array([[c1, c2], [c2, c1]], dtype=np.complex128)


def _contract_one_excitation(rho: DensityMatrix, block: np.ndarray) -> DensityMatrix:
    """Apply a 2x2 amplitude map to the photon sector, refill the vacuum.

    The map M = diag(block, 1, 1) acts as rho -> M rho M+; whatever trace
    leaves the one-excitation sector is deposited in |0,0;g>, which makes
    the channel exactly trace preserving.
    """
    m = np.eye(4, dtype=np.complex128)
    m[:2, :2] = block
    out = m @ rho.mat @ m.conj().T
    out[3, 3] += np.trace(rho.mat).real - np.trace(out).real
    return DensityMatrix(out)


def evolve_coupled_unitary(rho: DensityMatrix, params: SystemParams, t: float) -> DensityMatrix:
    """Lossless exchange of the photon between the two cavities for time t.

    Rotates the one-excitation block by the exchange amplitudes and puts
    the free phase exp(-i omega t) on coherences between that block and
    the empty-field states, which stay untouched otherwise.
    """
    require_valid(rho, "evolve_coupled_unitary")
    if t < 0.0:
        raise ValueError(f"time t must be nonnegative, got {t}")
    c1, c2 = exchange_amplitudes(params.g, t)
    phase = np.exp(-1j * params.omega * t)
    return _contract_one_excitation(rho, phase * _rotation_block(c1, c2))


def evolve_coupled_lossy(rho: DensityMatrix, params: SystemParams, t: float) -> DensityMatrix:
    """Damped photon exchange for time t, leaking weight into the vacuum.

    Exact solution of the two-mode dissipative master equation on the
    truncated basis: the one-excitation block contracts by the lossy
    amplitude matrix and the lost population lands in |0,0;g>.  The
    excited-atom state is untouched by cavity decay.
    """
    require_valid(rho, "evolve_coupled_lossy")
    if t < 0.0:
        raise ValueError(f"time t must be nonnegative, got {t}")
    f1, l2 = lossy_amplitudes(params, t)
    return _contract_one_excitation(rho, _rotation_block(f1, l2))


def tau_pi(omega0: float, k: float) -> float:
    """Duration of the extraction pulse in the presence of cavity decay.

    First zero of the damped vacuum Rabi oscillation of mode B:

        tau_pi = arccos[(2 k^2 - omega0^2) / omega0^2] / sqrt(omega0^2 - k^2)

    which reduces to pi/omega0 for a lossless cavity.  Requires
    omega0 > k (underdamped exchange); otherwise mode B never empties.
    """
    if not (omega0 > 0.0 and math.isfinite(omega0)):
        raise ValueError(f"Rabi frequency omega0 must be positive, got {omega0}")
    if k < 0.0:
        raise ValueError(f"decay rate k must be nonnegative, got {k}")
    if omega0 <= k:
        raise ValueError(
            f"pulse duration is undefined for omega0 <= k (got omega0={omega0}, k={k}): "
            "the damped exchange is not underdamped"
        )
    nu = math.sqrt(omega0 * omega0 - k * k)
    return math.acos((2.0 * k * k - omega0 * omega0) / (omega0 * omega0)) / nu


def _swap_pulse(rho: DensityMatrix, idx: int) -> DensityMatrix:
    # -i sigma_x on the (idx, 2) block: the resonant pi pulse phase.
    u = np.eye(4, dtype=np.complex128)
    u[idx, idx] = 0.0
    u[2, 2] = 0.0
    u[idx, 2] = -1j
    u[2, idx] = -1j
    return DensityMatrix(u @ rho.mat @ u.conj().T)


def pi_pulse_ideal(rho: DensityMatrix) -> DensityMatrix:
    """Instantaneous lossless pulse exchanging mode B with the atom.

    Unitary -i sigma_x on the (|0,1;g>, |0,0;e>) pair: populations swap,
    coherences with |1,0;g> move between the two states with a +/-i
    phase, and applying the map twice restores all populations.
    """
    require_valid(rho, "pi_pulse_ideal")
    return _swap_pulse(rho, 1)


def pi_pulse_ideal_mode_a(rho: DensityMatrix) -> DensityMatrix:
    """Instantaneous lossless pulse exchanging mode A with the atom.

    Same map as pi_pulse_ideal with the roles of the cavities swapped;
    used by the final probe that interrogates the surviving photon.
    """
    require_valid(rho, "pi_pulse_ideal_mode_a")
    return _swap_pulse(rho, 0)


def pi_pulse_lossy(rho: DensityMatrix, params: SystemParams) -> DensityMatrix:
    """Extraction pulse on mode B with cavity decay running for tau_pi.

    Exact propagator of the damped atom-field exchange (the cavities are
    decoupled during the pulse).  Writing tp = tau_pi(omega0, k):

      * mode B population transfers to the atom with weight exp(-k tp),
      * mode A population survives with weight exp(-2 k tp),
      * A-B coherences become A-atom coherences scaled by exp(-3 k tp/2),
      * all lost weight is deposited in |0,0;g>.

    For k -> 0 this converges entrywise to pi_pulse_ideal.
    """
    require_valid(rho, "pi_pulse_lossy")
    tp = tau_pi(params.omega0, params.k)
    half = math.exp(-0.5 * params.k * tp)
    m = np.zeros((4, 4), dtype=np.complex128)
    m[0, 0] = half * half
    m[1, 2] = -1j * half
    m[2, 1] = -1j * half
    m[2, 2] = half * (2.0 * params.k / params.omega0)
    m[3, 3] = 1.0
    out = m @ rho.mat @ m.conj().T
    out[3, 3] += np.trace(rho.mat).real - np.trace(out).real
    return DensityMatrix(out)
