"""Master-equation integrator used as an independent numerical oracle.

Everything else in this package evolves states through closed-form maps.
This module integrates the underlying Lindblad equations

    d rho / dt = -i [H, rho] + sum_j r_j (2 L_j rho L_j+ - rho L_j+ L_j - L_j+ L_j rho)

with a fixed-step classical Runge-Kutta scheme, so the closed forms can
be checked against a derivation-free reference.  Two generators are
provided: the coupled-cavity exchange (both modes decaying) and the
atom-field extraction pulse (modes decoupled, atom exchanging with
mode B at the vacuum Rabi frequency).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import DIM, BasisState, DensityMatrix, SystemParams, require_valid, validate


class IntegrationError(RuntimeError):
    """Raised when the integrated state drifts outside its invariants."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Hamiltonian plus jump operators with nonnegative rates."""

    hamiltonian: np.ndarray
    jump_ops: Tuple[Tuple[np.ndarray, float], ...]

    def __post_init__(self):
        h = np.array(self.hamiltonian, dtype=np.complex128)
        if h.shape != (DIM, DIM):
            raise ValueError(f"hamiltonian must be {DIM}x{DIM}, got {h.shape}")
        if np.max(np.abs(h - h.conj().T)) > 1e-12:
            raise ValueError("hamiltonian must be Hermitian to 1e-12")
        h.setflags(write=False)
        ops = []
        for op, rate in self.jump_ops:
            arr = np.array(op, dtype=np.complex128)
            if arr.shape != (DIM, DIM):
                raise ValueError(f"jump operator must be {DIM}x{DIM}, got {arr.shape}")
            if not (rate >= 0.0 and math.isfinite(rate)):
                raise ValueError(f"jump rate must be nonnegative and finite, got {rate}")
            arr.setflags(write=False)
            ops.append((arr, float(rate)))
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jump_ops", tuple(ops))


def _annihilation_a() -> np.ndarray:
    op = np.zeros((DIM, DIM), dtype=np.complex128)
    op[BasisState.KET_00G, BasisState.KET_10G] = 1.0
    return op


def _annihilation_b() -> np.ndarray:
    op = np.zeros((DIM, DIM), dtype=np.complex128)
    op[BasisState.KET_00G, BasisState.KET_01G] = 1.0
    return op


def coupled_cavities_generator(params: SystemParams) -> GeneratorSpec:
    """Photon exchange between the cavities with both mirrors leaking.

    H = omega (n_a + n_b) + g (a+ b + b+ a) on the truncated basis; the
    two annihilation operators carry equal jump rates k.
    """
    h = np.zeros((DIM, DIM), dtype=np.complex128)
    h[0, 0] = h[1, 1] = params.omega
    h[0, 1] = h[1, 0] = params.g
    return GeneratorSpec(h, ((_annihilation_a(), params.k), (_annihilation_b(), params.k)))


def jaynes_cummings_generator(params: SystemParams) -> GeneratorSpec:
    """Extraction pulse: atom exchanging with mode B, cavities decoupled.

    H couples |0,1;g> and |0,0;e> with matrix element omega0/2; the
    photon exchange g is absent while the atom sits in the cavity, and
    both field modes keep their decay channels.
    """
    h = np.zeros((DIM, DIM), dtype=np.complex128)
    h[1, 2] = h[2, 1] = params.omega0 / 2.0
    return GeneratorSpec(h, ((_annihilation_a(), params.k), (_annihilation_b(), params.k)))


def default_step(params: SystemParams) -> float:
    """Conservative integration step resolving every rate in the problem."""
    return min(
        1.0 / (50.0 * params.omega0),
        1.0 / (50.0 * params.g),
        1.0 / (50.0 * (params.k + params.g)),
    )


def integrate(gen: GeneratorSpec, rho: DensityMatrix, t: float, dt: float) -> DensityMatrix:
    """Propagate rho for a time t with fixed-step RK4.

    dt is an upper bound on the step; the actual step divides t evenly.
    The state is re-Hermitized after every step.  If the result drifts
    from unit trace or positivity by more than 1e-6 an IntegrationError
    is raised rather than returning a silently corrupted state.
    """
    require_valid(rho, "integrate")
    if t < 0.0:
        raise ValueError(f"time t must be nonnegative, got {t}")
    if t == 0.0:
        return rho
    if not (0.0 < dt <= t) or not math.isfinite(dt):
        raise ValueError(f"step dt must satisfy 0 < dt <= t, got dt={dt}, t={t}")

    h = gen.hamiltonian
    jumps = [(op, op.conj().T, rate, op.conj().T @ op) for op, rate in gen.jump_ops]

    def rhs(mat):
        out = -1j * (h @ mat - mat @ h)
        for op, op_dag, rate, op_sq in jumps:
            out += rate * (2.0 * (op @ mat @ op_dag) - mat @ op_sq - op_sq @ mat)
        return out

    n_steps = max(1, math.ceil(t / dt - 1e-12))
    step = t / n_steps
    mat = rho.mat.copy()
    # a divergent run overflows before the final check; keep it silent
    # and stop at the first non-finite state
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(n_steps):
            k1 = rhs(mat)
            k2 = rhs(mat + 0.5 * step * k1)
            k3 = rhs(mat + 0.5 * step * k2)
            k4 = rhs(mat + step * k3)
            mat += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            mat = 0.5 * (mat + mat.conj().T)
            if not np.isfinite(mat).all():
                raise IntegrationError(
                    f"integration diverged with step {step:.3e}; reduce dt"
                )

    result = DensityMatrix(mat)
    report = validate(result)
    if report.trace_defect > 1e-6 or report.min_eigenvalue < -1e-6:
        raise IntegrationError(
            f"integration drifted outside state invariants: trace defect "
            f"{report.trace_defect:.3e}, min eigenvalue {report.min_eigenvalue:.3e}; "
            "reduce dt"
        )
    return result
