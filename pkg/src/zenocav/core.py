"""Shared state types for the two-cavity single-photon system.

The simulation lives in a four-dimensional Hilbert space truncated to at
most one excitation shared between two cavity modes and one two-level
probe atom.  The basis order is fixed everywhere in this package:

    index 0 : |1,0;g>  photon in cavity A, atom in ground state
    index 1 : |0,1;g>  photon in cavity B, atom in ground state
    index 2 : |0,0;e>  no photon, atom excited
    index 3 : |0,0;g>  no photon, atom in ground state (absorbing vacuum)

All rates and frequencies are angular (rad/s), times are seconds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

DIM = 4

# Tolerances defining a numerically valid density matrix.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-10


class BasisState(IntEnum):
    """Basis kets in the fixed index order of this package."""

    KET_10G = 0
    KET_01G = 1
    KET_00E = 2
    KET_00G = 3


class StateValidationError(ValueError):
    """Raised when an operation receives a matrix that is not a valid state."""


@dataclass(frozen=True)
class DensityMatrix:
    """A 4x4 complex density matrix, immutable after construction.

    The wrapped array is copied on construction and marked read-only, so
    instances are safe to share across threads.  Construction does not
    check the physical invariants (Hermiticity, unit trace, positivity);
    use :func:`validate` for that, which lets diagnostic code hold and
    inspect invalid matrices.
    """

    mat: np.ndarray

    def __post_init__(self):
        arr = np.array(self.mat, dtype=np.complex128)
        if arr.shape != (DIM, DIM):
            raise ValueError(f"density matrix must be {DIM}x{DIM}, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "mat", arr)


def new_pure(state: BasisState) -> DensityMatrix:
    """Density matrix of the pure basis state |state><state|."""
    mat = np.zeros((DIM, DIM), dtype=np.complex128)
    mat[int(state), int(state)] = 1.0
    return DensityMatrix(mat)


def population(rho: DensityMatrix, state: BasisState) -> float:
    """Occupation probability of a basis state, clamped to [0, 1].

    The imaginary part of the diagonal entry is discarded; values that
    undershoot 0 or overshoot 1 by roundoff are clamped.
    """
    value = rho.mat[int(state), int(state)].real
    return min(max(value, 0.0), 1.0)


@dataclass(frozen=True)
class ValidationReport:
    """Diagnostic summary of how far a matrix is from a valid state."""

    hermiticity_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def hermitian_ok(self) -> bool:
        return self.hermiticity_defect <= HERMITICITY_TOL

    @property
    def trace_ok(self) -> bool:
        return self.trace_defect <= TRACE_TOL

    @property
    def positive_ok(self) -> bool:
        return self.min_eigenvalue >= -EIGENVALUE_TOL

    @property
    def ok(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.positive_ok


def validate(rho: DensityMatrix) -> ValidationReport:
    """Measure the Hermiticity, trace and positivity defects of a state.

    The minimum eigenvalue is computed on the Hermitian part of the
    matrix, so the report stays meaningful for non-Hermitian input.
    """
    mat = rho.mat
    if not np.isfinite(mat).all():
        return ValidationReport(math.inf, math.inf, -math.inf)
    herm_defect = float(np.max(np.abs(mat - mat.conj().T)))
    trace_defect = float(abs(np.trace(mat) - 1.0))
    hermitian_part = 0.5 * (mat + mat.conj().T)
    min_eig = float(np.linalg.eigvalsh(hermitian_part)[0])
    return ValidationReport(herm_defect, trace_defect, min_eig)


def require_valid(rho: DensityMatrix, context: str = "operation") -> None:
    """Raise StateValidationError if rho violates the state invariants."""
    report = validate(rho)
    if not report.ok:
        raise StateValidationError(
            f"{context} received an invalid density matrix: "
            f"hermiticity defect {report.hermiticity_defect:.3e}, "
            f"trace defect {report.trace_defect:.3e}, "
            f"min eigenvalue {report.min_eigenvalue:.3e}"
        )


@dataclass(frozen=True)
class SystemParams:
    """Physical and protocol parameters of one simulation run.

    Attributes
    ----------
    g : cavity-cavity photon exchange coupling (rad/s), must be positive.
    omega : common cavity frequency (rad/s).  Enters only as a phase on
        coherences with the vacuum sector; 0 keeps the rotating frame.
    k : cavity field decay rate (rad/s) of each mode.
    omega0 : vacuum Rabi frequency of the atom-field exchange used by the
        extraction pulse (rad/s).  Must exceed k for the pulse duration
        to be real.
    p_g : efficiency of the ground-state detector.
    p_e : efficiency of the excited-state detector.
    t0 : total free-exchange time budget of a protocol run.  Defaults to
        pi/(2 g), the half-transfer time at which the photon would fully
        relocate to cavity B if left unobserved.
    n_atoms : number of probe atoms crossing the setup during t0.
    """

    g: float
    omega: float = 0.0
    k: float = 0.0
    omega0: float = 1.0e5
    p_g: float = 1.0
    p_e: float = 1.0
    t0: float = None  # type: ignore[assignment]  # filled in __post_init__
    n_atoms: int = 1

    def __post_init__(self):
        if not (self.g > 0.0 and math.isfinite(self.g)):
            raise ValueError(f"coupling g must be positive and finite, got {self.g}")
        if not math.isfinite(self.omega):
            raise ValueError(f"frequency omega must be finite, got {self.omega}")
        if not (self.k >= 0.0 and math.isfinite(self.k)):
            raise ValueError(f"decay rate k must be nonnegative and finite, got {self.k}")
        if not (self.omega0 > 0.0 and math.isfinite(self.omega0)):
            raise ValueError(f"Rabi frequency omega0 must be positive and finite, got {self.omega0}")
        if self.omega0 <= self.k:
            raise ValueError(
                f"extraction pulse needs omega0 > k, got omega0={self.omega0}, k={self.k}"
            )
        for name in ("p_g", "p_e"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"detector efficiency {name} must lie in [0, 1], got {value}")
        if self.t0 is None:
            object.__setattr__(self, "t0", math.pi / (2.0 * self.g))
        elif not (self.t0 > 0.0 and math.isfinite(self.t0)):
            raise ValueError(f"run time t0 must be positive and finite, got {self.t0}")
        if not (isinstance(self.n_atoms, (int, np.integer)) and self.n_atoms >= 1):
            raise ValueError(f"atom count n_atoms must be an integer >= 1, got {self.n_atoms}")
        object.__setattr__(self, "n_atoms", int(self.n_atoms))
