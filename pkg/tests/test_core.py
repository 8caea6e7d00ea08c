import math

import numpy as np
import pytest

from zenocav.core import (
    BasisState,
    DensityMatrix,
    StateValidationError,
    SystemParams,
    new_pure,
    population,
    require_valid,
    validate,
)


def test_basis_order():
    assert BasisState.KET_10G == 0
    assert BasisState.KET_01G == 1
    assert BasisState.KET_00E == 2
    assert BasisState.KET_00G == 3


def test_new_pure_is_one_hot():
    rho = new_pure(BasisState.KET_01G)
    expected = np.zeros((4, 4), dtype=complex)
    expected[1, 1] = 1.0
    np.testing.assert_array_equal(rho.mat, expected)


def test_density_matrix_rejects_wrong_shape():
    with pytest.raises(ValueError):
        DensityMatrix(np.eye(3))


def test_density_matrix_is_immutable():
    rho = new_pure(BasisState.KET_10G)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 0.5


def test_density_matrix_copies_input():
    mat = np.eye(4, dtype=complex) / 4.0
    rho = DensityMatrix(mat)
    mat[0, 0] = 99.0
    assert rho.mat[0, 0] == 0.25


def test_population_reads_diagonal(random_rho):
    rho = random_rho()
    for state in BasisState:
        assert population(rho, state) == pytest.approx(rho.mat[state, state].real, abs=1e-15)


def test_population_clamps_roundoff():
    mat = np.zeros((4, 4), dtype=complex)
    mat[0, 0] = 1.0 + 5e-14
    mat[1, 1] = -5e-14
    rho = DensityMatrix(mat)
    assert population(rho, BasisState.KET_10G) == 1.0
    assert population(rho, BasisState.KET_01G) == 0.0


def test_validate_accepts_random_state(random_rho):
    report = validate(random_rho())
    assert report.ok
    assert report.hermiticity_defect <= 1e-12
    assert report.trace_defect <= 1e-10
    assert report.min_eigenvalue >= -1e-10


def test_validate_flags_nonhermitian():
    mat = np.eye(4, dtype=complex) / 4.0
    mat[0, 1] = 0.3
    report = validate(DensityMatrix(mat))
    assert not report.hermitian_ok
    assert not report.ok


def test_validate_flags_bad_trace():
    report = validate(DensityMatrix(np.eye(4, dtype=complex)))
    assert not report.trace_ok
    assert not report.ok


def test_validate_flags_negative_eigenvalue():
    mat = np.diag([0.7, 0.5, 0.0, -0.2]).astype(complex)
    report = validate(DensityMatrix(mat))
    assert report.min_eigenvalue < -1e-10
    assert not report.positive_ok


def test_require_valid_mentions_context():
    bad = DensityMatrix(np.eye(4, dtype=complex))
    with pytest.raises(StateValidationError, match="after step 3"):
        require_valid(bad, "after step 3")


def test_params_default_t0_is_quarter_period():
    params = SystemParams(g=1.0e3)
    assert params.t0 == pytest.approx(math.pi / (2.0e3), rel=1e-15)


def test_params_keeps_explicit_t0():
    params = SystemParams(g=1.0e3, t0=2.5e-3)
    assert params.t0 == 2.5e-3


def test_params_coerces_n_atoms():
    params = SystemParams(g=1.0e3, n_atoms=np.int64(4))
    assert params.n_atoms == 4
    assert isinstance(params.n_atoms, int)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"g": 0.0},
        {"g": -5.0},
        {"g": 1e3, "k": -1.0},
        {"g": 1e3, "omega0": 0.0},
        {"g": 1e3, "omega0": 5.0, "k": 10.0},
        {"g": 1e3, "p_g": 1.5},
        {"g": 1e3, "p_e": -0.1},
        {"g": 1e3, "t0": 0.0},
        {"g": 1e3, "n_atoms": 0},
        {"g": 1e3, "omega": math.inf},
    ],
)
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        SystemParams(**kwargs)
