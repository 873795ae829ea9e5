import numpy as np
import pytest
from hypothesis import given, settings

from cglocality.errors import NotSPDError
from cglocality.problems import build_1d
from cglocality.sparse import from_dense, identity, to_dense
from cglocality.spectrum import extreme_eigenvalues, inverse_iteration_min, lanczos_max

from .strategies import spd_tridiagonal


def test_identity_spectrum():
    est = extreme_eigenvalues(identity(5))
    assert est.lambda_min == pytest.approx(1.0, rel=1e-12)
    assert est.lambda_max == pytest.approx(1.0, rel=1e-12)
    assert est.kappa == pytest.approx(1.0, rel=1e-12)
    assert est.converged


def test_small_1d_matrix_vs_dense_eigensolver():
    A = build_1d(8, 0.0, 0.0).matrix
    ev = np.linalg.eigvalsh(to_dense(A))
    est = extreme_eigenvalues(A)
    assert est.lambda_min == pytest.approx(ev[0], rel=1e-8)
    assert est.lambda_max == pytest.approx(ev[-1], rel=1e-8)
    assert est.kappa == pytest.approx(ev[-1] / ev[0], rel=1e-8)


@pytest.mark.parametrize("gamma, kappa, rel", [(2.0, 2572.46, 5e-3), (8.0, 252.0, 1e-2)])
def test_1d_condition_numbers(gamma, kappa, rel):
    est = extreme_eigenvalues(build_1d(64, gamma, 0.0).matrix)
    assert est.converged
    assert est.kappa == pytest.approx(kappa, rel=rel)


def test_1d_condition_number_frozen():
    # dense eigvalsh of the n=64, gamma=2 matrix
    est = extreme_eigenvalues(build_1d(64, 2.0, 0.0).matrix)
    assert est.kappa == pytest.approx(2572.4570787687, rel=1e-9)


@settings(max_examples=30)
@given(spd_tridiagonal())
def test_random_spd_vs_dense(A):
    ev = np.linalg.eigvalsh(to_dense(A))
    est = extreme_eigenvalues(A)
    assert 0 < est.lambda_min <= est.lambda_max
    assert est.lambda_min == pytest.approx(ev[0], rel=1e-8)
    assert est.lambda_max == pytest.approx(ev[-1], rel=1e-8)


def test_indefinite_is_rejected():
    A = from_dense(np.diag([2.0, -1.0, 3.0]))
    with pytest.raises(NotSPDError):
        extreme_eigenvalues(A)


def test_partial_estimate_when_budget_too_small():
    A = build_1d(64, 2.0, 0.0).matrix
    theta, ok, steps = lanczos_max(A, max_iter=3)
    assert not ok and steps == 3 and theta > 0
    est = extreme_eigenvalues(A, max_iter=3)
    assert not est.converged


def test_inverse_iteration_alone():
    A = from_dense(np.diag([5.0, 0.5, 2.0]))
    theta, ok, _ = inverse_iteration_min(A)
    assert ok and theta == pytest.approx(0.5, rel=1e-10)
