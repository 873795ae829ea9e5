import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cglocality.errors import DimensionError, SizeGuardError
from cglocality.preconditioners import (PreconditionerSpec, apply_C, build_hierarchical,
                                        explicit_transformed_matrix, identity_transform,
                                        preconditioned_spectrum)
from cglocality.problems import build_1d
from cglocality.solvers import SolverConfig, Telemetry, cg_solve
from cglocality.sparse import identity, is_symmetric, from_dense, to_dense

VALID = [(n, L) for p in range(2, 7) for n in [2 ** p] for L in range(1, p)]


def eq14():
    T = np.eye(8)
    for i in (0, 2, 4, 6):
        T[i, i + 1] = 0.5
        if i:
            T[i, i - 1] = 0.5
    return T


def test_level_one_factor_n8():
    np.testing.assert_array_equal(to_dense(build_hierarchical(8, 1).factors[0]), eq14())


def test_level_two_factor_n8():
    T2 = to_dense(build_hierarchical(8, 2).factors[1])
    expected = np.eye(8)
    expected[0, 2] = 0.5
    expected[4, 2] = expected[4, 6] = 0.5
    np.testing.assert_array_equal(T2, expected)


def test_two_levels_decouple_d2_case():
    # gamma = 0: fine unknowns diagonal, coarse system on {0, 4}
    t = build_hierarchical(8, 2)
    A = build_1d(8, 0.0).matrix
    X = explicit_transformed_matrix(t, A)
    coarse = [0, 4]
    fine = [k for k in range(8) if k not in coarse]
    off = X.copy()
    off[np.ix_(coarse, coarse)] = 0
    off[fine, fine] = 0
    assert np.all(off == 0.0)


def test_active_row_counts_n64():
    t = build_hierarchical(64, 3)
    for level, T in enumerate(t.factors, start=1):
        active = sum(1 for i in range(64) if T.row(i)[0].size > 1)
        assert active == 64 >> level


@pytest.mark.parametrize("n, levels", [(6, 1), (63, 1), (2, 1), (8, 0), (8, 3), (64, 6)])
def test_invalid_transforms(n, levels):
    with pytest.raises(ValueError):
        build_hierarchical(n, levels)


@pytest.mark.parametrize("n, levels", VALID)
def test_factor_structure(n, levels):
    for T in build_hierarchical(n, levels).factors:
        D = to_dense(T)
        assert np.all(np.diag(D) == 1.0)
        off = D - np.eye(n)
        assert np.all((off == 0.0) | (off == 0.5))
        assert np.all((off != 0).sum(axis=1) <= 2)


@pytest.mark.parametrize("levels", [1, 2, 3])
def test_composite_reach_doubles(levels):
    # row 0 carries hat weights on columns 0 .. 2**L - 1; the weight at 2**L is zero
    T = build_hierarchical(64, levels).composite()
    assert np.flatnonzero(T[0]).max() == 2 ** levels - 1
    C = T.T @ T
    reach = max(abs(i - j) for i, j in zip(*np.nonzero(C)))
    assert reach == 2 * (2 ** levels - 1) < 2 ** (levels + 1)


def test_apply_C_identity():
    r = np.arange(8.0)
    np.testing.assert_array_equal(apply_C(identity_transform(8), r), r)
    assert PreconditionerSpec().build(8) is None


def test_apply_C_unit_vector_n8():
    t = build_hierarchical(8, 1)
    e1 = np.eye(8)[1]
    T = eq14()
    np.testing.assert_allclose(apply_C(t, e1), T.T @ T @ e1, rtol=0, atol=1e-15)


@pytest.mark.parametrize("n, levels", [v for v in VALID if v[0] <= 64])
def test_apply_C_matches_dense(n, levels, rng):
    t = build_hierarchical(n, levels)
    T = t.composite()
    r = rng.standard_normal(n)
    ref = T.T @ (T @ r)
    assert np.linalg.norm(apply_C(t, r) - ref) <= 1e-14 * np.linalg.norm(ref) * 4


@settings(max_examples=30)
@given(st.data())
def test_apply_C_symmetric(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2 ** 32 - 1)))
    t = build_hierarchical(64, 3)
    x, y = rng.standard_normal(64), rng.standard_normal(64)
    lhs, rhs = x @ apply_C(t, y), y @ apply_C(t, x)
    assert abs(lhs - rhs) <= 1e-14 * max(abs(lhs), np.linalg.norm(x) * np.linalg.norm(y))


def test_apply_C_dimension():
    with pytest.raises(DimensionError):
        apply_C(build_hierarchical(8, 1), np.ones(7))


def test_transformed_matrix_d2():
    h2 = (1 / 8) ** 2
    X = explicit_transformed_matrix(build_hierarchical(8, 1), build_1d(8, 0.0).matrix) * h2
    E = np.zeros((8, 8))
    E[0, [0, 2]] = [0.5, -0.5]
    for i in (2, 4):
        E[i, [i - 2, i, i + 2]] = [-0.5, 1.0, -0.5]
    E[6, [4, 6]] = [-0.5, 1.0]
    for i in (1, 3, 5, 7):
        E[i, i] = 2.0
    assert np.max(np.abs(X - E)) <= 1e-15


def test_transformed_matrix_gamma2_not_decoupled():
    X = explicit_transformed_matrix(build_hierarchical(8, 1), build_1d(8, 2.0).matrix)
    odd = [1, 3, 5, 7]
    off = X[odd].copy()
    off[range(4), odd] = 0.0
    assert np.max(np.abs(off)) > 0


def test_row_transform_breaks_symmetry():
    TA = eq14() @ to_dense(build_1d(8, 0.0).matrix)
    assert not is_symmetric(from_dense(TA), 0.0)


@pytest.mark.parametrize("n, levels", [(16, 1), (16, 3), (64, 2), (64, 5)])
def test_transformed_matrix_spd(n, levels):
    X = explicit_transformed_matrix(build_hierarchical(n, levels), build_1d(n, 2.0).matrix)
    assert np.max(np.abs(X - X.T)) <= 1e-13 * np.max(np.abs(X))
    assert np.linalg.eigvalsh(X)[0] > 0


def test_explicit_size_guard():
    t = build_hierarchical(2048, 1)
    with pytest.raises(SizeGuardError):
        explicit_transformed_matrix(t, build_1d(2048, 2.0).matrix)


def test_preconditioned_condition_number(p64):
    assert preconditioned_spectrum(build_hierarchical(64, 1), p64.matrix).kappa == pytest.approx(1295, rel=1e-2)
    assert preconditioned_spectrum(identity_transform(64), p64.matrix).kappa == pytest.approx(2572.46, rel=1e-4)


def test_preconditioned_eigen_measure_frozen(p64):
    # eigenvalue ratio of T A T^T for one level
    est = preconditioned_spectrum(build_hierarchical(64, 1), p64.matrix, measure="eigen")
    assert est.kappa == pytest.approx(654.1, rel=1e-3)


@pytest.mark.parametrize("levels", [1, 2])
def test_preconditioned_spectrum_of_identity(levels):
    t = build_hierarchical(16, levels)
    est = preconditioned_spectrum(t, identity(16), measure="eigen")
    T = t.composite()
    ev = np.linalg.eigvalsh(T @ T.T)
    assert est.kappa >= 1
    assert est.kappa == pytest.approx(ev[-1] / ev[0], rel=1e-12)


def _first_hit(report, level=2e-4):
    pe = np.abs(report.probe_history(0))
    return int(np.flatnonzero(pe <= level)[0])


@pytest.mark.parametrize("levels, k", [(1, 33), (2, 20), (3, 13)])
def test_pcg_probe_reaches_discretization_level(p64, levels, k):
    rep = cg_solve(p64.matrix, p64.rhs, None, SolverConfig(max_iter=64, mode="fixed_budget"),
                   build_hierarchical(64, levels), Telemetry(probes={0: 1.0}))
    assert _first_hit(rep) == k


def test_pcg_records_true_residual(p64):
    t = build_hierarchical(64, 2)
    tel = Telemetry(snapshots=(10,))
    rep = cg_solve(p64.matrix, p64.rhs, None, SolverConfig(max_iter=10, mode="fixed_budget"), t, tel)
    u = rep.snapshots()[10]
    true = np.linalg.norm(p64.rhs - to_dense(p64.matrix) @ u)
    assert rep.records[10].residual_norm == pytest.approx(true, rel=1e-8)


def test_spec_rejects_unknown_kind():
    with pytest.raises(ValueError):
        PreconditionerSpec("multigrid")
