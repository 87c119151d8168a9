import numpy as np
import pytest
import scipy.linalg
from hypothesis import given
from hypothesis import strategies as st

from tomita.errors import (
    IllConditioned,
    NotCyclicSeparating,
    NotPositiveDefinite,
    NotUnitary,
    SingularInput,
)
from tomita.finite_factor import (
    FactorContext,
    base_conjugation,
    left_operator,
    matrix_units,
    right_operator,
    vec,
)
from tomita.modular_engine import (
    closed_form_delta,
    commutant_residual,
    conjugation_alternative,
    left_commutation_residual,
    modular_conjugation,
    modular_flow,
    modular_objects,
    modular_operator,
    polar_decompose,
    tomita_operator,
    tomita_oracle,
)
from tomita.sampling import random_invertible, random_matrix, random_unitary
from tomita.verification import modular_checks

C2 = FactorContext(2)
seeds = st.integers(0, 2**32 - 1)


def real_delta_spectrum(u0: np.ndarray) -> np.ndarray:
    """Eigenvalues of S^dag S computed over the reals.

    S is real-linear, so it is a 2n^2 x 2n^2 real matrix on (Re, Im)
    coordinates, fixed by S(A u0) = A* u0 for the real basis {E_ij, i E_ij}.
    Every eigenvalue of the complex Delta appears twice.
    """
    n = u0.shape[0]

    def real(x):
        x = np.asarray(x).reshape(-1)
        return np.concatenate([x.real, x.imag])

    src, dst = [], []
    for _, _, e in matrix_units(n):
        for a in (e, 1j * e):
            src.append(real(a @ u0))
            dst.append(real(a.conj().T @ u0))
    s_real = np.column_stack(dst) @ np.linalg.inv(np.column_stack(src))
    eig = np.linalg.eigvalsh(s_real.T @ s_real)
    return np.sort(eig)[::2]


def test_polar_examples():
    h, v = polar_decompose(np.eye(2), C2)
    assert np.allclose(h, np.eye(2)) and np.allclose(v, np.eye(2))
    h, v = polar_decompose(np.diag([2.0, 3.0]), C2)
    assert np.allclose(h, np.diag([2, 3])) and np.allclose(v, np.eye(2))
    h, v = polar_decompose(np.array([[0, 2], [1, 0]]), C2)
    assert np.allclose(h, np.diag([2, 1]))
    assert np.allclose(v, [[0, 1], [1, 0]])


def test_polar_errors():
    with pytest.raises(SingularInput, match="SingularInput"):
        polar_decompose(np.diag([1.0, 0.0]), C2)
    with pytest.raises(IllConditioned):
        polar_decompose(np.diag([1.0, 1e-4]), C2)
    h, _ = polar_decompose(np.diag([1.0, 1e-4]), C2.replace(cond_limit=1e5))
    assert np.allclose(h, np.diag([1.0, 1e-4]))


@given(seeds, st.sampled_from([2, 3, 4]))
def test_polar_matches_scipy(seed, n):
    rng = np.random.default_rng(seed)
    t = random_invertible(n, 100.0, rng)
    ctx = FactorContext(n)
    h, v = polar_decompose(t, ctx)
    v_ref, h_ref = scipy.linalg.polar(t, side="left")
    assert np.linalg.norm(h - h_ref, 2) <= 1e-10
    assert np.linalg.norm(v - v_ref, 2) <= 1e-8
    assert np.linalg.norm(h @ v - t, 2) <= ctx.tol * np.linalg.norm(t, 2)


def test_conjugation_examples():
    j0 = modular_conjugation(np.eye(2), C2)
    assert j0.distance(base_conjugation(C2)) == 0.0
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    j0 = modular_conjugation(swap, C2)
    assert np.allclose(j0(np.diag([1.0, 0.0])), np.diag([0.0, 1.0]))
    with pytest.raises(NotUnitary):
        modular_conjugation(np.diag([1.0, 2.0]), C2)


@given(seeds, st.sampled_from([2, 3, 5]))
def test_conjugation_involution_and_two_forms(seed, n):
    ctx = FactorContext(n)
    v = random_unitary(n, np.random.default_rng(seed))
    j0 = modular_conjugation(v, ctx)
    assert np.linalg.norm(j0.compose(j0) - np.eye(n * n), 2) <= 1e-12
    assert j0.distance(conjugation_alternative(v, ctx)) <= 1e-12


def test_modular_operator_unitary_T(rng):
    u = random_unitary(3, rng)
    mo = modular_objects(u, FactorContext(3))
    assert np.allclose(mo.Delta0, np.eye(9))


def test_modular_operator_diagonal():
    a, b = 1.0, 2.0
    mo = modular_objects(np.diag([a, b]), C2)
    eig = np.sort(np.linalg.eigvalsh(mo.Delta0))
    frozen = [0.25, 1.0, 1.0, 4.0]
    assert np.allclose(eig, frozen)
    assert np.allclose(real_delta_spectrum(np.diag([a, b]).astype(complex)), frozen)


def test_modular_operator_rejects_non_positive():
    j0 = base_conjugation(C2)
    with pytest.raises(NotPositiveDefinite):
        modular_operator(np.diag([1.0, -1.0]), j0, C2)
    with pytest.raises(NotPositiveDefinite):
        modular_operator(np.array([[1.0, 1.0], [0.0, 1.0]]), j0, C2)


def test_tomita_operator_identity():
    assert tomita_operator(np.eye(2), C2).distance(base_conjugation(C2)) <= 1e-15


@given(seeds, st.sampled_from([2, 3, 4]))
def test_tomita_identity_on_matrix_units(seed, n):
    rng = np.random.default_rng(seed)
    t = random_invertible(n, 50.0, rng)
    ctx = FactorContext(n)
    s = tomita_operator(t, ctx)
    assert np.allclose(s(t), t, atol=1e-8)
    for _, _, e in matrix_units(n):
        assert np.linalg.norm(s(e @ t) - e.conj().T @ t) <= 1e-8 * 50


def test_oracle_trace_vector():
    oracle = tomita_oracle(np.eye(3), FactorContext(3))
    assert np.allclose(oracle.Delta0, np.eye(9))
    assert oracle.J0.distance(base_conjugation(FactorContext(3))) <= 1e-12


def test_oracle_rejects_non_cyclic():
    with pytest.raises(NotCyclicSeparating):
        tomita_oracle(np.diag([1.0, 0.0]), C2)


@given(seeds, st.sampled_from([2, 3]))
def test_formula_matches_oracle(seed, n):
    rng = np.random.default_rng(seed)
    kappa = float(np.exp(rng.uniform(0, np.log(1e3))))
    t = random_invertible(n, kappa, rng)
    ctx = FactorContext(n)
    mo, oracle = modular_objects(t, ctx), tomita_oracle(t, ctx)
    budget = 1e-8 * kappa**2
    assert np.linalg.norm(mo.Delta0 - oracle.Delta0, 2) <= budget
    assert mo.J0.distance(oracle.J0) <= budget
    assert np.linalg.norm(mo.Delta0 - closed_form_delta(t, ctx), 2) <= budget
    eig = np.sort(np.linalg.eigvalsh(mo.Delta0))
    assert np.allclose(eig, real_delta_spectrum(t), rtol=1e-6)


@given(seeds)
def test_oracle_j_delta_j(seed):
    rng = np.random.default_rng(seed)
    t = random_invertible(3, 20.0, rng)
    oracle = tomita_oracle(t, FactorContext(3))
    jdj = oracle.J0.after(oracle.Delta0).compose(oracle.J0)
    assert np.allclose(jdj @ oracle.Delta0, np.eye(9), atol=1e-6)


def test_flow_examples(rng):
    t = random_invertible(3, 10.0, rng)
    ctx = FactorContext(3)
    delta = modular_objects(t, ctx).Delta0
    a = random_matrix(3, rng)
    assert np.allclose(modular_flow(delta, 0.0, a, ctx), a)
    for time in (-1.3, 0.7, 2.0):
        assert np.allclose(modular_flow(delta, time, np.eye(3), ctx), np.eye(3))
    with pytest.raises(NotPositiveDefinite):
        modular_flow(-np.eye(9), 1.0, a, ctx)


@given(seeds, st.floats(-2, 2), st.floats(-2, 2))
def test_flow_group_law(seed, t1, t2):
    rng = np.random.default_rng(seed)
    ctx = FactorContext(2)
    delta = modular_objects(random_invertible(2, 30.0, rng), ctx).Delta0
    a = random_matrix(2, rng)
    lhs = modular_flow(delta, t1 + t2, a, ctx)
    rhs = modular_flow(delta, t1, modular_flow(delta, t2, a, ctx), ctx)
    assert np.allclose(lhs, rhs, atol=1e-7)


def test_membership_residuals(rng):
    ctx = FactorContext(3)
    a = random_matrix(3, rng)
    assert commutant_residual(left_operator(a), ctx) <= 1e-12
    assert left_commutation_residual(right_operator(a), ctx) <= 1e-12
    assert commutant_residual(right_operator(a), ctx) > 1e-3
    assert left_commutation_residual(left_operator(a), ctx) > 1e-3
    # a generic operator is in neither set
    g = random_matrix(9, rng)
    assert commutant_residual(g, ctx) > 1e-3


def test_membership_residual_matches_commutator_definition(rng):
    """Distance zero exactly when every commutator with the other side vanishes."""
    ctx = FactorContext(2)
    a = random_matrix(2, rng)
    op = left_operator(a) + 1e-3 * random_matrix(4, rng)
    worst = max(
        np.linalg.norm(op @ right_operator(e) - right_operator(e) @ op)
        for _, _, e in matrix_units(2)
    )
    assert worst > 0 and commutant_residual(op, ctx) > 0
    assert commutant_residual(left_operator(a), ctx) <= 1e-12


@pytest.mark.parametrize("n", [2, 3, 4, 8])
def test_full_suite_passes(n):
    rng = np.random.default_rng(n)
    t = random_invertible(n, 999.0, rng)
    checks = modular_checks(t, FactorContext(n), rng)
    failed = [c.to_dict() for c in checks if not c.passed]
    assert not failed
    assert len({c.invariant for c in checks}) == len(checks)


def test_vectorized_and_entrywise_agree(rng):
    t = random_invertible(2, 5.0, rng)
    mo = modular_objects(t, C2)
    x = random_matrix(2, rng)
    assert np.allclose(mo.Delta0 @ vec(x), vec(t @ t.conj().T @ x @ np.linalg.inv(t.conj().T @ t)))
