import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import complex_matrices
from tomita.errors import ShapeMismatch
from tomita.finite_factor import (
    AntilinearMap,
    FactorContext,
    base_conjugation,
    inner_product,
    left_act,
    left_operator,
    norm,
    normalized_trace,
    right_act,
    right_operator,
    trace_vector,
    transpose_permutation,
    unvec,
    vec,
)

C2 = FactorContext(2)


def test_context_validation():
    with pytest.raises(ValueError):
        FactorContext(0)
    with pytest.raises(ValueError):
        FactorContext(2, tol=0.0)
    with pytest.raises(ValueError):
        FactorContext(2, cond_limit=0.5)
    assert FactorContext(3).dim == 9
    assert FactorContext(3).replace(tol=1e-6).tol == 1e-6


def test_inner_product_examples():
    eye = np.eye(2)
    assert inner_product(eye, eye, C2) == pytest.approx(1.0)
    assert inner_product(eye, np.diag([1, -1]), C2) == pytest.approx(0.0)
    # Tr(diag(3,4)* diag(1,2)) / 2 = (3 + 8) / 2
    assert inner_product(np.diag([1, 2]), np.diag([3, 4]), C2) == pytest.approx(5.5)


def test_inner_product_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        inner_product(np.eye(2), np.eye(3), C2)


def test_trace_vector():
    assert np.array_equal(trace_vector(FactorContext(1)), [[1]])
    assert np.array_equal(trace_vector(FactorContext(3)), np.eye(3))
    assert norm(trace_vector(FactorContext(5)), FactorContext(5)) == pytest.approx(1.0)
    m = np.diag([1.0, 2.0])
    via_vector = inner_product(left_act(m, trace_vector(C2)), trace_vector(C2), C2)
    assert via_vector == pytest.approx(1.5)


def test_left_and_right_act_examples():
    x = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(left_act(np.eye(2), x), x)
    assert np.array_equal(left_act(np.zeros((2, 2)), x), np.zeros((2, 2)))
    nil = np.array([[0, 1], [0, 0]])
    assert np.array_equal(left_act(nil, np.eye(2)), nil)
    assert np.array_equal(right_act(np.eye(2), x), x)
    assert np.array_equal(right_act(np.diag([1, 2]), np.ones((2, 2))), [[1, 2], [1, 2]])


def test_normalized_trace_examples():
    assert normalized_trace(np.eye(4), FactorContext(4)) == pytest.approx(1.0)
    assert normalized_trace(np.diag([1, 0]), C2) == pytest.approx(0.5)


def test_base_conjugation_examples():
    j = base_conjugation(C2)
    assert np.allclose(j(np.eye(2)), np.eye(2))
    assert np.allclose(j(np.array([[0, 1], [0, 0]])), [[0, 0], [1, 0]])
    assert np.allclose(j(np.array([[1j, 0], [0, 0]])), [[-1j, 0], [0, 0]])


def test_flattening_conventions(rng):
    a, x = rng.standard_normal((2, 3, 3)) + 1j * rng.standard_normal((2, 3, 3))
    assert np.allclose(left_operator(a) @ vec(x), vec(a @ x))
    assert np.allclose(right_operator(a) @ vec(x), vec(x @ a))
    assert np.allclose(unvec(transpose_permutation(3) @ vec(x)), x.T)


def test_antilinear_compositions(rng):
    n = 3
    l1, l2 = rng.standard_normal((2, 9, 9)) + 1j * rng.standard_normal((2, 9, 9))
    m = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    x = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    a, b = AntilinearMap(l1), AntilinearMap(l2)
    assert np.allclose(a.after(m).apply_vec(x), a.apply_vec(m @ x))
    assert np.allclose(a.before(m).apply_vec(x), m @ a.apply_vec(x))
    assert np.allclose(a.compose(b) @ x, a.apply_vec(b.apply_vec(x)))
    # <A^dag x, y> = conj(<x, A y>)
    y = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    lhs = np.vdot(y, a.adjoint().apply_vec(x))
    rhs = np.conj(np.vdot(a.apply_vec(y), x))
    assert lhs == pytest.approx(rhs)
    assert a.size == n * n


@given(complex_matrices(3), complex_matrices(3), complex_matrices(3))
def test_commutant_property(a, b, x):
    ctx = FactorContext(3)
    lhs = left_act(a, right_act(b, x))
    rhs = right_act(b, left_act(a, x))
    scale = max(1.0, np.linalg.norm(a) * np.linalg.norm(b) * np.linalg.norm(x))
    assert np.linalg.norm(lhs - rhs) <= ctx.tol * scale


@given(complex_matrices(3))
def test_trace_vector_identity(m):
    ctx = FactorContext(3)
    u = trace_vector(ctx)
    assert normalized_trace(m, ctx) == inner_product(left_act(m, u), u, ctx)


@given(complex_matrices(2), complex_matrices(2))
def test_tracial(a, b):
    ctx = C2
    gap = abs(normalized_trace(a @ b, ctx) - normalized_trace(b @ a, ctx))
    assert gap <= ctx.tol * max(1.0, np.linalg.norm(a, 2) * np.linalg.norm(b, 2))


@given(complex_matrices(3), complex_matrices(3), st.complex_numbers(max_magnitude=10))
def test_conjugation_is_antilinear_involution(x, y, alpha):
    j = base_conjugation(FactorContext(3))
    assert np.allclose(j(j(x)), x)
    assert np.allclose(j(alpha * x + y), np.conj(alpha) * j(x) + j(y), atol=1e-9)


@given(complex_matrices(2), complex_matrices(2))
def test_inner_product_hermitian_positive(x, y):
    assert inner_product(x, y, C2) == pytest.approx(np.conj(inner_product(y, x, C2)), abs=1e-9)
    assert inner_product(x, x, C2).real >= 0
