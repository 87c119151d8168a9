"""Modular objects (Delta_0, J_0) of a cyclic separating vector.

Two independent routes are provided:

* the formula route builds everything from the left polar decomposition
  T = H V of the operator belonging to u_0:
  J_0 = V J V*, Delta_0 = J_0 H_0^{-1} J_0 H_0 with H_0 = T T*, and the
  Tomita operator S = H^{-1} V J V* H;
* ``tomita_oracle`` solves S (E_ij u_0) = E_ij* u_0 on the matrix-unit basis
  and polar-decomposes the resulting antilinear map directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IllConditioned,
    NotCyclicSeparating,
    NotPositiveDefinite,
    NotUnitary,
    SingularInput,
)
from .finite_factor import (
    AntilinearMap,
    FactorContext,
    as_element,
    base_conjugation,
    hermitian_function,
    left_operator,
    matrix_units,
    right_operator,
    unvec,
    vec,
)
from .vector_operator import is_cyclic, operator_from_vector


@dataclass(frozen=True, eq=False)
class ModularObjects:
    u0: np.ndarray
    H0: np.ndarray | None
    V: np.ndarray | None
    J0: AntilinearMap
    Delta0: np.ndarray
    S: AntilinearMap

    @property
    def n(self) -> int:
        return self.u0.shape[0]


def polar_decompose(t, ctx: FactorContext) -> tuple[np.ndarray, np.ndarray]:
    """Left polar decomposition T = H V with H = (T T*)^{1/2}."""
    t = as_element(t, ctx, "T")
    s = np.linalg.svd(t, compute_uv=False)
    if s[0] == 0.0 or s[-1] <= ctx.tol * s[0]:
        raise SingularInput(
            f"SingularInput: sigma_min={s[-1]:.3e} <= tol*||T||={ctx.tol * s[0]:.3e}"
        )
    kappa = s[0] / s[-1]
    if kappa > ctx.cond_limit:
        raise IllConditioned(
            f"IllConditioned: cond(T)={kappa:.3e} exceeds cond_limit={ctx.cond_limit:.3e}"
        )
    tts = t @ t.conj().T
    h = hermitian_function(tts, np.sqrt)
    h_inv = hermitian_function(tts, lambda w: 1.0 / np.sqrt(w))
    return h, h_inv @ t


def modular_conjugation(v, ctx: FactorContext) -> AntilinearMap:
    """J_0 = V J V*, acting as X -> V X* V."""
    v = as_element(v, ctx, "V")
    resid = np.linalg.norm(v.conj().T @ v - np.eye(ctx.n), 2)
    if resid > ctx.tol * max(1, ctx.n):
        raise NotUnitary(f"NotUnitary: ||V*V - I|| = {resid:.3e}")
    j = base_conjugation(ctx)
    return j.after(left_operator(v.conj().T)).before(left_operator(v))


def conjugation_alternative(v, ctx: FactorContext) -> AntilinearMap:
    """The other form J V* J V J of J_0; kept to check it against V J V*."""
    v = as_element(v, ctx, "V")
    j = base_conjugation(ctx)
    inner = j.after(left_operator(v.conj().T)).compose(j)  # J V* J, linear
    return j.before(left_operator(v)).before(inner)


def _check_positive(h0: np.ndarray, ctx: FactorContext):
    herm = np.linalg.norm(h0 - h0.conj().T, 2)
    w = np.linalg.eigvalsh(0.5 * (h0 + h0.conj().T))
    scale = max(abs(w[-1]), 1e-300)
    if herm > ctx.tol * scale or w[0] <= ctx.tol * scale:
        raise NotPositiveDefinite(
            f"NotPositiveDefinite: min eigenvalue {w[0]:.3e}, hermiticity defect {herm:.3e}"
        )


def modular_operator(h0, j0: AntilinearMap, ctx: FactorContext) -> np.ndarray:
    """Delta_0 = J_0 H_0^{-1} J_0 H_0 as an n^2 x n^2 matrix."""
    h0 = as_element(h0, ctx, "H0")
    _check_positive(h0, ctx)
    h0_inv = hermitian_function(h0, lambda w: 1.0 / w)
    first = j0.after(left_operator(h0))  # J_0 H_0
    second = j0.after(left_operator(h0_inv))  # J_0 H_0^{-1}
    return second.compose(first)


def tomita_operator(t, ctx: FactorContext) -> AntilinearMap:
    """S = H^{-1} V J V* H from the polar decomposition of T."""
    h, v = polar_decompose(t, ctx)
    h_inv = np.linalg.inv(h)
    j = base_conjugation(ctx)
    return j.after(left_operator(v.conj().T @ h)).before(left_operator(h_inv @ v))


def modular_objects(t, ctx: FactorContext) -> ModularObjects:
    """Formula route: everything derived from T_{u_0} = T."""
    t = as_element(t, ctx, "T")
    h, v = polar_decompose(t, ctx)
    h0 = h @ h
    j0 = modular_conjugation(v, ctx)
    delta0 = modular_operator(h0, j0, ctx)
    return ModularObjects(u0=t, H0=h0, V=v, J0=j0, Delta0=delta0, S=tomita_operator(t, ctx))


def tomita_oracle(u0, ctx: FactorContext) -> ModularObjects:
    """Definition-level modular objects, independent of the polar formulas.

    S is fixed by S(E_ij u0) = E_ji u0 on the basis {E_ij u0}. Writing
    S x = L conj(x) gives L conj(B) = D. The antilinear adjoint of S has
    linear part L.T, so Delta = S^dag S = L.T conj(L) and J = S Delta^{-1/2}.
    """
    u0 = as_element(u0, ctx, "u0")
    pair = operator_from_vector(u0, ctx)
    if not is_cyclic(pair, ctx):
        raise NotCyclicSeparating(
            f"NotCyclicSeparating: sigma_min/||T|| = {pair.margin:.3e}"
        )
    basis, images = [], []
    for _, _, e in matrix_units(ctx.n):
        basis.append(vec(e @ u0))
        images.append(vec(e.conj().T @ u0))
    b = np.column_stack(basis)
    d = np.column_stack(images)
    # L = D conj(B)^{-1}, i.e. solve conj(B).T L.T = D.T
    lin = np.linalg.solve(np.conj(b).T, d.T).T
    s = AntilinearMap(lin)
    delta = s.adjoint().compose(s)
    delta = 0.5 * (delta + delta.conj().T)
    j = s.after(hermitian_function(delta, lambda w: 1.0 / np.sqrt(w)))
    return ModularObjects(u0=u0, H0=None, V=None, J0=j, Delta0=delta, S=s)


def closed_form_delta(t, ctx: FactorContext) -> np.ndarray:
    """X -> (T T*) X (T* T)^{-1}."""
    t = as_element(t, ctx, "T")
    return left_operator(t @ t.conj().T) @ right_operator(np.linalg.inv(t.conj().T @ t))


def delta_power(delta0: np.ndarray, t: float) -> np.ndarray:
    """Delta_0^{it} through an eigendecomposition of the Hermitian part."""
    return hermitian_function(delta0, lambda w: np.exp(1j * t * np.log(w)))


def flow_operator(delta0: np.ndarray, t: float, a) -> np.ndarray:
    """Delta_0^{it} L_A Delta_0^{-it} on the flattened space."""
    w = np.linalg.eigvalsh(0.5 * (delta0 + delta0.conj().T))
    if w[0] <= 0:
        raise NotPositiveDefinite(f"NotPositiveDefinite: min eigenvalue {w[0]:.3e}")
    a = as_element(a, name="A")
    return delta_power(delta0, t) @ left_operator(a) @ delta_power(delta0, -t)


def modular_flow(delta0, t: float, a, ctx: FactorContext) -> np.ndarray:
    """sigma_t(A) as a matrix element.

    The flow preserves the algebra, so the result is a left multiplication
    and is read off from its action on the trace vector.
    """
    a = as_element(a, ctx, "A")
    op = flow_operator(np.asarray(delta0, dtype=complex), t, a)
    return unvec(op @ vec(np.eye(ctx.n)), ctx.n)


def commutant_residual(op: np.ndarray, ctx: FactorContext) -> float:
    """Frobenius distance from op to {L_A}; zero iff op commutes with every R_B.

    L_A = kron(A, I) has entries A[i, j] delta_ab, so the nearest L_A averages
    the diagonal of the second index pair.
    """
    n = ctx.n
    blocks = np.asarray(op).reshape(n, n, n, n)  # [i, a, j, b]
    a = np.einsum("iaja->ij", blocks) / n
    return float(np.linalg.norm(op - np.kron(a, np.eye(n))))


def left_commutation_residual(op: np.ndarray, ctx: FactorContext) -> float:
    """Frobenius distance from op to {R_B}; zero iff op commutes with every L_A."""
    n = ctx.n
    blocks = np.asarray(op).reshape(n, n, n, n)
    bt = np.einsum("iaib->ab", blocks) / n
    return float(np.linalg.norm(op - np.kron(np.eye(n), bt)))
