"""Invariant suite comparing the polar-decomposition formulas with the Tomita oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finite_factor import (
    FactorContext,
    as_element,
    hermitian_function,
    left_operator,
    matrix_units,
    norm,
    unvec,
    vec,
)
from .modular_engine import (
    closed_form_delta,
    commutant_residual,
    conjugation_alternative,
    flow_operator,
    left_commutation_residual,
    modular_flow,
    modular_objects,
    polar_decompose,
    tomita_oracle,
)
from .sampling import random_matrix

# Residual budget for identities involving H_0 and H_0^{-1}, as a multiple of kappa(T)**2.
MODULAR_RTOL = 1e-8
FLOW_TIMES = (1.0, -1.0, 0.5, -0.5)


@dataclass(frozen=True)
class Check:
    invariant: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual) and self.residual <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


def condition_number(t: np.ndarray) -> float:
    s = np.linalg.svd(t, compute_uv=False)
    return float(s[0] / s[-1]) if s[-1] > 0 else float("inf")


def _opnorm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def modular_checks(t, ctx: FactorContext, rng: np.random.Generator | None = None) -> list[Check]:
    """Every modular invariant for u_0 = T, each with its residual and budget."""
    t = as_element(t, ctx, "T")
    rng = np.random.default_rng(0) if rng is None else rng
    kappa = condition_number(t)
    tol2 = MODULAR_RTOL * kappa**2
    n = ctx.n
    mo = modular_objects(t, ctx)
    oracle = tomita_oracle(t, ctx)
    delta, j0, s = mo.Delta0, mo.J0, mo.S
    checks = []

    h, v = polar_decompose(t, ctx)
    checks.append(Check("polar_product", _opnorm(h @ v - t), ctx.tol * _opnorm(t)))
    checks.append(Check("V_unitary", _opnorm(mo.V.conj().T @ mo.V - np.eye(n)), ctx.tol * max(1, n)))
    checks.append(Check("delta_formula_vs_oracle", _opnorm(delta - oracle.Delta0), tol2))
    checks.append(Check("J_formula_vs_oracle", j0.distance(oracle.J0), tol2))
    checks.append(Check("S_formula_vs_oracle", s.distance(oracle.S), tol2))
    checks.append(Check("J_two_forms", j0.distance(conjugation_alternative(mo.V, ctx)), tol2))
    checks.append(Check("delta_closed_form", _opnorm(delta - closed_form_delta(t, ctx)), tol2))

    worst = 0.0
    for _, _, e in matrix_units(n):
        worst = max(worst, norm(s(e @ t) - e.conj().T @ t, ctx))
    checks.append(Check("tomita_identity", worst, ctx.tol * kappa))

    half = hermitian_function(delta, np.sqrt)
    checks.append(Check("S_equals_J_delta_half", s.distance(j0.after(half)), tol2))
    checks.append(Check("delta_fixes_u0", norm(unvec(delta @ vec(t), n) - t, ctx), tol2))
    checks.append(Check("J_fixes_u0", norm(j0(t) - t, ctx), tol2))
    checks.append(Check("J_involution", _opnorm(j0.compose(j0) - np.eye(n * n)), tol2))
    # Delta_0^{-1} is never formed by inverting Delta_0 (that would cost another kappa^4)
    jdj = j0.after(delta).compose(j0)
    h0_inv = hermitian_function(mo.H0, lambda w: 1.0 / w)
    inverse_formula = j0.after(left_operator(mo.H0)).compose(j0.after(left_operator(h0_inv)))
    checks.append(Check("J_delta_J_inverse", _opnorm(jdj - inverse_formula), tol2))
    inverse_oracle = oracle.S.compose(oracle.S.adjoint())
    checks.append(Check("J_delta_J_inverse_oracle", _opnorm(jdj - inverse_oracle), tol2))
    herm = _opnorm(delta - delta.conj().T)
    min_eig = float(np.linalg.eigvalsh(0.5 * (delta + delta.conj().T))[0])
    checks.append(Check("delta_positive", herm + max(0.0, -min_eig), tol2))

    worst = 0.0
    for _, _, e in matrix_units(n):
        mapped = j0.after(left_operator(e)).compose(j0)
        worst = max(worst, left_commutation_residual(mapped, ctx))
    checks.append(Check("J_maps_algebra_to_commutant", worst, tol2))

    a = random_matrix(n, rng)
    a /= _opnorm(a)
    worst = 0.0
    for time in FLOW_TIMES:
        worst = max(worst, commutant_residual(flow_operator(delta, time, a), ctx))
    checks.append(Check("flow_preserves_algebra", worst, tol2))

    h0 = mo.H0
    closed = hermitian_function(h0, lambda w: w**1j) @ a @ hermitian_function(h0, lambda w: w**-1j)
    checks.append(Check("flow_closed_form", _opnorm(modular_flow(delta, 1.0, a, ctx) - closed), tol2))
    ts, ss = 0.5, -1.0
    composed = modular_flow(delta, ts, modular_flow(delta, ss, a, ctx), ctx)
    checks.append(Check("flow_group_law", _opnorm(modular_flow(delta, ts + ss, a, ctx) - composed), tol2))
    return checks
