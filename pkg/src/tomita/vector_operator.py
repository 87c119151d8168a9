"""Vector <-> operator correspondence and cyclic/separating predicates.

In standard form the operator T_u with T_u u_tr = u is the matrix u itself.
Cyclicity and separation reduce to injectivity and surjectivity of T_u,
decided from singular values with a relative cutoff. The span oracles below
check the same facts from the definitions, without singular values of T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .finite_factor import (
    FactorContext,
    as_element,
    left_act,
    matrix_units,
    normalized_trace,
    right_act,
    trace_vector,
    vec,
)

# Margins within a factor of this of ctx.tol are treated as undecidable.
AMBIGUITY_FACTOR = 100.0


@dataclass(frozen=True, eq=False)
class VectorOperatorPair:
    u: np.ndarray
    T: np.ndarray
    rank: int
    sigma_min: float
    sigma_max: float

    @property
    def margin(self) -> float:
        """sigma_min / ||T||, zero for the zero vector."""
        if self.sigma_max == 0.0:
            return 0.0
        return self.sigma_min / self.sigma_max

    @property
    def condition_number(self) -> float:
        if self.sigma_min == 0.0:
            return float("inf")
        return self.sigma_max / self.sigma_min


def operator_from_vector(u, ctx: FactorContext) -> VectorOperatorPair:
    u = as_element(u, ctx, "u")
    t = u.copy()
    s = np.linalg.svd(t, compute_uv=False)
    smax = float(s[0])
    rank = int(np.sum(s > ctx.tol * smax)) if smax > 0 else 0
    return VectorOperatorPair(u=u, T=t, rank=rank, sigma_min=float(s[-1]), sigma_max=smax)


def vector_from_operator(t, ctx: FactorContext) -> np.ndarray:
    t = as_element(t, ctx, "T")
    return left_act(t, trace_vector(ctx))


def is_cyclic(pair: VectorOperatorPair, ctx: FactorContext) -> bool:
    """u is cyclic iff T_u is injective."""
    return pair.sigma_min > ctx.tol * pair.sigma_max


def is_separating(pair: VectorOperatorPair, ctx: FactorContext) -> bool:
    """u is separating iff T_u has dense range.

    A square matrix is surjective iff it is injective, and the smallest
    singular value governs both, so this agrees with is_cyclic.
    """
    return pair.sigma_min > ctx.tol * pair.sigma_max


def in_ambiguity_band(pair: VectorOperatorPair, ctx: FactorContext) -> bool:
    m = pair.margin
    return ctx.tol / AMBIGUITY_FACTOR <= m <= ctx.tol * AMBIGUITY_FACTOR


def trace_condition(pair: VectorOperatorPair, ctx: FactorContext) -> tuple[float, float]:
    """(tr(T T*), tr(T* T)), both equal to ||u||^2."""
    t = pair.T
    return (
        normalized_trace(t @ t.conj().T, ctx).real,
        normalized_trace(t.conj().T @ t, ctx).real,
    )


def _span_rank(vectors: np.ndarray, tol: float) -> int:
    s = np.linalg.svd(vectors, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def left_span_dimension(u, ctx: FactorContext) -> int:
    """dim span{E_ij u}: the algebra orbit of u."""
    u = as_element(u, ctx, "u")
    cols = [vec(left_act(e, u)) for _, _, e in matrix_units(ctx.n)]
    return _span_rank(np.column_stack(cols), ctx.tol)


def right_span_dimension(u, ctx: FactorContext) -> int:
    """dim span{u E_ij}: the commutant orbit of u."""
    u = as_element(u, ctx, "u")
    cols = [vec(right_act(e, u)) for _, _, e in matrix_units(ctx.n)]
    return _span_rank(np.column_stack(cols), ctx.tol)


def is_cyclic_oracle(u, ctx: FactorContext) -> bool:
    return left_span_dimension(u, ctx) == ctx.dim


def is_separating_oracle(u, ctx: FactorContext) -> bool:
    # separating for M <=> cyclic for the commutant
    return right_span_dimension(u, ctx) == ctx.dim
