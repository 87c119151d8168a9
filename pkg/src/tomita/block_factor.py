"""Finite truncation of the semifinite model R = T (x) L(H_inf) (x) C.

A vector u = (u_i^j) of the truncated space is stored as an array of shape
(N, N, n, n) with ``blocks[i, j] = u_i^j``: the lower index belongs to the
second tensor factor, the upper one to the third. Each u_i^j lives in the
standard form M_n(C) of the finite factor T, so the truncated space is
M_{nN}(C) read blockwise. The algebra acts by (T u)_l^k = sum_i T_li u_i^k,
i.e. by left multiplication of the assembled (nN) x (nN) matrix.

The block trace is left unnormalized: tr(Id) = N, the truncation of
tr(Id) = infinity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import FormulaMismatch, ShapeMismatch
from .finite_factor import FactorContext, trace_vector
from .vector_operator import (
    in_ambiguity_band,
    is_cyclic,
    is_cyclic_oracle,
    is_separating,
    is_separating_oracle,
    operator_from_vector,
)


def _check_blocks(blocks, name: str) -> np.ndarray:
    b = np.asarray(blocks, dtype=complex)
    if b.ndim != 4 or b.shape[0] != b.shape[1] or b.shape[2] != b.shape[3]:
        raise ShapeMismatch(f"{name} blocks must have shape (N, N, n, n), got {b.shape}")
    if not np.all(np.isfinite(b)):
        raise ValueError(f"{name} has non-finite entries")
    return b


def _to_dense(b: np.ndarray) -> np.ndarray:
    big_n, _, n, _ = b.shape
    return b.transpose(0, 2, 1, 3).reshape(big_n * n, big_n * n)


def _from_dense(m: np.ndarray, n: int) -> np.ndarray:
    big_n = m.shape[0] // n
    return m.reshape(big_n, n, big_n, n).transpose(0, 2, 1, 3)


@dataclass(frozen=True, eq=False)
class BlockVector:
    blocks: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "blocks", _check_blocks(self.blocks, "BlockVector"))

    @property
    def N(self) -> int:
        return self.blocks.shape[0]

    @property
    def n(self) -> int:
        return self.blocks.shape[2]

    @property
    def total_norm_sq(self) -> float:
        # sum_ij <u_i^j, u_i^j> with the normalized inner product of M_n
        return float(np.sum(np.abs(self.blocks) ** 2) / self.n)

    def inner(self, other: "BlockVector") -> complex:
        if self.blocks.shape != other.blocks.shape:
            raise ShapeMismatch("block vectors of different shapes")
        return complex(np.vdot(other.blocks, self.blocks) / self.n)

    def to_dense(self) -> np.ndarray:
        return _to_dense(self.blocks)

    @classmethod
    def from_dense(cls, m, n: int) -> "BlockVector":
        return cls(_from_dense(np.asarray(m, dtype=complex), n))

    def __add__(self, other: "BlockVector") -> "BlockVector":
        return BlockVector(self.blocks + other.blocks)

    def scaled(self, c: complex) -> "BlockVector":
        return BlockVector(c * self.blocks)


@dataclass(frozen=True, eq=False)
class BlockOperator:
    blocks: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "blocks", _check_blocks(self.blocks, "BlockOperator"))

    @property
    def N(self) -> int:
        return self.blocks.shape[0]

    @property
    def n(self) -> int:
        return self.blocks.shape[2]

    def apply(self, u: BlockVector) -> BlockVector:
        """(T u)_l^k = sum_i T_li u_i^k."""
        if u.blocks.shape != self.blocks.shape:
            raise ShapeMismatch(f"operator {self.blocks.shape} vs vector {u.blocks.shape}")
        return BlockVector(np.einsum("liab,ikbc->lkac", self.blocks, u.blocks))

    def adjoint(self) -> "BlockOperator":
        return BlockOperator(self.blocks.transpose(1, 0, 3, 2).conj())

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator(np.einsum("liab,ikbc->lkac", self.blocks, other.blocks))

    def to_dense(self) -> np.ndarray:
        return _to_dense(self.blocks)

    @classmethod
    def from_dense(cls, m, n: int) -> "BlockOperator":
        return cls(_from_dense(np.asarray(m, dtype=complex), n))

    @classmethod
    def identity(cls, n: int, big_n: int) -> "BlockOperator":
        return cls.from_dense(np.eye(n * big_n), n)


def basis_vectors(ctx: FactorContext, big_n: int) -> list[BlockVector]:
    """v_1 .. v_N: the trace vector u_tr placed in diagonal block (k, k)."""
    if big_n < 1:
        raise ValueError("N must be >= 1")
    out = []
    for k in range(big_n):
        b = np.zeros((big_n, big_n, ctx.n, ctx.n), dtype=complex)
        b[k, k] = trace_vector(ctx)
        out.append(BlockVector(b))
    return out


def weighted_basis_vector(ctx: FactorContext, big_n: int, weight=lambda j: j**-2.0) -> BlockVector:
    """sum_j weight(j) v_j with j counted from 1; defaults to sum_j j^-2 v_j."""
    vs = basis_vectors(ctx, big_n)
    total = vs[0].scaled(weight(1))
    for j, v in enumerate(vs[1:], start=2):
        total = total + v.scaled(weight(j))
    return total


def block_trace_formulas(m: BlockOperator, ctx: FactorContext) -> tuple[complex, complex]:
    """(sum_k tr_T(M_kk), sum_k <M v_k, v_k>)."""
    diag = sum(np.trace(m.blocks[k, k]) / ctx.n for k in range(m.N))
    vs = basis_vectors(ctx, m.N)
    via_vectors = sum(m.apply(v).inner(v) for v in vs)
    return complex(diag), complex(via_vectors)


def block_trace(m: BlockOperator, ctx: FactorContext) -> complex:
    if m.n != ctx.n:
        raise ShapeMismatch(f"block size {m.n} does not match n={ctx.n}")
    a, b = block_trace_formulas(m, ctx)
    scale = max(1.0, float(sum(np.linalg.norm(m.blocks[k, k], 2) for k in range(m.N))))
    if abs(a - b) > ctx.tol * scale:
        raise FormulaMismatch(f"FormulaMismatch: block trace {a} vs {b}")
    return a


def assemble_T_u(u: BlockVector, ctx: FactorContext) -> BlockOperator:
    """T_u with blocks T_ij = T_{u_i^j}; in standard form T_ij = u_i^j."""
    if u.n != ctx.n:
        raise ShapeMismatch(f"block size {u.n} does not match n={ctx.n}")
    blocks = np.empty_like(u.blocks)
    for i in range(u.N):
        for j in range(u.N):
            blocks[i, j] = operator_from_vector(u.blocks[i, j], ctx).T
    return BlockOperator(blocks)


def reconstruct(t: BlockOperator, ctx: FactorContext) -> BlockVector:
    """sum_k T v_k."""
    vs = basis_vectors(ctx, t.N)
    total = t.apply(vs[0])
    for v in vs[1:]:
        total = total + t.apply(v)
    return total


def block_trace_condition(u: BlockVector, ctx: FactorContext) -> tuple[float, float, float]:
    """(tr(T_u* T_u), tr(T_u T_u*), ||u||^2)."""
    t = assemble_T_u(u, ctx)
    ts = t.adjoint()
    return (
        block_trace(ts @ t, ctx).real,
        block_trace(t @ ts, ctx).real,
        u.total_norm_sq,
    )


def flattened_context(ctx: FactorContext, big_n: int) -> FactorContext:
    """The truncation R_N viewed as the finite factor M_{nN}(C)."""
    return ctx.replace(n=ctx.n * big_n)


def block_cyclic_separating(
    u: BlockVector, ctx: FactorContext, oracle: bool = True
) -> tuple[bool, bool]:
    """(injective, surjective) for T_u, with the span oracle as cross-check."""
    big = flattened_context(ctx, u.N)
    dense = assemble_T_u(u, ctx).to_dense()
    pair = operator_from_vector(dense, big)
    result = (is_cyclic(pair, big), is_separating(pair, big))
    if oracle and not in_ambiguity_band(pair, big):
        expected = (is_cyclic_oracle(dense, big), is_separating_oracle(dense, big))
        if expected != result:
            raise FormulaMismatch(
                f"FormulaMismatch: singular values give {result}, span oracle {expected}"
            )
    return result


@dataclass(frozen=True)
class TruncationRow:
    N: int
    tr_identity: float
    norm_sq: float
    tr_TsT: float
    tr_TTs: float
    cauchy_diff: float | None
    reconstruction_residual: float
    cyclic: bool
    separating: bool


def truncation_study(
    ctx: FactorContext, sizes=(2, 4, 8, 16), weight=lambda j: j**-2.0, oracle: bool = True
) -> list[TruncationRow]:
    """Truncated shadows of the infinite statements for growing N."""
    rows = []
    prev = None
    for big_n in sizes:
        u = weighted_basis_vector(ctx, big_n, weight)
        t = assemble_T_u(u, ctx)
        tr_tst, tr_tts, nsq = block_trace_condition(u, ctx)
        resid = float(np.sqrt(np.sum(np.abs(reconstruct(t, ctx).blocks - u.blocks) ** 2)))
        cyc, sep = block_cyclic_separating(u, ctx, oracle=oracle)
        rows.append(
            TruncationRow(
                N=big_n,
                tr_identity=block_trace(BlockOperator.identity(ctx.n, big_n), ctx).real,
                norm_sq=nsq,
                tr_TsT=tr_tst,
                tr_TTs=tr_tts,
                cauchy_diff=None if prev is None else abs(nsq - prev),
                reconstruction_residual=resid,
                cyclic=cyc,
                separating=sep,
            )
        )
        prev = nsq
    return rows
