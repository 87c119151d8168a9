"""The finite factor M_n(C) in standard form.

The Hilbert space is M_n(C) itself with inner product <X, Y> = Tr(Y* X) / n,
so the identity matrix is a unit trace vector. The algebra acts by left
multiplication and its commutant by right multiplication.

Vectors of the n^2-dimensional space are row-major flattenings of n x n
matrices. With this convention

    vec(A X) = kron(A, I) vec(X),      vec(X B) = kron(I, B.T) vec(X).

The 1/n in the inner product is a global scale, so adjoints, unitarity and
operator norms on the flattened space are the plain Euclidean ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeMismatch

DEFAULT_TOL = 1e-10
DEFAULT_COND_LIMIT = 1e3


@dataclass(frozen=True)
class FactorContext:
    """Fixes the model: matrix size, tolerance and accepted conditioning."""

    n: int
    tol: float = DEFAULT_TOL
    cond_limit: float = DEFAULT_COND_LIMIT

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if not self.cond_limit >= 1:
            raise ValueError(f"cond_limit must be >= 1, got {self.cond_limit!r}")

    @property
    def dim(self) -> int:
        """Dimension of the Hilbert space (n^2)."""
        return self.n * self.n

    def replace(self, **changes) -> "FactorContext":
        fields = dict(n=self.n, tol=self.tol, cond_limit=self.cond_limit)
        fields.update(changes)
        return FactorContext(**fields)


def as_element(x, ctx: FactorContext | None = None, name: str = "matrix") -> np.ndarray:
    """Validate and coerce ``x`` to an n x n complex matrix element."""
    a = np.asarray(x, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"{name} must be square, got shape {a.shape}")
    if ctx is not None and a.shape[0] != ctx.n:
        raise ShapeMismatch(f"{name} has size {a.shape[0]}, context expects n={ctx.n}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return a


def _check_same(x: np.ndarray, y: np.ndarray):
    if x.shape != y.shape:
        raise ShapeMismatch(f"shape mismatch: {x.shape} vs {y.shape}")


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x, dtype=complex).reshape(-1)


def unvec(v: np.ndarray, n: int | None = None) -> np.ndarray:
    v = np.asarray(v)
    if n is None:
        n = int(round(np.sqrt(v.size)))
    return v.reshape(n, n)


def left_operator(a: np.ndarray) -> np.ndarray:
    """n^2 x n^2 matrix of X -> A X."""
    a = np.asarray(a, dtype=complex)
    return np.kron(a, np.eye(a.shape[0]))


def right_operator(b: np.ndarray) -> np.ndarray:
    """n^2 x n^2 matrix of X -> X B."""
    b = np.asarray(b, dtype=complex)
    return np.kron(np.eye(b.shape[0]), b.T)


def transpose_permutation(n: int) -> np.ndarray:
    """Permutation matrix P with P vec(X) = vec(X.T)."""
    idx = np.arange(n * n).reshape(n, n).T.reshape(-1)
    return np.eye(n * n, dtype=complex)[idx]


def matrix_units(n: int):
    """Yield (i, j, E_ij) for the standard matrix-unit basis of M_n."""
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n), dtype=complex)
            e[i, j] = 1.0
            yield i, j, e


@dataclass(frozen=True, eq=False)
class AntilinearMap:
    """Conjugate-linear map x -> L conj(x) on the flattened n^2-dim space.

    Compositions follow from conj(L x) = conj(L) conj(x):
    antilinear o antilinear is linear, antilinear o linear is antilinear.
    """

    linear_part: np.ndarray

    @property
    def size(self) -> int:
        return self.linear_part.shape[0]

    def apply_vec(self, v: np.ndarray) -> np.ndarray:
        return self.linear_part @ np.conj(v)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.ndim == 1:
            return self.apply_vec(x)
        return unvec(self.apply_vec(vec(x)), x.shape[0])

    def after(self, linear: np.ndarray) -> "AntilinearMap":
        """self o linear."""
        return AntilinearMap(self.linear_part @ np.conj(linear))

    def before(self, linear: np.ndarray) -> "AntilinearMap":
        """linear o self."""
        return AntilinearMap(linear @ self.linear_part)

    def compose(self, other: "AntilinearMap") -> np.ndarray:
        """self o other, which is linear; returned as a matrix."""
        return self.linear_part @ np.conj(other.linear_part)

    def adjoint(self) -> "AntilinearMap":
        """Antilinear adjoint: <A^dag x, y> = conj(<x, A y>)."""
        return AntilinearMap(self.linear_part.T.copy())

    def distance(self, other: "AntilinearMap") -> float:
        """Operator-norm distance; exact because conj is an isometry."""
        return float(np.linalg.norm(self.linear_part - other.linear_part, 2))


def inner_product(x, y, ctx: FactorContext) -> complex:
    """<x, y> = Tr(y* x) / n, linear in x."""
    x = as_element(x, ctx, "x")
    y = as_element(y, ctx, "y")
    return complex(np.vdot(y, x) / ctx.n)


def norm(x, ctx: FactorContext) -> float:
    return float(np.sqrt(max(inner_product(x, x, ctx).real, 0.0)))


def trace_vector(ctx: FactorContext) -> np.ndarray:
    return np.eye(ctx.n, dtype=complex)


def left_act(m, x) -> np.ndarray:
    m = as_element(m, name="M")
    x = as_element(x, name="x")
    _check_same(m, x)
    return m @ x


def right_act(m, x) -> np.ndarray:
    m = as_element(m, name="M")
    x = as_element(x, name="x")
    _check_same(m, x)
    return x @ m


def normalized_trace(m, ctx: FactorContext) -> complex:
    m = as_element(m, ctx, "M")
    return complex(np.trace(m) / ctx.n)


def base_conjugation(ctx: FactorContext) -> AntilinearMap:
    """The conjugation X -> X* belonging to the trace vector."""
    return AntilinearMap(transpose_permutation(ctx.n))


def hermitian_function(a: np.ndarray, fn) -> np.ndarray:
    """Apply ``fn`` to the eigenvalues of the Hermitian part of ``a``."""
    a = np.asarray(a, dtype=complex)
    h = 0.5 * (a + a.conj().T)
    w, q = np.linalg.eigh(h)
    return (q * fn(w)) @ q.conj().T
