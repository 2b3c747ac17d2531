"""Spectral spatial operators, propagators and commutator actions.

Everything is dense and complex. Chebyshev grids use Gauss-Lobatto points
with the Dirichlet boundary rows and columns removed, so a Chebyshev grid of
``M`` intervals carries ``M - 1`` unknowns. Two-dimensional states are stored
row-major (first coordinate slowest), matching ``np.kron(Ax, I) + np.kron(I, Ay)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.linalg import toeplitz

__all__ = [
    "InvalidGridError",
    "NumericError",
    "GridSpec",
    "EllipticOperator",
    "Propagator",
    "scalar_operator",
    "build_fourier_diff2",
    "build_chebyshev_dirichlet",
    "kron_sum",
    "matrix_exp",
    "apply_multiplier",
    "commutator_apply",
    "wave_first_order",
    "lift_multiplier",
    "clenshaw_curtis_weights",
]


class InvalidGridError(ValueError):
    pass


class NumericError(ArithmeticError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Discretisation grid.

    ``kind`` is one of ``"fourier"`` (periodic, M points), ``"chebyshev"``
    (Dirichlet, M intervals, M - 1 interior nodes), ``"tensor"`` (product of
    two 1-D factors) or ``"point"`` (a single unknown, used for scalar
    model problems).
    """

    kind: str
    M: int
    intervals: Tuple[Tuple[float, float], ...]
    factors: Tuple["GridSpec", ...] = ()

    def __post_init__(self):
        if self.kind == "point":
            return
        if self.kind not in ("fourier", "chebyshev", "tensor"):
            raise InvalidGridError(f"unknown grid kind {self.kind!r}")
        if self.M < 4:
            raise InvalidGridError(f"need M >= 4, got {self.M}")
        for a, b in self.intervals:
            if not b > a:
                raise InvalidGridError(f"interval ({a}, {b}) has non-positive length")
        if self.kind == "fourier" and self.M % 2:
            raise InvalidGridError("Fourier grids need an even number of points")
        if self.kind == "tensor" and len(self.factors) != 2:
            raise InvalidGridError("tensor grids need exactly two factors")

    @property
    def size(self) -> int:
        if self.kind == "point":
            return 1
        if self.kind == "fourier":
            return self.M
        if self.kind == "chebyshev":
            return self.M - 1
        return self.factors[0].size * self.factors[1].size

    @property
    def ndim(self) -> int:
        return 2 if self.kind == "tensor" else 1

    def nodes(self):
        """Node coordinates: a 1-D array, or a pair of flattened arrays in 2-D."""
        if self.kind == "point":
            return np.zeros(1)
        if self.kind == "fourier":
            a, b = self.intervals[0]
            return a + (b - a) * np.arange(self.M) / self.M
        if self.kind == "chebyshev":
            a, b = self.intervals[0]
            x = np.cos(np.pi * np.arange(self.M + 1) / self.M)[1:-1][::-1]
            return a + 0.5 * (b - a) * (x + 1.0)
        X, Y = np.meshgrid(self.factors[0].nodes(), self.factors[1].nodes(), indexing="ij")
        return X.ravel(), Y.ravel()

    def weights(self) -> np.ndarray:
        """Quadrature weights for the discrete L2 inner product."""
        if self.kind == "point":
            return np.ones(1)
        if self.kind == "fourier":
            a, b = self.intervals[0]
            return np.full(self.M, (b - a) / self.M)
        if self.kind == "chebyshev":
            a, b = self.intervals[0]
            return 0.5 * (b - a) * clenshaw_curtis_weights(self.M)[1:-1][::-1]
        return np.kron(self.factors[0].weights(), self.factors[1].weights())


def clenshaw_curtis_weights(M: int) -> np.ndarray:
    """Clenshaw-Curtis weights on cos(pi j / M), j = 0..M, for (-1, 1)."""
    theta = np.pi * np.arange(M + 1) / M
    w = np.zeros(M + 1)
    inner = np.arange(1, M)
    v = np.ones(M - 1)
    if M % 2 == 0:
        w[0] = w[M] = 1.0 / (M ** 2 - 1)
        for k in range(1, M // 2):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k ** 2 - 1)
        v -= np.cos(M * theta[inner]) / (M ** 2 - 1)
    else:
        w[0] = w[M] = 1.0 / M ** 2
        for k in range(1, (M - 1) // 2 + 1):
            v -= 2 * np.cos(2 * k * theta[inner]) / (4 * k ** 2 - 1)
    w[inner] = 2 * v / M
    return w


class EllipticOperator:
    """Discretised spatial operator ``L`` (static potential folded in).

    ``lifted`` marks the first-order wave system ``[[0, I], [L, 0]]`` acting on
    stacked states ``(u, du/dt)``. Propagators are cached per step.
    """

    def __init__(self, matrix, grid: GridSpec, order: int = 2, lifted: bool = False):
        A = np.array(matrix, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidGridError(f"operator matrix must be square, got shape {A.shape}")
        expected = grid.size * (2 if lifted else 1)
        if A.shape[0] != expected:
            raise InvalidGridError(
                f"matrix side {A.shape[0]} does not match grid state length {expected}")
        A.setflags(write=False)
        self.matrix = A
        self.grid = grid
        self.order = order
        self.lifted = lifted
        self._propagators: dict = {}

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, v):
        return self.matrix @ v

    def with_potential(self, samples) -> "EllipticOperator":
        """Return L + diag(samples) (samples on the grid, not lifted)."""
        if self.lifted:
            raise ValueError("fold static potentials in before lifting")
        samples = np.asarray(samples, dtype=complex)
        return EllipticOperator(self.matrix + np.diag(samples), self.grid, self.order)

    def propagator(self, t: float) -> "Propagator":
        key = float(t)
        P = self._propagators.get(key)
        if P is None:
            P = matrix_exp(self, key)
            self._propagators[key] = P
        return P

    def __repr__(self):
        return (f"EllipticOperator(size={self.size}, grid={self.grid.kind}, "
                f"lifted={self.lifted})")


@dataclass(frozen=True, eq=False)
class Propagator:
    source: Optional[EllipticOperator]
    step: float
    matrix: np.ndarray = field(repr=False)

    def __matmul__(self, v):
        return self.matrix @ v


def scalar_operator(a: complex) -> EllipticOperator:
    """1x1 operator [a] on a point grid, for scalar model problems."""
    return EllipticOperator([[a]], GridSpec("point", 1, ()))


def build_fourier_diff2(M: int, interval=(0.0, 2 * np.pi)) -> EllipticOperator:
    """Periodic spectral second-derivative matrix on M equispaced points."""
    if M < 4 or M % 2:
        raise InvalidGridError(f"Fourier grids need even M >= 4, got {M}")
    a, b = map(float, interval)
    grid = GridSpec("fourier", M, ((a, b),))
    dx = 2 * np.pi / M
    k = np.arange(1, M)
    col = np.empty(M)
    col[0] = -np.pi ** 2 / (3 * dx ** 2) - 1.0 / 6.0
    col[1:] = -0.5 * (-1.0) ** k / np.sin(dx * k / 2) ** 2
    D2 = toeplitz(col) * (2 * np.pi / (b - a)) ** 2
    return EllipticOperator(D2, grid)


def _cheb(M):
    x = np.cos(np.pi * np.arange(M + 1) / M)
    c = np.hstack([2.0, np.ones(M - 1), 2.0]) * (-1.0) ** np.arange(M + 1)
    dX = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dX + np.eye(M + 1))
    D -= np.diag(D.sum(axis=1))
    return x, D


def build_chebyshev_dirichlet(M: int, interval=(-1.0, 1.0)) -> EllipticOperator:
    """Second derivative on the M - 1 interior Gauss-Lobatto nodes, u = 0 at both ends.

    Nodes are returned in ascending order.
    """
    if M < 4:
        raise InvalidGridError(f"Chebyshev grids need M >= 4, got {M}")
    a, b = map(float, interval)
    grid = GridSpec("chebyshev", M, ((a, b),))
    _, D = _cheb(M)
    D2 = (D @ D)[1:-1, 1:-1][::-1, ::-1] * (2.0 / (b - a)) ** 2
    return EllipticOperator(D2, grid)


def kron_sum(Ax: EllipticOperator, Ay: EllipticOperator) -> EllipticOperator:
    """Ax (x) I + I (x) Ay on the tensor grid."""
    if Ax.lifted or Ay.lifted or Ax.grid.ndim != 1 or Ay.grid.ndim != 1:
        raise InvalidGridError("kron_sum needs two one-dimensional operators")
    nx, ny = Ax.size, Ay.size
    A = np.kron(Ax.matrix, np.eye(ny)) + np.kron(np.eye(nx), Ay.matrix)
    if Ax.grid.kind == "point" and Ay.grid.kind == "point":
        return EllipticOperator(A, Ax.grid)
    grid = GridSpec("tensor", max(Ax.grid.M, Ay.grid.M),
                    Ax.grid.intervals + Ay.grid.intervals, (Ax.grid, Ay.grid))
    return EllipticOperator(A, grid, max(Ax.order, Ay.order))


def matrix_exp(A, t: float) -> Propagator:
    """Dense exp(t A) (scaling and squaring, Pade order 13)."""
    M = A.matrix if isinstance(A, EllipticOperator) else np.asarray(A, dtype=complex)
    if t < 0:
        raise ValueError(f"propagation time must be non-negative, got {t}")
    if not np.all(np.isfinite(M)):
        raise NumericError("operator has non-finite entries")
    if t == 0:
        E = np.eye(M.shape[0], dtype=complex)
    else:
        E = scipy.linalg.expm(t * M)
    src = A if isinstance(A, EllipticOperator) else None
    return Propagator(src, float(t), E)


def apply_multiplier(alpha, v, lifted: bool = False):
    """Pointwise multiplication by alpha; lifted states map (u, w) -> (0, alpha u)."""
    alpha = np.asarray(alpha)
    if not lifted:
        return alpha * v
    m = alpha.shape[0]
    out = np.zeros_like(v, dtype=complex)
    out[m:] = alpha * v[:m]
    return out


def commutator_apply(L: EllipticOperator, alpha, v, lifted: Optional[bool] = None):
    """ad_L(alpha) v = L(alpha v) - alpha (L v), with alpha acting as a multiplier."""
    if lifted is None:
        lifted = L.lifted
    alpha = np.asarray(alpha)
    v = np.asarray(v)
    n = L.size // 2 if lifted else L.size
    if alpha.shape[0] != n or v.shape[0] != L.size:
        raise InvalidGridError(
            f"dimension mismatch: operator {L.size}, alpha {alpha.shape[0]}, v {v.shape[0]}")
    return L.matrix @ apply_multiplier(alpha, v, lifted) - apply_multiplier(alpha, L.matrix @ v, lifted)


def wave_first_order(L: EllipticOperator) -> EllipticOperator:
    """Block operator [[0, I], [L, 0]] for u_tt = L u written in (u, u_t)."""
    if L.lifted:
        raise ValueError("operator is already lifted")
    n = L.size
    A = np.zeros((2 * n, 2 * n), dtype=complex)
    A[:n, n:] = np.eye(n)
    A[n:, :n] = L.matrix
    return EllipticOperator(A, L.grid, L.order, lifted=True)


def lift_multiplier(alpha) -> np.ndarray:
    """Dense block multiplier [[0, 0], [diag(alpha), 0]]."""
    alpha = np.asarray(alpha, dtype=complex)
    n = alpha.shape[0]
    B = np.zeros((2 * n, 2 * n), dtype=complex)
    B[n:, :n] = np.diag(alpha)
    return B
