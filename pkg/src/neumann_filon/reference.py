"""Magnus baselines, the four model problems with exact solutions, and L2 errors."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .operators import (
    build_chebyshev_dirichlet,
    build_fourier_diff2,
    kron_sum,
    scalar_operator,
    wave_first_order,
)
from .problem import Mode, OscillatoryPotential, Problem

__all__ = [
    "AnalyticSolution",
    "ErrorReport",
    "m2_step",
    "m4_step",
    "example_problem",
    "scalar_problem",
    "error_l2",
    "pde_residual",
    "DEFAULT_GRID_POINTS",
]

DEFAULT_GRID_POINTS = {1: 100, 2: 20, 3: 100, 4: 100}


@dataclass(frozen=True)
class AnalyticSolution:
    """Exact solution sampled on a grid.

    ``state(t)`` returns what the integrator carries: u on the grid, or the
    stacked (u, du/dt) for wave problems. ``u(t)`` is the solution alone.
    """

    u: Callable[[float], np.ndarray]
    du: Optional[Callable[[float], np.ndarray]] = None
    lifted: bool = False

    def state(self, t: float) -> np.ndarray:
        if self.lifted:
            return np.concatenate([self.u(t), self.du(t)])
        return np.asarray(self.u(t), dtype=complex)


@dataclass(frozen=True)
class ErrorReport:
    method: str
    h: float
    omega: float
    l2_error: float
    wall_seconds: float


def m2_step(u, t: float, h: float, prob: Problem):
    """Exponential midpoint: exp(h (L + f(t + h/2))) u."""
    return scipy.linalg.expm(h * prob.rhs_matrix(t + 0.5 * h)) @ u


_C1 = 0.5 - np.sqrt(3.0) / 6.0
_C2 = 0.5 + np.sqrt(3.0) / 6.0


def m4_step(u, t: float, h: float, prob: Problem):
    """Fourth-order Magnus with two Gauss nodes and one commutator."""
    A1 = prob.rhs_matrix(t + _C1 * h)
    A2 = prob.rhs_matrix(t + _C2 * h)
    Omega = 0.5 * h * (A1 + A2) + (np.sqrt(3.0) / 12.0) * h ** 2 * (A2 @ A1 - A1 @ A2)
    return scipy.linalg.expm(Omega) @ u


def scalar_problem(a: complex = -1.0, eps: complex = 0.3, omega: float = 10.0,
                   t_final: float = 1.0, u0: complex = 1.0):
    """u' = (a + eps e^{i omega t}) u with u(0) = u0; eps = 0 drops the mode."""
    op = scalar_operator(a)
    modes = ()
    if eps != 0:
        c = np.array([eps], dtype=complex)
        zero = np.zeros(1, dtype=complex)
        modes = (Mode(1, lambda t: c, lambda t: zero),)
    pot = OscillatoryPotential(omega, modes)
    prob = Problem(op, pot, np.array([u0], dtype=complex), t_final, "scalar")

    def exact(t):
        drift = eps * (np.exp(1j * omega * t) - 1.0) / (1j * omega)
        return np.array([u0 * np.exp(a * t + drift)], dtype=complex)

    return prob, AnalyticSolution(exact)


def _example1(omega, M):
    L = build_fourier_diff2(M, (0.0, 2 * np.pi))
    x = L.grid.nodes()
    L = L.with_potential(np.ones_like(x))
    cx, s2 = np.cos(x), np.sin(x) ** 2
    modes = (
        Mode(1, lambda t: (1j - omega * t + 3j * t) * cx / omega,
             lambda t: (-omega + 3j) * cx / omega),
        Mode(2, lambda t: s2 * t ** 2 / omega ** 2,
             lambda t: 2 * t * s2 / omega ** 2),
    )
    prob = Problem(L, OscillatoryPotential(omega, modes), np.sin(x).astype(complex), 1.0, "1")

    def u(t):
        return np.exp(1j * np.exp(1j * omega * t) * cx * t / omega) * np.sin(x)

    return prob, AnalyticSolution(u)


def _example2(omega, M):
    Lx = build_chebyshev_dirichlet(M, (-1.0, 1.0))
    Ly = build_chebyshev_dirichlet(M, (-1.0, 1.0))
    L = kron_sum(Lx, Ly)
    x, y = L.grid.nodes()
    L = L.with_potential(np.full(x.shape, 2 * np.pi ** 2))
    cc = np.cos(np.pi * x) * np.cos(np.pi * y)
    ss = np.sin(np.pi * x) * np.sin(np.pi * y)
    a1 = (6 * np.pi ** 2 + 1j * omega) * cc / omega
    a2 = 0.5 * np.pi ** 2 * (-1 + np.cos(2 * np.pi * x) * np.cos(2 * np.pi * y)) / omega ** 2
    zero = np.zeros(x.shape, dtype=complex)
    a1 = a1.astype(complex)
    a2 = a2.astype(complex)
    modes = (Mode(1, lambda t: a1, lambda t: zero), Mode(2, lambda t: a2, lambda t: zero))
    u0 = (ss * np.exp(cc / omega)).astype(complex)
    prob = Problem(L, OscillatoryPotential(omega, modes), u0, 1.0, "2")

    def u(t):
        return ss * np.exp(np.exp(1j * omega * t) * cc / omega)

    return prob, AnalyticSolution(u)


def _example3(omega, M):
    L = build_fourier_diff2(M, (-8.0, 8.0))
    x = L.grid.nodes()
    L = wave_first_order(L.with_potential(1 - x ** 2))
    a1 = ((2 + x ** 2 * (omega ** 2 - 4)) / omega ** 2).astype(complex)
    a2 = (-x ** 2 * (4 + x ** 2 * omega ** 2) / omega ** 4).astype(complex)
    zero = np.zeros_like(a1)
    modes = (Mode(1, lambda t: a1, lambda t: zero), Mode(2, lambda t: a2, lambda t: zero))
    g = np.exp(-x ** 2 * (0.5 + 1 / omega ** 2))
    u0 = np.concatenate([g, -1j * x ** 2 / omega * g]).astype(complex)
    prob = Problem(L, OscillatoryPotential(omega, modes), u0, 1.0, "3")

    def u(t):
        return np.exp(-x ** 2 / 2) * np.exp(-np.exp(1j * omega * t) * x ** 2 / omega ** 2)

    def du(t):
        return -1j * np.exp(1j * omega * t) * x ** 2 / omega * u(t)

    return prob, AnalyticSolution(u, du, lifted=True)


def _example4(omega, M):
    L = build_fourier_diff2(M, (-8.0, 8.0))
    x = L.grid.nodes()
    static = 1 - x ** 2 - 2 * x ** 2 / omega ** 4 + x ** 4 / (2 * omega ** 2)
    L = wave_first_order(L.with_potential(static))
    a1 = ((2 + x ** 2 * omega ** 2 - 4 * x ** 2) / (2 * omega ** 2)).astype(complex)
    a2 = (-x ** 2 / omega ** 4 - x ** 4 / (4 * omega ** 2)).astype(complex)
    zero = np.zeros_like(a1)

    def s1(t):
        return a1

    def s2(t):
        return a2

    def d(t):
        return zero

    modes = (Mode(1, s1, d), Mode(-1, s1, d), Mode(2, s2, d), Mode(-2, s2, d))
    g = np.exp(-x ** 2 * (0.5 + 1 / omega ** 2))
    u0 = np.concatenate([g, np.zeros_like(g)]).astype(complex)
    prob = Problem(L, OscillatoryPotential(omega, modes, symmetric=True), u0, 1.0, "4")

    def u(t):
        return np.exp(-np.cos(omega * t) * x ** 2 / omega ** 2) * np.exp(-x ** 2 / 2)

    def du(t):
        return np.sin(omega * t) * x ** 2 / omega * u(t)

    return prob, AnalyticSolution(u, du, lifted=True)


_BUILDERS = {1: _example1, 2: _example2, 3: _example3, 4: _example4}


def example_problem(example_id: int, omega: float, M: Optional[int] = None):
    """Model problem ``example_id`` in 1..4 with its exact solution.

    1: heat equation on (0, 2pi), periodic. 2: 2-D heat equation on
    (-1, 1)^2 with Dirichlet walls. 3 and 4: wave equations on (-8, 8),
    periodic, written as first-order systems; 4 has the resonant +-n modes.
    Time-independent parts of the potential are folded into the operator.
    """
    if example_id not in _BUILDERS:
        raise ValueError(f"unknown example {example_id!r}; expected 1..4")
    if not omega > 0:
        raise ValueError("omega must be positive")
    if M is None:
        M = DEFAULT_GRID_POINTS[example_id]
    return _BUILDERS[example_id](float(omega), int(M))


def error_l2(u_num, exact, t: float, grid=None) -> float:
    """Discrete L2 norm of (numerical - exact) at time t, u-component only.

    ``exact`` is an AnalyticSolution or a plain array of exact samples (then
    ``grid`` is required).
    """
    u_num = np.asarray(u_num)
    if isinstance(exact, AnalyticSolution):
        ref = np.asarray(exact.u(t))
    else:
        ref = np.asarray(exact)
    n = ref.shape[0]
    if u_num.shape[0] not in (n, 2 * n):
        raise ValueError(f"state length {u_num.shape[0]} does not match grid of {n}")
    diff = u_num[:n] - ref
    if grid is None:
        raise ValueError("grid is required for the quadrature weights")
    w = grid.weights()
    if w.shape[0] != n:
        raise ValueError("grid weights do not match the state")
    return float(np.sqrt(np.sum(w * np.abs(diff) ** 2)))


def pde_residual(prob: Problem, exact: AnalyticSolution, t: float, delta: float) -> float:
    """Weighted L2 norm of the central-difference residual of the exact solution.

    For first-order problems this is (u(t+d) - u(t-d))/2d - (L + f(t)) u(t);
    for wave problems the same is applied to the stacked (u, du/dt), which
    checks both components against the first-order system.
    """
    A = prob.rhs_matrix(t)
    r = (exact.state(t + delta) - exact.state(t - delta)) / (2 * delta) - A @ exact.state(t)
    w = prob.operator.grid.weights()
    if prob.lifted:
        w = np.concatenate([w, w])
    return float(np.sqrt(np.sum(w * np.abs(r) ** 2)))
