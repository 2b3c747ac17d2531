"""Problem description: operator, oscillatory potential and initial data."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .operators import EllipticOperator, apply_multiplier

__all__ = ["Mode", "OscillatoryPotential", "Problem"]

Sampler = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class Mode:
    """One term alpha_n(x, t) exp(i n omega t) of the potential.

    ``alpha(t)`` and ``dalpha(t)`` return grid samples at absolute time t.
    Without ``dalpha`` a central difference is used, which costs accuracy.
    """

    n: int
    alpha: Sampler
    dalpha: Optional[Sampler] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n == 0:
            raise ValueError(f"mode index must be a nonzero integer, got {self.n}")

    def derivative(self, t: float) -> np.ndarray:
        if self.dalpha is not None:
            return np.asarray(self.dalpha(t))
        step = 1e-6 * max(1.0, abs(t))
        return (np.asarray(self.alpha(t + step)) - np.asarray(self.alpha(t - step))) / (2 * step)


@dataclass(frozen=True)
class OscillatoryPotential:
    """f(x, t) = sum_n alpha_n(x, t) exp(i n omega t) with n != 0."""

    omega: float
    modes: Tuple[Mode, ...] = ()
    symmetric: bool = False

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        object.__setattr__(self, "modes", tuple(self.modes))
        ns = [m.n for m in self.modes]
        if len(set(ns)) != len(ns):
            raise ValueError(f"duplicate mode indices {ns}")
        if self.symmetric:
            by_n = {m.n: m for m in self.modes}
            for m in self.modes:
                partner = by_n.get(-m.n)
                if partner is None:
                    raise ValueError(f"symmetric potential lacks mode {-m.n}")
                if partner.alpha is not m.alpha:
                    raise ValueError(f"modes {m.n} and {-m.n} must share one sampler")

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(m.n for m in self.modes)

    def __call__(self, t: float) -> np.ndarray:
        """Grid samples of f(., t) (zero if there are no modes)."""
        total = 0.0
        for m in self.modes:
            total = total + np.asarray(m.alpha(t)) * np.exp(1j * m.n * self.omega * t)
        return total


@dataclass(frozen=True)
class Problem:
    """du/dt = L u + f u (or the lifted wave system) on [0, t_final]."""

    operator: EllipticOperator
    potential: OscillatoryPotential
    u0: np.ndarray
    t_final: float = 1.0
    name: str = "custom"

    def __post_init__(self):
        u0 = np.asarray(self.u0, dtype=complex)
        if u0.shape != (self.operator.size,):
            raise ValueError(f"initial state has shape {u0.shape}, operator size {self.operator.size}")
        if not self.t_final > 0:
            raise ValueError("t_final must be positive")
        object.__setattr__(self, "u0", u0)

    @property
    def kind(self) -> str:
        return "wave-lifted" if self.operator.lifted else "first-order"

    @property
    def lifted(self) -> bool:
        return self.operator.lifted

    def multiply(self, alpha, v):
        return apply_multiplier(alpha, v, self.operator.lifted)

    def rhs_matrix(self, t: float) -> np.ndarray:
        """Dense L + f(t) (multiplier lifted when needed)."""
        A = np.array(self.operator.matrix)
        f = self.potential(t)
        if np.isscalar(f) and f == 0:
            return A
        n = self.operator.grid.size
        if self.operator.lifted:
            A[n:, :n] += np.diag(f)
        else:
            A += np.diag(f)
        return A

    def with_t_final(self, t_final: float) -> "Problem":
        return Problem(self.operator, self.potential, self.u0, t_final, self.name)
