"""Filon interpolation coefficients for the Neumann integrands.

Each integrand F is sampled at the vertices of its simplex (plus end-point
derivatives in one dimension) and replaced by a low-degree polynomial whose
moments against the oscillator are known in closed form. Coefficients are
keyed by the monomial exponent tuples used in :mod:`neumann_filon.moments`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from .operators import EllipticOperator, Propagator, apply_multiplier, commutator_apply

__all__ = [
    "VertexSamples",
    "FilonCoefficients",
    "sample_F_univariate",
    "hermite_univariate",
    "linear_bivariate",
    "linear_trivariate",
    "compute_X",
    "resonance_bivariate",
    "filon_integral",
    "diagonal_derivative_integral",
]


@dataclass(frozen=True)
class VertexSamples:
    """F sampled at simplex vertices; keys are vertex labels such as "0", "h", "d0", "dh"."""

    d: int
    values: Dict[str, np.ndarray]
    n: Tuple[int, ...]
    h: float


@dataclass(frozen=True)
class FilonCoefficients:
    """Polynomial sum_mono coeffs[mono] * tau**mono."""

    d: int
    n: Tuple[int, ...]
    coeffs: Dict[Tuple[int, ...], np.ndarray]

    def __getitem__(self, mono):
        return self.coeffs[tuple(mono)]

    def evaluate(self, *tau):
        """Value of the interpolant at a point of the simplex."""
        total = 0.0
        for mono, c in self.coeffs.items():
            total = total + c * np.prod([t ** e for t, e in zip(tau, mono)])
        return total


def _alpha_pair(mode, t):
    return np.asarray(mode.alpha(t)), mode.derivative(t)


def sample_F_univariate(L: EllipticOperator, eL: Propagator, mode, u, t: float, h: float) -> VertexSamples:
    """F(0), F(h), F'(0), F'(h) for F(tau) = e^{(h-tau)L} alpha(t+tau) e^{tau L} u."""
    lifted = L.lifted
    a0, da0 = _alpha_pair(mode, t)
    ah, dah = _alpha_pair(mode, t + h)
    P = eL.matrix
    Pu = P @ u
    F0 = P @ apply_multiplier(a0, u, lifted)
    Fh = apply_multiplier(ah, Pu, lifted)
    dF0 = P @ (apply_multiplier(da0, u, lifted) - commutator_apply(L, a0, u, lifted))
    dFh = apply_multiplier(dah, Pu, lifted) - commutator_apply(L, ah, Pu, lifted)
    return VertexSamples(1, {"0": F0, "h": Fh, "d0": dF0, "dh": dFh}, (mode.n,), h)


def hermite_univariate(s: VertexSamples, h: float) -> FilonCoefficients:
    """Cubic matching F and F' at both ends of [0, h]."""
    F0, Fh, dF0, dFh = (s.values[k] for k in ("0", "h", "d0", "dh"))
    a2 = (3 * Fh - 3 * F0 - 2 * h * dF0 - h * dFh) / h ** 2
    a3 = (h * dFh - 2 * Fh + 2 * F0 + h * dF0) / h ** 3
    return FilonCoefficients(1, s.n, {(0,): F0, (1,): dF0, (2,): a2, (3,): a3})


def linear_bivariate(F00, F0h, Fhh, h: float, n=()) -> FilonCoefficients:
    """Affine interpolant through the vertices (0,0), (0,h), (h,h)."""
    return FilonCoefficients(2, tuple(n), {
        (0, 0): F00,
        (1, 0): (Fhh - F0h) / h,
        (0, 1): (F0h - F00) / h,
    })


def linear_trivariate(F000, F00h, F0hh, Fhhh, h: float, n=()) -> FilonCoefficients:
    """Affine interpolant through the four vertices of the 3-simplex."""
    return FilonCoefficients(3, tuple(n), {
        (0, 0, 0): F000,
        (1, 0, 0): (Fhhh - F0hh) / h,
        (0, 1, 0): (F0hh - F00h) / h,
        (0, 0, 1): (F00h - F000) / h,
    })


def compute_X(L: EllipticOperator, mode, u, t: float, h: float, q: int = 4):
    """Gauss-Legendre value of int_0^h d/dtau1 F(tau, tau) dtau.

    The integrand is e^{(h-s)L} alpha(s) (alpha'(s) - ad_L(alpha(s))) e^{sL} u
    and is not oscillatory. Propagators at the nodes come from the operator
    cache, so a fixed-step run builds them once.
    """
    if q < 2:
        raise ValueError("need at least two Gauss nodes")
    lifted = L.lifted
    x, w = np.polynomial.legendre.leggauss(q)
    s = 0.5 * h * (x + 1)
    total = 0.0
    for sk, wk in zip(s, w):
        a, da = _alpha_pair(mode, t + sk)
        v = L.propagator(sk).matrix @ u
        inner = apply_multiplier(da, v, lifted) - commutator_apply(L, a, v, lifted)
        total = total + wk * (L.propagator(h - sk).matrix @ apply_multiplier(a, inner, lifted))
    return 0.5 * h * total


def resonance_bivariate(F00, F0h, Fhh, X, h: float, n: int = 0) -> FilonCoefficients:
    """b0 + b1 t1 + b2 t2 + b3 t1 t2 through the three vertices with
    int_0^h d/dt1 p(s, s) ds = X.
    """
    return FilonCoefficients(2, (n, -n), {
        (0, 0): F00,
        (1, 0): (2 * X + F0h - Fhh) / h,
        (0, 1): (F0h - F00) / h,
        (1, 1): 2 * (Fhh - F0h - X) / h ** 2,
    })


def diagonal_derivative_integral(c: FilonCoefficients, h: float):
    """int_0^h d/dt1 p(s, s) ds for a bivariate polynomial."""
    b1 = c.coeffs.get((1, 0), 0.0)
    b3 = c.coeffs.get((1, 1), 0.0)
    return b1 * h + b3 * h ** 2 / 2


def filon_integral(c: FilonCoefficients, moments, n=None):
    """sum_mono coeff * moment(mono, n) with ``moments`` a MomentTable-like callable."""
    n = tuple(c.n if n is None else n)
    total = 0.0
    for mono, coef in c.coeffs.items():
        total = total + coef * moments(mono, n)
    return total
