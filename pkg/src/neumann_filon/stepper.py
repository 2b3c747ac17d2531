"""Neumann-Filon time stepping (third order) and a truncated-Neumann oracle."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .filon import (
    compute_X,
    hermite_univariate,
    linear_bivariate,
    linear_trivariate,
    resonance_bivariate,
    sample_F_univariate,
)
from .moments import MomentTable
from .operators import NumericError, Propagator
from .problem import Problem

__all__ = [
    "METHODS",
    "StepPlan",
    "Trajectory",
    "make_plan",
    "nf3_step",
    "nf3_resonance_step",
    "integrate",
    "neumann_bruteforce",
]

METHODS = ("nf3", "nf3-resonance", "m2", "m4")


@dataclass
class StepPlan:
    """Everything that is reused from step to step at a fixed step size."""

    h: float
    propagator: Propagator
    moments: MomentTable
    resonance: bool = False
    x_nodes: int = 4


def make_plan(prob: Problem, h: float, resonance: bool = False, x_nodes: int = 4) -> StepPlan:
    if not h > 0:
        raise ValueError(f"step must be positive, got {h}")
    if resonance and not prob.potential.symmetric:
        raise ValueError("the resonance scheme needs a symmetric potential (alpha_-n = alpha_n)")
    has_pairs = any(n < 0 for n in prob.potential.indices)
    return StepPlan(
        h=float(h),
        propagator=prob.operator.propagator(h),
        moments=MomentTable(prob.potential.omega, h),
        resonance=resonance and has_pairs,
        x_nodes=x_nodes,
    )


def _step(u, t, plan: StepPlan, prob: Problem, resonance: bool):
    L = prob.operator
    pot = prob.potential
    omega = pot.omega
    h = plan.h
    P = plan.propagator.matrix
    mul = prob.multiply
    mom = plan.moments
    modes = pot.modes

    Pu = P @ u
    out = np.array(Pu, dtype=complex)
    if not modes:
        return out

    a0 = {m.n: np.asarray(m.alpha(t)) for m in modes}
    ah = {m.n: np.asarray(m.alpha(t + h)) for m in modes}
    phase = {m.n: np.exp(1j * omega * t * m.n) for m in modes}

    # univariate terms, cubic Hermite
    for m in modes:
        s = sample_F_univariate(L, plan.propagator, m, u, t, h)
        c = hermite_univariate(s, h)
        acc = sum(c[(k,)] * mom((k,), (m.n,)) for k in range(4))
        out += phase[m.n] * acc

    # shared partial products
    A1 = {n: mul(a0[n], u) for n in a0}              # alpha_n1(0) u
    PA1 = {n: P @ A1[n] for n in a0}                 # e^{hL} alpha_n1(0) u
    H1 = {n: mul(ah[n], Pu) for n in a0}             # alpha_n1(h) e^{hL} u
    A2 = {}
    PA2 = {}

    done_pairs = set()
    for n1, n2 in itertools.product(a0, repeat=2):
        A2[n1, n2] = mul(a0[n2], A1[n1])
        PA2[n1, n2] = P @ A2[n1, n2]
        F00 = PA2[n1, n2]
        F0h = mul(ah[n2], PA1[n1])
        Fhh = mul(ah[n2], H1[n1])
        if resonance and n1 + n2 == 0:
            k = abs(n1)
            if k in done_pairs:
                continue
            done_pairs.add(k)
            mode = next(m for m in modes if m.n == k)
            X = compute_X(L, mode, u, t, h, plan.x_nodes)
            c = resonance_bivariate(F00, F0h, Fhh, X, h, k)
            for mono, coef in c.coeffs.items():
                out += coef * mom.pair(mono, k)
            continue
        c = linear_bivariate(F00, F0h, Fhh, h)
        pref = phase[n1] * phase[n2]
        for mono, coef in c.coeffs.items():
            out += pref * coef * mom(mono, (n1, n2))

    for n1, n2, n3 in itertools.product(a0, repeat=3):
        F000 = P @ mul(a0[n3], A2[n1, n2])
        F00h = mul(ah[n3], PA2[n1, n2])
        F0hh = mul(ah[n3], mul(ah[n2], PA1[n1]))
        Fhhh = mul(ah[n3], mul(ah[n2], H1[n1]))
        c = linear_trivariate(F000, F00h, F0hh, Fhhh, h)
        pref = phase[n1] * phase[n2] * phase[n3]
        for mono, coef in c.coeffs.items():
            out += pref * coef * mom(mono, (n1, n2, n3))
    return out


def nf3_step(u, t: float, plan: StepPlan, prob: Problem):
    """One Neumann-Filon step from time t: terms d <= 3, affine / cubic Filon."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (prob.operator.size,) or plan.propagator.matrix.shape[0] != u.shape[0]:
        raise ValueError("state, propagator and operator sizes differ")
    return _step(u, t, plan, prob, resonance=False)


def nf3_resonance_step(u, t: float, plan: StepPlan, prob: Problem):
    """As :func:`nf3_step`, with resonant pairs (n, -n), (-n, n) handled jointly."""
    if not prob.potential.symmetric:
        raise ValueError("the resonance scheme needs a symmetric potential (alpha_-n = alpha_n)")
    u = np.asarray(u, dtype=complex)
    if u.shape != (prob.operator.size,):
        raise ValueError("state and operator sizes differ")
    return _step(u, t, plan, prob, resonance=True)


@dataclass
class Trajectory:
    times: List[float] = field(default_factory=list)
    states: List[np.ndarray] = field(default_factory=list)
    partial_last_step: bool = False

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    @property
    def t_final(self) -> float:
        return self.times[-1]


def _step_grid(t_final: float, h: float):
    K = int(math.floor(t_final / h + 1e-9))
    rest = t_final - K * h
    if rest <= 1e-12 * max(1.0, t_final):
        rest = 0.0
    if K == 0:
        return [], rest
    return [h] * K, rest


def integrate(prob: Problem, h: float, method: str = "nf3", keep: bool = True) -> Trajectory:
    """March from 0 to ``prob.t_final`` with fixed step h.

    A shorter final step (with its own plan) is taken if h does not divide
    the horizon. ``keep=False`` stores only the initial and final states.
    """
    from . import reference

    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "nf3-resonance" and not prob.potential.symmetric:
        raise ValueError("nf3-resonance needs a symmetric potential")
    if not h > 0:
        raise ValueError("step must be positive")

    steps, rest = _step_grid(prob.t_final, h)
    if rest:
        steps.append(rest)
    plans = {}

    def advance(u, t, hk):
        if method in ("nf3", "nf3-resonance"):
            plan = plans.get(hk)
            if plan is None:
                plan = plans[hk] = make_plan(prob, hk, resonance=method == "nf3-resonance")
            if method == "nf3":
                return nf3_step(u, t, plan, prob)
            return nf3_resonance_step(u, t, plan, prob)
        if method == "m2":
            return reference.m2_step(u, t, hk, prob)
        return reference.m4_step(u, t, hk, prob)

    traj = Trajectory([0.0], [prob.u0.copy()], partial_last_step=bool(rest))
    u = prob.u0.copy()
    t = 0.0
    for k, hk in enumerate(steps):
        u = advance(u, t, hk)
        t = (k + 1) * h if hk == h else prob.t_final
        if not np.all(np.isfinite(u)):
            raise NumericError(f"non-finite state at t = {t}")
        if keep or k == len(steps) - 1:
            traj.times.append(t)
            traj.states.append(u)
    return traj


def _integration_matrix(q):
    """S[j, k] = int_{-1}^{x_j} l_k(s) ds for the Legendre-node Lagrange basis."""
    L = np.polynomial.legendre
    x, w = L.leggauss(q)
    Vinv = np.linalg.inv(L.legvander(x, q - 1))
    S = np.empty((q, q))
    for k in range(q):
        S[:, k] = L.legval(x, L.legint(Vinv[:, k], lbnd=-1))
    return x, w, S


def neumann_bruteforce(prob: Problem, h: float, depth: int = 3, quad_order: int = 20,
                       t: float = 0.0, u=None):
    """Truncated Neumann series sum_{d<=depth} T^d e^{hL} u by nested quadrature.

    In the interaction picture w_d(s) = e^{-sL} (T^d e^{.L} u)(s) obeys
    w_d(s) = int_0^s e^{-tau L} f(t+tau) e^{tau L} w_{d-1}(tau) dtau, w_0 = u,
    and each level is a cumulative composite Gauss-Legendre integral (spectral
    integration matrix per panel). Only for tiny, non-stiff operators.
    """
    n = prob.operator.size
    if n > 4:
        raise ValueError("brute-force Neumann evaluation is limited to state length <= 4")
    if not 0 <= depth <= 4:
        raise ValueError("depth must be in 0..4")
    u = prob.u0 if u is None else np.asarray(u, dtype=complex)
    Lm = prob.operator.matrix
    lam, V = np.linalg.eig(Lm)
    Vinv = np.linalg.inv(V)

    def expL(s):
        return (V * np.exp(s * lam)) @ Vinv

    pot = prob.potential
    nmax = max((abs(k) for k in pot.indices), default=1)
    panels = max(1, int(math.ceil(pot.omega * h * nmax / 2.0)))
    x, w, S = _integration_matrix(quad_order)
    edges = np.linspace(0.0, h, panels + 1)
    half = 0.5 * (edges[1] - edges[0])
    nodes = np.concatenate([edges[p] + half * (x + 1) for p in range(panels)])

    # kernel K(tau) = e^{-tau L} f(t+tau) e^{tau L} at every node
    K = []
    for tau in nodes:
        f = prob.rhs_matrix(t + tau) - Lm
        K.append(expL(-tau) @ f @ expL(tau))
    K = np.array(K)

    total = u.astype(complex).copy()
    w_prev = np.tile(u.astype(complex), (len(nodes), 1))
    for _ in range(depth):
        g = np.einsum("kij,kj->ki", K, w_prev)
        w_new = np.empty_like(g)
        base = np.zeros(n, dtype=complex)
        for p in range(panels):
            sl = slice(p * quad_order, (p + 1) * quad_order)
            w_new[sl] = base + half * (S @ g[sl])
            base = base + half * (w @ g[sl])
        total = total + base
        w_prev = w_new
    return expL(h) @ total
