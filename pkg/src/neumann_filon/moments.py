"""Oscillatory moments over the interval [0, h] and the ordered simplices.

The simplex of dimension ``d`` is ``0 <= t1 <= t2 <= ... <= td <= h`` and the
moments are

    mu_d(mono, n, omega, h) = int_{simplex} t^mono exp(i*omega*(n . t)) dt

for the low-degree monomials consumed by the Filon interpolants.

The closed forms are built by iterated antiderivatives. Intermediate results
are kept as exponential polynomials ``sum c * s**m * exp(i*K*omega*s)`` with
integer ``K`` so that resonance (a vanishing partial sum of ``n``) is detected
by exact integer arithmetic. Small phases switch to a truncated Taylor series
of the antiderivative.
"""
from __future__ import annotations

import math
from collections import defaultdict
from functools import lru_cache

import mpmath
import numpy as np

__all__ = [
    "SERIES_THRESHOLD",
    "MONOMIALS",
    "MomentTable",
    "mu1",
    "mu2",
    "mu3",
    "mu2_resonant_pair",
    "simplex_moment",
    "oracle_moment",
    "oracle_moment_mp",
]

# |phase * h| at or below which the Taylor fallback is used
SERIES_THRESHOLD = 0.5
_SERIES_TOL = 1e-18

# Monomials representable per simplex dimension (exponent tuples).
MONOMIALS = {
    1: ((0,), (1,), (2,), (3,)),
    2: ((0, 0), (1, 0), (0, 1), (1, 1)),
    3: ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)),
}


def _check_key(mono, n):
    d = len(n)
    if d not in MONOMIALS:
        raise ValueError(f"simplex dimension must be 1, 2 or 3, got {d}")
    if len(mono) != d:
        raise ValueError(f"monomial {mono} does not match dimension {d}")
    if tuple(mono) not in MONOMIALS[d]:
        raise ValueError(f"monomial {mono} is not representable for d={d}")
    for nj in n:
        if int(nj) != nj or nj == 0:
            raise ValueError(f"frequency entries must be nonzero integers, got {n}")


def _series_terms(z):
    """Number of Taylor terms k with |z|**k / k! above the truncation tolerance."""
    az = abs(z)
    k, term = 0, 1.0
    while term > _SERIES_TOL:
        k += 1
        term *= az / k
    return k + 1


def _unit_moment(m, z):
    """int_0^1 x**m exp(i z x) dx, stable for every real z and m >= 0."""
    if z == 0.0:
        return 1.0 / (m + 1)
    az = abs(z)
    iz = 1j * z
    if az <= SERIES_THRESHOLD:
        total = 0.0j
        term = 1.0 + 0.0j
        for k in range(_series_terms(z)):
            total += term / (m + k + 1)
            term *= iz / (k + 1)
        return total
    ez = complex(math.cos(z), math.sin(z))
    if az >= m:
        # forward recursion, error growth m!/|z|^m <= 1
        val = 2j * math.sin(z / 2) * complex(math.cos(z / 2), math.sin(z / 2)) / iz
        for k in range(1, m + 1):
            val = (ez - k * val) / iz
        return val
    # backward recursion from a large degree; errors shrink by |z|/k per step
    top = m + 60 + int(az)
    val = 0.0j
    for k in range(top, m, -1):
        val = (ez - iz * val) / k
    return val


def _integrate_terms(terms, omega, h):
    """Antiderivative from 0 of an exponential polynomial (as a new one).

    ``terms`` maps (m, K) -> c for c * s**m * exp(i K omega s).
    """
    out = defaultdict(complex)
    for (m, K), c in terms.items():
        if c == 0:
            continue
        if K == 0:
            out[(m + 1, 0)] += c / (m + 1)
            continue
        a = K * omega
        if abs(a * h) <= SERIES_THRESHOLD:
            term = c
            for k in range(_series_terms(a * h)):
                out[(m + k + 1, 0)] += term / (m + k + 1)
                term *= 1j * a / (k + 1)
            continue
        ia = 1j * a
        # e^{ias} sum_j (-1)^j m!/(m-j)! s^{m-j} / (ia)^{j+1}
        falling = 1.0
        for j in range(m + 1):
            out[(m - j, K)] += c * (-1) ** j * falling / ia ** (j + 1)
            falling *= m - j
        out[(0, 0)] -= c * (-1) ** m * math.factorial(m) / ia ** (m + 1)
    return out


def _multiply(terms, power, K):
    return {(m + power, k + K): c for (m, k), c in terms.items()}


@lru_cache(maxsize=65536)
def simplex_moment(mono: tuple, n: tuple, omega: float, h: float) -> complex:
    """Moment of ``prod t_j**mono[j]`` against ``exp(i omega n.t)`` over the
    ordered simplex of dimension ``len(n)`` and side ``h``.
    """
    mono = tuple(int(e) for e in mono)
    n = tuple(int(v) for v in n)
    _check_key(mono, n)
    if h <= 0:
        raise ValueError("step h must be positive")
    omega = float(omega)
    h = float(h)
    terms = {(0, 0): 1.0 + 0.0j}
    d = len(n)
    for j in range(d - 1):
        terms = _integrate_terms(_multiply(terms, mono[j], n[j]), omega, h)
    terms = _multiply(terms, mono[-1], n[-1])
    total = 0.0j
    for (m, K), c in terms.items():
        total += c * h ** (m + 1) * _unit_moment(m, K * omega * h)
    return total


def mu1(k: int, a: float, h: float) -> complex:
    """int_0^h tau**k exp(i a tau) dtau for k = 0..3 and any real rate ``a``."""
    if k not in (0, 1, 2, 3):
        raise ValueError("univariate moments are defined for k = 0..3")
    if h <= 0:
        raise ValueError("step h must be positive")
    return h ** (k + 1) * _unit_moment(k, float(a) * h)


def mu2(mono, n, omega, h):
    """Bivariate moment over 0 <= t1 <= t2 <= h. ``mono`` in {(0,0),(1,0),(0,1),(1,1)}."""
    if len(n) != 2:
        raise ValueError("mu2 needs a frequency pair")
    return simplex_moment(tuple(mono), tuple(n), omega, h)


def mu3(mono, n, omega, h):
    """Trivariate moment over 0 <= t1 <= t2 <= t3 <= h."""
    if len(n) != 3:
        raise ValueError("mu3 needs a frequency triple")
    return simplex_moment(tuple(mono), tuple(n), omega, h)


def mu2_resonant_pair(mono, n: int, omega: float, h: float) -> complex:
    """mu2(mono, (n, -n)) + mu2(mono, (-n, n)); real up to rounding."""
    if int(n) != n or n < 1:
        raise ValueError("resonant pair index must be a positive integer")
    n = int(n)
    return mu2(mono, (n, -n), omega, h) + mu2(mono, (-n, n), omega, h)


class MomentTable:
    """Per-run memo of all moments at one (omega, h)."""

    def __init__(self, omega: float, h: float):
        self.omega = float(omega)
        self.h = float(h)
        self._cache: dict = {}

    def __call__(self, mono, n) -> complex:
        key = (tuple(mono), tuple(n))
        val = self._cache.get(key)
        if val is None:
            if len(n) == 1:
                val = mu1(mono[0], n[0] * self.omega, self.h)
            else:
                val = simplex_moment(key[0], key[1], self.omega, self.h)
            self._cache[key] = val
        return val

    def pair(self, mono, n: int) -> complex:
        return self(mono, (n, -n)) + self(mono, (-n, n))

    def __len__(self):
        return len(self._cache)


# --------------------------------------------------------------------------
# oracles (tests and example derivations only)
# --------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _legendre_cumulative(q):
    """Gauss-Legendre nodes/weights on [-1, 1] and the matrix S with
    S[j, k] = int_{-1}^{x_j} l_k, l_k the Lagrange basis on the nodes."""
    leg = np.polynomial.legendre
    x, w = leg.leggauss(q)
    Vinv = np.linalg.inv(leg.legvander(x, q - 1))
    S = np.empty((q, q))
    for k in range(q):
        S[:, k] = leg.legval(x, leg.legint(Vinv[:, k], lbnd=-1))
    return x, w, S


def oracle_moment(mono, n, omega, h, nodes: int = 64) -> complex:
    """Nested composite Gauss-Legendre evaluation of a simplex moment.

    The iterated integral is built from the inside out: the innermost
    variable is integrated cumulatively up to every node of the next one
    (per-panel spectral integration on ``nodes`` Legendre points), and the
    outermost integral is an ordinary composite Gauss rule. Panels are
    chosen so each sees at most ``nodes / 4`` radians of phase, which keeps
    the cost linear in the total phase.
    """
    if nodes < 32:
        raise ValueError("oracle needs at least 32 nodes per panel")
    mono = tuple(mono)
    n = tuple(n)
    _check_key(mono, n)
    phase = abs(omega) * h * sum(abs(k) for k in n)
    panels = max(1, int(math.ceil(phase / (nodes / 4.0))))
    x, w, S = _legendre_cumulative(nodes)
    edges = np.linspace(0.0, h, panels + 1)
    half = 0.5 * np.diff(edges)
    tau = (0.5 * (edges[1:] + edges[:-1])[:, None] + half[:, None] * x[None, :])
    # phases in extended precision, reduced mod 2 pi, so rounding of the
    # product omega * k * tau does not limit accuracy at large phase
    tau_ext = (np.longdouble(0.5) * (edges[1:] + edges[:-1]).astype(np.longdouble)[:, None]
               + half.astype(np.longdouble)[:, None] * x.astype(np.longdouble)[None, :])
    two_pi = np.longdouble("6.283185307179586476925286766559005768")

    G = np.ones_like(tau, dtype=complex)
    for m, k in zip(mono, n):
        theta = np.fmod(np.longdouble(omega) * k * tau_ext, two_pi).astype(float)
        g = tau ** m * np.exp(1j * theta) * G
        panel_int = half * (g @ w)
        base = np.concatenate([[0.0], np.cumsum(panel_int)[:-1]])
        G = base[:, None] + half[:, None] * (g @ S.T)
        total = panel_int.sum()
    return complex(total)


def _exp_divided_difference(nodes):
    """exp[z_0, ..., z_k] through the exponential of a bidiagonal matrix."""
    k = len(nodes)
    Z = mpmath.zeros(k, k)
    for i, z in enumerate(nodes):
        Z[i, i] = z
        if i + 1 < k:
            Z[i, i + 1] = 1
    return mpmath.expm(Z)[0, k - 1]


def oracle_moment_mp(mono, n, omega, h, dps: int = 50) -> complex:
    """High-precision simplex moment via the Hermite-Genocchi formula.

    With tail sums S_k = n_{k+1} + ... + n_d (S_d = 0) the moment of 1 is
    h**d * exp[i h omega S_0, ..., i h omega S_d]. Each factor t_j is
    -i d/dc_j, which becomes h * sum_{k<j} d/dz_k, and differentiating a
    divided difference in a node of multiplicity m repeats that node once
    more with weight m. Independent of the antiderivative construction and
    exact for confluent (resonant) nodes.
    """
    mono = tuple(int(e) for e in mono)
    n = tuple(int(v) for v in n)
    _check_key(mono, n)
    d = len(n)
    with mpmath.workdps(dps):
        hm = mpmath.mpf(h)
        om = mpmath.mpf(omega)
        tails = [sum(n[k:]) for k in range(d)] + [0]
        z = [1j * hm * om * s for s in tails]
        terms = {tuple([1] * (d + 1)): mpmath.mpf(1)}
        for j, power in enumerate(mono, start=1):
            for _ in range(power):
                new = defaultdict(lambda: mpmath.mpf(0))
                for counts, c in terms.items():
                    for k in range(j):
                        bumped = list(counts)
                        bumped[k] += 1
                        new[tuple(bumped)] += c * counts[k]
                terms = dict(new)
        total = mpmath.mpc(0)
        for counts, c in terms.items():
            nodes = [z[k] for k in range(d + 1) for _ in range(counts[k])]
            total += c * _exp_divided_difference(nodes)
        total *= hm ** (d + sum(mono))
        return complex(total)
