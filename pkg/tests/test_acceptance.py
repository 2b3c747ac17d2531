"""Acceptance checks, one test per criterion.

Each check prints a single ``CRITERION k: PASS|FAIL ...`` line (collected and
repeated in the terminal summary by conftest.py) and asserts both its
numerical condition and its runtime budget. Run stand-alone with
``python3 tests/test_acceptance.py`` to get the lines without pytest.
"""
import time

import numpy as np
import pytest

from neumann_filon import (
    error_l2,
    example_problem,
    integrate,
    make_plan,
    nf3_resonance_step,
    nf3_step,
    pde_residual,
    scalar_problem,
)
from neumann_filon.filon import (
    VertexSamples,
    compute_X,
    diagonal_derivative_integral,
    hermite_univariate,
    linear_bivariate,
    linear_trivariate,
    resonance_bivariate,
)
from neumann_filon.moments import (
    MONOMIALS,
    SERIES_THRESHOLD,
    MomentTable,
    oracle_moment,
    oracle_moment_mp,
    simplex_moment,
)

RESULTS = {}


def final_error(eid, omega, h, method="nf3", M=None):
    prob, exact = example_problem(eid, omega, M)
    traj = integrate(prob, h, method, keep=False)
    return error_l2(traj.final, exact, 1.0, prob.operator.grid)


def loglog_slope(x, y):
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def report(k, budget, check):
    start = time.perf_counter()
    ok, detail = check()
    elapsed = time.perf_counter() - start
    in_time = elapsed <= budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"CRITERION {k}: {status} ({elapsed:.1f}s of {budget}s) {detail}"
    RESULTS[k] = line
    print(line)
    return ok and in_time, line


# ---------------------------------------------------------------- criteria

def check_1():
    hs = [2.0 ** -k for k in range(2, 7)]
    errs = [final_error(1, 200.0, h, M=100) for h in hs]
    s = loglog_slope(hs, errs)
    return 2.6 <= s <= 3.4, f"order slope {s:.3f} (want [2.6, 3.4]); errors {['%.2e' % e for e in errs]}"


def check_2():
    omegas = [50.0, 100.0, 200.0, 400.0, 800.0]
    errs = [final_error(1, w, 0.1) for w in omegas]
    dec = all(a > b for a, b in zip(errs, errs[1:]))
    s = loglog_slope(omegas, errs)
    return dec and s <= -1.5, f"strictly decreasing={dec}, omega slope {s:.3f} (want <= -1.5)"


def check_3():
    parts, ok = [], True
    for eid, M in [(1, None), (3, None), (4, None), (2, 20)]:
        lo, hi = final_error(eid, 5.0, 1.0, M=M), final_error(eid, 1000.0, 1.0, M=M)
        ok &= hi * 10 <= lo
        parts.append(f"ex{eid}: {lo:.2e} -> {hi:.2e} (x{lo / hi:.0f})")
    return ok, "; ".join(parts)


def _random_keys(count, seed=20240611):
    rng = np.random.default_rng(seed)
    keys = []
    for _ in range(count):
        d = int(rng.integers(1, 4))
        mono = MONOMIALS[d][rng.integers(len(MONOMIALS[d]))]
        n = tuple(int(k) for k in rng.choice([-3, -2, -1, 1, 2, 3], size=d))
        h = float(rng.uniform(0.05, 1.0))
        phase = 10 ** rng.uniform(-3, 4)           # max |n| * omega * h
        omega = phase / (h * max(abs(k) for k in n))
        keys.append((mono, n, omega, h))
    return keys


def check_4():
    keys = _random_keys(200)
    worst_mp = worst_gl = 0.0
    gl_used = 0
    for key in keys:
        val = simplex_moment(*key)
        ref = oracle_moment_mp(*key)
        worst_mp = max(worst_mp, abs(val - ref) / abs(ref))
        gl64 = oracle_moment(*key, nodes=64)
        gl48 = oracle_moment(*key, nodes=48)
        if abs(gl64 - gl48) <= 1e-12 * abs(gl64):  # oracle resolved in double precision
            gl_used += 1
            worst_gl = max(worst_gl, abs(val - gl64) / abs(gl64))
    worst_gap = 0.0
    for d in (1, 2, 3):
        n = (1,) * d
        below = SERIES_THRESHOLD / d * (1 - 1e-13)
        above = SERIES_THRESHOLD / d * (1 + 1e-13)
        for mono in MONOMIALS[d]:
            worst_gap = max(worst_gap, abs(simplex_moment(mono, n, below, 1.0)
                                           - simplex_moment(mono, n, above, 1.0)))
    ok = worst_mp <= 1e-10 and worst_gl <= 1e-10 and worst_gap <= 1e-11
    return ok, (f"max rel err {worst_mp:.1e} vs 50-digit oracle (200 keys), {worst_gl:.1e} vs nested "
                f"Gauss-Legendre ({gl_used} self-resolved keys); threshold jump {worst_gap:.1e}")


def check_5():
    prob, exact = scalar_problem(-1.0, 0.3, 10.0)
    e = [abs(nf3_step(prob.u0, 0.0, make_plan(prob, h), prob)[0] - exact.u(h)[0]) for h in (0.1, 0.05)]
    ratio = e[0] / e[1]
    prob, exact = scalar_problem(-1.0, 0.3, 200.0)
    one = abs(nf3_step(prob.u0, 0.0, make_plan(prob, 0.1), prob)[0] - exact.u(0.1)[0])
    return 12 <= ratio <= 20 and one <= 1e-6, f"halving ratio {ratio:.2f} (want [12, 20]); one-step error {one:.2e} (want <= 1e-6)"


def check_6():
    errs = {m: final_error(1, 500.0, 0.25, m) for m in ("nf3", "m2", "m4")}
    prob, exact = scalar_problem(-1.0, 0.3, 10.0)

    def scalar_errs(method, hs):
        return [abs(integrate(prob, h, method, keep=False).final[0] - exact.u(1.0)[0]) for h in hs]

    h2 = [0.01 / 2 ** k for k in range(4)]
    h4 = [0.1 / 2 ** k for k in range(4)]
    s2, s4 = loglog_slope(h2, scalar_errs("m2", h2)), loglog_slope(h4, scalar_errs("m4", h4))
    ok = errs["nf3"] < errs["m2"] and errs["nf3"] < errs["m4"] and 1.7 <= s2 <= 2.3 and 3.6 <= s4 <= 4.4
    return ok, (f"ex1 omega=500 h=0.25: nf3 {errs['nf3']:.2e}, m2 {errs['m2']:.2e}, m4 {errs['m4']:.2e}; "
                f"m2 slope {s2:.2f}, m4 slope {s4:.2f}")


def check_7():
    e_plain = final_error(4, 100.0, 0.25, "nf3", M=32)
    e_res = final_error(4, 100.0, 0.25, "nf3-resonance", M=32)
    prob, _ = example_problem(4, 100.0, M=32)
    L, h = prob.operator, 0.25
    P = L.propagator(h).matrix
    plan = make_plan(prob, h, resonance=True)
    worst = 0.0
    u = prob.u0
    for k in range(4):
        t = k * h
        for mode in (m for m in prob.potential.modes if m.n > 0):
            a0, ah = mode.alpha(t), mode.alpha(t + h)
            F00 = P @ prob.multiply(a0, prob.multiply(a0, u))
            F0h = prob.multiply(ah, P @ prob.multiply(a0, u))
            Fhh = prob.multiply(ah, prob.multiply(ah, P @ u))
            X = compute_X(L, mode, u, t, h)
            c = resonance_bivariate(F00, F0h, Fhh, X, h, mode.n)
            gap = np.linalg.norm(diagonal_derivative_integral(c, h) - X) / (1 + np.linalg.norm(X))
            for pt, want in [((0, 0), F00), ((0, h), F0h), ((h, h), Fhh)]:
                gap = max(gap, np.linalg.norm(c.evaluate(*pt) - want) / max(1.0, np.linalg.norm(want)))
            worst = max(worst, gap)
        u = nf3_resonance_step(u, t, plan, prob)
    ok = e_res <= e_plain and worst <= 1e-12
    return ok, f"ex4 error nf3 {e_plain:.2e} vs nf3-resonance {e_res:.2e}; worst condition residual {worst:.1e}"


def check_8():
    rng = np.random.default_rng(8)
    worst_exact = worst_interp = 0.0
    for trial in range(12):
        omega = float(10 ** rng.uniform(0, 3))
        h = float(rng.uniform(0.05, 1.0))
        tab = MomentTable(omega, h)
        # cubic, univariate
        p = rng.normal(size=4) + 1j * rng.normal(size=4)
        k = int(rng.choice([-2, -1, 1, 3]))
        val = lambda t: sum(p[j] * t ** j for j in range(4))
        der = lambda t: sum(j * p[j] * t ** (j - 1) for j in range(1, 4))
        s = VertexSamples(1, {"0": np.array([val(0.0)]), "h": np.array([val(h)]),
                              "d0": np.array([der(0.0)]), "dh": np.array([der(h)])}, (k,), h)
        c = hermite_univariate(s, h)
        got = sum(c[(j,)][0] * tab((j,), (k,)) for j in range(4))
        want = sum(p[j] * oracle_moment((j,), (k,), omega, h) for j in range(4))
        worst_exact = max(worst_exact, abs(got - want) / abs(want))
        dp = lambda t: c[(1,)] + 2 * c[(2,)] * t + 3 * c[(3,)] * t ** 2
        for got_v, want_v in [(c.evaluate(0.0), s.values["0"]), (c.evaluate(h), s.values["h"]),
                              (dp(0.0), s.values["d0"]), (dp(h), s.values["dh"])]:
            worst_interp = max(worst_interp, np.max(np.abs(got_v - want_v)) / max(1.0, np.max(np.abs(want_v))))
        # affine, bi- and trivariate
        for d in (2, 3):
            a = rng.normal(size=d + 1) + 1j * rng.normal(size=d + 1)
            n = tuple(int(v) for v in rng.choice([-2, -1, 1, 2], size=d))
            F = lambda *t: a[0] + sum(a[j + 1] * t[j] for j in range(d))
            verts = [(0, 0), (0, h), (h, h)] if d == 2 else [(0, 0, 0), (0, 0, h), (0, h, h), (h, h, h)]
            samples = [np.array([F(*v)]) for v in verts]
            c = (linear_bivariate if d == 2 else linear_trivariate)(*samples, h, n)
            got = sum(coef[0] * tab(m, n) for m, coef in c.coeffs.items())
            monos = [(0,) * d] + [tuple(int(i == j) for i in range(d)) for j in range(d)]
            want = sum(a[j] * oracle_moment(monos[j], n, omega, h) for j in range(d + 1))
            worst_exact = max(worst_exact, abs(got - want) / abs(want))
            for v, smp in zip(verts, samples):
                worst_interp = max(worst_interp, abs(c.evaluate(*v)[0] - smp[0]) / max(1.0, abs(smp[0])))
        # bilinear with matching X, resonant pair
        b = rng.normal(size=4) + 1j * rng.normal(size=4)
        kk = int(rng.integers(1, 4))
        F = lambda t1, t2: b[0] + b[1] * t1 + b[2] * t2 + b[3] * t1 * t2
        X = np.array([b[1] * h + b[3] * h ** 2 / 2])
        c = resonance_bivariate(np.array([F(0, 0)]), np.array([F(0, h)]), np.array([F(h, h)]), X, h, kk)
        got = sum(coef[0] * tab.pair(m, kk) for m, coef in c.coeffs.items())
        want = sum(bj * (oracle_moment(m, (kk, -kk), omega, h) + oracle_moment(m, (-kk, kk), omega, h))
                   for bj, m in zip(b, [(0, 0), (1, 0), (0, 1), (1, 1)]))
        worst_exact = max(worst_exact, abs(got - want) / abs(want))
        worst_interp = max(worst_interp, abs(diagonal_derivative_integral(c, h)[0] - X[0]) / (1 + abs(X[0])))
    ok = worst_exact <= 1e-10 and worst_interp <= 1e-12
    return ok, f"exactness rel err {worst_exact:.1e} (<= 1e-10); interpolation residual {worst_interp:.1e} (<= 1e-12)"


def check_9():
    parts, ok = [], True
    for eid, M in [(1, 100), (2, 40), (3, 100), (4, 100)]:
        prob, exact = example_problem(eid, 20.0, M)
        r = [pde_residual(prob, exact, t, d) for t in (0.37, 0.81) for d in (1e-3, 5e-4)]
        ratios = [r[0] / r[1], r[2] / r[3]]
        ok &= all(3.5 <= q <= 4.5 for q in ratios)
        parts.append(f"ex{eid} {min(ratios):.3f}-{max(ratios):.3f}")
    return ok, "residual halving ratios " + ", ".join(parts)


CRITERIA = [
    (1, 60, check_1), (2, 60, check_2), (3, 120, check_3), (4, 10, check_4), (5, 5, check_5),
    (6, 60, check_6), (7, 30, check_7), (8, 10, check_8), (9, 10, check_9),
]


@pytest.mark.parametrize("k,budget,check", CRITERIA, ids=[f"criterion_{k}" for k, _, _ in CRITERIA])
def test_criterion(k, budget, check):
    ok, line = report(k, budget, check)
    assert ok, line


if __name__ == "__main__":
    for k, budget, check in CRITERIA:
        report(k, budget, check)
