import numpy as np
import pytest

from neumann_filon import (
    EllipticOperator,
    GridSpec,
    Mode,
    NumericError,
    OscillatoryPotential,
    Problem,
    error_l2,
    example_problem,
    integrate,
    m2_step,
    m4_step,
    make_plan,
    neumann_bruteforce,
    nf3_resonance_step,
    nf3_step,
    scalar_problem,
)
from neumann_filon import stepper

GRID4 = GridSpec("fourier", 4, ((0.0, 2 * np.pi),))


def tiny_problem(omega, symmetric=False, seed=5):
    """Four unknowns, non-commuting operator and multipliers."""
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(4, 4))
    A = -(A @ A.T) / 4
    a1 = rng.normal(size=4) + 1j * rng.normal(size=4)
    a2 = rng.normal(size=4)
    if symmetric:
        s = lambda t: a1 * np.cos(t)
        ds = lambda t: -a1 * np.sin(t)
        modes = (Mode(1, s, ds), Mode(-1, s, ds))
    else:
        modes = (Mode(1, lambda t: a1 * np.cos(t), lambda t: -a1 * np.sin(t)),
                 Mode(-1, lambda t: a2 * (1 + t), lambda t: a2 + 0 * t))
    pot = OscillatoryPotential(omega, modes, symmetric=symmetric)
    return Problem(EllipticOperator(A, GRID4), pot, rng.normal(size=4) + 1j * rng.normal(size=4))


def free_problem():
    prob, _ = example_problem(1, 50.0, M=16)
    return Problem(prob.operator, OscillatoryPotential(50.0, ()), prob.u0)


class TestZeroPotential:
    def test_nf3_is_propagator(self):
        prob = free_problem()
        h = 0.2
        want = prob.operator.propagator(h).matrix @ prob.u0
        assert np.max(np.abs(nf3_step(prob.u0, 0.3, make_plan(prob, h), prob) - want)) <= 1e-13

    def test_resonance_is_propagator(self):
        prob = free_problem()
        prob = Problem(prob.operator, OscillatoryPotential(50.0, (), symmetric=True), prob.u0)
        h = 0.2
        want = prob.operator.propagator(h).matrix @ prob.u0
        got = nf3_resonance_step(prob.u0, 0.0, make_plan(prob, h, resonance=True), prob)
        assert np.max(np.abs(got - want)) <= 1e-13

    @pytest.mark.parametrize("method", ["nf3", "m2", "m4"])
    def test_integrate_single_step(self, method):
        prob = free_problem()
        traj = integrate(prob, 1.0, method)
        want = prob.operator.propagator(1.0).matrix @ prob.u0
        assert len(traj.states) == 2
        assert np.max(np.abs(traj.final - want)) <= 1e-12


class TestScalar:
    def test_one_step_high_frequency(self):
        prob, exact = scalar_problem(-1.0, 0.3, 200.0)
        u = nf3_step(prob.u0, 0.0, make_plan(prob, 0.1), prob)
        assert abs(u[0] - exact.u(0.1)[0]) <= 1e-6

    def test_local_order_four(self):
        prob, exact = scalar_problem(-1.0, 0.3, 10.0)
        err = [abs(nf3_step(prob.u0, 0.0, make_plan(prob, h), prob)[0] - exact.u(h)[0])
               for h in (0.1, 0.05)]
        assert 12 <= err[0] / err[1] <= 20

    def test_window_shift_by_period(self):
        prob, _ = scalar_problem(-0.5, 0.4 + 0.2j, 30.0)
        plan = make_plan(prob, 0.17)
        u = np.array([0.3 - 1.1j])
        a = nf3_step(u, 0.2, plan, prob)
        b = nf3_step(u, 0.2 + 2 * np.pi / 30.0, plan, prob)
        assert abs(a[0] - b[0]) <= 1e-12 * abs(a[0])


class TestResonanceStep:
    def test_example4_improves(self):
        prob, exact = example_problem(4, 100.0, M=32)
        g = prob.operator.grid
        plain = error_l2(integrate(prob, 0.25, "nf3", keep=False).final, exact, 1.0, g)
        res = error_l2(integrate(prob, 0.25, "nf3-resonance", keep=False).final, exact, 1.0, g)
        assert res <= plain

    def test_without_pairs_matches_plain(self):
        prob, _ = example_problem(1, 40.0, M=16)
        plan = make_plan(prob, 0.1)
        a = stepper._step(prob.u0, 0.2, plan, prob, resonance=True)
        b = nf3_step(prob.u0, 0.2, plan, prob)
        assert np.max(np.abs(a - b)) <= 1e-13

    def test_rejects_asymmetric(self):
        prob = tiny_problem(20.0)
        with pytest.raises(ValueError):
            nf3_resonance_step(prob.u0, 0.0, make_plan(prob, 0.1), prob)
        with pytest.raises(ValueError):
            make_plan(prob, 0.1, resonance=True)
        with pytest.raises(ValueError):
            integrate(prob, 0.1, "nf3-resonance")

    def test_plan_flag(self):
        prob = tiny_problem(20.0, symmetric=True)
        assert make_plan(prob, 0.1, resonance=True).resonance
        assert not make_plan(prob, 0.1).resonance


class TestIntegrate:
    def test_example1_accuracy(self):
        prob, exact = example_problem(1, 200.0)
        traj = integrate(prob, 1 / 32, keep=False)
        assert error_l2(traj.final, exact, 1.0, prob.operator.grid) <= 1e-5

    def test_single_step_frequency_gain(self):
        errs = []
        for omega in (5.0, 1000.0):
            prob, exact = example_problem(1, omega)
            errs.append(error_l2(integrate(prob, 1.0).final, exact, 1.0, prob.operator.grid))
        assert errs[1] < errs[0]

    def test_partial_last_step(self):
        prob, exact = scalar_problem(-1.0, 0.3, 10.0, t_final=1.0)
        traj = integrate(prob, 0.3)
        assert traj.partial_last_step
        assert np.allclose(traj.times, [0.0, 0.3, 0.6, 0.3 * 3, 1.0])
        assert abs(traj.final[0] - exact.u(1.0)[0]) < 1e-4

    def test_even_grid_not_flagged(self):
        prob, _ = scalar_problem(-1.0, 0.3, 10.0)
        traj = integrate(prob, 0.25)
        assert not traj.partial_last_step and traj.times[-1] == 1.0 and len(traj.times) == 5

    def test_keep_false_stores_endpoints(self):
        prob, _ = scalar_problem()
        traj = integrate(prob, 0.1, keep=False)
        assert len(traj.states) == 2 and traj.t_final == pytest.approx(1.0)

    def test_unknown_method(self):
        prob, _ = scalar_problem()
        with pytest.raises(ValueError):
            integrate(prob, 0.1, "rk4")

    def test_bad_step(self):
        prob, _ = scalar_problem()
        with pytest.raises(ValueError):
            integrate(prob, 0.0)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_non_finite_state(self):
        g = GridSpec("point", 1, ())
        prob = Problem(EllipticOperator([[800.0]], g), OscillatoryPotential(1.0, ()), [1.0], t_final=1.0)
        with pytest.raises(NumericError):
            integrate(prob, 1.0)

    def test_state_size_mismatch(self):
        prob, _ = example_problem(1, 10.0, M=16)
        with pytest.raises(ValueError):
            nf3_step(np.ones(8), 0.0, make_plan(prob, 0.1), prob)


class TestBruteforce:
    def test_depth_zero(self):
        prob = tiny_problem(30.0)
        want = prob.operator.propagator(0.3).matrix @ prob.u0
        assert np.max(np.abs(neumann_bruteforce(prob, 0.3, depth=0) - want)) <= 1e-12

    def test_scalar_depth_three(self):
        prob, _ = scalar_problem(-1.0, 0.3, 40.0)
        u = nf3_step(prob.u0, 0.0, make_plan(prob, 0.2), prob)
        assert abs(u[0] - neumann_bruteforce(prob, 0.2, 3)[0]) <= 1e-12

    def test_gap_to_nf3_shrinks(self):
        prob = tiny_problem(3.0)
        gaps = [np.linalg.norm(nf3_step(prob.u0, 0.0, make_plan(prob, h), prob)
                               - neumann_bruteforce(prob, h, 3)) for h in (0.2, 0.1, 0.05)]
        assert gaps[0] / gaps[1] >= 8 and gaps[1] / gaps[2] >= 8

    def test_fourth_term_trend(self):
        prob = tiny_problem(500.0)
        omega = 500.0
        ratios = []
        for h in (0.5, 0.25, 0.125):
            d = np.linalg.norm(neumann_bruteforce(prob, h, 4) - neumann_bruteforce(prob, h, 3))
            ratios.append(d / min(h ** 4, h ** 2 / omega ** 2))
        assert max(ratios) / min(ratios) <= 10

    def test_converges_to_exact(self):
        # truncation after four terms leaves O((h |f|)^5) at this small step
        prob = tiny_problem(7.0)
        h = 0.02
        u = prob.u0
        for k in range(200):
            u = m4_step(u, k * h / 200, h / 200, prob)
        assert np.linalg.norm(neumann_bruteforce(prob, h, 4) - u) <= 1e-8

    def test_size_guard(self):
        prob, _ = example_problem(1, 10.0, M=16)
        with pytest.raises(ValueError):
            neumann_bruteforce(prob, 0.1)

    def test_depth_guard(self):
        with pytest.raises(ValueError):
            neumann_bruteforce(tiny_problem(3.0), 0.1, depth=5)


def test_steps_are_linear():
    rng = np.random.default_rng(2)
    prob = tiny_problem(60.0, symmetric=True)
    plan = make_plan(prob, 0.2, resonance=True)
    u, v = (rng.normal(size=4) + 1j * rng.normal(size=4) for _ in range(2))
    c1, c2 = 0.7 - 0.2j, -1.3
    steps = [lambda w: nf3_step(w, 0.1, plan, prob),
             lambda w: nf3_resonance_step(w, 0.1, plan, prob),
             lambda w: m2_step(w, 0.1, 0.2, prob),
             lambda w: m4_step(w, 0.1, 0.2, prob)]
    for step in steps:
        lhs = step(c1 * u + c2 * v)
        rhs = c1 * step(u) + c2 * step(v)
        assert np.linalg.norm(lhs - rhs) <= 1e-12 * np.linalg.norm(rhs)
