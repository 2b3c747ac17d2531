"""
A second-order-in-time problem through the first-order lift
===========================================================

The third example is a wave equation u_tt = u_xx + f(x, t) u. It is written as
a first-order system in (u, u_t); the lifted operator is still handled by a
single matrix exponential per step and the error is measured on u only.
"""
from neumann_filon import error_l2, example_problem, integrate

for omega in (20.0, 100.0, 500.0):
    prob, exact = example_problem(3, omega)
    print(f"omega = {omega:g}: state size {prob.operator.size} (grid M = {prob.operator.grid.M})")
    for h in (0.25, 0.125, 0.0625):
        traj = integrate(prob, h, "nf3", keep=False)
        print(f"   h = {h:6.4f}  error {error_l2(traj.final, exact, 1.0, prob.operator.grid):.3e}")
