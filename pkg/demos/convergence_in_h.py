"""
Step-size convergence on the first example
==========================================

Global L2 error at t = 1 for a halving sequence of steps, at a moderate and a
high frequency. At omega = 10 the error falls like h^3. At omega = 200 the
coarse steps are already in the asymptotic regime where the error is governed
by inverse powers of omega, so the curve stays flat until h is well below
1/omega.
"""
import numpy as np

from neumann_filon import error_l2, example_problem, integrate

hs = [2.0 ** -k for k in range(2, 9)]

for omega in (10.0, 200.0):
    prob, exact = example_problem(1, omega)
    errs = []
    for h in hs:
        traj = integrate(prob, h, "nf3", keep=False)
        errs.append(error_l2(traj.final, exact, 1.0, prob.operator.grid))
    print(f"omega = {omega:g}")
    print("      h        error    observed order")
    for k, (h, e) in enumerate(zip(hs, errs)):
        order = "" if k == 0 else f"{np.log2(errs[k - 1] / e):8.2f}"
        print(f"  {h:9.6f}  {e:10.3e}  {order}")
    print()
