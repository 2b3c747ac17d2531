"""
Magnus baselines on a scalar problem
====================================

The scalar equation u' = (a + eps e^{i w t}) u has a closed-form solution,
which makes it a clean test for the orders of the second- and fourth-order
Magnus steps, and for the local order of the Neumann-Filon step.
"""
import numpy as np

from neumann_filon import integrate, make_plan, nf3_step, scalar_problem

prob, exact = scalar_problem(a=-1.0, eps=0.3, omega=10.0)
ref = exact.u(1.0)[0]

for method, h0 in (("m2", 0.01), ("m4", 0.1), ("nf3", 0.1)):
    hs = [h0 / 2 ** k for k in range(4)]
    errs = [abs(integrate(prob, h, method, keep=False).final[0] - ref) for h in hs]
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    print(f"{method:4s} global errors {' '.join(f'{e:.2e}' for e in errs)}  slope {slope:.2f}")

# one step: the local error of nf3 shrinks by 2^4 when h halves
local = [abs(nf3_step(prob.u0, 0.0, make_plan(prob, h), prob)[0] - exact.u(h)[0]) for h in (0.1, 0.05)]
print(f"nf3 one-step errors {local[0]:.2e} -> {local[1]:.2e}, ratio {local[0] / local[1]:.1f}")
