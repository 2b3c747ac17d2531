"""
Error against frequency at a fixed step
=======================================

With h held fixed, the Filon-based step becomes *more* accurate as the
forcing frequency grows, while the Magnus baselines deteriorate.
"""
import numpy as np

from neumann_filon import error_l2, example_problem, integrate

h = 0.1
omegas = [50.0, 100.0, 200.0, 400.0, 800.0]

print("  omega        nf3          m2          m4")
rows = []
for omega in omegas:
    prob, exact = example_problem(1, omega)
    g = prob.operator.grid
    errs = [error_l2(integrate(prob, h, m, keep=False).final, exact, 1.0, g) for m in ("nf3", "m2", "m4")]
    rows.append(errs)
    print(f"  {omega:5.0f}  " + "  ".join(f"{e:10.3e}" for e in errs))

nf3 = np.array(rows)[:, 0]
slope = np.polyfit(np.log(omegas), np.log(nf3), 1)[0]
print(f"\nnf3 error ~ omega^{slope:.2f}")
