"""
Resonant frequency pairs on the fourth example
==============================================

The fourth example has a symmetric potential (modes n and -n share a
coefficient). Pairs of indices that sum to zero produce a non-oscillating
contribution in the second Neumann term; the resonance variant replaces the
affine interpolant for those pairs by a bilinear one fixed by one extra
diagonal-derivative integral.
"""
from neumann_filon import error_l2, example_problem, integrate

print("  omega     h        nf3     nf3-resonance")
for omega in (50.0, 100.0, 200.0):
    prob, exact = example_problem(4, omega, M=32)
    g = prob.operator.grid
    for h in (0.25, 0.125):
        e = [error_l2(integrate(prob, h, m, keep=False).final, exact, 1.0, g)
             for m in ("nf3", "nf3-resonance")]
        print(f"  {omega:5.0f}  {h:6.3f}  {e[0]:10.3e}  {e[1]:10.3e}")
