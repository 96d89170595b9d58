"""A first look at the Opdam-Cherednik transform.

We evaluate the kernel G, check that it is an eigenfunction of the
Cherednik operator, then push a Gaussian through the transform and back.
Run with ``python3 demos/transform_tour.py``.
"""

import numpy as np

from cherednik import JCParams, cherednik_apply, oc_inverse, oc_transform, opdam_G, plancherel_check
from cherednik.transform import default_lambda_rule

p = JCParams(1.0, 0.5)
print(f"parameters alpha={p.alpha}, beta={p.beta}, rho={p.rho}")

# G_lam is normalised at the origin and solves T G = i lam G
lam = 2.0
for x in (0.0, 0.5, 1.5):
    G = opdam_G(p, lam, x)
    line = f"G_{lam:g}({x:g}) = {G:.6f}"
    if x > 0:
        resid = abs(cherednik_apply(p, lambda s: opdam_G(p, lam, s), x) - 1j * lam * G)
        line += f"   eigen residual {resid:.1e}"
    print(line)

# Plancherel: the L2(A) norm is carried over to the spectral side
f = lambda x: np.exp(-x**2)
lhs, rhs, _ = plancherel_check(f, p)
print(f"\n||f||^2 = {lhs:.10f}, spectral side = {rhs:.10f}")

# and the inverse recovers f pointwise
rule = default_lambda_rule()
x = np.linspace(-2, 2, 9)
back = oc_inverse(oc_transform(f, p, rule.nodes), p, x, rule).values
print(f"roundtrip sup error on [-2, 2]: {np.max(np.abs(back - f(x))):.1e}")
