"""Generalised translation through its integral kernel.

The kernel K(x, y, z) is supported on ||x| - |y|| <= |z| <= |x| + |y|.  The
translation tau_x f(y) integrates f against it, and the product formula
says G_lam(x) G_lam(y) is the translate of G_lam.
"""

import numpy as np

from cherednik import JCParams, kernel_K, translate
from cherednik.transform import translation_product_check
from cherednik.translation import translation_mass

p = JCParams(1.0, 0.25)
x, y = 0.8, 1.1
for z in (0.1, 0.5, 1.2, 1.9, 2.5):
    print(f"K({x}, {y}, {z}) = {kernel_K(p, x, y, z): .6e}")

f = lambda s: np.exp(-np.asarray(s) ** 2)
print(f"\ntau_x f(y) = {translate(p, f, x, y):.10f}")
print(f"tau_y f(x) = {translate(p, f, y, x):.10f}")
print(f"kernel mass against A: {translation_mass(p, x, y):.10f}")

res = translation_product_check(f, 0.5, p, [0.5, 1.0, 2.0])
print(f"product formula residuals at x=0.5: {np.array2string(np.asarray(res), precision=2)}")
