"""Uncertainty principles, numerically.

Morgan's threshold is a closed form.  The Cowling-Price certificate measures
whether truncated modulation-space norms settle as the radius doubles.  For a
narrow Gaussian with mild decay parameters both norms settle.
"""

import numpy as np

from cherednik import JCParams, cowling_price_certify, morgan_threshold

for a, b in ((0.3, 0.3), (1.0, 1.0), (2.0, 2.0)):
    lhs, rhs, van = morgan_threshold(a, b, 4.0, 4.0 / 3.0)
    print(f"Morgan a={a}, b={b}: lhs={lhs:.4f} rhs={rhs:.4f} -> {'vanishing' if van else 'nonvanishing'}")

p = JCParams(1.0, 0.25)
f = lambda x: np.exp(-np.asarray(x, float) ** 2)
rep = cowling_price_certify(p, f, a=0.25, b=0.02)
print(f"\nCowling-Price with ab={rep.product_ab:g}: regime {rep.regime}")
print(f"  x-side norms  {rep.detail['x_norms']}")
print(f"  tf-side norms {rep.detail['tf_norms']}")
print(f"  growth flags  {rep.growth_flags}")
