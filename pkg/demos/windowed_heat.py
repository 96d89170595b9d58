"""Windowed transform and the Gaussian kernel E_t.

The modulation M_xi g is built on the spectral side from |Hg|, so it only
returns g at xi = 0 when Hg does not change sign.  The default window
exp(-x^2) fails this for alpha=1, beta=0.25, while the heat window (whose
spectrum is exp(-t lam^2)) satisfies it.  We then compare W_g(E_t) with the
Gaussian exp(-t(lam^2 + mu^2)) it is expected to equal.
"""

import numpy as np

from cherednik import JCParams, default_window, heat_window, modulation, wo_transform
from cherednik.windowed import GaussianKernel, window_context

p = JCParams(1.0, 0.25)
x = np.linspace(-2, 2, 9)

for name, g in (("default", default_window), ("heat", heat_window(p))):
    m0 = modulation(p, g, 0.0, x).values.real
    print(f"{name:8s} window: sup |M_0 g - g| = {np.max(np.abs(m0 - g(x))):.2e}")

ctx = window_context(p, default_window)
grid = np.linspace(-1, 1, 5)
for t in (0.25, 0.5, 1.0):
    E = GaussianKernel(p, t, ctx=ctx)
    W = wo_transform(p, E, default_window, grid, grid, ctx=ctx).values.real
    ratio = W / np.exp(-t * (grid[:, None] ** 2 + grid[None, :] ** 2))
    print(f"t={t:<5g} W_g(E_t) / target in [{ratio.min():.3f}, {ratio.max():.3f}]")
