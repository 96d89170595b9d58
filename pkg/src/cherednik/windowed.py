"""Modulation, time-frequency shifts and the windowed transform.

Everything spectral about the window is computed once per
:class:`WindowedContext`:

* ``Hg`` on Chebyshev nodes, giving an interpolant for arbitrary lambda;
* ``Psi[xi](lam) = sqrt(tau_xi |Hg|^2 (lam))``, the spectrum of ``M_xi g``,
  with the translation kernel applied in the spectral variable.

Because ``H(tau_x h)(lam) = G_lam(x) Hh(lam)``, the shifted window has
spectrum ``G_lam(x) Psi[xi](lam)`` and the windowed transform collapses to one
lambda quadrature::

    W_g f(x, xi) = int conj(G_lam(x) Psi[xi](lam) sigma'(lam)) Hf(-lam) dlam

That is the default ``method="spectral"``; ``method="direct"`` integrates the
defining formula in s with the shifted window built by the translation
kernel, and is kept as an independent cross-check.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.special import gammaln

from .errors import BoundViolation, DomainError
from .measures import DEFAULT_EPS, plancherel_density, weight_A, weight_B
from .quadrature import QuadratureRule, build_rule
from .sampled import SampledFunction1D, TimeFreqFunction
from .specfun import opdam_G
from .transform import G_matrix, _G_cached, oc_inverse, oc_transform
from .translation import translate_array

__all__ = [
    "WindowedRules",
    "WindowedContext",
    "SandwichReport",
    "default_window",
    "heat_window",
    "window_context",
    "clear_caches",
    "modulation",
    "tf_shift",
    "wo_transform",
    "wo_inverse",
    "gaussian_kernel",
    "GaussianKernel",
    "sandwich_check",
    "sandwich_ratio",
    "windowed_plancherel",
    "NEGATIVE_CLAMP",
]

NEGATIVE_CLAMP = 1e-10


def default_window(x):
    """The package window ``g(x) = exp(-x^2)``."""
    return np.exp(-np.asarray(x, dtype=float) ** 2)


def heat_window(p, t=1.0, rule_lambda=None):
    """Window with nonnegative spectrum ``Hg(lam) = exp(-t lam^2)``.

    The default Gaussian window has a spectrum that changes sign, so
    ``sqrt(|Hg|^2) != Hg`` and ``M_0 g != g`` for it.  This one is built by
    inverting a positive even symbol and is real and even.
    """
    if not t > 0:
        raise DomainError("t must be positive")
    rule_lambda = rule_lambda or build_rule(12.0, 16)

    def g(x):
        x = np.asarray(x, dtype=float)
        sym = lambda lam: np.exp(-t * np.asarray(lam, float) ** 2)
        vals = oc_inverse(sym, p, np.atleast_1d(x).ravel(), rule_lambda).values.real
        return vals.reshape(x.shape)

    return g


@dataclass(frozen=True)
class WindowedRules:
    """Quadrature settings for the windowed pipeline.

    Attributes
    ----------
    s : line rule for integrals in the signal variable (transforms, norms).
    lam : line rule for spectral integrals.
    x, xi : rules for the time-frequency plane (reconstruction, norms).
    n_shell, n_chi : tanh-sinh node counts for the spectral translation.
    """

    s: QuadratureRule = field(default_factory=lambda: build_rule(12.0, 16))
    lam: QuadratureRule = field(default_factory=lambda: build_rule(16.0, 8))
    x: QuadratureRule = field(default_factory=lambda: build_rule(16.0, 6))
    xi: QuadratureRule = field(default_factory=lambda: build_rule(12.0, 4))
    n_shell: int = 21
    n_chi: int = 41
    eps: float = DEFAULT_EPS

    def describe(self):
        return {
            "s": self.s.describe(),
            "lam": self.lam.describe(),
            "x": self.x.describe(),
            "xi": self.xi.describe(),
            "n_shell": self.n_shell,
            "n_chi": self.n_chi,
            "eps": self.eps,
        }

    def key(self):
        def rk(r):
            return (r.scheme, r.truncation_radius, r.points_per_unit, len(r))

        return (rk(self.s), rk(self.lam), rk(self.x), rk(self.xi), self.n_shell, self.n_chi, self.eps)

    @classmethod
    def coarse(cls, scale=1.0):
        """Default rules with every points-per-unit multiplied by ``scale``."""
        def r(radius, ppu):
            return build_rule(radius, max(4, int(round(ppu * scale))))

        return cls(
            s=r(12.0, 16),
            lam=r(16.0, 8),
            x=r(16.0, 6),
            xi=r(12.0, 4),
            n_shell=max(11, int(round(21 * scale)) | 1),
            n_chi=max(21, int(round(41 * scale)) | 1),
        )


class WindowedContext:
    """Window-dependent spectral data shared by all windowed operations.

    Parameters
    ----------
    p : JCParams
    g : callable
        Window, vectorised in x.
    rules : WindowedRules, optional
    """

    def __init__(self, p, g=default_window, rules=None):
        self.p = p
        self.g = g
        self.rules = rules or WindowedRules()
        r = self.rules
        self.g_norm2 = float(
            np.sum(np.abs(np.asarray(g(r.s.nodes), dtype=complex)) ** 2 * weight_A(p, r.s.nodes) * r.s.weights)
        )
        if not self.g_norm2 > 0:
            raise DomainError("window has zero L2(A) norm")
        self._build_hg_interpolant()
        self._psi_cache = {}
        self.dens_lam = plancherel_density(p, r.lam.nodes, r.eps).raw

    # -- spectral data of the window ------------------------------------
    def _build_hg_interpolant(self):
        r = self.rules
        # |Hg|^2 is needed on shells reaching |xi| + |lam|
        self.hg_radius = float(min(r.lam.truncation_radius + r.xi.truncation_radius, 36.0))
        n = int(8 * self.hg_radius) + 16
        t = np.cos(np.pi * (np.arange(n) + 0.5) / n)[::-1]
        hg = oc_transform(self.g, self.p, t * self.hg_radius, r.s).values
        self._hg_coef_re = cheb.chebfit(t, hg.real, n - 1)
        self._hg_coef_im = cheb.chebfit(t, hg.imag, n - 1)
        self.hg_edge = float(np.max(np.abs(hg[[0, -1]])))

    def Hg(self, lam):
        """Interpolated transform of the window; 0 beyond ``hg_radius``."""
        lam = np.asarray(lam, dtype=float)
        u = np.clip(lam / self.hg_radius, -1.0, 1.0)
        vals = cheb.chebval(u, self._hg_coef_re) + 1j * cheb.chebval(u, self._hg_coef_im)
        return np.where(np.abs(lam) <= self.hg_radius, vals, 0.0)

    def tau_spectral(self, xi, lam):
        """``tau_xi |Hg|^2 (lam)`` on the broadcast grid of ``xi`` and ``lam``."""
        r = self.rules
        xi, lam = np.broadcast_arrays(np.asarray(xi, float), np.asarray(lam, float))
        out = np.empty(xi.shape, dtype=float)
        flat_xi, flat_lam = xi.ravel(), lam.ravel()
        res = np.empty(flat_xi.shape)
        chunk = max(1, 200000 // (2 * r.n_shell * r.n_chi))
        sq = lambda w: np.abs(self.Hg(w)) ** 2
        for start in range(0, flat_xi.size, chunk):
            sl = slice(start, start + chunk)
            res[sl] = translate_array(self.p, sq, flat_xi[sl], flat_lam[sl], r.n_shell, r.n_chi).real
        out[...] = res.reshape(xi.shape)
        return out

    def psi(self, xi):
        """Matrix ``Psi[lam_i, xi_j]`` on the lambda rule nodes.

        Values of ``tau_xi |Hg|^2`` in ``[-1e-10, 0)`` are clamped to 0; more
        negative values raise :class:`BoundViolation`.
        """
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        key = xi.tobytes()
        if key not in self._psi_cache:
            lam = self.rules.lam.nodes
            tau = self.tau_spectral(xi[None, :], lam[:, None])
            worst = tau.min()
            if worst < -NEGATIVE_CLAMP:
                i, j = np.unravel_index(np.argmin(tau), tau.shape)
                raise BoundViolation(
                    f"tau_xi|Hg|^2 = {worst:.3e} < 0 at lam={lam[i]:.4g}, xi={xi[j]:.4g}"
                )
            psi = np.sqrt(np.maximum(tau, 0.0))
            psi.setflags(write=False)
            self._psi_cache[key] = psi
        return self._psi_cache[key]

    # -- building blocks -------------------------------------------------
    def modulated(self, xi, y):
        """``M_xi g`` at points ``y`` (one xi)."""
        r = self.rules
        psi = self.psi([xi])[:, 0]
        return G_matrix(self.p, r.lam.nodes, np.atleast_1d(y)).T @ (psi * self.dens_lam * r.lam.weights)

    def shifted_window(self, x, xi, y):
        """``g_{x,xi}(y) = tau_x M_xi g (y)`` via its spectrum (product formula)."""
        r = self.rules
        psi = self.psi([xi])[:, 0]
        lam = r.lam.nodes
        coeff = opdam_G(self.p, lam, float(x)) * psi * self.dens_lam * r.lam.weights
        return G_matrix(self.p, lam, np.atleast_1d(np.asarray(y, float))).T @ coeff

    def transform_neg(self, f):
        """``Hf(-lam)`` on the lambda nodes for a callable ``f``."""
        lam = self.rules.lam.nodes
        return oc_transform(f, self.p, -lam[::-1], self.rules.s).values[::-1]


_CONTEXTS = {}


def window_context(p, g=default_window, rules=None):
    """Memoised :class:`WindowedContext` for ``(p, g, rules)``."""
    rules = rules or WindowedRules()
    key = (p, id(g), rules.key())
    ctx = _CONTEXTS.get(key)
    if ctx is None or ctx.g is not g:
        if len(_CONTEXTS) > 16:
            _CONTEXTS.clear()
        ctx = WindowedContext(p, g, rules)
        _CONTEXTS[key] = ctx
    return ctx


def clear_caches():
    """Drop memoised windowed contexts and G matrices (for cold timings)."""
    _CONTEXTS.clear()
    _G_cached.cache_clear()


def modulation(p, g, xi, x_grid, rules=None, ctx=None):
    """Modulated window ``M_xi g = H^-1 sqrt(tau_xi |Hg|^2)`` on ``x_grid``.

    The square root is taken after clamping tiny negative quadrature noise
    (``>= -1e-10``) to zero.
    """
    ctx = ctx or window_context(p, g, rules)
    x = np.asarray(x_grid, dtype=float)
    vals = ctx.modulated(float(xi), x)
    return SampledFunction1D(x, vals, "weight_A", meta={"xi": float(xi)})


def tf_shift(p, g, x, xi, y_grid, rules=None, ctx=None, method="spectral"):
    """Time-frequency shifted window ``g_{x,xi} = tau_x M_xi g`` on ``y_grid``.

    ``method="direct"`` applies the translation kernel to samples of
    ``M_xi g``; ``"spectral"`` uses the product formula.
    """
    ctx = ctx or window_context(p, g, rules)
    y = np.asarray(y_grid, dtype=float)
    if method == "spectral":
        vals = ctx.shifted_window(x, xi, y)
    elif method == "direct":
        r = ctx.rules
        mg = lambda z: ctx.modulated(float(xi), np.ravel(z)).reshape(np.shape(z))
        vals = translate_array(p, mg, float(x), y, r.n_shell, r.n_chi)
    else:
        raise DomainError(f"unknown method {method!r}")
    return SampledFunction1D(y, vals, "weight_A", meta={"x": float(x), "xi": float(xi)})


def _wo_spectral(ctx, hf_neg, x, xi):
    r = ctx.rules
    lam = r.lam.nodes
    psi = ctx.psi(xi)
    v = np.conj(psi * ctx.dens_lam[:, None]) * (hf_neg * r.lam.weights)[:, None]
    return np.conj(G_matrix(ctx.p, lam, x)).T @ v


def wo_transform(p, f, g, x_grid, xi_grid, rules=None, ctx=None, method="spectral"):
    """Windowed transform ``W_g f(x, xi) = int f(s) conj(g_{x,xi}(-s)) A(s) ds``.

    Parameters
    ----------
    f, g : callable
        Signal and window (vectorised).
    x_grid, xi_grid : array_like
        Output grid.
    method : {"spectral", "direct"}
        ``direct`` builds every shifted window with the translation kernel and
        is only practical on a handful of points.

    Returns
    -------
    TimeFreqFunction
    """
    ctx = ctx or window_context(p, g, rules)
    x = np.asarray(x_grid, dtype=float)
    xi = np.asarray(xi_grid, dtype=float)
    if method == "spectral":
        vals = _wo_spectral(ctx, ctx.transform_neg(f), x, xi)
    elif method == "direct":
        s_rule = ctx.rules.s
        s = s_rule.nodes
        fw = np.asarray(f(s), dtype=complex) * weight_A(p, s) * s_rule.weights
        vals = np.empty((x.size, xi.size), dtype=complex)
        for j, xj in enumerate(xi):
            for i, xx in enumerate(x):
                shifted = tf_shift(p, g, xx, xj, -s[::-1], ctx=ctx, method="direct").values[::-1]
                vals[i, j] = np.sum(fw * np.conj(shifted))
    else:
        raise DomainError(f"unknown method {method!r}")
    return TimeFreqFunction(x, xi, vals, meta={"method": method, "rules": ctx.rules.describe()})


def _inverse_coefficients(ctx, F):
    """Spectral coefficients c(lam) with ``W^-1 F(s) = int c G_lam(-s) dsigma``."""
    r = ctx.rules
    p = ctx.p
    xn, xin = r.x.nodes, r.xi.nodes
    ax = weight_A(p, xn) * r.x.weights
    dxi = plancherel_density(p, xin, r.eps).abs * r.xi.weights
    psi = ctx.psi(xin)
    Gx = G_matrix(p, r.lam.nodes, xn)
    if isinstance(F, tuple):
        # separable symbol (Fx, Fxi)
        fx = np.asarray(F[0](xn), dtype=complex)
        fxi = np.asarray(F[1](xin), dtype=complex)
        inner = (Gx @ (fx * ax)) * (psi @ (fxi * dxi))
    else:
        if isinstance(F, TimeFreqFunction):
            if not (np.array_equal(F.x_grid, xn) and np.array_equal(F.xi_grid, xin)):
                raise DomainError("TimeFreqFunction must live on the x/xi rule nodes")
            vals = F.values
        else:
            X, XI = np.meshgrid(xn, xin, indexing="ij")
            vals = np.asarray(F(X, XI), dtype=complex)
        m1 = Gx @ (vals * ax[:, None])
        inner = np.sum(m1 * psi * dxi[None, :], axis=1)
    return inner / ctx.g_norm2


def wo_inverse(p, F, g, s_grid, rules=None, ctx=None):
    """Reconstruction ``||g||^-2 iint F(x, xi) g_{x,xi}(-s) A(x) dx d|sigma|(xi)``.

    ``F`` is a TimeFreqFunction on the x/xi rule nodes, a callable
    ``F(x, xi)``, or a pair ``(Fx, Fxi)`` for a separable symbol.
    """
    ctx = ctx or window_context(p, g, rules)
    s = np.asarray(s_grid, dtype=float)
    c = _inverse_coefficients(ctx, F)
    r = ctx.rules
    vals = G_matrix(p, r.lam.nodes, -s).T @ (c * ctx.dens_lam * r.lam.weights)
    return SampledFunction1D(s, vals, "weight_A", meta={"rules": r.describe()})


class GaussianKernel:
    """``E_t = W_g^-1 exp(-t(lam^2 + mu^2))``, callable at any real s."""

    def __init__(self, p, t, g=default_window, rules=None, ctx=None):
        if not t > 0:
            raise DomainError("t must be positive")
        self.p = p
        self.t = float(t)
        self.ctx = ctx or window_context(p, g, rules)
        gauss = lambda v: np.exp(-self.t * np.asarray(v, float) ** 2)
        self._coef = _inverse_coefficients(self.ctx, (gauss, gauss))
        r = self.ctx.rules
        self._weighted = self._coef * self.ctx.dens_lam * r.lam.weights

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        flat = np.atleast_1d(s).ravel()
        vals = G_matrix(self.p, self.ctx.rules.lam.nodes, -flat).T @ self._weighted
        # imaginary part is quadrature noise for the real symbol
        return vals.real.reshape(s.shape)

    def sample(self, x_grid):
        x = np.asarray(x_grid, dtype=float)
        return SampledFunction1D(x, self(x), "weight_A", meta={"t": self.t})


def gaussian_kernel(p, g, t, x_grid, rules=None, ctx=None):
    """Samples of the Gaussian kernel ``E_t`` on ``x_grid``."""
    return GaussianKernel(p, t, g, rules, ctx).sample(x_grid)


@dataclass
class SandwichReport:
    t: float
    mu1_hat: float
    mu2_hat: float
    ratio_min: float
    ratio_max: float
    grid: np.ndarray

    def to_dict(self):
        return {
            "t": self.t,
            "mu1_hat": self.mu1_hat,
            "mu2_hat": self.mu2_hat,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "grid": np.asarray(self.grid).tolist(),
        }


def sandwich_ratio(p, x, values, t):
    """``E_t(x) sqrt(B(x)) exp(x^2/4t) 2^(2a+1) Gamma(a+1) t^(a+1)``."""
    x = np.asarray(x, dtype=float)
    log_pref = (2 * p.alpha + 1) * np.log(2.0) + gammaln(p.alpha + 1.0) + (p.alpha + 1.0) * np.log(t)
    return np.asarray(values, float) * np.sqrt(weight_B(p, x)) * np.exp(x * x / (4.0 * t) + log_pref)


def sandwich_check(p, E_t, t):
    """Two-sided Gaussian bound of ``E_t`` measured on its grid.

    Returns the extreme values of the normalised ratio and ``mu_hat =
    log(ratio extreme) / t``.

    Raises
    ------
    BoundViolation
        Some sample of ``E_t`` is not positive.
    """
    vals = np.asarray(E_t.values)
    if np.any(np.abs(vals.imag) > 1e-8 * np.max(np.abs(vals))):
        raise DomainError("E_t samples must be real")
    vals = vals.real
    if np.any(vals <= 0):
        i = int(np.argmin(vals))
        raise BoundViolation(f"E_t({E_t.grid[i]:.4g}) = {vals[i]:.3e} is not positive")
    ratio = sandwich_ratio(p, E_t.grid, vals, t)
    rmin, rmax = float(ratio.min()), float(ratio.max())
    return SandwichReport(
        t=float(t),
        mu1_hat=float(np.log(rmin) / t),
        mu2_hat=float(np.log(rmax) / t),
        ratio_min=rmin,
        ratio_max=rmax,
        grid=np.asarray(E_t.grid),
    )


def windowed_plancherel(p, f, g=default_window, rules=None, ctx=None):
    """Both sides of the windowed Plancherel identity.

    Returns
    -------
    lhs : float
        ``iint |W_g f(x, xi)|^2 A(x) dx d|sigma|(xi)`` on the x/xi rules.
    rhs : float
        ``||f||^2 ||g||^2`` in ``L^2(A)``.
    """
    ctx = ctx or window_context(p, g, rules)
    r = ctx.rules
    W = wo_transform(p, f, g, r.x.nodes, r.xi.nodes, ctx=ctx).values
    ax = weight_A(p, r.x.nodes) * r.x.weights
    dxi = plancherel_density(p, r.xi.nodes, r.eps).abs * r.xi.weights
    lhs = float(ax @ (np.abs(W) ** 2) @ dxi)
    s = r.s.nodes
    f_norm2 = float(np.sum(np.abs(np.asarray(f(s), dtype=complex)) ** 2 * weight_A(p, s) * r.s.weights))
    return lhs, f_norm2 * ctx.g_norm2
