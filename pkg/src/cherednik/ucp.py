"""Uncertainty-principle harness: regimes, Morgan threshold, norm certificates and fits.

Membership of a function in a weighted modulation space cannot be decided
from samples.  It is measured here as convergence of the truncated norm:
the norm is computed at radius R and 2R and flagged as growing when the two
differ by more than 5%.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .modspace import ModRules, mod_norm_1d, mod_norm_2d
from .sampled import SampledFunction1D, TimeFreqFunction
from .windowed import GaussianKernel, default_window, window_context, wo_transform

__all__ = [
    "REGIMES",
    "GROWTH_THRESHOLD",
    "UCPReport",
    "UCPRules",
    "HardyReport",
    "EnvelopeFit",
    "classify_regime",
    "morgan_threshold",
    "cowling_price_certify",
    "hardy_extremal_check",
    "gaussian_envelope_fit",
    "super_gaussian_envelope_fit",
]

REGIMES = ("vanishing", "extremal", "nonvanishing")
GROWTH_THRESHOLD = 0.05
CONJUGACY_TOL = 1e-12
# fits with r^2 below this are reported as not matching the envelope model
FIT_R2_THRESHOLD = 0.9999


def classify_regime(a, b, theorem="cowling-price", tol=1e-12):
    """Regime label from the product ``ab`` against 1/4.

    For Cowling-Price every ``ab >= 1/4`` is vanishing.  For Hardy ``ab > 1/4``
    is vanishing, ``ab = 1/4`` (within ``tol``) extremal.
    """
    ab = a * b
    if theorem == "hardy" and abs(ab - 0.25) <= tol:
        return "extremal"
    if ab >= 0.25 - (tol if theorem == "cowling-price" else -tol):
        return "vanishing"
    return "nonvanishing"


def morgan_threshold(a, b, alpha_exp, beta_exp):
    """Both sides of the Morgan condition ``(a al)^(1/al) (b be)^(1/be) > sin(pi (be - 1) / 2)^(1/be)``.

    Returns
    -------
    lhs, rhs : float
    vanishing : bool
        ``lhs > rhs``.
    """
    if not (a > 0 and b > 0):
        raise DomainError("a and b must be positive")
    if not alpha_exp > 2:
        raise DomainError("alpha_exp must exceed 2")
    if abs(1.0 / alpha_exp + 1.0 / beta_exp - 1.0) > CONJUGACY_TOL:
        raise DomainError("alpha_exp and beta_exp must be conjugate (1/alpha + 1/beta = 1)")
    lhs = (a * alpha_exp) ** (1.0 / alpha_exp) * (b * beta_exp) ** (1.0 / beta_exp)
    rhs = math.sin(0.5 * math.pi * (beta_exp - 1.0)) ** (1.0 / beta_exp)
    return lhs, rhs, lhs > rhs


@dataclass(frozen=True)
class UCPRules:
    """Radii for the two certificate norms; each is also run at twice the radius."""

    x_side: ModRules = field(default_factory=lambda: ModRules(radius=5.0, nodes=48))
    tf_side: ModRules = field(default_factory=lambda: ModRules(radius=4.0, nodes=40, margin=3.0))

    def describe(self):
        return {"x_side": self.x_side.describe(), "tf_side": self.tf_side.describe()}


@dataclass
class UCPReport:
    a: float
    b: float
    product_ab: float
    regime: str
    x_norm: float
    tf_norm: float
    growth_flags: dict
    notes: str = ""
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "a": self.a,
            "b": self.b,
            "product_ab": self.product_ab,
            "regime": self.regime,
            "x_norm": self.x_norm,
            "tf_norm": self.tf_norm,
            "growth_flags": dict(self.growth_flags),
            "notes": self.notes,
            "detail": self.detail,
        }


def _growing(v1, v2):
    if not (math.isfinite(v1) and math.isfinite(v2)):
        return True
    if v1 == 0.0:
        return v2 != 0.0
    return abs(v2 - v1) / abs(v1) > GROWTH_THRESHOLD


def _tf_norm(p, f, g, b, q_exp, m, mr, ctx):
    sig = mr.signal()
    t = sig.nodes
    W = wo_transform(p, f, g, t, t, ctx=ctx).values
    with np.errstate(over="ignore"):
        phi = np.exp(b * (t[:, None] ** 2 + t[None, :] ** 2)) * W
    return mod_norm_2d(TimeFreqFunction(t, t, phi), q_exp, q_exp, m, p, mr)


def cowling_price_certify(p, f, g=default_window, a=0.25, b=0.25, p_exp=2.0, q_exp=2.0, m=None,
                          rules=None, windowed_rules=None):
    """Truncated-norm certificate for the Cowling-Price hypotheses.

    Computes the ``M_m^p(R, A)`` norm of ``exp(a x^2) f`` and the
    ``M_m^q(R^2, A x sigma)`` norm of ``exp(b (lam^2 + mu^2)) W_g f``, each at
    radius R and 2R.  A growth flag is set when doubling the radius changes a
    norm by more than 5%.

    Parameters
    ----------
    f, g : callable
        Signal and window (vectorised).
    a, b : float
        Positive decay parameters.
    p_exp, q_exp : float
        Exponents; at least one must be finite.
    m : weight or None
        Used for both norms (4-d weights for the time-frequency side).
    """
    if not (a > 0 and b > 0):
        raise DomainError("a and b must be positive")
    if math.isinf(p_exp) and math.isinf(q_exp):
        raise DomainError("at least one of p_exp, q_exp must be finite")
    rules = rules or UCPRules()
    ctx = window_context(p, g, windowed_rules)
    fa = lambda x: np.exp(a * np.asarray(x, float) ** 2) * np.asarray(f(x), dtype=complex)

    x_vals = [mod_norm_1d(fa, p_exp, p_exp, m, p, r) for r in (rules.x_side, rules.x_side.doubled())]
    tf_vals = [_tf_norm(p, f, g, b, q_exp, m, r, ctx) for r in (rules.tf_side, rules.tf_side.doubled())]
    flags = {"x": _growing(*x_vals), "tf": _growing(*tf_vals)}
    regime = classify_regime(a, b, "cowling-price")
    notes = (
        f"ab = {a * b:.6g} {'>=' if a * b >= 0.25 else '<'} 1/4; "
        + ("the theorem forces f = 0 when both norms are finite" if regime == "vanishing"
           else "nonzero functions can satisfy both conditions")
    )
    return UCPReport(
        a=float(a),
        b=float(b),
        product_ab=float(a * b),
        regime=regime,
        x_norm=float(x_vals[-1]),
        tf_norm=float(tf_vals[-1]),
        growth_flags=flags,
        notes=notes,
        detail={
            "x_norms": [float(v) for v in x_vals],
            "tf_norms": [float(v) for v in tf_vals],
            "radii": {"x": [rules.x_side.radius, 2 * rules.x_side.radius],
                      "tf": [rules.tf_side.radius, 2 * rules.tf_side.radius]},
            "rules": rules.describe(),
        },
    )


@dataclass
class HardyReport:
    a: float
    t: float
    residual: float
    grid: np.ndarray
    values: np.ndarray
    target: np.ndarray

    def to_dict(self):
        return {
            "a": self.a,
            "t": self.t,
            "residual": self.residual,
            "grid": np.asarray(self.grid).tolist(),
            "ratio": (np.asarray(self.values).real / self.target).tolist(),
        }


def hardy_extremal_check(p, g=default_window, a=0.5, rules=None, grid=None, scale=1.0):
    """Compare ``W_g(C E_{1/4a})`` with ``C exp(-(lam^2 + mu^2) / 4a)``.

    Returns the sup relative residual over ``grid`` x ``grid`` (default
    ``linspace(-1, 1, 5)``); ``scale`` is the constant C.
    """
    if not a > 0:
        raise DomainError("a must be positive")
    t = 1.0 / (4.0 * a)
    grid = np.linspace(-1.0, 1.0, 5) if grid is None else np.asarray(grid, float)
    ctx = window_context(p, g, rules)
    E = GaussianKernel(p, t, ctx=ctx)
    f = lambda x: scale * E(x)
    W = wo_transform(p, f, g, grid, grid, ctx=ctx).values
    target = scale * np.exp(-t * (grid[:, None] ** 2 + grid[None, :] ** 2))
    resid = float(np.max(np.abs(W - target) / np.abs(target)))
    return HardyReport(a=float(a), t=t, residual=resid, grid=grid, values=W, target=target)


class EnvelopeFit(NamedTuple):
    a_hat: float
    c_hat: float
    r2: float

    @property
    def flagged(self):
        """True when the envelope model explains the log-samples poorly."""
        return self.r2 < FIT_R2_THRESHOLD


def _fit(samples, regressor, window):
    grid = np.asarray(samples.grid if isinstance(samples, SampledFunction1D) else samples[0], float)
    vals = np.asarray(samples.values if isinstance(samples, SampledFunction1D) else samples[1])
    lo, hi = window
    sel = (np.abs(grid) >= lo) & (np.abs(grid) <= hi)
    if sel.sum() < 3:
        raise DomainError("fewer than 3 samples inside the fit window")
    v = vals[sel]
    if np.iscomplexobj(v):
        if np.any(np.abs(v.imag) > 1e-8 * np.max(np.abs(v))):
            raise DomainError("samples must be real")
        v = v.real
    if np.any(v <= 0):
        raise DomainError("samples must be strictly positive in the fit window")
    y = np.log(v)
    X = np.column_stack([np.ones(sel.sum()), -regressor(grid[sel])])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return EnvelopeFit(a_hat=float(coef[1]), c_hat=float(np.exp(coef[0])), r2=r2)


def gaussian_envelope_fit(samples, window=(1.0, 3.0)):
    """Least-squares fit ``log f = log c - a x^2`` on ``lo <= |x| <= hi``.

    ``samples`` is a SampledFunction1D or a ``(grid, values)`` pair.
    """
    return _fit(samples, lambda x: x**2, window)


def super_gaussian_envelope_fit(samples, alpha_exp, window=(1.0, 3.0)):
    """As :func:`gaussian_envelope_fit` with regressor ``|x|^alpha_exp``."""
    if not alpha_exp > 0:
        raise DomainError("alpha_exp must be positive")
    return _fit(samples, lambda x: np.abs(x) ** alpha_exp, window)
