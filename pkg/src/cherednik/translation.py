"""Translation kernel K_{alpha,beta}(x, y, z) and the generalised translation.

For fixed (x, y, z) the function ``g(chi) = 1 - cx^2 - cy^2 - cz^2 + 2 cx cy cz
cos(chi)`` (``c* = cosh``) is decreasing on ``[0, pi]``, so ``g_+`` is
supported on ``[0, chi_star)`` with ``cos(chi_star) = (cx^2 + cy^2 + cz^2 - 1) /
(2 cx cy cz)``; the cut-off is computed in closed form rather than by a root
search.  Writing ``g = 2 cx cy cz (cos chi - cos chi_star)`` also keeps the
large hyperbolic factors out of the integrand.
"""

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, EvaluationError
from .measures import weight_A
from .quadrature import QuadratureRule, tanh_sinh

__all__ = [
    "kernel_K",
    "kernel_K_array",
    "kernel_constant",
    "translate",
    "translate_array",
    "shell_rule",
    "translation_mass",
    "DEFAULT_CHI_NODES",
    "DEFAULT_SHELL_NODES",
]

DEFAULT_CHI_NODES = 81
DEFAULT_SHELL_NODES = 41


def _check_params(p):
    if not p.alpha > p.beta:
        raise DomainError("the translation kernel needs alpha > beta (Gamma(alpha - beta) pole)")
    if not p.beta > -0.5:
        raise DomainError("the translation kernel needs beta > -1/2 (Gamma(beta + 1/2) pole)")


def kernel_constant(p):
    """log of M = Gamma(alpha + 1) / (sqrt(pi) Gamma(alpha - beta) Gamma(beta + 1/2))."""
    _check_params(p)
    return (
        gammaln(p.alpha + 1.0)
        - 0.5 * np.log(np.pi)
        - gammaln(p.alpha - p.beta)
        - gammaln(p.beta + 0.5)
    )


# narrower than the generic rule: at the small node counts used for shells
# the finer spacing matters more than the last 1e-17 near the ends
_T_MAX = 3.2


def _unit_tanh_sinh(n):
    """tanh-sinh nodes on [0, 1] with exact distances to both ends."""
    t = np.linspace(-_T_MAX, _T_MAX, n)
    h = t[1] - t[0]
    u = 0.5 * np.pi * np.sinh(t)
    e = np.exp(-2.0 * np.abs(u))
    # distance of the node to the nearer end, in units of the interval length
    near = e / (1.0 + e)
    w = 0.5 * np.pi * np.cosh(t) / np.cosh(u) ** 2 * h * 0.5
    to_hi = np.where(u > 0, near, 1.0 - near)
    to_lo = np.where(u > 0, 1.0 - near, near)
    keep = (to_hi > 0) & (to_lo > 0) & (w > 0)
    return to_lo[keep], to_hi[keep], w[keep]


def kernel_K_array(p, x, y, z, n_chi=DEFAULT_CHI_NODES, with_weight=False):
    """Vectorised kernel over broadcast arrays ``x, y, z``.

    Zero (exactly) off the open triangle region and wherever one of the
    arguments is 0.  With ``with_weight=True`` the product ``K * A(z)`` is
    returned instead, computed in log space so that large shells do not
    overflow.
    """
    log_m = kernel_constant(p)
    x, y, z = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (x, y, z)))
    ax, ay, az = np.abs(x), np.abs(y), np.abs(z)
    inside = (ax > 0) & (ay > 0) & (az > 0) & (np.abs(ax - ay) < az) & (az < ax + ay)
    out = np.zeros(x.shape, dtype=float)
    if not inside.any():
        return out
    X, Y, Z = x[inside], y[inside], z[inside]
    AX, AY, AZ = ax[inside], ay[inside], az[inside]
    cx, cy, cz = np.cosh(AX), np.cosh(AY), np.cosh(AZ)
    # sinh with sign, and log|sinh|
    sx, sy, sz = np.sinh(X), np.sinh(Y), np.sinh(Z)
    lsx, lsy, lsz = (_log_sinh(a) for a in (AX, AY, AZ))
    scale = 2.0 * cx * cy * cz
    cos_star = (cx * cx + cy * cy + cz * cz - 1.0) / scale
    cos_star = np.clip(cos_star, -1.0, 1.0)
    chi_star = np.arccos(cos_star)
    ab = p.alpha - p.beta - 1.0

    lo, hi, w = _unit_tanh_sinh(n_chi)
    chi = chi_star[:, None] * lo[None, :]
    dist = chi_star[:, None] * hi[None, :]
    # cos chi - cos chi_star = 2 sin((chi_star + chi)/2) sin((chi_star - chi)/2)
    gap = 2.0 * np.sin(0.5 * (chi_star[:, None] + chi)) * np.sin(0.5 * dist)
    cos_chi = np.cos(chi)
    sin_chi = np.sin(chi)

    def sigma(ca, cb, cc, sa, sb):
        return (ca[:, None] * cb[:, None] - cc[:, None] * cos_chi) / (sa[:, None] * sb[:, None])

    coth3 = (cx / sx) * (cy / sy) * (cz / sz)
    bracket = (
        1.0
        - sigma(cx, cy, cz, sx, sy)
        + sigma(cx, cz, cy, sx, sz)
        + sigma(cz, cy, cx, sz, sy)
        + (p.rho / (p.beta + 0.5)) * coth3[:, None] * sin_chi**2
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.power(gap, ab) * bracket * np.power(sin_chi, 2.0 * p.beta)
    integrand = np.where(gap > 0, integrand, 0.0)
    chi_int = np.sum(integrand * w[None, :], axis=1) * chi_star

    log_pref = log_m - 2.0 * p.alpha * (lsx + lsy + lsz) + ab * np.log(scale)
    if with_weight:
        log_pref = log_pref + (2 * p.alpha + 1) * lsz + (2 * p.beta + 1) * _log_cosh(AZ)
    vals = np.exp(log_pref) * chi_int
    if not np.all(np.isfinite(vals)):
        raise EvaluationError("translation kernel produced a non-finite value")
    out[inside] = vals
    return out


def _log_sinh(a):
    return a + np.log(-np.expm1(-2.0 * a)) - np.log(2.0)


def _log_cosh(a):
    return a + np.log1p(np.exp(-2.0 * a)) - np.log(2.0)


def kernel_K(p, x, y, z, rule_chi=None):
    """Kernel value K_{alpha,beta}(x, y, z) at one point.

    Parameters
    ----------
    rule_chi : int or QuadratureRule, optional
        Number of tanh-sinh nodes on the chi support (or a rule whose node
        count is reused).  Default 81.

    Raises
    ------
    DomainError
        ``alpha == beta``, ``beta == -1/2`` or one of x, y, z is 0.
    """
    if x == 0 or y == 0 or z == 0:
        raise DomainError("kernel_K needs x, y, z all nonzero")
    n = _chi_nodes(rule_chi)
    return float(kernel_K_array(p, x, y, z, n_chi=n))


def _chi_nodes(rule_chi):
    if rule_chi is None:
        return DEFAULT_CHI_NODES
    if isinstance(rule_chi, QuadratureRule):
        return len(rule_chi)
    return int(rule_chi)


def shell_rule(x, y, n=DEFAULT_SHELL_NODES):
    """Nodes and weights covering both shells ``+-(||x|-|y||, |x|+|y|)``.

    Each shell gets its own tanh-sinh panel whose ends coincide with the
    shell ends, where the integrand is only Hoelder continuous.
    """
    lo = abs(abs(x) - abs(y))
    hi = abs(x) + abs(y)
    z, w = tanh_sinh(lo, hi, n)
    return np.concatenate([-z[::-1], z]), np.concatenate([w[::-1], w])


def _shell_arrays(x, y, n):
    """Vectorised :func:`shell_rule` for broadcast arrays; shape (..., 2m)."""
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    lo = np.abs(np.abs(x) - np.abs(y))[..., None]
    hi = (np.abs(x) + np.abs(y))[..., None]
    u_lo, u_hi, u_w = _unit_tanh_sinh(n)
    width = hi - lo
    zpos = lo + width * u_lo
    # the upper end is approached from below; measure from hi for accuracy
    zpos = np.where(u_hi < 0.5, hi - width * u_hi, zpos)
    wpos = width * u_w
    z = np.concatenate([-zpos, zpos], axis=-1)
    w = np.concatenate([wpos, wpos], axis=-1)
    return z, w


def translate_array(p, f, x, y, n_shell=DEFAULT_SHELL_NODES, n_chi=DEFAULT_CHI_NODES):
    """tau_x f(y) for broadcast arrays ``x, y``.

    ``f`` must accept arrays.  The delta cases are exact: ``f(y)`` where
    ``x == 0`` and ``f(x)`` where ``y == 0``.
    """
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    out = np.empty(x.shape, dtype=complex)
    zx, zy = x == 0, y == 0
    if zx.any():
        out[zx] = np.asarray(f(y[zx]), dtype=complex)
    only_y = zy & ~zx
    if only_y.any():
        out[only_y] = np.asarray(f(x[only_y]), dtype=complex)
    gen = ~(zx | zy)
    if gen.any():
        xs, ys = x[gen], y[gen]
        z, w = _shell_arrays(xs, ys, n_shell)
        kw = kernel_K_array(p, xs[:, None], ys[:, None], z, n_chi=n_chi, with_weight=True)
        fz = np.asarray(f(z), dtype=complex)
        out[gen] = np.sum(fz * kw * w, axis=1)
    return out


def translate(p, f, x, y, rule_z=None, n_chi=DEFAULT_CHI_NODES):
    """Generalised translation tau_x f(y) at a single point.

    ``rule_z`` sets the node count per shell (int or QuadratureRule).
    """
    n = DEFAULT_SHELL_NODES if rule_z is None else _chi_nodes(rule_z)
    return complex(translate_array(p, f, x, y, n_shell=n, n_chi=n_chi))


def translation_mass(p, x, y, n_shell=DEFAULT_SHELL_NODES, n_chi=DEFAULT_CHI_NODES):
    """Total mass ``int K(x, y, z) A(z) dz`` (reported only, never assumed)."""
    return float(translate_array(p, lambda z: np.ones_like(z), x, y, n_shell, n_chi).real)
