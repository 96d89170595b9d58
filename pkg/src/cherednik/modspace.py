"""Classical STFT and weighted modulation-space norms over the weights A and sigma.

The STFT is the Euclidean one, ``V_g f(x, xi) = int f(t) conj(g(t - x))
exp(-2 pi i xi t) dt``, with the Gaussian window ``exp(-pi t^2)`` (or its
two-variable product).  Only the outer measures carry the Jacobi-Cherednik
structure.

Axis rules split at 0 so that the kinks of ``A`` and ``|sigma|`` at the origin
fall on a panel edge.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, DomainError, EvaluationError
from .measures import DEFAULT_EPS, plancherel_density, weight_A
from .quadrature import QuadratureRule, build_rule, gauss_legendre
from .sampled import TimeFreqFunction

__all__ = [
    "WeightFunction",
    "ModRules",
    "ModNormRecord",
    "gaussian_window",
    "gaussian_window_2d",
    "split_rule",
    "stft",
    "stft_matrix",
    "lemma_closed_form",
    "mod_norm_1d",
    "mod_norm_2d",
    "box_norm_bound_check",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 40**4
# relative size of the integrand on the outermost nodes above which the
# truncation is reported as visible
TAIL_FLAG_LEVEL = 1e-6


def gaussian_window(t):
    return np.exp(-np.pi * np.asarray(t, dtype=float) ** 2)


def gaussian_window_2d(t1, t2):
    return gaussian_window(t1) * gaussian_window(t2)


class WeightFunction:
    """Weight ``m >= 1``; checked on every array it is evaluated on.

    Parameters
    ----------
    fn : callable or float
        Vectorised callable of 2 (or 4) coordinates, or a constant.
    """

    def __init__(self, fn=1.0):
        self.constant = None if callable(fn) else float(fn)
        self.fn = fn

    def __call__(self, *coords):
        if self.constant is not None:
            vals = np.full(np.broadcast(*coords).shape, self.constant)
        else:
            vals = np.asarray(self.fn(*coords), dtype=float)
            vals = np.broadcast_to(vals, np.broadcast(*coords).shape)
        if np.any(vals < 1.0):
            raise DomainError("weight m must satisfy m >= 1")
        return vals

    def __repr__(self):
        return f"WeightFunction({self.constant if self.constant is not None else self.fn!r})"


def _as_weight(m):
    if m is None:
        return WeightFunction(1.0)
    return m if isinstance(m, WeightFunction) else WeightFunction(m)


def split_rule(radius, n):
    """Gauss-Legendre rule with ``n // 2`` nodes on each of ``[-R, 0]``, ``[0, R]``."""
    half = max(2, int(n) // 2)
    xl, wl = gauss_legendre(-radius, 0.0, half)
    xr, wr = gauss_legendre(0.0, radius, half)
    return QuadratureRule(
        nodes=np.concatenate([xl, xr]),
        weights=np.concatenate([wl, wr]),
        truncation_radius=float(radius),
        points_per_unit=max(1, int(round(half / radius))) if radius >= 1 else half,
    )


@dataclass(frozen=True)
class ModRules:
    """Truncation and node counts for the mixed norms.

    ``radius`` truncates every time-frequency axis, each carrying ``nodes``
    points.  The signal variable is integrated over ``radius + margin``
    where the window has died out, with ``signal_ppu`` points per unit
    (0 picks ``ceil(pi * radius) + 12``, enough to resolve the phase
    ``exp(-2 pi i xi t)`` at ``|xi| = radius``).
    """

    radius: float = 6.0
    nodes: int = 48
    margin: float = 3.5
    signal_ppu: int = 0
    eps: float = DEFAULT_EPS
    budget: int = DEFAULT_BUDGET

    def axis(self):
        return split_rule(self.radius, self.nodes)

    def signal(self):
        ppu = self.signal_ppu or int(math.ceil(math.pi * self.radius)) + 12
        return build_rule(self.radius + self.margin, ppu)

    def doubled(self):
        return ModRules(2 * self.radius, self.nodes, self.margin, self.signal_ppu, self.eps, self.budget)

    def describe(self):
        return {
            "radius": self.radius,
            "nodes": self.nodes,
            "margin": self.margin,
            "signal_ppu": self.signal_ppu,
            "eps": self.eps,
            "budget": self.budget,
        }


@dataclass
class ModNormRecord:
    value: float
    p_exp: float
    q_exp: float
    radii: dict
    node_counts: dict
    tail_flags: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "exponents": {"p": _exp_json(self.p_exp), "q": _exp_json(self.q_exp)},
            "radii": self.radii,
            "node_counts": self.node_counts,
            "value": self.value,
            "tail_flags": self.tail_flags,
        }


def _exp_json(e):
    return "inf" if math.isinf(e) else e


def _check_exponent(e, name):
    e = float(e)
    if not (e >= 1.0):
        raise DomainError(f"{name} must be >= 1 or inf")
    return e


# -- STFT ----------------------------------------------------------------


def stft(f, g, point, rule=None):
    """STFT ``V_g f`` at a single time-frequency point.

    Parameters
    ----------
    f, g : callable
        One-variable functions for ``point = (x, xi)``; two-variable ones for
        ``point = ((x1, xi1), (x2, xi2))``, where ``(x1, xi1)`` is the shift and
        ``(x2, xi2)`` the frequency.
    rule : QuadratureRule, optional
        Rule for the window's support, recentred at the shift.  Default
        radius 6 with 24 points per unit, enough for windows decaying like
        ``exp(-pi t^2)``.
    """
    rule = rule or build_rule(6.0, 24)
    u, w = rule.nodes, rule.weights
    first = point[0]
    if np.ndim(first) == 0:
        x, xi = float(point[0]), float(point[1])
        t = u + x
        vals = np.asarray(f(t), dtype=complex) * np.conj(np.asarray(g(t - x), dtype=complex))
        return complex(np.sum(vals * np.exp(-2j * np.pi * xi * t) * w))
    (x1, xi1), (x2, xi2) = point
    t1 = (u + x1)[:, None]
    t2 = (u + xi1)[None, :]
    vals = np.asarray(f(t1, t2), dtype=complex) * np.conj(np.asarray(g(t1 - x1, t2 - xi1), dtype=complex))
    phase = np.exp(-2j * np.pi * (x2 * t1 + xi2 * t2))
    return complex(np.sum(vals * phase * w[:, None] * w[None, :]))


def lemma_closed_form(x1, xi1, x2, xi2):
    """Closed-form STFT of ``f = 1`` with the bivariate Gaussian window."""
    return np.exp(-2j * np.pi * (x1 * x2 + xi1 * xi2)) * np.exp(-np.pi * (x2**2 + xi2**2))


def stft_matrix(f_vals, t_rule, x, xi, g=gaussian_window):
    """``V[i, j] = V_g f(x_i, xi_j)`` from samples of f on ``t_rule``."""
    t = t_rule.nodes
    fw = np.asarray(f_vals, dtype=complex) * t_rule.weights
    win = np.conj(np.asarray(g(t[None, :] - np.asarray(x)[:, None]), dtype=complex))
    phase = np.exp(-2j * np.pi * np.asarray(xi)[:, None] * t[None, :])
    return (win * fw[None, :]) @ phase.T


# -- mixed norms -----------------------------------------------------------


def _lp(vals, w, e, axis):
    """Weighted L^e norm along ``axis`` (sup over the grid for e = inf)."""
    if math.isinf(e):
        return np.max(vals, axis=axis)
    return np.sum(vals**e * w, axis=axis) ** (1.0 / e)


def _mixed(Vm, w_inner, w_outer, p_exp, q_exp):
    """``|| || Vm ||_{L^p(inner)} ||_{L^q(outer)}`` for ``Vm[inner, outer] >= 0``."""
    inner = _lp(Vm, w_inner[:, None], p_exp, axis=0)
    return float(_lp(inner, w_outer, q_exp, axis=0))


def _check_finite_grid(arr, labels):
    bad = ~np.isfinite(arr)
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        where = ", ".join(f"{n}={g[i]!r}" for n, g, i in zip(labels[0], labels[1], idx))
        raise EvaluationError(f"non-finite value in the norm integrand at ({where})")


def _integrand(Vm, e):
    """``Vm^e``, or ``Vm`` itself for a supremum."""
    return Vm if math.isinf(e) else Vm**e


def _edge_flag(Vm, axis_len):
    """True when the integrand on the outermost nodes is not negligible."""
    top = np.max(Vm)
    if top == 0:
        return {"x": False, "xi": False}
    flags = {}
    for name, ax in (("x", 0), ("xi", 1)):
        edge = np.take(Vm, [0, axis_len[ax] - 1], axis=ax)
        flags[name] = bool(np.max(edge) > TAIL_FLAG_LEVEL * top)
    return flags


def _measure_weights(p, rule, kind, eps):
    if kind == "A":
        return weight_A(p, rule.nodes) * rule.weights
    if kind == "sigma":
        return plancherel_density(p, rule.nodes, eps).abs * rule.weights
    if kind == "lebesgue":
        return np.asarray(rule.weights)
    raise DomainError(f"unknown measure {kind!r}")


def mod_norm_1d(f, p_exp, q_exp, m=None, p=None, rules=None, measures=("A", "A"), record=False):
    """Truncated ``M_m^{p,q}(R, A)`` norm of ``f``.

    ``(int (int |V_g f|^p m^p A(x) dx)^(q/p) A(xi) dxi)^(1/q)`` with the
    Gaussian window ``exp(-pi t^2)``; infinite exponents become grid suprema.

    Parameters
    ----------
    f : callable
        Vectorised function of one variable.
    p_exp, q_exp : float
        Exponents in ``[1, inf]``.
    m : WeightFunction, callable of (x, xi), float or None
        Weight, at least 1 (None means 1).
    p : JCParams
    rules : ModRules, optional
    measures : pair of {"A", "sigma", "lebesgue"}
        Measures of the inner (x) and outer (xi) integrals.
    record : bool
        Return a :class:`ModNormRecord` instead of the bare value.
    """
    p_exp = _check_exponent(p_exp, "p_exp")
    q_exp = _check_exponent(q_exp, "q_exp")
    if p is None and measures != ("lebesgue", "lebesgue"):
        raise DomainError("JCParams required for the weighted measures")
    rules = rules or ModRules()
    m = _as_weight(m)
    ax = rules.axis()
    sig = rules.signal()
    fv = np.asarray(f(sig.nodes), dtype=complex)
    V = stft_matrix(fv, sig, ax.nodes, ax.nodes)
    X, XI = np.meshgrid(ax.nodes, ax.nodes, indexing="ij")
    Vm = np.abs(V) * m(X, XI)
    _check_finite_grid(Vm, (("x", "xi"), (ax.nodes, ax.nodes)))
    wi = _measure_weights(p, ax, measures[0], rules.eps)
    wo = _measure_weights(p, ax, measures[1], rules.eps)
    value = _mixed(Vm, wi, wo, p_exp, q_exp)
    if not record:
        return value
    return ModNormRecord(
        value=value,
        p_exp=p_exp,
        q_exp=q_exp,
        radii={"x": rules.radius, "xi": rules.radius, "signal": sig.truncation_radius},
        node_counts={"x": len(ax), "xi": len(ax), "signal": len(sig)},
        tail_flags=_edge_flag(_integrand(Vm, p_exp) * (wi / ax.weights)[:, None] * (wo / ax.weights)[None, :],
                              Vm.shape),
    )


def _samples_2d(F, sig):
    t = sig.nodes
    if isinstance(F, TimeFreqFunction):
        if not (np.array_equal(F.x_grid, t) and np.array_equal(F.xi_grid, t)):
            raise DomainError("TimeFreqFunction must be sampled on the signal rule nodes")
        return F.values
    T1, T2 = np.meshgrid(t, t, indexing="ij")
    return np.asarray(F(T1, T2), dtype=complex)


def mod_norm_2d(F, p_exp, q_exp, m=None, p=None, rules=None, record=False):
    """Truncated ``M_m^{p,q}(R^2, A x sigma)`` norm.

    The STFT uses the window ``exp(-pi (t1^2 + t2^2))``; the inner integral
    runs over the shift ``(x1, xi1)`` against ``A(x1) dx1 d|sigma|(xi1)``, the
    outer over the frequency ``(x2, xi2)`` against ``A(x2) dx2 d|sigma|(xi2)``.

    Parameters
    ----------
    F : callable, TimeFreqFunction or pair of callables
        ``F(t1, t2)`` vectorised; a TimeFreqFunction sampled on the signal
        rule nodes of both axes; or ``(F1, F2)`` for ``F1(t1) F2(t2)``.  A
        pair with a constant weight takes the separable fast path: the norm
        is the product of two one-variable mixed norms.
    m : WeightFunction, callable of (x1, xi1, x2, xi2), float or None

    Raises
    ------
    BudgetError
        The 4-d tensor grid exceeds ``rules.budget`` evaluations.
    """
    p_exp = _check_exponent(p_exp, "p_exp")
    q_exp = _check_exponent(q_exp, "q_exp")
    if p is None:
        raise DomainError("JCParams required")
    rules = rules or ModRules(radius=4.0, nodes=40)
    m = _as_weight(m)
    ax = rules.axis()
    sig = rules.signal()
    n = len(ax)
    if isinstance(F, tuple) and m.constant is not None:
        n1 = mod_norm_1d(F[0], p_exp, q_exp, None, p, rules, measures=("A", "A"))
        n2 = mod_norm_1d(F[1], p_exp, q_exp, None, p, rules, measures=("sigma", "sigma"))
        value = m.constant * n1 * n2
        evaluations = 2 * n * n
        flags = {}
    else:
        evaluations = n**4
        if evaluations > rules.budget:
            raise BudgetError(f"4-d grid needs {evaluations} evaluations, budget is {rules.budget}")
        if isinstance(F, tuple):
            f1 = np.asarray(F[0](sig.nodes), dtype=complex)
            f2 = np.asarray(F[1](sig.nodes), dtype=complex)
            vals = f1[:, None] * f2[None, :]
        else:
            vals = _samples_2d(F, sig)
        t, w = sig.nodes, sig.weights
        # B[a, b, i] = conj(h(t_i - x_a)) exp(-2 pi i x_b t_i) w_i, same for both axes
        B = (
            np.conj(gaussian_window(t[None, None, :] - ax.nodes[:, None, None]))
            * np.exp(-2j * np.pi * ax.nodes[None, :, None] * t[None, None, :])
            * w[None, None, :]
        )
        # V[x1, xi1, x2, xi2] = sum_ij B[x1, x2, i] F[i, j] B[xi1, xi2, j]
        tmp = np.tensordot(B, vals, axes=([2], [0]))  # (x1, x2, j)
        V = np.tensordot(tmp, B, axes=([2], [2]))  # (x1, x2, xi1, xi2)
        V = np.transpose(V, (0, 2, 1, 3))
        c = ax.nodes
        Vm = np.abs(V) * m(c[:, None, None, None], c[None, :, None, None], c[None, None, :, None], c[None, None, None, :])
        _check_finite_grid(Vm, (("x1", "xi1", "x2", "xi2"), (c, c, c, c)))
        wA = _measure_weights(p, ax, "A", rules.eps)
        wS = _measure_weights(p, ax, "sigma", rules.eps)
        w2 = (wA[:, None] * wS[None, :]).ravel()
        value = _mixed(Vm.reshape(n * n, n * n), w2, w2, p_exp, q_exp)
        dens = (wA / ax.weights)[:, None] * (wS / ax.weights)[None, :]
        integrand = _integrand(Vm, p_exp) * dens[:, :, None, None] * dens[None, None, :, :]
        top = np.max(integrand)
        flags = {}
        if top > 0:
            for k, name in enumerate(("x1", "xi1", "x2", "xi2")):
                edge = np.take(integrand, [0, n - 1], axis=k)
                flags[name] = bool(np.max(edge) > TAIL_FLAG_LEVEL * top)
    if not record:
        return value
    return ModNormRecord(
        value=value,
        p_exp=p_exp,
        q_exp=q_exp,
        radii={"axes": rules.radius, "signal": sig.truncation_radius},
        node_counts={"per_axis": n, "signal": len(sig), "evaluations": evaluations},
        tail_flags=flags,
    )


def box_norm_bound_check(p_exp, rho1, rho2, sigma, m=None, nodes=24):
    """Restricted-box norm of ``f = 1`` against the bound ``(rho1 rho2)^(2/p)``.

    The norm is ``(int_box |V_g f|^p m^-p)^(1/p)`` over the 4-d box
    ``x1, x2 in [rho1 s, rho1 (s+1)]``, ``xi1, xi2 in [rho2 s, rho2 (s+1)]``
    with Lebesgue measure, using the closed-form STFT.

    Returns
    -------
    lhs, rhs : float
    """
    p_exp = float(p_exp)
    if not (1.0 <= p_exp < math.inf):
        raise DomainError("p_exp must be finite and >= 1")
    if not (rho1 > 0 and rho2 > 0 and sigma > 0):
        raise DomainError("rho1, rho2, sigma must be positive")
    m = _as_weight(m)
    xs, wx = gauss_legendre(rho1 * sigma, rho1 * (sigma + 1), nodes)
    ys, wy = gauss_legendre(rho2 * sigma, rho2 * (sigma + 1), nodes)
    X1, XI1, X2, XI2 = np.meshgrid(xs, ys, xs, ys, indexing="ij")
    V = np.abs(lemma_closed_form(X1, XI1, X2, XI2))
    W = wx[:, None, None, None] * wy[None, :, None, None] * wx[None, None, :, None] * wy[None, None, None, :]
    integrand = (V / m(X1, XI1, X2, XI2)) ** p_exp
    lhs = float(np.sum(integrand * W) ** (1.0 / p_exp))
    rhs = float((rho1 * rho2) ** (2.0 / p_exp))
    return lhs, rhs
