"""Gauss hypergeometric series, Jacobi functions and Opdam eigenfunctions.

All array routines broadcast their arguments the way numpy ufuncs do, so a
whole (lambda, x) grid can be evaluated in one call.

The Gauss function is only needed along the ray ``z = -sinh(x)**2``.  That
ray is pulled into ``[0, 1)`` with the Pfaff transformation and, close to
``w = 1``, a connection formula re-expands the function around ``1 - w``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma

from .errors import ConvergenceError, DomainError, EvaluationError

__all__ = [
    "JCParams",
    "gauss_2f1",
    "hyp2f1",
    "jacobi_phi",
    "opdam_G",
    "cherednik_apply",
]

MAX_TERMS = 4000
# below this distance from an integer, c - a - b is treated as degenerate
_DEGENERATE_GAP = 1e-4
_DEGENERATE_SHIFT = 1e-3


@dataclass(frozen=True)
class JCParams:
    """Parameter pair (alpha, beta) of the Jacobi-Cherednik operator.

    ``rho = alpha + beta + 1`` is derived.  Construction rejects pairs that
    violate ``alpha >= beta >= -1/2`` or ``alpha > -1/2``.
    """

    alpha: float
    beta: float
    rho: float = field(init=False)

    def __post_init__(self):
        a, b = float(self.alpha), float(self.beta)
        if not (np.isfinite(a) and np.isfinite(b)):
            raise DomainError(f"alpha and beta must be finite, got ({a}, {b})")
        if not (a >= b >= -0.5):
            raise DomainError(f"need alpha >= beta >= -1/2, got alpha={a}, beta={b}")
        if not a > -0.5:
            raise DomainError(f"need alpha > -1/2, got alpha={a}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "rho", a + b + 1.0)
        assert self.rho > 0

    def shifted(self):
        """Parameters (alpha + 1, beta + 1), used by the G formula."""
        return JCParams(self.alpha + 1.0, self.beta + 1.0)

    def as_dict(self):
        return {"alpha": self.alpha, "beta": self.beta, "rho": self.rho}


def _is_nonpos_int(v):
    v = np.asarray(v, dtype=complex)
    re = v.real
    return (v.imag == 0) & (re <= 0) & (re == np.round(re))


def _rgamma_ratio(num, den):
    """prod Gamma(num) / prod Gamma(den), zero where a denominator has a pole."""
    out = 0j
    pole = False
    for d in den:
        pole = pole | _is_nonpos_int(d)
    for n in num:
        out = out + loggamma(np.where(_is_nonpos_int(n), 0.5, n))
    for d in den:
        out = out - loggamma(np.where(_is_nonpos_int(d), 0.5, d))
    return np.where(pole, 0.0, np.exp(out))


def _series(a, b, c, z, tol, max_terms=MAX_TERMS):
    """Raw power series of 2F1, summed until every element has converged."""
    a, b, c, z = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, z)))
    term = np.ones(a.shape, dtype=complex)
    total = np.ones(a.shape, dtype=complex)
    active = np.ones(a.shape, dtype=bool)
    quiet = np.zeros(a.shape, dtype=int)
    for n in range(max_terms):
        if not active.any():
            return total
        idx = np.nonzero(active)
        term[idx] = term[idx] * (a[idx] + n) * (b[idx] + n) / ((c[idx] + n) * (n + 1)) * z[idx]
        total[idx] += term[idx]
        small = np.abs(term[idx]) <= tol * np.maximum(1.0, np.abs(total[idx]))
        # two consecutive small terms guard against a lucky near-zero term
        quiet[idx] = np.where(small, quiet[idx] + 1, 0)
        active[idx] = quiet[idx] < 2
    if active.any():
        raise ConvergenceError(
            f"2F1 series did not converge in {max_terms} terms", partial=total
        )
    return total


def _pfaff_core(a, b, c, w, cosh2, tol):
    """(1 - z)^-a 2F1(a, c - b; c; w) with w = z/(z - 1) in [0, 1).

    ``cosh2`` is 1 - z, passed separately so ``1 - w = 1/cosh2`` keeps full
    relative precision when w is close to 1.
    """
    bp = c - b
    pre = np.power(cosh2, -a)
    out = np.empty(np.broadcast(a, bp, c, w).shape, dtype=complex)
    a, bp, c, w, cosh2 = np.broadcast_arrays(a, bp, c, w, cosh2)

    terminating = _is_nonpos_int(a) | _is_nonpos_int(bp)
    # size of the largest term of the direct series, roughly exp(2 sqrt(|ab| w))
    strain = np.abs(a * bp) * w.real
    direct = terminating | (w.real <= 0.5) & (strain <= 12.0) | (w.real <= 0.25)
    if direct.any():
        out[direct] = _series(a[direct], bp[direct], c[direct], w[direct], tol)

    rest = ~direct
    if rest.any():
        a_r, b_r, c_r, w_r = a[rest], bp[rest], c[rest], w[rest]
        one_minus = 1.0 / cosh2[rest]
        s = c_r - a_r - b_r
        gap = np.abs(s - np.round(s.real))
        degenerate = gap < _DEGENERATE_GAP
        vals = np.empty(a_r.shape, dtype=complex)
        ok = ~degenerate
        if ok.any():
            vals[ok] = _connection_om(a_r[ok], b_r[ok], c_r[ok], one_minus[ok], tol)
        if degenerate.any():
            # symmetric parameter shifts cancel the odd orders; Richardson over
            # two shift sizes removes the d^2 term
            def shifted(d):
                args = (a_r[degenerate], c_r[degenerate], one_minus[degenerate])
                hi = _connection_om(args[0], b_r[degenerate] + d, args[1], args[2], tol)
                lo = _connection_om(args[0], b_r[degenerate] - d, args[1], args[2], tol)
                return 0.5 * (hi + lo)

            d = _DEGENERATE_SHIFT
            vals[degenerate] = (4.0 * shifted(d) - shifted(2 * d)) / 3.0
        out[rest] = vals
    return pre * out


def _connection_om(a, b, c, one_minus_w, tol):
    s = c - a - b
    t1 = _rgamma_ratio((c, s), (c - a, c - b)) * _series(a, b, 1.0 - s, one_minus_w, tol)
    t2 = (
        np.power(one_minus_w.astype(complex), s)
        * _rgamma_ratio((c, -s), (a, b))
        * _series(c - a, c - b, 1.0 + s, one_minus_w, tol)
    )
    return t1 + t2


def hyp2f1(a, b, c, z, tol=1e-15):
    """Vectorised Gauss hypergeometric function 2F1(a, b; c; z).

    Parameters
    ----------
    a, b, c : complex or array_like
        Series parameters; ``c`` must avoid the non-positive integers.
    z : complex or array_like
        Argument.  Supported region: ``|z| <= 1/2`` or ``Re z <= 0`` with
        ``Im z == 0``; the negative real axis is the case the library needs.
    tol : float
        Per-term relative stopping tolerance of every series involved.

    Returns
    -------
    ndarray of complex
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    a, b, c, z = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, z)))
    if _is_nonpos_int(c).any():
        raise DomainError("c is a non-positive integer (pole of 2F1)")
    out = np.ones(a.shape, dtype=complex)
    trivial = (z == 0) | (a == 0) | (b == 0)
    near = ~trivial & (np.abs(z) <= 0.5)
    neg = ~trivial & ~near & (z.imag == 0) & (z.real < 0)
    other = ~(trivial | near | neg)
    if other.any():
        raise DomainError("2F1 argument outside the supported region (|z| <= 1/2 or z < 0)")
    if near.any():
        out[near] = _series(a[near], b[near], c[near], z[near], tol)
    if neg.any():
        zn = z[neg].real
        cosh2 = 1.0 - zn
        w = (zn / (zn - 1.0)).astype(complex)
        out[neg] = _pfaff_core(a[neg], b[neg], c[neg], w, cosh2, tol)
    if not np.all(np.isfinite(out)):
        raise EvaluationError("2F1 produced a non-finite value")
    return out


def gauss_2f1(a, b, c, z, tol=1e-14):
    """Scalar 2F1(a, b; c; z) with absolute error of order ``tol``.

    Raises
    ------
    DomainError
        ``c`` at a pole, ``tol <= 0`` or ``z`` outside the supported region.
    ConvergenceError
        The series did not settle; ``err.partial`` holds the estimate.
    """
    return complex(hyp2f1(a, b, c, z, tol=tol))


def _phi(alpha, beta, lam, x):
    rho = alpha + beta + 1.0
    lam = np.asarray(lam, dtype=complex)
    x = np.abs(np.asarray(x, dtype=float))
    a = (rho + 1j * lam) / 2.0
    b = (rho - 1j * lam) / 2.0
    c = alpha + 1.0
    a, b, x = np.broadcast_arrays(a, b, x)
    sh = np.sinh(x)
    z = -(sh * sh)
    out = np.ones(a.shape, dtype=complex)
    nz = x != 0
    if nz.any():
        # Pfaff form evaluated directly, 1 - z = cosh^2 x
        ch = np.cosh(x[nz])
        w = np.tanh(x[nz]) ** 2
        small = np.abs(z[nz]) <= 0.5
        vals = np.empty(w.shape, dtype=complex)
        if small.any():
            vals[small] = _series(a[nz][small], b[nz][small], c, z[nz][small], 1e-15)
        big = ~small
        if big.any():
            vals[big] = _pfaff_core(a[nz][big], b[nz][big], np.full(big.sum(), c, dtype=complex),
                                    w[big].astype(complex), ch[big] ** 2, 1e-15)
        out[nz] = vals
    return out


def jacobi_phi(p, lam, x):
    """Jacobi function phi_lambda^{(alpha, beta)}(x).

    ``2F1((rho + i lam)/2, (rho - i lam)/2; alpha + 1; -sinh^2 x)``.  Even in
    ``x`` and in ``lam``.  Broadcasts over ``lam`` and ``x``; returns a
    Python complex for scalar input.
    """
    out = _phi(p.alpha, p.beta, lam, x)
    return complex(out) if out.ndim == 0 else out


def opdam_G(p, lam, x):
    """Opdam hypergeometric function G_lambda^{(alpha, beta)}(x).

    Uses the derivative-free form
    ``phi^{a,b}_lam(x) + (rho + i lam)/(4(alpha + 1)) sinh(2x) phi^{a+1,b+1}_lam(x)``,
    so ``G_lam(0) == 1`` exactly.
    """
    lam = np.asarray(lam, dtype=complex)
    x = np.asarray(x, dtype=float)
    even = _phi(p.alpha, p.beta, lam, x)
    odd = _phi(p.alpha + 1.0, p.beta + 1.0, lam, x)
    out = even + (p.rho + 1j * lam) / (4.0 * (p.alpha + 1.0)) * np.sinh(2.0 * x) * odd
    if not np.all(np.isfinite(out)):
        raise EvaluationError("G produced a non-finite value")
    return complex(out) if out.ndim == 0 else out


def cherednik_apply(p, f, x, h=1e-3):
    """Apply the Jacobi-Cherednik operator T_{alpha,beta} to ``f`` at ``x``.

    The derivative is a five-point central difference (error O(h^4)); the
    reflection terms use ``f(x)`` and ``f(-x)`` exactly.

    Parameters
    ----------
    p : JCParams
    f : callable
        Vectorised or scalar function of a real argument.
    x : float
        Evaluation point, nonzero (``coth`` has a pole at 0).
    h : float
        Finite-difference step.
    """
    x = float(x)
    if x == 0.0:
        raise DomainError("T is evaluated away from x = 0; approach 0 on a grid instead")
    if h <= 0:
        raise DomainError("finite-difference step must be positive")
    stencil = np.array([x - 2 * h, x - h, x + h, x + 2 * h])
    fs = np.asarray([complex(f(s)) for s in stencil])
    deriv = (fs[0] - 8.0 * fs[1] + 8.0 * fs[2] - fs[3]) / (12.0 * h)
    fx, fmx = complex(f(x)), complex(f(-x))
    coef = (2 * p.alpha + 1) / np.tanh(x) + (2 * p.beta + 1) * np.tanh(x)
    return complex(deriv + coef * (fx - fmx) / 2.0 - p.rho * fmx)
