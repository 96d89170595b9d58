"""Weights A and B, the c-function and the Plancherel density.

Gamma values are taken in log space (``scipy.special.loggamma``) because the
c-function mixes Gamma factors of very different size.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .errors import DomainError, EvaluationError

__all__ = [
    "weight_A",
    "weight_B",
    "harish_chandra_C",
    "plancherel_density",
    "PlancherelDensityValue",
    "DEFAULT_EPS",
    "plancherel_scale",
]

DEFAULT_EPS = 1e-4


def _scalar_or_array(out):
    return float(out) if np.ndim(out) == 0 else out


def weight_A(p, x):
    """``(sinh|x|)^(2 alpha + 1) (cosh|x|)^(2 beta + 1)``; even, zero at 0."""
    ax = np.abs(np.asarray(x, dtype=float))
    safe = np.where(ax == 0.0, 1.0, ax)
    with np.errstate(over="raise"):
        try:
            # log form keeps large |x| from overflowing early
            out = np.where(
                ax == 0.0,
                0.0,
                np.exp((2 * p.alpha + 1) * _log_sinh(safe) + (2 * p.beta + 1) * _log_cosh(safe)),
            )
        except FloatingPointError:
            raise EvaluationError(f"A overflows for |x| up to {ax.max()}") from None
    return _scalar_or_array(out)


def weight_B(p, x):
    """``(sinh|x|/|x|)^(2 alpha + 1) (cosh|x|)^(2 beta + 1)`` with ``B(0) = 1``.

    ``A(x) = |x|^(2 alpha + 1) B(x)`` and ``B >= 1``.
    """
    ax = np.abs(np.asarray(x, dtype=float))
    safe = np.where(ax == 0.0, 1.0, ax)
    with np.errstate(over="raise"):
        try:
            log_b = (2 * p.alpha + 1) * (_log_sinh(safe) - np.log(safe)) + (
                2 * p.beta + 1
            ) * _log_cosh(safe)
            out = np.where(ax == 0.0, 1.0, np.exp(log_b))
        except FloatingPointError:
            raise EvaluationError(f"B overflows for |x| up to {ax.max()}") from None
    return _scalar_or_array(out)


def _log_sinh(x):
    # log sinh x = x + log(1 - e^{-2x}) - log 2, stable for large x
    return x + np.log(-np.expm1(-2.0 * x)) - np.log(2.0)


def _log_cosh(x):
    return x + np.log1p(np.exp(-2.0 * x)) - np.log(2.0)


def _log_C(p, lam):
    lam = np.asarray(lam, dtype=complex)
    il = 1j * lam
    return (
        (p.rho - il) * np.log(2.0)
        + loggamma(p.alpha + 1.0)
        + loggamma(il)
        - loggamma((p.rho + il) / 2.0)
        - loggamma((p.alpha - p.beta + 1.0 + il) / 2.0)
    )


def harish_chandra_C(p, lam):
    """Harish-Chandra c-function C_{alpha,beta}(lambda).

    ``2^(rho - i lam) Gamma(alpha + 1) Gamma(i lam) /
    (Gamma((rho + i lam)/2) Gamma((alpha - beta + 1 + i lam)/2))``

    Raises
    ------
    DomainError
        ``i lam`` sits on a pole of ``Gamma(i lam)`` (this includes lam = 0).
    """
    lam_arr = np.asarray(lam, dtype=complex)
    il = 1j * lam_arr
    pole = (np.abs(il.imag) < 1e-300) & (il.real <= 0) & (il.real == np.round(il.real))
    if np.any(pole):
        raise DomainError("Gamma(i*lambda) has a pole; lambda in i*N_0 is excluded")
    out = np.exp(_log_C(p, lam_arr))
    return complex(out) if out.ndim == 0 else out


def plancherel_scale(p):
    """Normalisation factor ``2^(2 rho)`` applied to the spectral density.

    With ``A = sinh^(2a+1) cosh^(2b+1)`` (no factors of 2) and the c-function
    above, ``(1 - rho/(i lam)) dlam / (8 pi |C|^2)`` under-weights the inverse
    by exactly ``2^(2 rho)``; for ``rho = 0`` (the Fourier case) it is 1.
    """
    return 2.0 ** (2.0 * p.rho)


@dataclass(frozen=True)
class PlancherelDensityValue:
    """Signed density ``raw`` of sigma and its modulus ``abs`` (density of |sigma|)."""

    raw: complex
    abs: float


def _density_raw(p, lam):
    lam = np.asarray(lam, dtype=float)
    il = 1j * lam
    inv_c2 = np.exp(-2.0 * _log_C(p, lam).real)
    return plancherel_scale(p) * (1.0 - p.rho / il) * inv_c2 / (8.0 * np.pi)


def plancherel_density(p, lam, eps=DEFAULT_EPS):
    """Density of d sigma at real ``lam``.

    For ``|lam| < eps`` the value at ``sign(lam) * eps`` is returned (the pole
    of ``Gamma(i lam)`` cancels the ``1/lam`` of ``1 - rho/(i lam)``, so the
    true density is finite at 0).  ``lam == 0`` uses ``+eps``.

    Returns
    -------
    PlancherelDensityValue
        Scalar fields for scalar ``lam``; arrays for array ``lam``.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    lam = np.asarray(lam, dtype=float)
    sgn = np.where(lam < 0, -1.0, 1.0)
    clamped = np.where(np.abs(lam) < eps, sgn * eps, lam)
    raw = _density_raw(p, clamped)
    if lam.ndim == 0:
        raw = complex(raw)
        return PlancherelDensityValue(raw=raw, abs=abs(raw))
    return PlancherelDensityValue(raw=raw, abs=np.abs(raw))
