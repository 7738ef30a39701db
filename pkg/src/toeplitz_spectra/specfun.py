"""Special functions underlying the spectral-function formulas.

Everything here is elementary gamma-function material, but assembled so that
the rest of the library can work in log space: the hyperbolic weight
``vartheta`` carries factors like ``e^(pi*eta)`` that overflow double
precision long before the quantities of interest do, so the primitives expose
logarithmic forms alongside the plain values.

The lower incomplete gamma function is evaluated for complex argument by two
independent routes (power series and a Lentz continued fraction through the
upper function), switching at ``|s| = alpha + 1``; the two routes cross-check
each other in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, loggamma

from .errors import ConvergenceError, DomainError

__all__ = [
    "WeightParameter",
    "weight_value",
    "ln_gamma",
    "ln_abs_gamma_sq",
    "lower_incomplete_gamma",
    "gamma_star",
    "vartheta",
    "ln_vartheta_sq",
    "gamma_ratio_elliptic",
    "ln_gamma_ratio_elliptic",
]

_EPS = np.finfo(float).eps
_TINY = 1e-300


@dataclass(frozen=True)
class WeightParameter:
    """Weight exponent of the Bergman-space measure; must exceed -1."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= -1.0:
            raise DomainError(f"weight parameter must be a finite number > -1, got {self.value}")
        object.__setattr__(self, "value", v)

    def __float__(self):
        return self.value


def weight_value(lam) -> float:
    """Coerce a ``WeightParameter`` or plain number to a validated float."""
    if isinstance(lam, WeightParameter):
        return lam.value
    return WeightParameter(lam).value


def ln_gamma(x):
    """ln Gamma(x) for real x > 0 (scalars or arrays)."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"ln_gamma requires finite x > 0, got {x}")
    out = gammaln(arr)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def ln_abs_gamma_sq(a, eta):
    """ln |Gamma(a + i*eta)|^2 for real a > 0.

    Evaluated in log space so callers can keep exponentially large or small
    prefactors symbolic; accurate for |eta| well beyond the point where
    |Gamma|^2 itself underflows.
    """
    a_arr = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a_arr)) or np.any(a_arr <= 0.0):
        raise DomainError(f"ln_abs_gamma_sq requires a > 0, got a={a}")
    eta_arr = np.asarray(eta, dtype=float)
    if not np.all(np.isfinite(eta_arr)):
        raise DomainError(f"ln_abs_gamma_sq requires finite eta, got {eta}")
    out = 2.0 * np.real(loggamma(a_arr + 1j * eta_arr))
    if np.isscalar(a) and np.isscalar(eta):
        return float(out)
    return out


def _lower_series(alpha, s, max_terms):
    """gamma(alpha, s) / (s^alpha e^{-s}) summed as sum_k s^k / (alpha...(alpha+k))."""
    term = np.full(s.shape, 1.0 / alpha, dtype=complex)
    total = term.copy()
    for k in range(1, max_terms + 1):
        term *= s / (alpha + k)
        total += term
        if np.all(np.abs(term) <= 0.5 * _EPS * np.abs(total)):
            return total
    raise ConvergenceError("incomplete gamma power series did not converge", iterations=max_terms)


def _upper_cf(alpha, s, max_iter=20000):
    """Gamma(alpha, s) / (s^alpha e^{-s}) by the Lentz continued fraction.

    Valid off the negative real axis; used here only for Re s >= 0 with
    |s| >= alpha + 1 where convergence is fast.
    """
    b = s + 1.0 - alpha
    c = np.full(s.shape, 1.0 / _TINY, dtype=complex)
    d = np.where(np.abs(b) < _TINY, _TINY, b).astype(complex)
    d = 1.0 / d
    h = d.copy()
    done = np.zeros(s.shape, dtype=bool)
    for i in range(1, max_iter + 1):
        an = -i * (i - alpha)
        b = b + 2.0
        d = an * d + b
        d[np.abs(d) < _TINY] = _TINY
        c = b + an / c
        c[np.abs(c) < _TINY] = _TINY
        d = 1.0 / d
        delta = d * c
        h = np.where(done, h, h * delta)
        done |= np.abs(delta - 1.0) < 2.0 * _EPS
        if np.all(done):
            return h
    raise ConvergenceError("incomplete gamma continued fraction did not converge", iterations=max_iter)


def lower_incomplete_gamma(alpha, s):
    """Lower incomplete gamma gamma(alpha, s) = int_0^s t^(alpha-1) e^(-t) dt.

    Accepts complex ``s`` (scalar or array).  Power series for
    |s| < alpha + 1 or Re s < 0, continued fraction through the upper
    function otherwise.  Points with Re s < 0 are only accepted up to
    |s| <= alpha + 40, beyond which double precision cannot represent the
    cancellation in either route.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise DomainError(f"lower_incomplete_gamma requires alpha > 0, got {alpha}")
    s_in = s
    s = np.asarray(s, dtype=complex)
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    if not np.all(np.isfinite(s)):
        raise DomainError("lower_incomplete_gamma requires finite s")
    bad = (s.real < 0.0) & (np.abs(s) > alpha + 40.0)
    if np.any(bad):
        raise DomainError(
            f"s outside supported domain (Re s >= 0 or |s| <= alpha+40): s={s[bad][0]}"
        )

    out = np.zeros(s.shape, dtype=complex)
    zero = s == 0.0
    use_series = ((np.abs(s) < alpha + 1.0) | (s.real < 0.0)) & ~zero
    use_cf = ~use_series & ~zero

    if np.any(use_series):
        ss = s[use_series]
        budget = int(8 * (alpha + 41.0)) + 200
        total = _lower_series(alpha, ss, budget)
        out[use_series] = np.exp(alpha * np.log(ss) - ss) * total
    if np.any(use_cf):
        ss = s[use_cf]
        h = _upper_cf(alpha, ss)
        upper = np.exp(alpha * np.log(ss) - ss) * h
        out[use_cf] = math.gamma(alpha) - upper

    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(s_in))


def gamma_star(alpha, rho):
    """Modified incomplete gamma gamma*(alpha, rho) = rho^(-alpha) gamma(alpha, rho) / Gamma(alpha).

    Entire in ``rho``; the removable point rho = 0 evaluates to
    1/Gamma(alpha+1).  Small and left-half-plane arguments go through the
    entire power series e^(-rho) sum_n rho^n / Gamma(alpha+n+1) (never the
    quotient), large right-half-plane arguments through the continued
    fraction of the quotient form.
    """
    alpha = float(alpha)
    if not math.isfinite(alpha) or alpha <= 0.0:
        raise DomainError(f"gamma_star requires alpha > 0, got {alpha}")
    rho_in = rho
    rho = np.asarray(rho, dtype=complex)
    scalar = rho.ndim == 0
    rho = np.atleast_1d(rho)
    if not np.all(np.isfinite(rho)):
        raise DomainError("gamma_star requires finite rho")

    out = np.empty(rho.shape, dtype=complex)
    use_series = (np.abs(rho) < alpha + 1.0) | (rho.real <= 0.0)
    use_cf = ~use_series

    if np.any(use_series):
        rr = rho[use_series]
        term = np.full(rr.shape, math.exp(-gammaln(alpha + 1.0)), dtype=complex)
        total = term.copy()
        budget = int(8 * np.max(np.abs(rr))) + 200
        for n in range(1, budget + 1):
            term *= rr / (alpha + n)
            total += term
            if np.all(np.abs(term) <= 0.5 * _EPS * np.abs(total)):
                break
        else:
            raise ConvergenceError("gamma_star power series did not converge", iterations=budget)
        out[use_series] = np.exp(-rr) * total
    if np.any(use_cf):
        rr = rho[use_cf]
        h = _upper_cf(alpha, rr)
        # rho^(-alpha) (1 - Q(alpha, rho)) with the rho^alpha factors combined
        # analytically so nothing overflows.
        out[use_cf] = np.exp(-alpha * np.log(rr)) - np.exp(-rr - gammaln(alpha)) * h

    if scalar:
        return complex(out[0])
    return out.reshape(np.shape(rho_in))


def ln_vartheta_sq(lam, eta):
    """ln of the squared hyperbolic-transform weight.

    vartheta(lam, eta)^2 = |Gamma((lam+2)/2 + i eta)|^2 e^(pi eta) / (pi Gamma(lam+2)).
    The log form stays finite for |eta| far beyond where the weight itself
    under- or overflows.
    """
    lam = weight_value(lam)
    a = 0.5 * (lam + 2.0)
    out = ln_abs_gamma_sq(a, eta) + np.pi * np.asarray(eta, dtype=float) - math.log(math.pi) - gammaln(lam + 2.0)
    return float(out) if np.isscalar(eta) else out


def vartheta(lam, eta):
    """Hyperbolic-transform weight vartheta_lam(eta), from its gamma-function form.

    May underflow to 0 for large negative ``eta``; use :func:`ln_vartheta_sq`
    when the weight enters products with exponentially large factors.
    """
    return np.exp(0.5 * ln_vartheta_sq(lam, eta))


def ln_gamma_ratio_elliptic(k, lam):
    """ln of Gamma(k+lam+2) / (Gamma(k+1) Gamma(lam+1))."""
    lam = weight_value(lam)
    k_arr = np.asarray(k)
    if np.any(k_arr < 0) or not np.all(np.equal(np.mod(k_arr, 1), 0)):
        raise DomainError(f"k must be a nonnegative integer, got {k}")
    kf = k_arr.astype(float)
    out = gammaln(kf + lam + 2.0) - gammaln(kf + 1.0) - gammaln(lam + 1.0)
    return float(out) if np.isscalar(k) else out


def gamma_ratio_elliptic(k, lam):
    """Prefactor Gamma(k+lam+2) / (Gamma(k+1) Gamma(lam+1)), computed in log space."""
    return np.exp(ln_gamma_ratio_elliptic(k, lam))
