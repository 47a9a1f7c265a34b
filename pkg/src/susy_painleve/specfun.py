"""Complex-capable special-function kernel used by every other module.

The confluent/generalized hypergeometric machinery (complex arguments,
Kummer reflection, asymptotic branch, parameter derivatives, divergence
diagnosis) is implemented here because no stdlib or scipy routine covers
complex arguments.  Gamma-family functions and the real modified Bessel
pair are delegated to scipy, which already meets the accuracy contract.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.special as sps

from .errors import (
    DegenerateDenominator,
    DivergentSeriesError,
    DomainError,
    NonConvergence,
    PoleError,
    UnsupportedClosedForm,
)

# Relative size below which a series term counts as converged; the stop
# rule requires CONSECUTIVE_SMALL such terms in a row to guard against
# oscillatory cancellation.
TERM_TOL = 1e-16
CONSECUTIVE_SMALL = 3
MAX_TERMS = 700

# |z| beyond which the 1F1 power series is abandoned for the asymptotic
# expansion; both branches are required to agree inside the cross-check
# band (25, 35).
ASYMPTOTIC_RADIUS = 30.0
BAND_LOW = 25.0
ASYMPTOTIC_TOL = 1e-11

SQRT_PI = math.sqrt(math.pi)
_INT_TOL = 1e-12


@dataclass
class SeriesResult:
    """Value of a truncated series together with convergence metadata."""

    value: complex
    terms_used: int
    truncation_estimate: float


def is_nonpositive_integer(z, tol=_INT_TOL):
    """True when z sits (within tol) on {0, -1, -2, ...}."""
    z = complex(z)
    if abs(z.imag) > tol:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def gamma(z):
    """Complex gamma function; raises PoleError on non-positive integers."""
    if is_nonpositive_integer(z):
        raise PoleError(f"gamma pole at z={z}")
    if isinstance(z, complex):
        return complex(sps.gamma(z))
    return float(sps.gamma(float(z)))


def rgamma(z):
    """1/gamma(z); exactly zero at the poles of gamma."""
    if is_nonpositive_integer(z):
        return 0.0 if not isinstance(z, complex) else 0j
    return sps.rgamma(complex(z)) if isinstance(z, complex) else sps.rgamma(z)


def digamma(z):
    """Logarithmic derivative of gamma, complex capable."""
    if is_nonpositive_integer(z):
        raise PoleError(f"digamma pole at z={z}")
    return complex(sps.digamma(complex(z)))


def _sum_with_stop(term_iter, max_terms=MAX_TERMS):
    """Kahan-style accumulation with the consecutive-small-term stop rule.

    Returns (total, terms, last_rel, cancel_rel) where cancel_rel estimates
    the roundoff left behind by cancellation: eps * max|term| / |total|.
    """
    total = 0.0 + 0.0j
    comp = 0.0 + 0.0j
    small = 0
    last = math.inf
    peak = 0.0
    n = 0
    for term in term_iter:
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        peak = max(peak, abs(term))
        n += 1
        scale = abs(total) if total != 0 else 1.0
        last = abs(term) / scale
        small = small + 1 if last < TERM_TOL else 0
        if small >= CONSECUTIVE_SMALL:
            break
        if n >= max_terms:
            break
    scale = abs(total) if total != 0 else 1.0
    cancel = 2.2e-16 * peak / scale
    return total, n, last, cancel


def _kummer_series_terms(a, b, z):
    term = 1.0 + 0.0j
    n = 0
    while True:
        yield term
        term = term * (a + n) / (b + n) * z / (n + 1)
        n += 1


def _kummer_series(a, b, z):
    if is_nonpositive_integer(a):
        # Terminating polynomial: sum exactly -a + 1 terms.
        m = int(round(-complex(a).real))
        term = 1.0 + 0.0j
        total = term
        for n in range(m):
            term = term * (a + n) / (b + n) * z / (n + 1)
            total += term
        return SeriesResult(total, m + 1, 0.0)
    total, n, last, cancel = _sum_with_stop(_kummer_series_terms(a, b, z))
    if last >= 1e-12:
        raise NonConvergence(
            f"1F1 series stalled after {n} terms at a={a}, b={b}, z={z}"
        )
    return SeriesResult(total, n, max(last, cancel))


def _optimal_truncation(term_iter, max_terms=MAX_TERMS):
    """Sum an asymptotic series until terms stop shrinking."""
    total = 0.0 + 0.0j
    best_est = math.inf
    prev = math.inf
    n = 0
    for term in term_iter:
        mag = abs(term)
        if mag > prev:  # divergence sets in; drop this term and stop
            best_est = prev
            break
        total += term
        prev = mag
        n += 1
        if abs(total) > 0 and mag / abs(total) < TERM_TOL:
            best_est = mag
            break
        if n >= max_terms:
            best_est = mag
            break
    scale = abs(total) if total != 0 else 1.0
    return total, n, best_est / scale


def _asymptotic_2f0_terms(p, q, w):
    """Terms of sum_n (p)_n (q)_n w^n / n! (asymptotic, generally divergent)."""
    term = 1.0 + 0.0j
    n = 0
    while True:
        yield term
        term = term * (p + n) * (q + n) * w / (n + 1)
        n += 1


def _kummer_asymptotic(a, b, z):
    """Full large-|z| expansion of 1F1; optimal truncation on both pieces."""
    z = complex(z)
    s1, n1, e1 = _optimal_truncation(_asymptotic_2f0_terms(b - a, 1 - a, 1.0 / z))
    s2, n2, e2 = _optimal_truncation(_asymptotic_2f0_terms(a, a - b + 1, -1.0 / z))
    sign = 1.0 if z.imag >= 0 else -1.0
    gb = complex(sps.gamma(complex(b)))
    expo = gb * sps.rgamma(complex(a)) * cmath.exp(z) * z ** (a - b) * s1
    alg = gb * sps.rgamma(complex(b - a)) * cmath.exp(sign * 1j * cmath.pi * a) * z ** (-a) * s2
    value = expo + alg
    scale = abs(value) if value != 0 else 1.0
    est = (abs(expo) * e1 + abs(alg) * e2) / scale
    return SeriesResult(value, n1 + n2, est)


def kummer_m(a, b, z):
    """Confluent hypergeometric (Kummer) function 1F1(a, b; z), complex.

    Power series inside |z| <= 30 (with the Kummer transformation
    1F1(a,b;z) = e^z 1F1(b-a,b;-z) applied for Re z < 0 to avoid
    cancellation), full asymptotic expansion beyond.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if is_nonpositive_integer(b):
        raise DegenerateDenominator(f"1F1 lower parameter b={b}")
    real_input = abs(a.imag) < _INT_TOL and abs(b.imag) < _INT_TOL and abs(z.imag) < _INT_TOL

    def _finish(res):
        if real_input:
            res.value = res.value.real
        return res

    if z == 0:
        return SeriesResult(1.0 if real_input else 1.0 + 0j, 1, 0.0)
    if is_nonpositive_integer(a):
        return _finish(_kummer_series(a, b, z))
    if is_nonpositive_integer(b - a):
        # Kummer transform terminates: 1F1 = e^z * polynomial.
        res = _kummer_series(b - a, b, -z)
        return _finish(SeriesResult(cmath.exp(z) * res.value, res.terms_used, res.truncation_estimate))

    r = abs(z)
    if r <= BAND_LOW:
        return _finish(_series_branch(a, b, z))
    res = _kummer_asymptotic(a, b, z)
    if res.truncation_estimate <= ASYMPTOTIC_TOL:
        return _finish(res)
    # Asymptotics degraded (piece cancellation near the Stokes lines);
    # compare against the power series and keep the better estimate.
    if r <= 45.0:
        alt = _series_branch(a, b, z)
        if alt.truncation_estimate < res.truncation_estimate:
            res = alt
    if res.truncation_estimate > 1e-7:
        raise NonConvergence(
            f"1F1 evaluation unreliable at a={a}, b={b}, z={z} "
            f"(estimate {res.truncation_estimate:.2e})"
        )
    return _finish(res)


def _series_branch(a, b, z):
    if z.real < 0:
        res = _kummer_series(b - a, b, -z)
        return SeriesResult(cmath.exp(z) * res.value, res.terms_used, res.truncation_estimate)
    return _kummer_series(a, b, z)


def kummer_m_jet(a, b, z):
    """(1F1, d/dz 1F1) using the contiguous derivative (a/b) 1F1(a+1,b+1;z)."""
    f = kummer_m(a, b, z).value
    df = a / b * kummer_m(a + 1, b + 1, z).value
    return f, df


def kummer_da(a, b, z):
    """Partial derivative of 1F1(a,b;z) with respect to its first parameter.

    Term-wise differentiation introduces digamma factors:
    d/da (a)_n = (a)_n [psi(a+n) - psi(a)].  Series region only.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if is_nonpositive_integer(b):
        raise DegenerateDenominator(f"1F1 lower parameter b={b}")
    if abs(z) > ASYMPTOTIC_RADIUS:
        raise NonConvergence("parameter derivative of 1F1 only in the series region")
    if is_nonpositive_integer(a):
        # Differentiate term-wise; (a)_n d(psi) form breaks at the pole of
        # psi(a), but d/da (a)_n is still finite: use product-rule sum.
        total = 0j
        poch = 1.0 + 0j
        dpoch = 0j
        zfac = 1.0 + 0j
        bpoch = 1.0 + 0j
        fact = 1.0
        for n in range(MAX_TERMS):
            if n > 0:
                dpoch = dpoch * (a + n - 1) + poch
                poch = poch * (a + n - 1)
                bpoch = bpoch * (b + n - 1)
                zfac *= z
                fact *= n
            term = dpoch * zfac / (bpoch * fact)
            total += term
            if n > 4 and abs(poch) == 0 and abs(dpoch * zfac / (bpoch * fact)) < TERM_TOL * max(1.0, abs(total)):
                break
        return total
    psi_a = digamma(a)

    def terms():
        poch = 1.0 + 0j
        coeff = 1.0 + 0j
        n = 0
        while True:
            yield coeff * poch * (digamma(a + n) - psi_a)
            coeff = coeff * z / ((b + n) * (n + 1))
            poch = poch * (a + n)
            n += 1

    total, n, last, _cancel = _sum_with_stop(terms())
    return total


def hyper_pfq(p_params, q_params, z):
    """Generalized hypergeometric pFq via its defining series.

    Convergent for p <= q (all z); for 2F0 with z != 0 the series is
    divergent and a DivergentSeriesError carrying the optimal-truncation
    partial sum is raised.
    """
    ps = [complex(p) for p in p_params]
    qs = [complex(q) for q in q_params]
    z = complex(z)
    for q in qs:
        if is_nonpositive_integer(q):
            raise DegenerateDenominator(f"pFq lower parameter {q}")
    if z == 0:
        return SeriesResult(1.0 + 0j, 1, 0.0)
    terminating = any(is_nonpositive_integer(p) for p in ps)

    def terms():
        term = 1.0 + 0.0j
        n = 0
        while True:
            yield term
            num = 1.0 + 0.0j
            for p in ps:
                num *= p + n
            den = 1.0 + 0.0j
            for q in qs:
                den *= q + n
            term = term * num / den * z / (n + 1)
            n += 1

    if len(ps) > len(qs) + 1 and not terminating:
        total, n, est = _optimal_truncation(terms())
        raise DivergentSeriesError(
            f"{len(ps)}F{len(qs)} diverges for z={z}; optimal truncation after {n} terms",
            partial_sum=total,
            terms_used=n,
            estimate=est,
        )
    if terminating:
        stop = max(
            int(round(-p.real)) for p in ps if is_nonpositive_integer(p)
        )
        total = 0j
        for i, term in enumerate(terms()):
            total += term
            if i >= stop:
                break
        return SeriesResult(total, stop + 1, 0.0)
    total, n, last, cancel = _sum_with_stop(terms())
    if last >= 1e-12:
        raise NonConvergence(f"pFq series stalled after {n} terms")
    return SeriesResult(total, n, max(last, cancel))


def hyper_2f0_diagnosis(a1, a2, z):
    """Optimal-truncation diagnosis of the (divergent) 2F0 series."""
    try:
        res = hyper_pfq([a1, a2], [], z)
    except DivergentSeriesError as exc:
        return SeriesResult(exc.partial_sum, exc.terms_used, exc.estimate)
    return res


def _erfi_series(x):
    # erfi(x) = (2/sqrt(pi)) sum_n x^(2n+1) / (n! (2n+1)); positive terms.
    a = x
    total = x
    x2 = x * x
    n = 0
    while True:
        a = a * x2 / (n + 1)
        term = a / (2 * n + 3)
        total += term
        n += 1
        if term < TERM_TOL * total or n > MAX_TERMS:
            break
    return 2.0 / SQRT_PI * total


def _erfi_asymptotic(x):
    # erfi(x) ~ e^{x^2}/(x sqrt(pi)) * sum_n (2n-1)!!/(2x^2)^n
    total, n, est = _optimal_truncation(_double_factorial_terms(x))
    return math.exp(x * x) / (x * SQRT_PI) * total.real


def _double_factorial_terms(x):
    t = 1.0 + 0j
    n = 0
    while True:
        yield t
        t = t * (2 * n + 1) / (2 * x * x)
        n += 1


def erf_like(kind, x):
    """Error-function family: erf/erfc from libm, erfi from its odd series."""
    x = float(x)
    if kind == "erf":
        return math.erf(x)
    if kind == "erfc":
        return math.erfc(x)
    if kind == "erfi":
        if x < 0:
            return -erf_like("erfi", -x)
        if x <= 6.0:
            return _erfi_series(x)
        return _erfi_asymptotic(x)
    raise UnsupportedClosedForm(f"unknown error-function kind {kind!r}")


def orthopoly(kind, n, alpha, x):
    """Hermite H_n or generalized Laguerre L_n^(alpha) by 3-term recurrence."""
    if n < 0:
        raise DomainError("polynomial degree must be non-negative")
    if kind == "hermite":
        h0, h1 = 1.0, 2.0 * x
        if n == 0:
            return h0
        for m in range(1, n):
            h0, h1 = h1, 2.0 * x * h1 - 2.0 * m * h0
        return h1
    if kind == "laguerre":
        l0, l1 = 1.0, 1.0 + alpha - x
        if n == 0:
            return l0
        for m in range(1, n):
            l0, l1 = l1, ((2 * m + 1 + alpha - x) * l1 - (m + alpha) * l0) / (m + 1)
        return l1
    raise UnsupportedClosedForm(f"unknown polynomial kind {kind!r}")


def bessel(kind, nu, x):
    """Modified Bessel functions I_nu and K_nu for real order and argument."""
    x = float(x)
    if kind == "I":
        if x < 0:
            raise DomainError("I_nu requires x >= 0")
        return float(sps.iv(nu, x))
    if kind == "K":
        if x <= 0:
            raise DomainError("K_nu requires x > 0")
        return float(sps.kv(nu, x))
    raise UnsupportedClosedForm(f"unknown Bessel kind {kind!r}")


def parabolic_cylinder_e(nu, x):
    """Parabolic cylinder function D_nu(x) via its two-1F1 combination."""
    x = float(x)
    z = x * x / 2.0
    even = kummer_m(-nu / 2.0, 0.5, z).value
    odd = kummer_m((1.0 - nu) / 2.0, 1.5, z).value
    pref = 2.0 ** (nu / 2.0) * math.exp(-x * x / 4.0) * SQRT_PI
    comb = rgamma((1.0 - nu) / 2.0) * even - math.sqrt(2.0) * x * rgamma(-nu / 2.0) * odd
    comb = complex(comb)
    return pref * comb.real if abs(comb.imag) < 1e-14 * max(1.0, abs(comb.real)) else pref * comb


def tricomi_u_asymptotic(a, b, w):
    """Large-|w| expansion U(a,b,w) ~ w^-a 2F0(a, a-b+1; -1/w), complex w.

    Single-piece (recessive) expansion: free of the cancellation that
    limits the 1F1 asymptotics near the anti-Stokes lines.
    """
    a, b, w = complex(a), complex(b), complex(w)
    s, n, est = _optimal_truncation(_asymptotic_2f0_terms(a, a - b + 1, -1.0 / w))
    value = w ** (-a) * s
    return SeriesResult(value, n, est)


def _tricomi_laplace(a, c, x):
    # U(a,c,x) = 1/Gamma(a) int_0^inf e^{-x t} t^{a-1} (1+t)^{c-a-1} dt, Re a > 0.
    a, c, x = float(a), float(c), float(x)

    def integrand(t):
        return math.exp(-x * t + (a - 1.0) * math.log(t) + (c - a - 1.0) * math.log1p(t))

    val, err = scipy.integrate.quad(integrand, 0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=400)
    return val / float(sps.gamma(a))


def tricomi_u(a, c, x):
    """Tricomi confluent hypergeometric U(a, c; x) for x > 0.

    Standard two-solution combination away from integer c; at integer c
    (the logarithmic case needed by the coherent-state measure) the
    Laplace integral representation is used, which requires Re a > 0.
    """
    if float(np.real(x)) <= 0:
        raise DomainError("tricomi_u requires x > 0")
    ac = complex(a)
    cc = complex(c)
    if is_nonpositive_integer(ac):
        # Terminating polynomial case: U(-n, c, x) = (-1)^n n! L_n^(c-1)(x).
        n = int(round(-ac.real))
        return (-1.0) ** n * math.factorial(n) * orthopoly("laguerre", n, float(np.real(c)) - 1.0, float(np.real(x)))
    c_int = abs(cc.imag) < _INT_TOL and abs(cc.real - round(cc.real)) < 1e-9
    if c_int:
        if ac.real <= 0 or abs(ac.imag) > _INT_TOL:
            raise PoleError(
                f"tricomi_u at integer c={c} needs Re a > 0 real for the integral route"
            )
        return _tricomi_laplace(ac.real, cc.real, float(np.real(x)))
    x = complex(x)
    term1 = gamma(1 - cc) / gamma(ac - cc + 1) * kummer_m(ac, cc, x).value
    term2 = gamma(cc - 1) / gamma(ac) * x ** (1 - cc) * kummer_m(ac - cc + 1, 2 - cc, x).value
    out = term1 + term2
    if abs(out.imag) < 1e-14 * max(1.0, abs(out.real)) and abs(complex(a).imag) < _INT_TOL:
        return out.real
    return out
