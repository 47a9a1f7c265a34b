"""Coherent states on the two-ladder Hilbert space of the reduced algebra.

The spectrum is E_n = E0 + n (infinite ladder, subspace 'iso') plus
eps_j = eps0 + j, j = 0..k-1 (finite ladder, subspace 'new'), with the
third-order ladder operator acting through the square-root coefficients
of the number-operator factorization.  Measure checks never evaluate a
Meijer G symbolically; both densities enter as Mellin convolutions of
e^{-t} with a Bessel-K kernel (or an elementary kernel).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.integrate

from .errors import DivergentSeriesError, DomainError, NegativeParameter, QuadratureFailure
from .specfun import bessel as bessel_fn
from .specfun import gamma, hyper_2f0_diagnosis, hyper_pfq, is_nonpositive_integer

_TAIL = 1e-16
_MAX_N = 4000


@dataclass(frozen=True)
class SpectrumSpec:
    """Two-ladder spectrum: E_n = E0 + n and eps_j = eps0 + j (j < k)."""

    epsilon0: float
    k: int
    E0: float = 0.5

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("new ladder needs k >= 1")

    @property
    def gap(self):
        """A = E0 - eps0, the offset between the two ladder bottoms."""
        return self.E0 - self.epsilon0

    def new_levels(self):
        return [self.epsilon0 + j for j in range(self.k)]


@dataclass(frozen=True)
class CoherentStateSpec:
    subspace: str
    method: str
    z: complex
    spectrum: SpectrumSpec
    truncation: int | None = None

    def __post_init__(self):
        if self.subspace not in ("iso", "new"):
            raise DomainError("subspace must be 'iso' or 'new'")
        if self.method not in ("annihilation", "displacement", "linearized"):
            raise DomainError("method must be annihilation/displacement/linearized")


@dataclass
class CoherentState:
    spec: CoherentStateSpec
    coeffs: np.ndarray
    normalization: float
    labels: list = field(default_factory=list)

    def norm(self):
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def probabilities(self):
        return np.abs(self.coeffs) ** 2


def ladder_action(direction, state, spectrum):
    """Square-root coefficient of l_k^± on an eigenstate.

    state = ('iso', n) or ('new', j); returns exactly 0.0 on annihilated
    states (ladder bottoms and the top of the finite ladder).
    """
    kind, idx = state
    a = spectrum.gap
    k = spectrum.k
    if kind == "iso":
        n = idx
        if direction == "lower":
            if n == 0:
                return 0.0
            prod = n * (n + a) * (n + a - k)
        else:
            m = n + 1
            prod = m * (m + a) * (m + a - k)
        return math.sqrt(prod)
    if kind == "new":
        j = idx
        if not 0 <= j < k:
            raise DomainError("new-subspace level out of range")
        if direction == "lower":
            if j == 0:
                return 0.0
            prod = j * (a - j) * (k - j)
        else:
            if j == k - 1:
                return 0.0
            m = j + 1
            prod = m * (a - m) * (k - m)
        return math.sqrt(prod)
    raise DomainError(f"unknown state kind {kind!r}")


def lowering_matrix(spectrum):
    """k x k matrix of l_k^- on the new subspace (strictly superdiagonal)."""
    k = spectrum.k
    mat = np.zeros((k, k))
    for j in range(1, k):
        mat[j - 1, j] = ladder_action("lower", ("new", j), spectrum)
    return mat


def _check_iso_gammas(spectrum):
    b1 = spectrum.gap + 1.0
    b2 = spectrum.gap - spectrum.k + 1.0
    for b in (b1, b2):
        if is_nonpositive_integer(b):
            raise NegativeParameter(f"0F2 lower parameter {b} is a non-positive integer")
    return b1, b2


def cs_annihilation_iso(spec):
    """Eigenstate of the lowering ladder on the infinite subspace.

    c_n = c0 z^n / sqrt(n! (A+1)_n (A-k+1)_n) with the adaptive
    truncation |c_N|^2 < 1e-16 * sum |c_n|^2.
    """
    if spec.subspace != "iso" or spec.method != "annihilation":
        raise DomainError("spec must be iso/annihilation")
    spectrum = spec.spectrum
    b1, b2 = _check_iso_gammas(spectrum)
    z = complex(spec.z)
    coeffs = [1.0 + 0j]
    total = 1.0
    n = 0
    limit = spec.truncation if spec.truncation is not None else _MAX_N
    while n < limit:
        ratio = z / cmath.sqrt((n + 1) * (n + 1 + spectrum.gap) * (n + 1 + spectrum.gap - spectrum.k))
        nxt = coeffs[-1] * ratio
        coeffs.append(nxt)
        total += abs(nxt) ** 2
        n += 1
        if spec.truncation is None and abs(nxt) ** 2 < _TAIL * total:
            break
    c0 = 1.0 / math.sqrt(total)
    vec = c0 * np.array(coeffs)
    return CoherentState(spec, vec, c0, labels=[("iso", m) for m in range(len(vec))])


def c0_function(a, b, spectrum):
    """Auxiliary c0(a, b) = [0F2(A+1, A-k+1; conj(a) b)]^(-1/2)."""
    b1, b2 = _check_iso_gammas(spectrum)
    val = hyper_pfq([], [b1, b2], np.conj(a) * b).value
    return 1.0 / cmath.sqrt(val)


def n_function(a, b, spectrum):
    """N(a, b) for the displacement CS on the finite subspace."""
    acc = 0j
    ab = np.conj(a) * b
    g = spectrum.gap
    k = spectrum.k
    for j in range(k):
        acc += ab**j / math.factorial(j) * _poch(g - j, j) * _poch(k - j, j)
    return 1.0 / cmath.sqrt(acc)


def c_function(a, b, spectrum):
    """C(a, b) for the linearized CS on the finite subspace."""
    acc = 0j
    ab = np.conj(a) * b
    g = spectrum.gap
    for j in range(spectrum.k):
        arg = g - j
        if is_nonpositive_integer(arg):
            raise NegativeParameter(f"gamma({arg}) pole in linearized normalization")
        acc += ab**j / math.factorial(j) ** 2 / gamma(arg)
    return 1.0 / cmath.sqrt(acc)


def _poch(x, n):
    out = 1.0
    for i in range(n):
        out *= x + i
    return out


def reproducing_kernel(subspace, method, z1, z2, spectrum):
    """Overlap <z1 | z2> of two coherent states of the same family."""
    z1 = complex(z1)
    z2 = complex(z2)
    if subspace == "iso" and method == "annihilation":
        return c0_function(z1, z1, spectrum) * c0_function(z2, z2, spectrum) / c0_function(z1, z2, spectrum) ** 2
    if subspace == "new" and method == "displacement":
        return n_function(z1, z1, spectrum) * n_function(z2, z2, spectrum) / n_function(z1, z2, spectrum) ** 2
    if subspace == "iso" and method == "linearized":
        return cmath.exp(-0.5 * abs(z1) ** 2 - 0.5 * abs(z2) ** 2 + np.conj(z1) * z2)
    if subspace == "new" and method == "linearized":
        return c_function(z1, z1, spectrum) * c_function(z2, z2, spectrum) / c_function(z1, z2, spectrum) ** 2
    raise DomainError(f"no kernel for {subspace}/{method}")


def cs_displacement_new(spec):
    """Displacement-operator CS on the finite subspace (length-k vector)."""
    if spec.subspace != "new" or spec.method != "displacement":
        raise DomainError("spec must be new/displacement")
    spectrum = spec.spectrum
    z = complex(spec.z)
    g = spectrum.gap
    k = spectrum.k
    raw = np.array([
        math.sqrt(_poch(g - j, j) * _poch(k - j, j)) * z**j / math.sqrt(math.factorial(j))
        for j in range(k)
    ])
    nz = 1.0 / math.sqrt(float(np.sum(np.abs(raw) ** 2)))
    return CoherentState(spec, nz * raw, nz, labels=[("new", j) for j in range(k)])


@dataclass
class DivergenceReport:
    divergent: bool
    partial_sum: complex
    terms_used: int
    estimate: float
    growth_index: int


def cs_displacement_iso_diagnosis(z, spectrum):
    """Norm diagnosis of the formal displacement CS on the iso subspace.

    The squared norm would be e^{-|z|^2} 2F0(A+1, A-k+1; |z|^2), which
    diverges for every z != 0; the optimal-truncation partial sum is
    returned as the informative diagnosis.
    """
    z = complex(z)
    a1 = spectrum.gap + 1.0
    a2 = spectrum.gap - spectrum.k + 1.0
    if z == 0:
        return DivergenceReport(False, 1.0 + 0j, 1, 0.0, 0)
    res = hyper_2f0_diagnosis(a1, a2, abs(z) ** 2)
    # term ratio ~ n |z|^2 exceeds 1 beyond n ~ 1/|z|^2
    growth = max(1, int(math.ceil(1.0 / abs(z) ** 2)))
    partial = math.exp(-abs(z) ** 2) * res.value
    return DivergenceReport(True, partial, res.terms_used, res.truncation_estimate, growth)


def cs_linearized(spec):
    """Linearized-displacement CS (Poissonian on iso; length-k on new)."""
    spectrum = spec.spectrum
    z = complex(spec.z)
    if spec.subspace == "iso":
        coeffs = [cmath.exp(-0.5 * abs(z) ** 2)]
        total = abs(coeffs[0]) ** 2
        n = 0
        limit = spec.truncation if spec.truncation is not None else _MAX_N
        while n < limit:
            nxt = coeffs[-1] * z / math.sqrt(n + 1)
            coeffs.append(nxt)
            total += abs(nxt) ** 2
            n += 1
            if spec.truncation is None and abs(nxt) ** 2 < _TAIL * total:
                break
        vec = np.array(coeffs)
        vec = vec / np.sqrt(np.sum(np.abs(vec) ** 2))
        return CoherentState(spec, vec, 1.0, labels=[("iso", m) for m in range(len(vec))])
    g = spectrum.gap
    k = spectrum.k
    raw = []
    for j in range(k):
        arg = g - j
        if is_nonpositive_integer(arg):
            raise NegativeParameter(f"gamma({arg}) pole in linearized coefficients")
        raw.append((1j * z) ** j / math.factorial(j) / cmath.sqrt(gamma(arg)))
    raw = np.array(raw)
    cz = 1.0 / math.sqrt(float(np.sum(np.abs(raw) ** 2)))
    return CoherentState(spec, cz * raw, cz, labels=[("new", j) for j in range(k)])


def build_cs(spec):
    """Dispatch a CoherentStateSpec to its construction."""
    if spec.method == "annihilation":
        if spec.subspace == "new":
            raise DomainError(
                "annihilation-operator CS do not exist on the finite subspace; "
                "see cs_displacement_iso_diagnosis for the dual failure"
            )
        return cs_annihilation_iso(spec)
    if spec.method == "displacement":
        if spec.subspace == "iso":
            raise DivergentSeriesError(
                "displacement CS on the iso subspace have divergent norm for z != 0"
            )
        return cs_displacement_new(spec)
    return cs_linearized(spec)


def temporal_stability(spec, t):
    """Overlap <z e^{-it} | U(t) | z>; magnitude 1, global phase reported."""
    state = build_cs(spec)
    rotated_spec = CoherentStateSpec(
        spec.subspace, spec.method, complex(spec.z) * cmath.exp(-1j * t),
        spec.spectrum, truncation=len(state.coeffs) - 1 if spec.subspace == "iso" else None,
    )
    rotated = build_cs(rotated_spec)
    m = min(len(state.coeffs), len(rotated.coeffs))
    spectrum = spec.spectrum
    if spec.subspace == "iso":
        energies = np.array([spectrum.E0 + n for n in range(m)])
    else:
        energies = np.array(spectrum.new_levels()[:m])
    phases = np.exp(-1j * energies * t)
    return complex(np.sum(np.conj(rotated.coeffs[:m]) * state.coeffs[:m] * phases))


# ----------------------------------------------------------------------
# Measure-moment verification (resolution of the identity)
# ----------------------------------------------------------------------


def _quad(f, a, b, **kw):
    val, err = scipy.integrate.quad(f, a, b, limit=300, **kw)
    if not np.isfinite(val):
        raise QuadratureFailure("quadrature returned a non-finite value")
    return val, err


def _bessel_k_kernel(y, b1, b2):
    """G^{2,0}_{0,2}(y | b1, b2) = 2 y^((b1+b2)/2) K_{b1-b2}(2 sqrt(y))."""
    return 2.0 * y ** (0.5 * (b1 + b2)) * bessel_fn("K", b1 - b2, 2.0 * math.sqrt(y))


def measure_moment_check(subspace, n, spectrum, rel_tol=None):
    """(lhs, rhs) of the n-th Mellin moment identity of the CS measure.

    lhs integrates the measure density built from its convolution
    representation; rhs is the corresponding product of gamma factors.
    """
    a = spectrum.gap
    k = spectrum.k
    s = n + 1
    if subspace == "new_linearized":
        if a - n <= 0:
            raise NegativeParameter("moment needs E0 - eps0 - n > 0")
        rhs = gamma(float(s)) ** 2 * gamma(a - n)

        def density(x):
            # pure relative tolerance: the x^(-a-1) falloff makes any
            # fixed absolute tolerance meaningless at large x
            val, _ = _quad(
                lambda t: t**a * (t + x) ** (-a - 1.0) * math.exp(-t), 0.0, np.inf,
                epsabs=0.0, epsrel=1e-11,
            )
            return gamma(a + 1.0) * val

        # compactify the slow x^(n-a-1) tail with x = c u/(1-u)
        c = a + n + 1.0

        def outer(u):
            x = c * u / (1.0 - u)
            return x**n * density(x) * c / (1.0 - u) ** 2

        lhs, _ = _quad(outer, 0.0, 1.0, epsabs=1e-12, epsrel=1e-10)
        return lhs, rhs
    if subspace == "iso_annihilation":
        b1, b2 = a, a - k
        rhs = gamma(float(s)) * gamma(s + b1) * gamma(s + b2)

        def density(x):
            val, _ = _quad(
                lambda t: _bessel_k_kernel(x / t, b1, b2) * math.exp(-t) / t,
                0.0, np.inf, epsabs=1e-12, epsrel=1e-9,
            )
            return val

        lhs, _ = _quad(lambda x: x**n * density(x), 0.0, np.inf, epsabs=1e-9, epsrel=1e-7)
        return lhs, rhs
    if subspace == "new_displacement":
        if n >= k or a - n <= 0:
            raise NegativeParameter("moment needs n < k and E0 - eps0 - n > 0")
        rhs = gamma(float(s)) * gamma(float(k - n)) * gamma(a - n)

        def kernel_desc(y):
            # inverse Mellin of Gamma(1+k-s) Gamma(1+A-s)
            return _bessel_k_kernel(1.0 / y, k, a) / y

        def density(x):
            val, _ = _quad(
                lambda t: kernel_desc(x / t) * math.exp(-t) / t,
                0.0, np.inf, epsabs=1e-12, epsrel=1e-9,
            )
            return val

        lhs, _ = _quad(lambda x: x**n * density(x), 0.0, np.inf, epsabs=1e-9, epsrel=1e-7)
        return lhs, rhs
    raise DomainError(f"unknown moment check subspace {subspace!r}")
