"""Base systems and their seed solutions, evaluated as ODE-closed jets.

Every solution object exposes ``jet(x) -> (u, u')`` built from
term-differentiated hypergeometric series; all higher derivatives follow
from the recurrence u^(m+2) = sum_i C(m,i) c^(i) u^(m-i) with
c(x) = 2 (V0(x) - eps), so no numerical differentiation ever enters the
construction of Wronskians or Painleve residuals.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AnnihilatedSeed,
    ComplexSeedWarning,
    DomainError,
    ExcludedEnergy,
    NonConvergence,
)
from . import specfun
from .specfun import gamma, kummer_m

_COMPLEX_TOL = 1e-13


@dataclass(frozen=True)
class SystemSpec:
    """One of the four base systems.

    kind: 'harmonic' (V = x^2/2), 'radial' (V = x^2/8 + j(j+1)/(2x^2)),
    'inverted' (V = -x^2/2) or 'free' (V = 0).
    """

    kind: str
    j: float = 0.0

    def __post_init__(self):
        if self.kind not in ("harmonic", "radial", "inverted", "free"):
            raise DomainError(f"unknown system kind {self.kind!r}")
        if self.kind == "radial" and self.j < 0:
            raise DomainError("radial oscillator needs j >= 0")

    def potential(self, x):
        if self.kind == "harmonic":
            return 0.5 * x * x
        if self.kind == "radial":
            return x * x / 8.0 + self.j * (self.j + 1) / (2.0 * x * x)
        if self.kind == "inverted":
            return -0.5 * x * x
        return 0.0

    def check_domain(self, x):
        if self.kind == "radial" and x <= 0:
            raise DomainError(f"radial oscillator is defined for x > 0, got x={x}")

    def default_window(self):
        return (1e-3, 10.0) if self.kind == "radial" else (-8.0, 8.0)

    def coeff_derivs(self, x, epsilon, m):
        """Derivatives c^(0..m) of c(x) = 2 (V0(x) - epsilon)."""
        c = np.zeros(m + 1, dtype=complex)
        if self.kind == "harmonic":
            c[0] = x * x - 2.0 * epsilon
            if m >= 1:
                c[1] = 2.0 * x
            if m >= 2:
                c[2] = 2.0
        elif self.kind == "inverted":
            c[0] = -x * x - 2.0 * epsilon
            if m >= 1:
                c[1] = -2.0 * x
            if m >= 2:
                c[2] = -2.0
        elif self.kind == "free":
            c[0] = -2.0 * epsilon
        else:  # radial
            jj = self.j * (self.j + 1)
            c[0] = x * x / 4.0 + jj / (x * x) - 2.0 * epsilon
            if m >= 1:
                c[1] = x / 2.0 - 2.0 * jj / x**3
            if m >= 2:
                c[2] = 0.5 + 6.0 * jj / x**4
            for p in range(3, m + 1):
                c[p] = jj * (-1) ** p * math.factorial(p + 1) * x ** (-2 - p)
        return c

    @property
    def ground_energy(self):
        if self.kind == "harmonic":
            return 0.5
        if self.kind == "radial":
            return self.j / 2.0 + 0.75
        raise DomainError(f"{self.kind} has no discrete ground state")


@dataclass
class JetSample:
    x: float
    u: complex
    du: complex


class Solution:
    """A Schroedinger solution of a base system at a fixed energy."""

    system: SystemSpec
    energy: complex

    def jet(self, x):
        """Cached (u, u') evaluation; grids revisit the same abscissas."""
        cache = self.__dict__.setdefault("_jet_cache", {})
        hit = cache.get(x)
        if hit is None:
            hit = cache[x] = self._jet(x)
        return hit

    def _jet(self, x):  # pragma: no cover - interface
        raise NotImplementedError

    def derivatives(self, x, m):
        """u, u', ..., u^(m) from the jet and the ODE recurrence."""
        self.system.check_domain(x)
        out = np.zeros(m + 1, dtype=complex)
        u, du = self.jet(x)
        out[0] = u
        if m >= 1:
            out[1] = du
        if m >= 2:
            c = self.system.coeff_derivs(x, self.energy, m - 2)
            for i in range(m - 1):
                acc = 0j
                for l in range(i + 1):
                    acc += math.comb(i, l) * c[l] * out[i - l]
                out[i + 2] = acc
        return out

    def lowered(self):
        return LadderedSolution(self, -1)

    def raised(self):
        return LadderedSolution(self, +1)


class DerivedSolution(Solution):
    """Solution defined by an explicit (u, u') callable."""

    def __init__(self, system, energy, jet_fn, label=""):
        self.system = system
        self.energy = complex(energy)
        self._jet_fn = jet_fn
        self.label = label

    def _jet(self, x):
        self.system.check_domain(x)
        return self._jet_fn(x)

    def __repr__(self):
        return f"DerivedSolution({self.label or 'anonymous'}, energy={self.energy})"


class LadderedSolution(Solution):
    """a^-/a^+ (harmonic) or b^-/b^+ (radial) applied to another solution."""

    def __init__(self, base, step):
        kind = base.system.kind
        if kind not in ("harmonic", "radial"):
            raise DomainError("ladder operators implemented for harmonic/radial only")
        self.base = base
        self.step = step
        self.system = base.system
        self.energy = base.energy + step

    def _jet(self, x):
        u, du = self.base.jet(x)
        eps = self.base.energy
        if self.system.kind == "harmonic":
            s = math.sqrt(2.0)
            if self.step == -1:
                return (du + x * u) / s, (((x * x) - 2 * eps + 1) * u + x * du) / s
            return (-du + x * u) / s, ((1 + 2 * eps - x * x) * u + x * du) / s
        jj = self.system.j * (self.system.j + 1)
        c = x * x / 4.0 + jj / (x * x) - 2.0 * eps
        if self.step == -1:
            v = (x * du + (x * x / 2.0 - 2 * eps + 0.5) * u) / 2.0
            dv = ((x * x / 2.0 - 2 * eps + 1.5) * du + x * (1 + c) * u) / 2.0
        else:
            v = (-x * du + (x * x / 2.0 - 2 * eps - 0.5) * u) / 2.0
            dv = ((x * x / 2.0 - 2 * eps - 1.5) * du + x * (1 - c) * u) / 2.0
        return v, dv


def _ho_lambda_from_nu(nu, epsilon):
    if nu == 0:
        return 0.0
    a1 = (1.0 - 2.0 * epsilon) / 4.0
    a2 = (3.0 - 2.0 * epsilon) / 4.0
    return 2.0 * nu * gamma(a2) * specfun.rgamma(a1)


def _ro_lambda_from_nu(nu, epsilon, j):
    if nu == 0:
        return 0.0
    a2 = (3.0 + 2.0 * j - 4.0 * epsilon) / 4.0
    b2 = (3.0 + 2.0 * j) / 2.0
    return nu * gamma(a2) * specfun.rgamma(b2)


@dataclass
class SeedSolution(Solution):
    """General seed u(x; eps) of a base system.

    The linear-combination coefficient may be given either as the complex
    constant ``mix`` multiplying the odd/second branch, or through the
    real parametrization ``nu`` (the two systems use the conventions
    printed for them: the harmonic map carries a factor 2, the radial one
    does not).  ``nu=inf`` selects the pure second branch.
    """

    system: SystemSpec
    epsilon: complex
    mix: complex | None = None
    nu: float | None = None
    _coeffs: tuple = field(init=False, repr=False)

    def __post_init__(self):
        self.epsilon = complex(self.epsilon)
        kind = self.system.kind
        if kind == "free":
            if abs(self.epsilon.imag) > _COMPLEX_TOL or self.epsilon.real >= 0:
                raise DomainError("free-particle seed class needs real epsilon < 0")
            self._coeffs = (1.0, 0.0)
            return
        if kind == "inverted":
            raise DomainError("use inverted_up_seed / inverted_state_solution for the inverted oscillator")
        if self.nu is not None and self.mix is not None:
            raise DomainError("give either nu or mix, not both")
        if self.nu is not None and math.isinf(self.nu):
            self._coeffs = (0.0, 1.0)
        elif self.nu is not None:
            if kind == "harmonic":
                lam = _ho_lambda_from_nu(self.nu, self.epsilon)
            else:
                lam = _ro_lambda_from_nu(self.nu, self.epsilon, self.system.j)
            self._coeffs = (1.0, complex(lam))
        else:
            self._coeffs = (1.0, complex(self.mix if self.mix is not None else 0.0))

    @property
    def energy(self):
        return self.epsilon

    @property
    def is_complex(self):
        c1, c2 = self._coeffs
        return (
            abs(self.epsilon.imag) > _COMPLEX_TOL
            or abs(complex(c1).imag) > _COMPLEX_TOL
            or abs(complex(c2).imag) > _COMPLEX_TOL
        )

    def _jet(self, x):
        self.system.check_domain(x)
        c1, c2 = self._coeffs
        kind = self.system.kind
        if kind == "free":
            kappa = math.sqrt(-2.0 * self.epsilon.real)
            e = math.exp(kappa * x)
            return complex(e), complex(kappa * e)
        if kind == "harmonic":
            s1, ds1, s2, ds2 = _ho_basis_jet(self.epsilon, x)
        else:
            s1, ds1, s2, ds2 = _ro_basis_jet(self.epsilon, self.system.j, x)
        return c1 * s1 + c2 * s2, c1 * ds1 + c2 * ds2

    def epsilon_derivative_jet(self, x):
        """(d_eps u, d_eps u') for the confluent differential formula."""
        self.system.check_domain(x)
        c1, c2 = self._coeffs
        kind = self.system.kind
        if kind == "free":
            kappa = math.sqrt(-2.0 * self.epsilon.real)
            u, du = self.jet(x)
            # d kappa / d eps = -1/kappa;  u = e^{kappa x}
            p = -x * u / kappa
            dp = -u / kappa - x * du / kappa
            return p, dp
        if kind != "harmonic":
            raise DomainError("epsilon derivative implemented for free/harmonic seeds")
        if self.nu is not None and not math.isinf(self.nu):
            dlam = _ho_lambda_from_nu(self.nu, self.epsilon) * (-0.5) * (
                specfun.digamma((3.0 - 2.0 * self.epsilon) / 4.0)
                - specfun.digamma((1.0 - 2.0 * self.epsilon) / 4.0)
            )
        else:
            dlam = 0.0
        return _ho_eps_derivative_jet(self.epsilon, x, c1, c2, dlam)


def _ho_basis_jet(epsilon, x):
    """Even/odd harmonic-oscillator basis solutions and their derivatives."""
    a1 = (1.0 - 2.0 * epsilon) / 4.0
    a2 = (3.0 - 2.0 * epsilon) / 4.0
    z = x * x
    f1 = kummer_m(a1, 0.5, z).value
    g1 = a1 / 0.5 * kummer_m(a1 + 1, 1.5, z).value
    f2 = kummer_m(a2, 1.5, z).value
    g2 = a2 / 1.5 * kummer_m(a2 + 1, 2.5, z).value
    e = cmath.exp(-0.5 * z) if abs(complex(z).imag) > 0 else math.exp(-0.5 * z)
    s1 = e * f1
    ds1 = e * (-x * f1 + 2.0 * x * g1)
    s2 = x * e * f2
    ds2 = e * (f2 - z * f2 + 2.0 * z * g2)
    return s1, ds1, s2, ds2


def _ho_eps_derivative_jet(epsilon, x, c1, c2, dlam):
    a1 = (1.0 - 2.0 * epsilon) / 4.0
    a2 = (3.0 - 2.0 * epsilon) / 4.0
    z = x * x
    e = math.exp(-0.5 * z) if abs(complex(z).imag) == 0 else cmath.exp(-0.5 * z)
    # d/d eps of each branch: chain rule through a = (odd - 2 eps)/4.
    da = -0.5
    f1a = specfun.kummer_da(a1, 0.5, z) * da
    f2a = specfun.kummer_da(a2, 1.5, z) * da
    g1a = (
        1.0 / 0.5 * kummer_m(a1 + 1, 1.5, z).value
        + a1 / 0.5 * specfun.kummer_da(a1 + 1, 1.5, z)
    ) * da
    g2a = (
        1.0 / 1.5 * kummer_m(a2 + 1, 2.5, z).value
        + a2 / 1.5 * specfun.kummer_da(a2 + 1, 2.5, z)
    ) * da
    f2 = kummer_m(a2, 1.5, z).value
    g2 = a2 / 1.5 * kummer_m(a2 + 1, 2.5, z).value
    du_eps = e * (c1 * f1a + (c2 * f2a + dlam * f2) * x)
    ddu_eps = e * (
        c1 * (-x * f1a + 2.0 * x * g1a)
        + c2 * (f2a - z * f2a + 2.0 * z * g2a)
        + dlam * (f2 - z * f2 + 2.0 * z * g2)
    )
    return du_eps, ddu_eps


def _ro_basis_jet(epsilon, j, x):
    """Radial-oscillator basis solutions and derivatives (x > 0)."""
    a1 = (1.0 - 2.0 * j - 4.0 * epsilon) / 4.0
    b1 = (1.0 - 2.0 * j) / 2.0
    a2 = (3.0 + 2.0 * j - 4.0 * epsilon) / 4.0
    b2 = (3.0 + 2.0 * j) / 2.0
    z = x * x / 2.0
    f1 = kummer_m(a1, b1, z).value
    g1 = a1 / b1 * kummer_m(a1 + 1, b1 + 1, z).value
    f2 = kummer_m(a2, b2, z).value
    g2 = a2 / b2 * kummer_m(a2 + 1, b2 + 1, z).value
    pref1 = x ** (-j) * math.exp(-x * x / 4.0)
    s1 = pref1 * f1
    ds1 = pref1 * ((-j / x - x / 2.0) * f1 + x * g1)
    pref2 = 2.0 ** (-(j + 0.5)) * x ** (j + 1.0) * math.exp(-x * x / 4.0)
    s2 = pref2 * f2
    ds2 = pref2 * (((j + 1.0) / x - x / 2.0) * f2 + x * g2)
    return s1, ds1, s2, ds2


def seed_eval(seed, x):
    """Evaluate a seed (or any Solution) as a JetSample at x."""
    u, du = seed.jet(x)
    return JetSample(x=x, u=u, du=du)


@dataclass
class NodelessReport:
    nodeless: bool
    zeros: tuple
    scanned: bool = True


def _bisect_zero(f, a, b, fa, fb, tol=1e-10):
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0 or (b - a) < tol:
            return m
        if (fa < 0) != (fm < 0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def scan_zeros(f, lo, hi, samples=2001, tol=1e-10):
    """Sign-change scan plus bisection refinement of a real function."""
    xs = np.linspace(lo, hi, samples)
    vals = np.array([f(x) for x in xs])
    zeros = []
    for i in range(len(xs) - 1):
        if vals[i] == 0.0:
            zeros.append(xs[i])
        elif (vals[i] < 0) != (vals[i + 1] < 0):
            zeros.append(_bisect_zero(f, xs[i], xs[i + 1], vals[i], vals[i + 1], tol))
    if vals[-1] == 0.0:
        zeros.append(xs[-1])
    return zeros


def nodeless_check(seed, domain=None, samples=2001):
    """Certify that a real-regime seed has no zeros in the window."""
    if getattr(seed, "is_complex", False):
        warnings.warn(
            "seed is genuinely complex; |u| is not expected to vanish, scan skipped",
            ComplexSeedWarning,
        )
        return NodelessReport(nodeless=True, zeros=(), scanned=False)
    lo, hi = domain if domain is not None else seed.system.default_window()
    zeros = scan_zeros(lambda x: seed.jet(x)[0].real, lo, hi, samples)
    return NodelessReport(nodeless=not zeros, zeros=tuple(zeros))


@dataclass
class SusyChain:
    """Ordered seeds of a k-th order transformation.

    ``laddered`` marks chains whose members are generated by the
    annihilation operator with energies eps_j = eps_1 - (j-1).
    """

    members: list
    laddered: bool

    def __post_init__(self):
        if not self.members:
            raise DomainError("empty chain")

    @property
    def system(self):
        return self.members[0].system

    @property
    def k(self):
        return len(self.members)

    @property
    def energies(self):
        return [m.energy for m in self.members]

    @property
    def seed(self):
        return self.members[0]

    @classmethod
    def from_seeds(cls, seeds):
        return cls(members=list(seeds), laddered=False)


_ANNIHILATION_PROBES = {
    "harmonic": (0.3, 0.9, 1.7, 2.6),
    "radial": (0.5, 1.1, 2.2, 3.1),
}


def ladder_chain(seed, k):
    """Chain u_j = (a^-)^(j-1) u_1 (harmonic) or (b^-)^(j-1) u_1 (radial)."""
    if k < 1:
        raise DomainError("chain length k must be >= 1")
    if seed.system.kind not in ("harmonic", "radial"):
        raise DomainError("laddered chains exist for the harmonic and radial oscillators")
    members = [seed]
    probes = _ANNIHILATION_PROBES[seed.system.kind]
    for _ in range(k - 1):
        nxt = members[-1].lowered()
        scale = max(abs(members[-1].jet(x)[0]) for x in probes)
        size = max(abs(nxt.jet(x)[0]) + abs(nxt.jet(x)[1]) for x in probes)
        if size <= 1e-12 * max(scale, 1e-300):
            raise AnnihilatedSeed(
                f"ladder member at energy {members[-1].energy - 1} vanishes identically"
            )
        members.append(nxt)
    return SusyChain(members=members, laddered=True)


# ----------------------------------------------------------------------
# Inverted oscillator
# ----------------------------------------------------------------------

_INVERTED = SystemSpec("inverted")

# Between these |x|^2 bounds both evaluation routes of the parity
# solutions are computed and the one with the smaller internal error
# estimate wins; below the window the 1F1 series is safe, above it the
# recessive Tricomi-U expansions of u_P / u_N are.
_INVERTED_SERIES_SAFE = 14.0
_INVERTED_FAR_SAFE = 30.0


def _up_coefficient(epsilon):
    return (
        2.0
        * cmath.exp(-1j * math.pi / 4.0)
        * gamma(0.75 - 0.5j * epsilon)
        / gamma(0.25 - 0.5j * epsilon)
    )


def _un_coefficient(epsilon):
    return (
        2.0
        * cmath.exp(1j * math.pi / 4.0)
        * gamma(0.75 + 0.5j * epsilon)
        / gamma(0.25 + 0.5j * epsilon)
    )


def _inverted_basis_far(E, v):
    """(u_P, u_P', u_N, u_N') at x = v > 0 from single-piece U asymptotics.

    u_P = Gamma(3/4 - iE/2)/sqrt(pi) e^{ix^2/2} U((1-2iE)/4, 1/2, -ix^2)
    and u_N is the mirror formula; both expansions are recessive, so no
    inter-piece cancellation occurs.
    """
    aP = (1.0 - 2.0j * E) / 4.0
    wP = -1j * v * v
    rP = specfun.tricomi_u_asymptotic(aP, 0.5, wP)
    rP1 = specfun.tricomi_u_asymptotic(aP + 1, 1.5, wP)
    cP = gamma(0.75 - 0.5j * E) / math.sqrt(math.pi)
    eP = cmath.exp(0.5j * v * v)
    uP = cP * eP * rP.value
    duP = cP * eP * (1j * v * rP.value + 2j * v * aP * rP1.value)
    aN = (1.0 + 2.0j * E) / 4.0
    wN = 1j * v * v
    rN = specfun.tricomi_u_asymptotic(aN, 0.5, wN)
    rN1 = specfun.tricomi_u_asymptotic(aN + 1, 1.5, wN)
    cN = gamma(0.75 + 0.5j * E) / math.sqrt(math.pi)
    eN = cmath.exp(-0.5j * v * v)
    uN = cN * eN * rN.value
    duN = cN * eN * (-1j * v * rN.value - 2j * v * aN * rN1.value)
    est = max(rP.truncation_estimate, rP1.truncation_estimate,
              rN.truncation_estimate, rN1.truncation_estimate)
    return (uP, duP, uN, duN), est


def _parity_far(E, x):
    v = abs(x)
    (uP, duP, uN, duN), est = _inverted_basis_far(E, v)
    cP = _up_coefficient(E)
    cN = _un_coefficient(E)
    po = (uP - uN) / (cN - cP)
    dpo = (duP - duN) / (cN - cP)
    pe = uP + cP * po
    dpe = duP + cP * dpo
    # conditioning of the linear reconstruction inflates the estimate
    cond = max(
        (abs(uP) + abs(cP * po)) / max(abs(pe), 1e-300),
        (abs(uP) + abs(uN)) / max(abs(cN - cP) * abs(po), 1e-300),
    )
    if x < 0:
        dpe, po = -dpe, -po
    return (pe, dpe, po, dpo), est * cond


def _parity_series(E, x):
    ae = (1.0 + 2.0j * E) / 4.0
    ao = (3.0 + 2.0j * E) / 4.0
    z = 1j * x * x
    try:
        fe = kummer_m(ae, 0.5, z)
        ge = kummer_m(ae + 1, 1.5, z)
        fo = kummer_m(ao, 1.5, z)
        go = kummer_m(ao + 1, 2.5, z)
    except NonConvergence:
        return None, math.inf
    e = cmath.exp(-0.5j * x * x)
    pe = e * fe.value
    dpe = e * (-1j * x * fe.value + 2j * x * ae / 0.5 * ge.value)
    po = x * e * fo.value
    dpo = e * (fo.value - 1j * x * x * fo.value + 2j * x * x * ao / 1.5 * go.value)
    est = max(fe.truncation_estimate, ge.truncation_estimate,
              fo.truncation_estimate, go.truncation_estimate)
    return (pe, dpe, po, dpo), est


def _inverted_parity_jets(E, x):
    """Even/odd inverted-oscillator solutions and first derivatives."""
    z2 = x * x
    if z2 <= _INVERTED_SERIES_SAFE:
        return _parity_series(E, x)[0]
    if z2 >= _INVERTED_FAR_SAFE:
        return _parity_far(E, x)[0]
    far, est_far = _parity_far(E, x)
    ser, est_ser = _parity_series(E, x)
    return far if est_far <= est_ser else ser


def _u_p_series(eps, x):
    """u_P from the parity series; conditioning of the decay cancellation."""
    out, est = _parity_series(eps, x)
    if out is None:
        return None, math.inf
    pe, dpe, po, dpo = out
    c = _up_coefficient(eps)
    u = pe - c * po
    du = dpe - c * dpo
    cond = (abs(pe) + abs(c * po)) / max(abs(u), 1e-300)
    return (u, du), est * cond


def _u_p_far(eps, x):
    """u_P from its recessive U expansion (positive side) or the mirror."""
    v = abs(x)
    (uP, duP, uN, duN), est = _inverted_basis_far(eps, v)
    if x >= 0:
        return (uP, duP), est
    cP = _up_coefficient(eps)
    cN = _un_coefficient(eps)
    po = (uP - uN) / (cN - cP)
    dpo = (duP - duN) / (cN - cP)
    val = uP + 2.0 * cP * po
    dval = -(duP + 2.0 * cP * dpo)
    cond = (abs(uP) + 2.0 * abs(cP * po)) / max(abs(val), 1e-300)
    return (val, dval), est * cond


def _u_p_jet(eps, x):
    """Adaptive evaluation of the decaying seed u_P(x, eps), Im eps > 0."""
    z2 = x * x
    if z2 <= _INVERTED_SERIES_SAFE:
        return _u_p_series(eps, x)[0]
    if z2 >= _INVERTED_FAR_SAFE:
        return _u_p_far(eps, x)[0]
    far, est_far = _u_p_far(eps, x)
    ser, est_ser = _u_p_series(eps, x)
    return far if est_far <= est_ser else ser


def _left_coefficient(E):
    cp = cmath.exp(1j * math.pi / 4.0) * gamma(0.75 + 0.5j * E) / gamma(0.25 + 0.5j * E)
    cm = cmath.exp(-1j * math.pi / 4.0) * gamma(0.75 - 0.5j * E) / gamma(0.25 - 0.5j * E)
    return cp + cm


def _dirac_normalization(E):
    return (
        cmath.exp(1j * (0.5 - 1j * E) * math.pi / 4.0)
        * 2.0 ** (1j * E / 2.0 - 1.0)
        * gamma(0.5 - 1j * E)
        / (math.sqrt(math.pi) * gamma(0.75 - 0.5j * E))
    )


def inverted_states(E, which, x):
    """Value of psi_E^+/-, psi_L, psi_R (or the parity pair) at x."""
    pe, _, po, _ = _inverted_parity_jets(E, x)
    if which == "even":
        return pe
    if which == "odd":
        return po
    if which in ("plus", "minus"):
        coeff = _up_coefficient(E)
        n = _dirac_normalization(E)
        sign = -1.0 if which == "plus" else 1.0
        return n * (pe + sign * coeff * po)
    if which in ("left", "right"):
        coeff = _left_coefficient(E)
        sign = -1.0 if which == "left" else 1.0
        return pe + sign * coeff * po
    raise DomainError(f"unknown inverted state kind {which!r}")


def inverted_state_solution(E, which="left"):
    """The same dispersive states packaged as jet-closed Solutions."""

    def jet(x):
        pe, dpe, po, dpo = _inverted_parity_jets(E, x)
        if which == "even":
            return pe, dpe
        if which == "odd":
            return po, dpo
        if which in ("plus", "minus"):
            coeff = _up_coefficient(E)
            n = _dirac_normalization(E)
            sign = -1.0 if which == "plus" else 1.0
            return n * (pe + sign * coeff * po), n * (dpe + sign * coeff * dpo)
        coeff = _left_coefficient(E)
        sign = -1.0 if which == "left" else 1.0
        return pe + sign * coeff * po, dpe + sign * coeff * dpo

    return DerivedSolution(_INVERTED, E, jet, label=f"psi_{which}(E={E})")


def _check_inverted_energy(epsilon):
    eps = complex(epsilon)
    if abs(eps.imag) <= _COMPLEX_TOL:
        raise ExcludedEnergy("the real energy axis is excluded for inverted-oscillator seeds")
    if abs(eps.real) <= _COMPLEX_TOL:
        half = abs(eps.imag) - 0.5
        if abs(half - round(half)) <= 1e-12 and round(half) >= 0:
            raise ExcludedEnergy(f"epsilon = +-i(m+1/2) is excluded, got {epsilon}")
    return eps


def inverted_seed_solution(epsilon):
    """Transformation function u_P (Im eps > 0) or u_N (Im eps < 0).

    The N branch is evaluated as the literal complex conjugate of the P
    branch at the conjugate energy (the identity conj(u_P(x, eps)) =
    u_N(x, conj eps)), which makes the transformations induced by eps and
    conj(eps) coincide to the last bit.
    """
    eps = _check_inverted_energy(epsilon)

    def jet(x):
        e_up = eps if eps.imag > 0 else eps.conjugate()
        u, du = _u_p_jet(e_up, x)
        if eps.imag > 0:
            return u, du
        return u.conjugate(), du.conjugate()

    tag = "P" if eps.imag > 0 else "N"
    return DerivedSolution(_INVERTED, eps, jet, label=f"u_{tag}(eps={epsilon})")


def inverted_up_seed(epsilon, x):
    """JetSample of u_P/u_N at x (side selected by the sign of Im eps)."""
    sol = inverted_seed_solution(epsilon)
    u, du = sol.jet(x)
    return JetSample(x=x, u=u, du=du)


# Convenience factories for the auxiliary extremal-state solutions.


def ho_gaussian():
    """Harmonic-oscillator ground state e^{-x^2/2} as a Solution."""
    sys = SystemSpec("harmonic")
    return DerivedSolution(
        sys, 0.5, lambda x: (math.exp(-0.5 * x * x), -x * math.exp(-0.5 * x * x)),
        label="exp(-x^2/2)",
    )


def ro_physical_ground(j):
    """x^{j+1} e^{-x^2/4}: the radial-oscillator ground-state shape."""
    sys = SystemSpec("radial", j=j)
    e0 = j / 2.0 + 0.75

    def jet(x):
        u = x ** (j + 1.0) * math.exp(-x * x / 4.0)
        return u, ((j + 1.0) / x - x / 2.0) * u

    return DerivedSolution(sys, e0, jet, label="x^{j+1}exp(-x^2/4)")


def ro_nonphysical_partner(j):
    """x^{-j} e^{-x^2/4}: the non-normalizable solution at 1 - E0."""
    sys = SystemSpec("radial", j=j)

    def jet(x):
        u = x ** (-j) * math.exp(-x * x / 4.0)
        return u, (-j / x - x / 2.0) * u

    return DerivedSolution(sys, 0.25 - j / 2.0, jet, label="x^{-j}exp(-x^2/4)")
