"""SUSY transformation engine.

Covers the first-order transformation, the k-th order Wronskian and its
finite-difference (alpha recursion) oracle, the three direct second-order
cases, the differential confluent formula, the inverted-oscillator
complex transformation and the factorization checks.  Every evaluator
carries analytic derivatives of the key function, so V_k and the
log-derivative jets are free of numerical differentiation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.integrate

from .errors import (
    DomainError,
    ForbiddenW0,
    QuadratureFailure,
    SingularTransform,
    SingularWronskian,
)
from .schrodinger import (
    SeedSolution,
    Solution,
    SusyChain,
    SystemSpec,
    DerivedSolution,
    inverted_seed_solution,
    nodeless_check,
    scan_zeros,
    seed_eval,
)
from .specfun import gamma, orthopoly
from .wronskian import ConstantOne, WronskianJet, log_derivatives

_SQRT2 = math.sqrt(2.0)


class PartnerPotential:
    """Evaluator of V_k(x) = V0(x) - (ln key)'' plus its log-derivative jets."""

    def __init__(self, base, chain, order, key_derivs, singularities=(), label=""):
        self.base = base
        self.chain = chain
        self.order = order
        self._key_derivs = key_derivs
        self.singularities = tuple(singularities)
        self.label = label

    def key_jet(self, x, m=3):
        """Derivatives [K, K', ..., K^(m)] of the key function."""
        return self._key_derivs(x, m)

    def log_jet(self, x, m=3):
        """((ln K)', (ln K)'', ...) up to order m."""
        return log_derivatives(self.key_jet(x, m))

    def potential(self, x):
        """V_k(x); complex in the complex regime."""
        jets = self.log_jet(x, 2)
        return self.base.potential(x) - jets[1]

    def potential_real(self, x, tol=1e-9):
        v = self.potential(x)
        v = complex(v)
        if abs(v.imag) > tol * max(1.0, abs(v.real)):
            raise ArithmeticError(f"potential acquired an imaginary part at x={x}: {v}")
        return v.real


def _certify_wronskians(chain, window, samples):
    """Scan all sub-Wronskians of a real-regime chain for zeros."""
    lo, hi = window
    for m in range(1, chain.k + 1):
        wj = WronskianJet(chain.members[:m])
        zeros = scan_zeros(lambda x: wj.derivs(x, 0)[0].real, lo, hi, samples)
        if zeros:
            raise SingularWronskian(
                f"W(u_1..u_{m}) vanishes near x={zeros[0]:.6f}", zeros=zeros
            )


def _chain_is_complex(chain):
    return any(getattr(m, "is_complex", False) or abs(complex(m.energy).imag) > 1e-13
               for m in chain.members)


def first_order(seed, window=None, samples=2001, check=True):
    """First-order partner V1 = V0 - (ln u)'' for a nodeless seed."""
    win = window if window is not None else seed.system.default_window()
    if check and not getattr(seed, "is_complex", False):
        report = nodeless_check(seed, domain=win, samples=samples)
        if not report.nodeless:
            raise SingularTransform("seed has zeros", zeros=report.zeros)
    wj = WronskianJet([seed])
    chain = SusyChain(members=[seed], laddered=True)
    return PartnerPotential(seed.system, chain, 1, wj.derivs, label="first_order")


def kth_order_wronskian(chain, window=None, samples=2001, check=True):
    """V_k from the k x k Wronskian of the chain seeds."""
    win = window if window is not None else chain.system.default_window()
    if check and not _chain_is_complex(chain):
        _certify_wronskians(chain, win, samples)
    wj = WronskianJet(chain.members)
    return PartnerPotential(chain.system, chain, chain.k, wj.derivs, label="wronskian")


class _AlphaRecursion:
    """Superpotential table alpha_j(x, eps_m) built by finite differences."""

    def __init__(self, chain):
        self.chain = chain
        self.energies = [complex(e) for e in chain.energies]

    def table(self, x):
        k = self.chain.k
        eps = self.energies
        alpha = []
        for m in range(k):
            u, du = self.chain.members[m].jet(x)
            if u == 0:
                raise SingularTransform(f"seed {m + 1} vanishes at x={x}")
            alpha.append(du / u)
        # alpha holds alpha_1(x, eps_m); recurse levels in place.
        rows = [list(alpha)]
        for j in range(k - 1):
            cur = rows[-1]
            nxt = []
            for m in range(j + 1, k):
                denom = cur[j] - cur[m]
                if denom == 0:
                    raise SingularTransform(f"alpha recursion pole at x={x}")
                nxt.append(-cur[j] - 2.0 * (eps[j] - eps[m]) / denom)
            rows.append([None] * (j + 1) + nxt)
        return rows

    def potential(self, x):
        k = self.chain.k
        eps = self.energies
        rows = self.table(x)
        v = self.chain.system.potential(x)
        v_level = self.chain.system.potential(x)
        total = v
        for j in range(k):
            a = rows[j][j]
            da = 2.0 * (v_level - eps[j]) - a * a
            total -= da
            v_level = v_level - da
        return total

    def log_jets(self, x):
        """(ln W_k)' = sum_j alpha_j and (ln W_k)'' = sum_j alpha_j'."""
        k = self.chain.k
        eps = self.energies
        rows = self.table(x)
        v_level = self.chain.system.potential(x)
        l1 = 0j
        l2 = 0j
        for j in range(k):
            a = rows[j][j]
            da = 2.0 * (v_level - eps[j]) - a * a
            l1 += a
            l2 += da
            v_level = v_level - da
        return l1, l2


def iterate_chain(chain):
    """Partner potential from the iterative alpha recursion (oracle route)."""
    rec = _AlphaRecursion(chain)

    class _IteratedPotential(PartnerPotential):
        def __init__(self):
            super().__init__(chain.system, chain, chain.k, None, label="iterated")

        def potential(self, x):
            return rec.potential(x)

        def log_jet(self, x, m=2):
            return rec.log_jets(x)[:m]

        def key_jet(self, x, m=3):
            raise NotImplementedError("alpha-recursion route has no single key function")

    return _IteratedPotential()


def _integral_key_derivs(seed, w0, x0):
    """Key derivatives for the integral confluent mode: w, u^2, 2uu', ..."""

    def deriv(x, m):
        out = np.zeros(m + 1, dtype=complex)
        val, err = scipy.integrate.quad(
            lambda y: (seed.jet(y)[0] ** 2).real, x0, x, epsabs=1e-12, epsrel=1e-12, limit=300
        )
        if err > 1e-9 * max(1.0, abs(val)):
            raise QuadratureFailure(f"confluent quadrature error {err:.2e} at x={x}")
        d = seed.derivatives(x, max(m - 1, 1))
        out[0] = w0 + val
        if m >= 1:
            out[1] = d[0] ** 2
        if m >= 2:
            out[2] = 2.0 * d[0] * d[1]
        if m >= 3:
            out[3] = 2.0 * d[1] ** 2 + 2.0 * d[0] * d[2]
        return out

    return deriv


def _decay_sides(seed):
    """Which infinities does the seed decay towards (square-integrably)?

    Probed on the system's default window, which is wide enough for the
    exponential-type asymptotics of every supported seed class.
    """
    lo, hi = seed.system.default_window()
    u_lo = abs(seed.jet(lo)[0])
    u_hi = abs(seed.jet(hi)[0])
    interior = [lo + f * (hi - lo) for f in (0.35, 0.5, 0.65)]
    u_mid = max(abs(seed.jet(x)[0]) for x in interior) + 1e-300
    return u_lo / u_mid < 1e-3, u_hi / u_mid < 1e-3


def second_order_confluent(seed, w0, x0, window=None, samples=2001):
    """Confluent (c = 0) second-order transformation, integral form."""
    if getattr(seed, "is_complex", False):
        raise DomainError("confluent case takes a real seed (c = 0 means real epsilon)")
    win = window if window is not None else seed.system.default_window()
    decays_left, decays_right = _decay_sides(seed)
    if not (decays_left or decays_right):
        raise ForbiddenW0("seed decays at neither boundary; w(x) must acquire a zero")
    allowed = False
    bounds = {}
    if decays_right:
        i_plus, _ = scipy.integrate.quad(
            lambda y: (seed.jet(y)[0] ** 2).real, x0, np.inf, epsabs=1e-12, limit=300
        )
        bounds["-I+"] = -i_plus
        allowed = allowed or w0 <= -i_plus
    if decays_left:
        i_minus, _ = scipy.integrate.quad(
            lambda y: (seed.jet(y)[0] ** 2).real, -np.inf, x0, epsabs=1e-12, limit=300
        )
        bounds["I-"] = i_minus
        allowed = allowed or w0 >= i_minus
    if not allowed:
        raise ForbiddenW0(
            f"w0={w0} lies in the forbidden interval ({bounds.get('-I+', '-inf')}, "
            f"{bounds.get('I-', 'inf')}) where w(x) has a zero"
        )
    key = _integral_key_derivs(seed, w0, x0)
    zeros = scan_zeros(lambda x: key(x, 0)[0].real, win[0], win[1], samples)
    if zeros:
        raise SingularTransform("confluent key function w(x) vanishes", zeros=zeros)
    chain = SusyChain(members=[seed, seed], laddered=False)
    return PartnerPotential(seed.system, chain, 2, key, label="confluent_integral")


def ho_decaying_mix(epsilon, side="+"):
    """Mix constant cancelling the e^{x^2/2} growth of an HO seed at one side."""
    a1 = (1.0 - 2.0 * complex(epsilon)) / 4.0
    a2 = (3.0 - 2.0 * complex(epsilon)) / 4.0
    lam = 2.0 * gamma(a2) / gamma(a1)
    return -lam if side == "+" else lam


def second_order_complex(seed, window=None, samples=2001):
    """Complex (c < 0) second-order transformation producing a real V2."""
    eps = complex(seed.energy)
    if abs(eps.imag) < 1e-13:
        raise DomainError("complex case needs Im(epsilon) != 0")

    def key(x, m):
        out = np.zeros(m + 1, dtype=complex)
        d = seed.derivatives(x, max(m - 1, 1))
        u, du = d[0], d[1]
        # w = W(u, conj u) / (2 (eps - conj eps)); w' = |u|^2.
        wr = (u * np.conj(du) - np.conj(u) * du) / (2.0 * (eps - np.conj(eps)))
        out[0] = wr
        if m >= 1:
            out[1] = u * np.conj(u)
        if m >= 2:
            out[2] = 2.0 * (np.conj(u) * du).real
        if m >= 3:
            ddu = d[2] if len(d) > 2 else seed.derivatives(x, 2)[2]
            out[3] = 2.0 * (du * np.conj(du)).real + 2.0 * (np.conj(u) * ddu).real
        return out

    win = window if window is not None else seed.system.default_window()
    zeros = scan_zeros(lambda x: key(x, 0)[0].real, win[0], win[1], samples)
    if zeros:
        raise SingularTransform("complex-case key w(x) vanishes", zeros=zeros)
    chain = SusyChain(members=[seed], laddered=False)
    return PartnerPotential(seed.system, chain, 2, key, label="complex_case")


def second_order_direct(case, *, seeds=None, seed=None, w0=None, x0=0.0,
                        window=None, samples=2001):
    """Direct second-order transformation, classified by the sign of c."""
    if case == "real":
        if seeds is None or len(seeds) != 2:
            raise DomainError("real case needs two seeds")
        e1, e2 = complex(seeds[0].energy), complex(seeds[1].energy)
        if abs(e1 - e2) < 1e-12:
            raise DomainError(
                "equal factorization energies mean c = 0: this input belongs to the "
                "confluent case; call second_order_direct('confluent', ...)"
            )
        chain = SusyChain.from_seeds(seeds)
        return kth_order_wronskian(chain, window=window, samples=samples)
    if case == "confluent":
        if seed is None or w0 is None:
            raise DomainError("confluent case needs seed and w0")
        return second_order_confluent(seed, w0, x0, window=window, samples=samples)
    if case == "complex":
        if seed is None:
            raise DomainError("complex case needs a complex-energy seed")
        return second_order_complex(seed, window=window, samples=samples)
    raise DomainError(f"unknown second-order case {case!r}")


def free_particle_confluent_D(epsilon, x0):
    """D matching the textbook non-singular free-particle family."""
    kappa = math.sqrt(-2.0 * float(np.real(epsilon)))
    return -math.exp(2.0 * kappa * x0) / kappa


def matched_w0_for_differential(seed, D, x0):
    """w0 such that the integral key equals -(differential key)/2 globally."""
    p, dp = seed.epsilon_derivative_jet(x0)
    u, du = seed.jet(x0)
    w_key = u * dp - du * p
    return -(D + w_key) / 2.0


def confluent_differential(seed, D, window=None, samples=2001, cross_check=True,
                           check_tol=1e-7):
    """Confluent transformation from the parametric-derivative Wronskian.

    key(x) = D + W(u, d_eps u); its derivatives follow from
    (H - eps) d_eps u = u, giving key' = -2 u^2 exactly.
    """

    def key(x, m):
        out = np.zeros(m + 1, dtype=complex)
        d = seed.derivatives(x, max(m - 1, 1))
        p, dp = seed.epsilon_derivative_jet(x)
        out[0] = D + d[0] * dp - d[1] * p
        if m >= 1:
            out[1] = -2.0 * d[0] ** 2
        if m >= 2:
            out[2] = -4.0 * d[0] * d[1]
        if m >= 3:
            ddu = d[2] if len(d) > 2 else seed.derivatives(x, 2)[2]
            out[3] = -4.0 * d[1] ** 2 - 4.0 * d[0] * ddu
        return out

    win = window if window is not None else seed.system.default_window()
    if cross_check:
        _richardson_eps_check(seed, win, check_tol)
    zeros = scan_zeros(lambda x: key(x, 0)[0].real, win[0], win[1], samples)
    if zeros:
        raise SingularTransform("differential confluent key vanishes", zeros=zeros)
    chain = SusyChain(members=[seed, seed], laddered=False)
    return PartnerPotential(seed.system, chain, 2, key, label="confluent_differential")


def _reseed(seed, epsilon):
    if seed.nu is not None:
        return SeedSolution(seed.system, epsilon, nu=seed.nu)
    return SeedSolution(seed.system, epsilon, mix=seed._coeffs[1])


def _richardson_eps_check(seed, window, tol):
    """Validate the analytic d_eps u against Richardson finite differences."""
    eps = complex(seed.energy)
    h = 1e-5 * (1.0 + abs(eps))
    xs = np.linspace(window[0] + 0.1 * (window[1] - window[0]),
                     window[1] - 0.1 * (window[1] - window[0]), 5)
    for x in xs:
        p, _ = seed.epsilon_derivative_jet(x)

        def fd(step):
            up = _reseed(seed, eps + step).jet(x)[0]
            um = _reseed(seed, eps - step).jet(x)[0]
            return (up - um) / (2.0 * step)

        d1 = fd(h)
        d2 = fd(h / 2.0)
        rich = (4.0 * d2 - d1) / 3.0
        scale = max(abs(p), abs(rich), 1e-12)
        if abs(p - rich) / scale > tol:
            raise ArithmeticError(
                f"d_eps u cross-check failed at x={x}: analytic {p}, Richardson {rich}"
            )


def inverted_complex_susy(epsilon, side=None, window=(-8.0, 8.0), samples=2001):
    """Real partner of the inverted oscillator from a complex seed.

    Returns the PartnerPotential and a map (E, which) -> transformed
    eigenfunction of H2 as a plain callable of x.
    """
    eps = complex(epsilon)
    if side == "P" and eps.imag < 0:
        eps = eps.conjugate()
    if side == "N" and eps.imag > 0:
        eps = eps.conjugate()
    seed = inverted_seed_solution(eps)
    pp = second_order_complex(seed, window=window, samples=samples)

    def transformed(E, which="left"):
        from .schrodinger import inverted_state_solution

        psi = inverted_state_solution(E, which)

        def value(x):
            u, du = seed.jet(x)
            k = pp.key_jet(x, 1)
            w, dw = k[0], k[1]
            pv, pdv = psi.jet(x)
            return (dw / w) * (-pdv + (du / u) * pv) + 2.0 * (complex(eps) - E) * pv

        return value

    return pp, transformed


# ----------------------------------------------------------------------
# Transformed eigenstates and factorization checks
# ----------------------------------------------------------------------


_HO = SystemSpec("harmonic")


def ho_eigenstate(n):
    """Normalized harmonic-oscillator eigenstate as a jet-closed Solution."""
    norm = 1.0 / math.sqrt(2.0**n * math.factorial(n) * math.sqrt(math.pi))

    def jet(x):
        h = orthopoly("hermite", n, 0.0, x)
        hm = orthopoly("hermite", n - 1, 0.0, x) if n > 0 else 0.0
        e = math.exp(-0.5 * x * x)
        return norm * e * h, norm * e * (2.0 * n * hm - x * h)

    return DerivedSolution(_HO, n + 0.5, jet, label=f"psi_{n}")


class _StageJets:
    """Log-derivative jets of all sub-Wronskians W(u_1..u_m), m = 0..k."""

    def __init__(self, chain):
        self.chain = chain
        self.wjs = [WronskianJet(chain.members[:m]) for m in range(chain.k + 1)]
        self.wjs[0] = ConstantOne()

    def alphas(self, x):
        """alpha_m = (ln W_m)' - (ln W_{m-1})' and their derivatives."""
        l1 = [0j]
        l2 = [0j]
        for m in range(1, self.chain.k + 1):
            d = self.wjs[m].derivs(x, 2)
            logs = log_derivatives(d)
            l1.append(logs[0])
            l2.append(logs[1])
        alpha = [l1[m] - l1[m - 1] for m in range(1, self.chain.k + 1)]
        dalpha = [l2[m] - l2[m - 1] for m in range(1, self.chain.k + 1)]
        v_levels = [self.chain.system.potential(x) - l2[m] for m in range(self.chain.k + 1)]
        return alpha, dalpha, v_levels


def apply_bk_plus(chain, state, x):
    """(B_k^+ state)(x) and its derivative via first-order stage operators."""
    stages = _StageJets(chain)
    alpha, dalpha, v_levels = stages.alphas(x)
    e = complex(state.energy)
    phi, dphi = state.jet(x)
    for m in range(chain.k):
        ddphi = 2.0 * (v_levels[m] - e) * phi
        nphi = (-dphi + alpha[m] * phi) / _SQRT2
        ndphi = (-ddphi + dalpha[m] * phi + alpha[m] * dphi) / _SQRT2
        phi, dphi = nphi, ndphi
    return phi, dphi


def apply_bk_minus(chain, values, x):
    """(B_k^- phi)(x) for a jet (phi, phi') living at the H_k level."""
    stages = _StageJets(chain)
    alpha, dalpha, v_levels = stages.alphas(x)
    phi, dphi, energy = values
    for m in range(chain.k, 0, -1):
        ddphi = 2.0 * (v_levels[m] - energy) * phi
        nphi = (dphi + alpha[m - 1] * phi) / _SQRT2
        ndphi = (ddphi + dalpha[m - 1] * phi + alpha[m - 1] * dphi) / _SQRT2
        phi, dphi = nphi, ndphi
    return phi, dphi


@dataclass
class TransformedState:
    """Eigenfunction of H_k with its level tag and analytic jet."""

    tag: tuple
    energy: complex
    _jet_fn: object

    def jet(self, x):
        return self._jet_fn(x)

    def __call__(self, x):
        return self._jet_fn(x)[0]


def transformed_state(chain, level):
    """Eigenfunctions of H_k: mapped originals or the new-level states.

    level = ('original', n) uses B_k^+ psi_n (harmonic base);
    level = ('new', j) with 1-based j uses the Wronskian-ratio formula
    W(u_1..u_{j-1}, u_{j+1}..u_k) / W(u_1..u_k).
    """
    kind, idx = level
    if kind == "original":
        state = ho_eigenstate(idx)

        def jet(x, _state=state):
            phi, dphi = apply_bk_plus(chain, _state, x)
            return phi, dphi

        return TransformedState(("original", idx), state.energy, jet)
    if kind == "new":
        if not 1 <= idx <= chain.k:
            raise DomainError("new-level index out of range")
        others = [m for i, m in enumerate(chain.members, start=1) if i != idx]
        num = WronskianJet(others) if others else ConstantOne()
        den = WronskianJet(chain.members)

        def jet(x):
            nd = num.derivs(x, 1)
            dd = den.derivs(x, 1)
            val = nd[0] / dd[0]
            dval = (nd[1] * dd[0] - nd[0] * dd[1]) / dd[0] ** 2
            return val, dval

        return TransformedState(("new", idx), chain.energies[idx - 1], jet)
    raise DomainError(f"unknown level kind {kind!r}")


@dataclass
class FactorizationReport:
    residual: float
    scalar: complex
    expected_scalar: complex


def factorization_check(chain, n, grid=None):
    """Residual of B_k^- B_k^+ psi_n - prod_j (E_n - eps_j) psi_n."""
    if chain.system.kind != "harmonic":
        raise DomainError("factorization check runs on the harmonic base")
    state = ho_eigenstate(n)
    e_n = n + 0.5
    expected = 1.0 + 0j
    for eps in chain.energies:
        expected *= e_n - complex(eps)
    xs = grid if grid is not None else np.linspace(-4.0, 4.0, 41)
    worst = 0.0
    best_scalar = None
    best_mag = -1.0
    for x in xs:
        phi, dphi = apply_bk_plus(chain, state, x)
        out, _ = apply_bk_minus(chain, (phi, dphi, e_n), x)
        psi = state.jet(x)[0]
        worst = max(worst, abs(out - expected * psi))
        if abs(psi) > best_mag:
            best_mag = abs(psi)
            best_scalar = out / psi
    scale = max(1.0, abs(expected))
    return FactorizationReport(worst / scale, best_scalar, expected)
