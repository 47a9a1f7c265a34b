"""Special-function kernel: examples, invariants, error conditions."""

import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sps

from susy_painleve import specfun
from susy_painleve.errors import (
    DegenerateDenominator,
    DivergentSeriesError,
    DomainError,
    PoleError,
)

RNG = np.random.default_rng(20260810)


def test_gamma_values():
    assert specfun.gamma(1.0) == pytest.approx(1.0, abs=1e-15)
    assert specfun.gamma(0.5) == pytest.approx(1.7724538509055160, abs=1e-15)
    assert specfun.gamma(5.0) == pytest.approx(24.0, rel=1e-14)


def test_gamma_pole():
    with pytest.raises(PoleError):
        specfun.gamma(0.0)
    with pytest.raises(PoleError):
        specfun.gamma(-3)
    assert specfun.rgamma(-3) == 0.0


def test_gamma_reflection_sample():
    # gamma(z) gamma(1-z) sin(pi z)/pi = 1 away from poles
    for _ in range(40):
        z = complex(RNG.uniform(-8, 8), RNG.uniform(-8, 8))
        if min(abs(z - round(z.real)) for _ in [0]) < 0.1 and abs(z.imag) < 0.1:
            continue
        val = specfun.gamma(z) * specfun.gamma(1 - z) * np.sin(np.pi * z) / np.pi
        assert abs(val - 1) < 1e-12


def test_kummer_trivial_values():
    assert specfun.kummer_m(0.37, 1.2, 0.0).value == 1.0
    assert specfun.kummer_m(1.0, 1.0, 1.0).value == pytest.approx(math.e, rel=1e-15)
    # terminating series 1 - (2/3) z at z=1
    assert specfun.kummer_m(-1.0, 1.5, 1.0).value == pytest.approx(1.0 / 3.0, rel=1e-14)


def test_kummer_lower_pole():
    with pytest.raises(DegenerateDenominator):
        specfun.kummer_m(0.3, -2.0, 1.0)


def test_kummer_transformation_invariant():
    # 1F1(a,b,z) = e^z 1F1(b-a, b, -z) on random samples, |z| <= 20
    for _ in range(40):
        a = complex(RNG.uniform(-3, 3), RNG.uniform(-2, 2))
        b = complex(RNG.uniform(0.3, 4), RNG.uniform(-1, 1))
        z = complex(*RNG.uniform(-14, 14, 2))
        lhs = specfun.kummer_m(a, b, z).value
        rhs = np.exp(z) * specfun.kummer_m(b - a, b, -z).value
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(lhs))


def test_kummer_contiguous_derivative():
    # d/dz 1F1(a,b;z) = (a/b) 1F1(a+1,b+1;z) against central differences
    h = 1e-5
    for _ in range(20):
        a = RNG.uniform(-2, 2)
        b = RNG.uniform(0.4, 3)
        z = RNG.uniform(-8, 8)
        num = (specfun.kummer_m(a, b, z + h).value - specfun.kummer_m(a, b, z - h).value) / (2 * h)
        ana = a / b * specfun.kummer_m(a + 1, b + 1, z).value
        assert abs(num - ana) <= 1e-7 * max(1.0, abs(ana))


def test_kummer_asymptotic_matches_series_band():
    # both branches agree for real arguments in the switch band
    for z in (26.0, 29.0, 33.0):
        ser = specfun._kummer_series(0.6, 1.7, complex(z)).value
        asym = specfun._kummer_asymptotic(0.6, 1.7, complex(z)).value
        assert abs(ser - asym) <= 1e-9 * abs(ser)


def test_kummer_large_argument_against_scipy():
    for z in (40.0, -45.0):
        mine = specfun.kummer_m(0.8, 1.9, z).value
        ref = sps.hyp1f1(0.8, 1.9, z)
        assert abs(mine - ref) <= 1e-10 * abs(ref)


def test_hyper_0f2_trivial_and_series_oracle():
    assert specfun.hyper_pfq([], [1.3, 0.7], 0.0).value == 1.0 + 0j
    # independent oracle: exact rational term-by-term summation
    total = Fraction(0)
    term = Fraction(1)
    for n in range(0, 40):
        total += term
        term = term / ((1 + n) * (1 + n) * (n + 1))
    mine = specfun.hyper_pfq([], [1.0, 1.0], 1.0).value
    assert abs(mine - float(total)) < 1e-14


def test_hyper_2f0_divergence():
    with pytest.raises(DivergentSeriesError) as err:
        specfun.hyper_pfq([1.25, 0.25], [], 0.5)
    assert err.value.terms_used >= 1
    assert np.isfinite(err.value.partial_sum)
    # diagnosis helper returns the partial sum without raising
    res = specfun.hyper_2f0_diagnosis(1.25, 0.25, 0.5)
    assert res.value == err.value.partial_sum


def test_erf_like_values():
    assert specfun.erf_like("erf", 0.0) == 0.0
    assert specfun.erf_like("erfc", 0.0) == 1.0
    # frozen from the odd Maclaurin series oracle
    assert specfun.erf_like("erfi", 1.0) == pytest.approx(1.6504257587975428, abs=1e-14)
    assert specfun.erf_like("erfi", -1.0) == -specfun.erf_like("erfi", 1.0)


def test_erf_complement_identity():
    for x in np.linspace(-6, 6, 25):
        assert specfun.erf_like("erf", x) + specfun.erf_like("erfc", x) == pytest.approx(1.0, abs=1e-15)


def test_erfi_scipy_crosscheck():
    for x in (0.3, 2.0, 5.5, 7.5):
        assert specfun.erf_like("erfi", x) == pytest.approx(float(sps.erfi(x)), rel=1e-13)


def test_orthopoly():
    assert specfun.orthopoly("hermite", 0, 0.0, 7.0) == 1.0
    assert specfun.orthopoly("hermite", 2, 0.0, 1.0) == 2.0
    # L_1^(alpha)(x) = 1 + alpha - x
    assert specfun.orthopoly("laguerre", 1, -1.5, 2.0) == pytest.approx(-1.5, abs=1e-15)
    assert specfun.orthopoly("hermite", 7, 0.0, 0.83) == pytest.approx(
        float(sps.eval_hermite(7, 0.83)), rel=1e-13
    )


def test_bessel():
    assert specfun.bessel("I", 0.0, 0.0) == 1.0
    assert specfun.bessel("I", 1.0, 0.0) == 0.0
    closed = math.sqrt(math.pi / 2.0) * math.exp(-1.0)
    assert specfun.bessel("K", 0.5, 1.0) == pytest.approx(closed, rel=1e-12)
    with pytest.raises(DomainError):
        specfun.bessel("K", 0.5, 0.0)


def test_tricomi_u():
    # polynomial case a = -n
    assert specfun.tricomi_u(-1, 1.4, 2.0) == pytest.approx(2.0 - 1.4, rel=1e-13)
    # logarithmic case c=1 via e^x E_1(x), an independent scipy route
    ref = math.e * float(sps.exp1(1.0))
    assert specfun.tricomi_u(1, 1, 1.0) == pytest.approx(ref, rel=1e-11)
    # generic combination against scipy's real hyperu
    assert specfun.tricomi_u(0.5, 0.3, 2.0) == pytest.approx(float(sps.hyperu(0.5, 0.3, 2.0)), rel=1e-12)
    with pytest.raises(DomainError):
        specfun.tricomi_u(1.0, 1.0, -1.0)


def test_parabolic_cylinder():
    # value at 0 equals the defining combination
    for nu in (0.7, -0.3, 2.2):
        ref = 2 ** (nu / 2) * math.sqrt(math.pi) * specfun.rgamma((1 - nu) / 2)
        assert specfun.parabolic_cylinder_e(nu, 0.0) == pytest.approx(ref, rel=1e-13)
    # frozen mpmath value of D_0.7(1.3)
    assert specfun.parabolic_cylinder_e(0.7, 1.3) == pytest.approx(0.8254988547681086, rel=1e-12)
    # integer nu recovers the Hermite-Gaussian closed forms
    x = 1.1
    assert specfun.parabolic_cylinder_e(0.0, x) == pytest.approx(math.exp(-x * x / 4), rel=1e-13)
    assert specfun.parabolic_cylinder_e(1.0, x) == pytest.approx(x * math.exp(-x * x / 4), rel=1e-13)
