import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jacobiheat.numkernel import (BudgetExceeded, IntegralVerdict, NonFinite,
                                  QuadratureSpec, TooFewWindows, adaptive_quad,
                                  convolve_1d, decide_integral,
                                  dyadic_window_sums, semiinfinite_gaussian_quad,
                                  tail_verdict)

# closed-form oracle: int_0^20 sin(10x) e^{-x} dx
#   = [10 - e^{-20}(sin 200 + 10 cos 200)] / 101
SIN_EXP_INTEGRAL = 0.099009900908498158


def test_constant_integrand():
    v, e = adaptive_quad(lambda x: 1.0, 0.0, 1.0)
    assert abs(v - 1.0) <= 1e-12


def test_gaussian_integral():
    v, _ = adaptive_quad(lambda x: math.exp(-x * x), 0.0, 10.0)
    assert abs(v - math.sqrt(math.pi) / 2.0) <= 1e-10


def test_oscillatory_closed_form():
    v, e = adaptive_quad(lambda x: math.sin(10 * x) * math.exp(-x), 0.0, 20.0)
    assert abs(v - SIN_EXP_INTEGRAL) <= max(1e-11, e)


def test_polynomial_exactness():
    # GK15 integrates low-degree polynomials to machine precision on [0, 1]
    for deg in range(0, 12):
        v, _ = adaptive_quad(lambda x, d=deg: x ** d, 0.0, 1.0)
        assert abs(v - 1.0 / (deg + 1)) <= 1e-12


def test_non_finite_raises():
    with pytest.raises(NonFinite):
        adaptive_quad(lambda x: math.nan if x < 0.5 else 1.0, 0.0, 1.0)


def test_budget_exceeded():
    spec = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-14, max_subdivisions=16)
    with pytest.raises(BudgetExceeded):
        adaptive_quad(lambda x: abs(x - 1 / math.pi) ** 0.1, 0.0, 1.0, spec)


def test_quadrature_spec_invariants():
    with pytest.raises(ValueError):
        QuadratureSpec(abs_tol=-1)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=8)
    with pytest.raises(ValueError):
        QuadratureSpec(tail_cutoff_sigma=4)


def test_semiinfinite_gaussian():
    v = semiinfinite_gaussian_quad(lambda x: math.exp(-x * x), 0.0, 1.0)
    assert abs(v - math.sqrt(math.pi) / 2.0) <= 1e-10
    v2 = semiinfinite_gaussian_quad(lambda x: x * x * math.exp(-x * x), 0.0, 1.0)
    assert abs(v2 - math.sqrt(math.pi) / 4.0) <= 1e-10


def test_semiinfinite_matches_adaptive_on_inversion_integrand():
    # spectral integrand of the SL2(C) inversion at t = 1
    def f(lam):
        if lam == 0.0:
            return 0.0
        return math.exp(-lam * lam / 4.0) * math.sin(2 * lam) / lam * lam ** 2

    a = semiinfinite_gaussian_quad(f, 0.0, 0.25)
    b, _ = adaptive_quad(f, 0.0, 40.0)
    assert abs(a - b) <= 1e-9


def test_convolution_gaussians():
    # e^{-x^2} * e^{-x^2} at 0 is sqrt(pi/2)
    v = convolve_1d(lambda y: math.exp(-y * y), lambda y: math.exp(-y * y),
                    0.0, f_support=(-9.0, 9.0))
    assert abs(v - math.sqrt(math.pi / 2.0)) <= 1e-10


def test_convolution_symmetry():
    f = lambda y: math.exp(-y * y)
    g = lambda y: math.exp(-2.0 * (y - 0.3) ** 2)
    for x in (0.0, 0.7):
        v1 = convolve_1d(f, g, x, f_support=(-9.0, 9.0))
        v2 = convolve_1d(g, f, x, f_support=(-9.0, 9.0))
        assert abs(v1 - v2) <= 1e-10


def test_convolution_mollifier_limit():
    # unit-mass bump of width 1e-3 against e^{-y^2} at 0 approaches 1
    w = 1e-3

    def bump(y):
        if abs(y) >= w:
            return 0.0
        return math.exp(-1.0 / (1.0 - (y / w) ** 2))

    mass, _ = adaptive_quad(bump, -w, w)
    v = convolve_1d(bump, lambda y: math.exp(-y * y), 0.0, f_support=(-w, w))
    assert abs(v / mass - 1.0) <= 1e-4


def test_convolution_fourier_multiplication_oracle():
    # psi0 * h evaluated directly vs through the product of transforms
    zeta = 0.2

    def psi0(y):
        if abs(y) >= zeta:
            return 0.0
        return math.exp(1.0 - zeta ** 2 / (zeta ** 2 - y ** 2))

    h = lambda y: math.exp(-4.0 * y * y)
    x0 = 1.0
    direct = convolve_1d(psi0, h, x0, f_support=(-zeta, zeta))

    def psi0_tilde(lam):
        v, _ = adaptive_quad(lambda y: psi0(y) * math.cos(lam * y), 0.0, zeta)
        return 2.0 * v

    def spectral_integrand(lam):
        # h~(lam) = sqrt(pi)/2 e^{-lam^2/16}
        return (psi0_tilde(lam) * math.sqrt(math.pi) / 2.0
                * math.exp(-lam * lam / 16.0) * math.cos(lam * x0) / math.pi)

    spectral, _ = adaptive_quad(spectral_integrand, 0.0, 60.0)
    assert abs(direct - spectral) <= 1e-7


def _windows_from(log_f):
    return dyadic_window_sums(log_f, r0=1.0, n_windows=8)


def test_tail_verdict_gaussian_convergent():
    with np.errstate(divide="ignore"):
        ws = _windows_from(lambda r: -np.asarray(r) ** 2
                           + 2 * np.log(np.asarray(r)))
    assert tail_verdict(ws).convergent


def test_tail_verdict_harmonic_divergent():
    ws = _windows_from(lambda r: -np.log1p(np.asarray(r)))
    v = tail_verdict(ws)
    assert v.divergent
    assert v.tail_slope >= -1.0


def test_tail_verdict_exponent_bookkeeping():
    # Theorem-3.3-style s < t bookkeeping: e^{p r^2 (1/4s - 1/4t)} grows
    p, s, t, n, k = 2.0, 0.15, 0.25, 3, 5.0
    rate = p * (1.0 / (4 * s) - 1.0 / (4 * t))

    def log_f(r):
        r = np.asarray(r, dtype=float)
        return rate * r ** 2 + (n - 1) * np.log(r) - k * np.log1p(r)

    assert tail_verdict(_windows_from(log_f)).divergent


def test_tail_verdict_too_few_windows():
    ws = dyadic_window_sums(lambda r: -np.asarray(r), n_windows=5)
    with pytest.raises(TooFewWindows):
        tail_verdict(ws)


def test_tail_verdict_stable_under_window_doubling():
    with np.errstate(divide="ignore"):
        gaussian = lambda r: -np.asarray(r) ** 2
    harmonic = lambda r: -np.log1p(np.asarray(r))
    for n in (8, 16):
        assert tail_verdict(dyadic_window_sums(gaussian, n_windows=n)).convergent
        assert tail_verdict(dyadic_window_sums(harmonic, n_windows=n)).divergent


def test_decide_integral_slow_geometric():
    # (1+r)^{-1.9}: window ratio 2^{-0.9}, needs the adaptive continuation
    v = decide_integral(lambda r: -1.9 * np.log1p(np.asarray(r)))
    assert v.convergent


def test_growth_below_tolerance_is_still_divergent():
    # tiny but growing window sums must not be mistaken for a zero tail
    def log_f(r):
        return -60.0 + 2.0 * np.log(np.asarray(r)) - np.log1p(np.asarray(r))

    assert decide_integral(log_f).divergent


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=8),
       st.floats(min_value=-2.0, max_value=2.0, allow_nan=False))
def test_quad_polynomial_property(deg, shift):
    v, _ = adaptive_quad(lambda x: (x - shift) ** deg, 0.0, 1.0)
    exact = ((1.0 - shift) ** (deg + 1) - (0.0 - shift) ** (deg + 1)) / (deg + 1)
    assert abs(v - exact) <= 1e-11 * max(1.0, abs(exact))
