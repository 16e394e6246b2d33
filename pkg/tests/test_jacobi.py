import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jacobiheat.jacobi import (DecayInsufficient, JacobiParams, PoleAtZero,
                               jacobi_assoc_phi, jacobi_c, jacobi_inverse,
                               jacobi_phi, jacobi_phi_grid, jacobi_transform,
                               phi_growth_check, plancherel_density,
                               spectral_grid, weight_delta)
from jacobiheat.profiles import DecayModel, RadialProfile, SpectralProfile

H3 = JacobiParams(0.5, -0.5)
COSINE = JacobiParams(-0.5, -0.5)


def test_phi_cosine_reduction():
    # alpha = beta = -1/2 gives phi_lambda(r) = cos(lambda r)
    assert abs(jacobi_phi(COSINE, 2.0, math.pi / 4)) <= 1e-10
    assert abs(jacobi_phi(COSINE, 1.3, 0.9) - math.cos(1.3 * 0.9)) <= 1e-12


def test_phi_h3_closed_form():
    # sin(lambda r)/(lambda sinh r); at (1, 1) this is 0.71602291536043387
    v = jacobi_phi(H3, 1.0, 1.0)
    assert abs(v - math.sin(1.0) / math.sinh(1.0)) <= 1e-9
    for lam, r in ((0.3, 0.2), (2.5, 4.0), (7.0, 9.0)):
        ref = math.sin(lam * r) / (lam * math.sinh(r))
        assert abs(jacobi_phi(H3, lam, r) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_phi_at_zero_is_one():
    for params in (H3, JacobiParams(1.0, 0.0), JacobiParams(3.0, 1.0)):
        assert jacobi_phi(params, 1.7, 0.0) == 1.0


def test_phi_even_in_lambda():
    for lam in (0.7, 2.3 + 0.4j):
        a = jacobi_phi(H3, lam, 2.2)
        b = jacobi_phi(H3, -lam, 2.2)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_beta_flip_identity():
    # phi^{(a,b)} = (cosh r)^{-2b} phi^{(a,-b)}
    p_plus = JacobiParams(1.0, 0.5)
    p_minus = JacobiParams(1.0, -0.5)
    for lam in (0.5, 1.5, 4.0):
        for r in (0.3, 1.0, 2.5, 6.0):
            lhs = jacobi_phi(p_plus, lam, r)
            rhs = math.cosh(r) ** (-1.0) * jacobi_phi(p_minus, lam, r)
            assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


def test_assoc_phi_examples():
    assert jacobi_assoc_phi(H3, 0, 0, 1.2, 0.8) == jacobi_phi(H3, 1.2, 0.8)
    # p = 0: value 1 at r = 0 for any q
    assert jacobi_assoc_phi(H3, 0, 2, 0.9, 0.0) == 1.0
    # factor-wise cross-check for (p, q) = (2, 0)
    v = jacobi_assoc_phi(H3, 2, 0, 1.0, 1.0)
    ref = math.sinh(1.0) ** 2 * jacobi_phi(JacobiParams(2.5, -0.5), 1.0, 1.0)
    assert abs(v - ref) <= 1e-12 * abs(ref)


def test_weight_delta():
    assert np.allclose(weight_delta(COSINE, 1.7), 1.0)
    assert abs(weight_delta(H3, 1.0) - (2 * math.sinh(1.0)) ** 2) <= 1e-12
    # log Delta(r) - 2 rho r -> log(4^rho / 2^{2 rho}) = 0
    r = 20.0
    assert abs(math.log(weight_delta(H3, r)) - 2 * H3.rho * r) <= 1e-6


def test_params_invariants():
    with pytest.raises(ValueError):
        JacobiParams(-1.5, 0.0)
    with pytest.raises(ValueError):
        JacobiParams(0.0, -1.5)


def test_c_function_h3_density():
    # |c|^{-2} = lambda^2 on H^3: slope 2 on a log-log grid near 0
    lam = np.array([0.01, 0.1])
    dens = plancherel_density(H3, lam)
    slope = np.diff(np.log(dens)) / np.diff(np.log(lam))
    assert abs(slope[0] - 2.0) <= 1e-3
    assert np.max(np.abs(dens / lam ** 2 - 1.0)) <= 1e-10


def test_c_function_conjugate_symmetry():
    lam = 1.7
    c = jacobi_c(JacobiParams(1.0, 0.0), lam)
    dens = plancherel_density(JacobiParams(1.0, 0.0), lam)
    assert abs(dens - 1.0 / (c * np.conj(c)).real) <= 1e-12 * dens


def test_c_function_pole_at_zero():
    with pytest.raises(PoleAtZero):
        jacobi_c(H3, 0.0)


def test_plancherel_growth_bound():
    # |c|^{-2} comparable to (1+lambda)^{2 alpha + 1} at large lambda
    for params in (H3, JacobiParams(1.0, 0.0), JacobiParams(3.0, 1.0)):
        lam = np.linspace(1.0, 100.0, 60)
        ratio = plancherel_density(params, lam) / (1 + lam) ** (2 * params.alpha + 1)
        assert np.max(ratio) / np.min(ratio) < 50.0


def _ode_residual(params, lam, r, f):
    h = 1e-3
    f0 = f(r)
    fp = f(r + h)
    fm = f(r - h)
    d2 = (fp - 2 * f0 + fm) / h ** 2
    d1 = (fp - fm) / (2 * h)
    coeff = (2 * params.alpha + 1) / np.tanh(r) + (2 * params.beta + 1) * np.tanh(r)
    return d2 + coeff * d1 + (lam ** 2 + params.rho ** 2) * f0


def test_ode_residual_plain():
    r = np.arange(0.1, 10.0, 0.02)
    for lam in (0.5, 1.0, 3.0):
        resid = _ode_residual(H3, lam, r,
                              lambda rr: np.real(jacobi_phi_grid(H3, lam, rr)))
        assert np.max(np.abs(resid)) <= 1e-5 * (1 + lam ** 2)


def test_ode_residual_associated():
    # associated operator keeps the unshifted eigenvalue -(lambda^2 + rho^2)
    params = H3
    r = np.arange(0.2, 8.0, 0.05)
    for (p, q) in ((2, 0), (2, 2), (4, 0)):
        for lam in (0.5, 3.0):
            def f(rr):
                return np.real(np.sinh(rr) ** p * np.cosh(rr) ** q
                               * jacobi_phi_grid(params.shifted(p, q), lam, rr))

            h = 1e-3
            f0, fp, fm = f(r), f(r + h), f(r - h)
            d2 = (fp - 2 * f0 + fm) / h ** 2
            d1 = (fp - fm) / (2 * h)
            coeff = ((2 * params.alpha + 1) / np.tanh(r)
                     + (2 * params.beta + 1) * np.tanh(r))
            pot = (-(2 * params.alpha + p) * p / np.sinh(r) ** 2
                   + (2 * params.beta + q) * q / np.cosh(r) ** 2)
            resid = d2 + coeff * d1 + pot * f0 + (lam ** 2 + params.rho ** 2) * f0
            scale = np.maximum(np.abs(f0), 1.0)
            assert np.max(np.abs(resid) / scale) <= 1e-5 * (1 + lam ** 2)


def test_transform_of_zero():
    grid = np.linspace(0, 5, 300)
    prof = RadialProfile(grid, np.zeros_like(grid), DecayModel.compact(5.0))
    assert abs(jacobi_transform(prof, H3, 1.0)) == 0.0


def test_transform_requires_decay_for_complex_lambda():
    grid = np.linspace(0, 5, 300)
    prof = RadialProfile(grid, np.exp(-grid ** 2))
    with pytest.raises(DecayInsufficient):
        jacobi_transform(prof, H3, 1j)


def test_inverse_of_zero():
    lam = np.linspace(0, 5, 200)
    F = SpectralProfile(lam, np.zeros_like(lam), plancherel_density(H3, lam))
    assert abs(jacobi_inverse(F, H3, 1.0)) == 0.0


def test_transform_inverse_round_trip():
    # five Gaussian-type spectral profiles per preset, transform(inverse(F)) = F
    presets = (H3, JacobiParams(1.0, -0.5), JacobiParams(1.0, 0.0))
    shapes = ((1.0, 0.35), (1.0, 0.6), (0.7, 0.5), (1.3, 0.45), (1.0, 0.8))
    lam_chk = np.linspace(0.0, 4.0, 21)
    for params in presets:
        for amp, tt in shapes:
            lam = spectral_grid(params, tt, step=0.01)
            F = SpectralProfile(lam, amp * np.exp(-(lam ** 2 + params.rho ** 2) * tt),
                                plancherel_density(params, lam))
            r_max = 2 * params.rho * tt + math.sqrt(4 * tt * (40 + params.rho ** 2 * tt)) + 2
            grid = np.arange(0.0, r_max, 0.02)
            vals = np.real(jacobi_inverse(F, params, grid))
            prof = RadialProfile(grid, vals, DecayModel.gaussian(1 / (8 * tt)))
            back = np.real(jacobi_transform(prof, params, lam_chk))
            ref = amp * np.exp(-(lam_chk ** 2 + params.rho ** 2) * tt)
            assert np.max(np.abs(back - ref)) <= 1e-5 * amp


def test_growth_check_examples():
    r_grid = np.linspace(0.1, 20.0, 120)
    # real lambda on H^3: closed form keeps the ratio at or below ~1
    assert phi_growth_check(H3, 1.0, r_grid) <= 1.01
    # imaginary lambda with |Im| > rho: bounded ratio, growth matched
    assert phi_growth_check(H3, 2j, r_grid) < 10.0
    # r -> 0: ratio -> phi(0) = 1
    assert abs(phi_growth_check(H3, 1.0, np.array([1e-6])) - 1.0) <= 1e-4


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.05, max_value=8.0),
       st.floats(min_value=0.05, max_value=6.0))
def test_phi_evenness_property(lam, r):
    a = jacobi_phi_grid(H3, np.array([lam]), r)[0]
    b = jacobi_phi_grid(H3, np.array([-lam]), r)[0]
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))
