"""The SL(2, C)/SU(2) counterexample family.

A bi-invariant function g is prescribed through its spherical transform
g_hat(lambda) = psi_tilde(2 lambda) e^{-lambda^2/4} P(2 lambda) for an even
compactly supported bump psi and an even polynomial P, then evaluated by
two independent routes:

  spectral:    g(a_t) = int_R psi_tilde(2l) e^{-l^2/4} P(2l)
                          sin(2lt)/(l sinh 2t) l^2 dl
  convolution: g(a_t) = sqrt(pi) (psi_1 *_E h)(t) / sinh(2t),
               h(y) = e^{-4y^2},  psi_1 = inverse sine transform of
               lambda P(lambda) psi_tilde(lambda)  (a derivative of psi).

Group data: sigma(a_t) = 2|t|, Xi(a_t) = 2t/sinh(2t), Plancherel = lambda^2;
in the Jacobi coordinates of H^3 this is r = 2t.  Beyond t ~ 2 the spectral
integral cancels below double precision and is continued by shifting the
contour to u + 8it, which also yields log|g| for the envelope fits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .numkernel import IntegralVerdict, QuadratureSpec, dyadic_window_sums, tail_verdict
from .profiles import RadialProfile, SpectralProfile, DecayModel
from .symmspace import preset
from .cpverify import CPConditionSpec, evaluate_cp_space, evaluate_cp_spectral

__all__ = [
    "UnboundedRatio",
    "BumpSpec",
    "CounterexampleSpec",
    "construct_g_spectral",
    "construct_g_convolution",
    "log_abs_g",
    "g_hat",
    "verify_sharp_bounds",
    "SharpBounds",
    "cp_integral_scenarios",
]

_T_CONTOUR = 1.5  # direct spectral quadrature cancels ~e^{-4t^2}; switch here


class UnboundedRatio(ArithmeticError):
    """No polynomial order up to 20 bounds the scanned ratio."""


@dataclass(frozen=True)
class BumpSpec:
    """Even C^infty bump exp(s (1 - zeta^2/(zeta^2 - x^2))) on (-zeta, zeta)."""

    zeta: float
    smoothness: float = 1.0
    grid_step: float = 1e-3

    def __post_init__(self):
        if not 0.0 < self.zeta < 0.25:
            raise ValueError("need zeta in (0, 1/4) so that ell = 1 - 4 zeta > 0")
        if self.smoothness <= 0 or self.grid_step <= 0:
            raise ValueError("smoothness and grid_step must be positive")

    @property
    def ell(self) -> float:
        return 1.0 - 4.0 * self.zeta

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < self.zeta
        xs = np.where(inside, x, 0.0)
        with np.errstate(over="ignore"):
            vals = np.exp(self.smoothness
                          * (1.0 - self.zeta ** 2 / (self.zeta ** 2 - xs ** 2)))
        return np.where(inside, vals, 0.0)

    def tilde(self, w):
        """Fourier transform 2 int_0^zeta psi(x) cos(w x) dx; w may be complex.

        Composite Gauss-Legendre panels sized so each sees a bounded phase;
        values below ~1e-15 of psi-scale are double-precision noise."""
        w = np.asarray(w)
        wmax = float(np.max(np.abs(w))) if w.size else 1.0
        x, wt = _bump_nodes(self.zeta, self.smoothness, wmax * self.zeta)
        return 2.0 * np.tensordot(np.cos(np.multiply.outer(w, x)), wt, axes=([-1], [0])) * np.ones_like(w)

    def log_tilde_abs(self, lam):
        """log |tilde(lam)| with the computed values where they are above the
        double-precision floor and the fitted stationary-phase envelope
        a - c sqrt(zeta lam) beyond it (the decay law for this bump class)."""
        lam = np.abs(np.asarray(lam, dtype=float))
        a, c, lam_floor = self._tail_fit()
        direct = np.where(lam <= lam_floor, lam, lam_floor)
        with np.errstate(divide="ignore"):
            core = np.log(np.abs(self.tilde(direct)) + 1e-300)
        return np.where(lam <= lam_floor, core,
                        a - c * np.sqrt(self.zeta * lam))

    def _tail_fit(self):
        key = (self.zeta, self.smoothness)
        if key not in _BUMP_TAIL_CACHE:
            mu = np.linspace(40.0, 900.0, 400)
            vals = np.abs(self.tilde(mu / self.zeta))
            floor = 2e-15 * float(np.abs(self.tilde(np.zeros(1))[0]))
            ok = vals > floor
            A = np.stack([np.ones(np.sum(ok)), -np.sqrt(mu[ok])], axis=1)
            coef, *_ = np.linalg.lstsq(A, np.log(vals[ok]), rcond=None)
            lam_floor = (mu[ok][-1]) / self.zeta
            _BUMP_TAIL_CACHE[key] = (float(coef[0]), float(coef[1]), float(lam_floor))
        return _BUMP_TAIL_CACHE[key]


_BUMP_NODE_CACHE: dict = {}
_BUMP_TAIL_CACHE: dict = {}
_LEGGAUSS_CACHE: dict = {}


def _leggauss(n: int):
    if n not in _LEGGAUSS_CACHE:
        _LEGGAUSS_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _LEGGAUSS_CACHE[n]


def _bump_nodes(zeta: float, smoothness: float, max_phase: float):
    panels = max(4, int(max_phase / 80.0) + 1)
    key = (zeta, smoothness, panels)
    if key not in _BUMP_NODE_CACHE:
        u, wu = _leggauss(48)
        edges = np.linspace(0.0, zeta, panels + 1)
        xs, ws = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            xs.append(0.5 * (b - a) * (u + 1.0) + a)
            ws.append(0.5 * (b - a) * wu)
        x = np.concatenate(xs)
        wt = np.concatenate(ws) * BumpSpec(zeta, smoothness)(x)
        _BUMP_NODE_CACHE[key] = (x, wt)
    return _BUMP_NODE_CACHE[key]


@dataclass(frozen=True)
class CounterexampleSpec:
    psi: BumpSpec
    poly: tuple = (1.0,)          # coefficients of the even polynomial P
    t_grid: tuple = tuple(np.round(np.linspace(0.05, 5.0, 100), 6))

    def __post_init__(self):
        coef = np.asarray(self.poly, dtype=float)
        if coef.size == 0 or np.any(np.abs(coef[1::2]) > 0):
            raise ValueError("P must be an even polynomial (odd coefficients zero)")
        if np.max(np.abs(np.asarray(self.t_grid))) > 10.0 or np.min(np.asarray(self.t_grid)) <= 0:
            raise ValueError("t_grid must lie in (0, 10]")

    def P(self, lam):
        return np.polynomial.polynomial.polyval(np.asarray(lam), np.asarray(self.poly))


def g_hat(spec: CounterexampleSpec, lam):
    """Spherical transform psi_tilde(2 lam) e^{-lam^2/4} P(2 lam)."""
    lam = np.asarray(lam, dtype=float)
    return spec.psi.tilde(2.0 * lam) * np.exp(-lam ** 2 / 4.0) * spec.P(2.0 * lam)


def _spectral_direct(spec: CounterexampleSpec, t: float) -> float:
    # g(a_t) = (2/sinh 2t) int_0^inf psi~(2l) e^{-l^2/4} P(2l) l sin(2lt) dl
    lam, w = _leggauss(1200)
    lam = 9.0 * (lam + 1.0)
    w = 9.0 * w
    core = spec.psi.tilde(2.0 * lam) * np.exp(-lam ** 2 / 4.0) * spec.P(2.0 * lam) * lam
    if abs(t) < 1e-9:
        return float(2.0 * np.sum(w * core * lam))  # sin(2lt)/sinh(2t) -> l
    return float(2.0 * np.sum(w * core * np.sin(2.0 * lam * t)) / math.sinh(2.0 * t))


def _spectral_contour(spec: CounterexampleSpec, t: float):
    """(value_sign, log|g|) via the shifted contour u + 8it (non-oscillatory)."""
    u, w = _leggauss(800)
    U = 26.0
    u = U * u
    w = U * w
    z = u + 8.0j * t
    S = z * spec.P(z) * spec.psi.tilde(z)
    I = np.sum(w * S * np.exp(-u ** 2 / 16.0))
    # g = Im[e^{-4t^2} I] / (4 sinh 2t); log sinh(2t) = 2t + log1p(-e^{-4t}) - log 2
    im = float(np.imag(I))
    log_sinh = 2.0 * abs(t) + math.log1p(-math.exp(-4.0 * abs(t))) - math.log(2.0)
    log_abs = -4.0 * t * t + math.log(abs(im) + 1e-300) - math.log(4.0) - log_sinh
    return math.copysign(1.0, im) / math.copysign(1.0, math.sinh(2.0 * t)), log_abs


def construct_g_spectral(spec: CounterexampleSpec, t: float) -> float:
    """g(a_t) by the inversion integral (contour-shifted once e^{-4t^2}
    drops below the double-precision cancellation floor)."""
    if abs(t) <= _T_CONTOUR:
        return _spectral_direct(spec, t)
    sign, log_abs = _spectral_contour(spec, abs(t))
    return sign * math.exp(log_abs)


def log_abs_g(spec: CounterexampleSpec, t) -> np.ndarray:
    """log |g(a_t)|, stable on the whole scan range."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty(t_arr.shape)
    for i, ti in enumerate(t_arr):
        ta = abs(ti)
        if ta <= _T_CONTOUR:
            out[i] = math.log(abs(_spectral_direct(spec, ta)) + 1e-300)
        else:
            out[i] = _spectral_contour(spec, ta)[1]
    return out if np.ndim(t) else float(out[0])


def _psi1_profile(spec: CounterexampleSpec):
    """psi_1 on a fine grid: inverse sine transform of l P(l) psi~(l)."""
    zeta = spec.psi.zeta
    x = np.arange(0.0, zeta + spec.psi.grid_step, spec.psi.grid_step)
    lam_max = _psi1_cutoff(spec)
    n = max(1500, int(0.8 * zeta * lam_max) + 200)
    lam, w = _leggauss(n)
    lam = 0.5 * lam_max * (lam + 1.0)
    w = 0.5 * lam_max * w
    S = lam * spec.P(lam) * spec.psi.tilde(lam)
    vals = (w * S) @ np.sin(np.outer(lam, x)) / math.pi
    return x, vals


def _psi1_cutoff(spec: CounterexampleSpec) -> float:
    """Synthesis cutoff: stop where the weighted spectrum drops to 1e-12 of
    its peak or where psi~ reaches the double-precision noise floor; past
    the floor, samples are roundoff and polynomially-weighted noise would
    swamp the synthesis (the true remainder is negligible there)."""
    zeta = spec.psi.zeta
    lam = np.linspace(1.0, 1200.0 / zeta, 2500)
    tv = np.abs(spec.psi.tilde(lam))
    floor = 2e-15 * float(np.abs(spec.psi.tilde(np.zeros(1))[0]))
    above = np.nonzero(tv > floor)[0]
    lam_floor = lam[above[-1]] if above.size else lam[-1]
    mag = np.abs(lam * spec.P(lam)) * tv
    top = float(np.max(mag))
    good = np.nonzero(mag > 1e-12 * top)[0]
    lam_mass = lam[good[-1]] if good.size else lam[-1]
    return float(min(lam_floor, lam_mass) + 10.0)


_PSI1_CACHE: dict = {}


def psi1_spline(spec: CounterexampleSpec):
    key = (spec.psi.zeta, spec.psi.smoothness, spec.psi.grid_step, spec.poly)
    if key not in _PSI1_CACHE:
        x, vals = _psi1_profile(spec)
        _PSI1_CACHE[key] = (CubicSpline(x, vals, extrapolate=False), float(x[-1]))
    return _PSI1_CACHE[key]


def _bump_derivative_tables(zeta: float, smoothness: float, order: int):
    """psi^(j) = p_j(x) / (zeta^2 - x^2)^{m_j} * psi(x), exact recurrence.

    With E = s(1 - zeta^2/(zeta^2 - x^2)), E' = -2 s zeta^2 x/(zeta^2-x^2)^2;
    R_{j+1} = R_j' + R_j E' keeps the form polynomial over a power of
    (zeta^2 - x^2)."""
    P = np.polynomial.polynomial
    den = np.array([zeta ** 2, 0.0, -1.0])  # zeta^2 - x^2
    tables = [(np.array([1.0]), 0)]
    for _ in range(order):
        p, m = tables[-1]
        dp = P.polyder(p)
        num = P.polyadd(P.polymul(P.polyadd(P.polymul(dp, den),
                                            P.polymul(p, np.array([0.0, 2.0 * m]))), den),
                        P.polymul(p, np.array([0.0, -2.0 * smoothness * zeta ** 2])))
        tables.append((num, m + 2))
    return tables


def psi1_exact(spec: CounterexampleSpec, x):
    """psi_1 as the exact derivative combination sum a_2k (-1)^{k+1} psi^(2k+1)."""
    zeta, s = spec.psi.zeta, spec.psi.smoothness
    coef = np.asarray(spec.poly, dtype=float)
    order = len(coef)  # highest needed derivative = deg P + 1 = len-1+1
    tables = _bump_derivative_tables(zeta, s, order)
    x = np.asarray(x, dtype=float)
    inside = np.abs(x) < zeta
    xs = np.where(inside, x, 0.0).astype(np.longdouble)
    d = np.longdouble(zeta) ** 2 - xs ** 2
    base = spec.psi(np.where(inside, x, 0.0)).astype(np.longdouble)
    out = np.zeros_like(xs)
    # long-double Horner: the numerators alternate in sign and cancel badly
    for k in range(0, len(coef), 2):
        a = coef[k]
        if a == 0.0:
            continue
        p, m = tables[k + 1]
        acc = np.zeros_like(xs)
        for ck in p[::-1].astype(np.longdouble):
            acc = acc * xs + ck
        sign = -1.0 if (k // 2) % 2 == 0 else 1.0
        out = out + a * sign * acc / d ** m * base
    return np.where(inside, out.astype(float), 0.0)


def _hermite_kernel(spec: CounterexampleSpec, u):
    """K(u) = sum_k a_2k (-1)^{k+1} h^(2k+1)(u) for h(u) = e^{-4u^2}.

    h^(j) = q_j(u) e^{-4u^2} with q_{j+1} = q_j' - 8 u q_j; after moving the
    derivatives of psi onto h by parts, (psi_1 * h) = int psi K(t - y) dy."""
    P = np.polynomial.polynomial
    coef = np.asarray(spec.poly, dtype=float)
    q = np.array([1.0])
    kernel_poly = np.array([0.0])
    for j in range(1, len(coef) + 1):
        q = P.polyadd(P.polyder(q), P.polymul(np.array([0.0, -8.0]), q))
        k = j - 1
        if k < len(coef) and k % 2 == 0 and coef[k] != 0.0:
            sign = -1.0 if (k // 2) % 2 == 0 else 1.0
            kernel_poly = P.polyadd(kernel_poly, coef[k] * sign * q)
    u = np.asarray(u, dtype=float)
    return P.polyval(u, kernel_poly) * np.exp(-4.0 * u ** 2)


def construct_g_convolution(spec: CounterexampleSpec, t: float) -> float:
    """g(a_t) = sqrt(pi) (psi_1 * e^{-4 .^2})(t) / sinh(2t).

    The derivatives defining psi_1 are moved onto the Gaussian by parts:
    the raw psi_1 swings over ~1e10 dynamic range near the support edge and
    its convolution cancels catastrophically, while psi against the Hermite
    kernel is perfectly conditioned."""
    if abs(t) < 1e-9:
        raise ValueError("convolution route needs t != 0")
    zeta = spec.psi.zeta
    u, w = _leggauss(192)
    y = zeta * u
    wy = zeta * w
    conv = float(np.sum(wy * spec.psi(y) * _hermite_kernel(spec, t - y)))
    return math.sqrt(math.pi) * conv / math.sinh(2.0 * t)


# ---------------------------------------------------------------------------
# bounds and Cowling-Price scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SharpBounds:
    m_fit: int
    ratio_max: float
    n_fit: int
    spectral_ratio_max: float
    alt_space_ratio_max: float
    alt_spectral_ratio_max: float


def _min_poly_order(log_ratio, log_base, max_order: int = 20) -> int:
    """Smallest M with ratio/(1+s)^M non-increasing over the scan tail.

    The slope is fitted on the decreasing envelope (reverse running max):
    the ratios oscillate through zeros, so raw log values are unusable."""
    env = np.maximum.accumulate(log_ratio[::-1])[::-1]
    k = max(4, env.size // 3)
    slope = np.polyfit(log_base[-k:], env[-k:], 1)[0]
    m = max(0, int(math.ceil(slope - 0.05)))
    if m > max_order:
        raise UnboundedRatio(f"needed polynomial order {m} > {max_order}")
    return m


def verify_sharp_bounds(spec: CounterexampleSpec, t_grid=None) -> SharpBounds:
    """Fit the minimal polynomial orders in the sharp bounds

        |g(a_t)| <= C e^{-sigma^2} Xi^ell (1+sigma)^M,
        |g_hat(lam)| <= C' e^{-lam^2/4} (1+lam)^N,

    and scan the a'.b' < 1/4 alternates |g| <= C1 e^{-sigma^2/2} Xi and
    |g_hat| <= C2 e^{-lam^2/5}; returns the orders and scanned suprema.
    """
    t_arr = np.asarray(spec.t_grid if t_grid is None else t_grid, dtype=float)
    sigma = 2.0 * t_arr
    log_xi_vals = np.log(sigma) - (np.log(2.0) + sigma + np.log1p(-np.exp(-2.0 * sigma))) + math.log(2.0)
    lg = log_abs_g(spec, t_arr)
    log_ratio = lg + sigma ** 2 - spec.psi.ell * log_xi_vals
    m = _min_poly_order(log_ratio, np.log1p(sigma))
    ratio_max = float(np.max(np.exp(log_ratio - m * np.log1p(sigma))))

    lam = np.linspace(0.0, 16.0, 400)
    with np.errstate(divide="ignore"):
        log_spec = np.log(np.abs(g_hat(spec, lam)) + 1e-300) + lam ** 2 / 4.0
    n = _min_poly_order(log_spec[lam > 1.0], np.log1p(lam[lam > 1.0]))
    spectral_ratio_max = float(np.max(np.exp(log_spec - n * np.log1p(lam))))

    alt_space = float(np.max(np.exp(lg + 0.5 * sigma ** 2 - log_xi_vals)))
    alt_spec = float(np.max(np.exp(np.log(np.abs(g_hat(spec, lam)) + 1e-300)
                                   + lam ** 2 / 5.0)))
    return SharpBounds(m, ratio_max, n, spectral_ratio_max, alt_space, alt_spec)


def g_profile(spec: CounterexampleSpec, r_max: float = 12.0,
              step: float = 0.01) -> RadialProfile:
    """g as a radial profile in the Jacobi coordinate r = 2t = sigma."""
    r = np.arange(0.0, r_max + 0.5 * step, step)
    vals = np.array([construct_g_spectral(spec, ri / 2.0) for ri in r])
    return RadialProfile(r, vals, DecayModel.gaussian(0.9),
                         log_tail=lambda rr: log_abs_g(spec, np.asarray(rr) / 2.0))


def g_hat_spectral_profile(spec: CounterexampleSpec, lam_max: float = 24.0,
                           step: float = 0.01) -> SpectralProfile:
    lam = np.arange(0.0, lam_max + step, step)
    vals = g_hat(spec, lam)
    dens = lam ** 2

    def log_abs(ll):
        ll = np.asarray(ll, dtype=float)
        with np.errstate(divide="ignore"):
            logP = np.log(np.abs(spec.P(2.0 * ll)) + 1e-300)
        return spec.psi.log_tilde_abs(2.0 * ll) - ll ** 2 / 4.0 + logP

    return SpectralProfile(lam, vals, dens, log_abs_fn=log_abs)


def cp_integral_scenarios(spec: CounterexampleSpec,
                          bounds: SharpBounds = None):
    """Evaluate the Cowling-Price integrals for g on SL(2,C)/SU(2).

    Returns [(name, IntegralVerdict, expected_kind)]: the (a=1, b=1/4)
    pair with the Xi^{2/p - ell} weight, the (a'=1/2, b'=1/5) pair with the
    standard weight, and the reversed a.b > 1/4 sanity case (divergent).
    """
    if bounds is None:
        bounds = verify_sharp_bounds(spec)
    space = preset("H3_real")   # SL2(C)/SU(2) as a Jacobi pair, r = 2t
    p = q = 2.0
    k = 3.0 + bounds.m_fit * p + 1.0
    l = 3.0 + bounds.n_fit * q + 1.0
    prof = g_profile(spec)
    F = g_hat_spectral_profile(spec)
    out = []
    cond = CPConditionSpec("Space", p, 1.0, k, weight_exponent=2.0 / p - spec.psi.ell)
    out.append(("onfunction a=1 ell-weight", evaluate_cp_space(space, prof, cond), "Convergent"))
    cond = CPConditionSpec("Spectral", q, 0.25, l)
    out.append(("onft b=1/4", evaluate_cp_spectral(space, F, cond), "Convergent"))
    cond = CPConditionSpec("Space", p, 0.5, k)
    out.append(("onfunction-alt a'=1/2", evaluate_cp_space(space, prof, cond), "Convergent"))
    cond = CPConditionSpec("Spectral", q, 0.2, l)
    out.append(("onft-alt b'=1/5", evaluate_cp_spectral(space, F, cond), "Convergent"))
    cond = CPConditionSpec("Spectral", q, 1.0, l)
    out.append(("sanity a.b>1/4 spectral", evaluate_cp_spectral(space, F, cond), "Divergent"))
    return out
