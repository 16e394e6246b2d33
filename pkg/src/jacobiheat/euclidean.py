"""Euclidean machinery: Gaussian heat kernel, radial (Hankel-type) Fourier
transform, spherical-harmonic Fourier coefficients, and the dimension-shift
identity relating a degree-m coefficient to a radial transform in n+2m
dimensions.

Sphere quadrature is a trapezoid rule on S^1 and Gauss-Legendre (polar)
times trapezoid (azimuth) on S^2; higher dimensions are out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np
from scipy.integrate import simpson

from .profiles import RadialProfile
from .specfun import bessel_j, log_gamma

__all__ = [
    "UnsupportedDimension",
    "UnsupportedStructure",
    "DecayUnknown",
    "SphericalHarmonicSpec",
    "zonal_harmonic",
    "circular_harmonic",
    "sphere_surface",
    "sphere_nodes",
    "sphere_quadrature",
    "gauss_heat",
    "radial_fourier",
    "ProductFunction",
    "fourier_coeff_Fm",
    "DimensionShift",
    "dimension_shift_Fm",
    "zonal_identity_constant",
]


class UnsupportedDimension(ValueError):
    pass


class UnsupportedStructure(TypeError):
    pass


class DecayUnknown(ValueError):
    pass


def sphere_surface(n: int) -> float:
    """|S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / math.exp(log_gamma(n / 2.0).real)


# ---------------------------------------------------------------------------
# spherical harmonics (normalised in L^2 of the unnormalised surface measure)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SphericalHarmonicSpec:
    n: int
    m: int
    evaluator: Callable = None

    def __call__(self, points):
        return self.evaluator(np.asarray(points, dtype=float))


def _legendre_p(m: int, u):
    return np.polynomial.legendre.legval(np.asarray(u, dtype=float),
                                         [0.0] * m + [1.0])


def zonal_harmonic(n: int, m: int, axis=None) -> SphericalHarmonicSpec:
    """Degree-m zonal harmonic about `axis` (default: last coordinate pole)."""
    if n == 2:
        return circular_harmonic(m)
    if n != 3:
        raise UnsupportedDimension("zonal harmonics implemented for n in {2, 3}")
    ax = np.array([0.0, 0.0, 1.0]) if axis is None else np.asarray(axis, dtype=float)
    ax = ax / np.linalg.norm(ax)
    norm = math.sqrt((2 * m + 1) / (4.0 * math.pi))

    def ev(pts):
        u = np.clip(pts @ ax, -1.0, 1.0)
        return norm * _legendre_p(m, u)

    return SphericalHarmonicSpec(3, m, ev)


def circular_harmonic(m: int, phase: float = 0.0) -> SphericalHarmonicSpec:
    """cos(m theta + phase)-type harmonic on S^1, unit L^2 norm."""
    norm = 1.0 / math.sqrt(2.0 * math.pi) if m == 0 else 1.0 / math.sqrt(math.pi)

    def ev(pts):
        th = np.arctan2(pts[..., 1], pts[..., 0])
        return norm * (np.ones_like(th) if m == 0 else np.cos(m * th + phase))

    return SphericalHarmonicSpec(2, m, ev)


def sphere_nodes(n: int, n_polar: int = 48, n_azimuth: int = 96):
    """Quadrature nodes and weights on S^{n-1} (unnormalised measure)."""
    if n == 2:
        th = np.linspace(0.0, 2.0 * math.pi, n_azimuth, endpoint=False)
        pts = np.stack([np.cos(th), np.sin(th)], axis=-1)
        w = np.full(n_azimuth, 2.0 * math.pi / n_azimuth)
        return pts, w
    if n == 3:
        u, wu = np.polynomial.legendre.leggauss(n_polar)
        ph = np.linspace(0.0, 2.0 * math.pi, n_azimuth, endpoint=False)
        wph = 2.0 * math.pi / n_azimuth
        su = np.sqrt(1.0 - u ** 2)
        pts = np.stack([
            np.outer(su, np.cos(ph)).ravel(),
            np.outer(su, np.sin(ph)).ravel(),
            np.outer(u, np.ones_like(ph)).ravel(),
        ], axis=-1)
        w = np.outer(wu, np.full_like(ph, wph)).ravel()
        return pts, w
    raise UnsupportedDimension("sphere quadrature implemented for n in {2, 3}")


def sphere_quadrature(n: int, g, n_polar: int = 48, n_azimuth: int = 96) -> float:
    """Integral of g over S^{n-1}; exact for harmonics well past degree 20."""
    pts, w = sphere_nodes(n, n_polar, n_azimuth)
    vals = np.asarray(g(pts), dtype=complex)
    out = complex(w @ vals)
    return out.real if abs(out.imag) < 1e-13 * (1.0 + abs(out.real)) else out


# ---------------------------------------------------------------------------
# heat kernel and radial transform
# ---------------------------------------------------------------------------

def gauss_heat(n: int, t: float, r):
    """(4 pi t)^{-n/2} e^{-r^2/4t}."""
    if t <= 0:
        raise ValueError("need t > 0")
    r = np.asarray(r, dtype=float)
    out = (4.0 * math.pi * t) ** (-n / 2.0) * np.exp(-r ** 2 / (4.0 * t))
    return float(out) if out.ndim == 0 else out


def radial_fourier(n: int, f0: RadialProfile, rho) -> float:
    """Radial Fourier transform in R^n:

        f_hat(rho) = rho^{-(n-2)/2} int_0^inf f0(s) J_{(n-2)/2}(rho s) s^{n/2} ds,

    with the rho -> 0 limit (2 pi)^{-n/2} |S^{n-1}| int f0 s^{n-1} ds.
    """
    if f0.decay.kind == "Unknown":
        raise DecayUnknown("radial_fourier needs a certified decay model")
    s = f0.grid
    fs = np.real(f0.values)
    rho_arr = np.atleast_1d(np.asarray(rho, dtype=float))
    scalar = np.ndim(rho) == 0
    nu = (n - 2) / 2.0
    out = np.empty(rho_arr.shape)
    for i, rh in enumerate(rho_arr):
        if rh == 0.0:
            out[i] = (2.0 * math.pi) ** (-n / 2.0) * sphere_surface(n) * simpson(
                fs * s ** (n - 1), x=s)
        else:
            out[i] = rh ** (-nu) * simpson(fs * bessel_j(nu, rh * s) * s ** (n / 2.0), x=s)
    return float(out[0]) if scalar else out


# ---------------------------------------------------------------------------
# spherical-harmonic Fourier coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProductFunction:
    """f(x) = radial(|x|) * harmonic(x/|x|): the supported input family."""

    radial: RadialProfile
    harmonic: SphericalHarmonicSpec

    def __post_init__(self):
        if not isinstance(self.radial, RadialProfile) or not isinstance(
                self.harmonic, SphericalHarmonicSpec):
            raise UnsupportedStructure("need RadialProfile x SphericalHarmonicSpec")


def _inner_node_counts(n: int, kappa: float, m: int):
    deg = int(kappa) + m + 14
    if n == 2:
        return None, max(32, 2 * deg)
    return max(14, deg // 2 + 6), max(16, deg + 6)


def fourier_coeff_Fm(f: ProductFunction, lam: float,
                     outer_polar: int = 10, outer_azimuth: int = 20) -> complex:
    """F_m(lambda) = lambda^{-m} int_S f_hat(lambda, omega) S_m(omega) d omega,

    with f_hat evaluated by raw quadrature over R^n (radial Simpson times a
    full sphere rule), i.e. no Bessel shortcut: this is the route the
    dimension-shift identity is tested against.
    """
    if lam <= 0:
        raise ValueError("need lambda > 0")
    prof, harm = f.radial, f.harmonic
    n, m = harm.n, harm.m
    r = prof.grid[1:]
    fr = np.real(prof.values[1:])
    # Simpson weights on the uniform grid
    wr = _simpson_weights(prof.grid)[1:]
    np_in, na_in = _inner_node_counts(n, lam * prof.r_max, m)
    Xj, wj = sphere_nodes(n, np_in or 1, na_in)
    Ok, Wk = sphere_nodes(n, outer_polar, outer_azimuth)
    vj = wj * np.asarray(harm(Xj), dtype=float)
    vk = Wk * np.asarray(harm(Ok), dtype=float)
    D = Xj @ Ok.T
    acc = np.zeros(D.shape, dtype=complex)
    coef = wr * fr * r ** (n - 1)
    chunk = max(1, int(6e6 // D.size))
    for i in range(0, r.size, chunk):
        rr = r[i:i + chunk, None, None]
        acc += np.sum(coef[i:i + chunk, None, None] * np.exp(-1j * lam * rr * D[None]), axis=0)
    total = vj @ acc @ vk
    return complex(lam ** (-m) * (2.0 * math.pi) ** (-n / 2.0) * total)


def _simpson_weights(x):
    n = x.size
    if n < 3:
        raise ValueError("need at least 3 nodes")
    h = x[1] - x[0]
    w = np.zeros(n)
    last = n if n % 2 == 1 else n - 1
    w[0:last:2] += h / 3.0
    w[1:last:2] += 4.0 * h / 3.0
    w[2:last:2] += h / 3.0
    w[0] = h / 3.0
    w[last - 1] = h / 3.0 if n % 2 == 1 else w[last - 1]
    if n % 2 == 0:
        # trapezoid correction on the final panel
        w[-2] += h / 2.0
        w[-1] += h / 2.0
    return w


class DimensionShift(NamedTuple):
    value: complex
    constant: complex


def dimension_shift_Fm(f_m: RadialProfile, n: int, m: int, lam: float) -> DimensionShift:
    """F_m via the (n+2m)-dimensional radial transform of f_m(r) r^{-m}.

    Returns the transform value together with the constant linking it to the
    angular route for a unit-norm harmonic: (-i)^m, so that
    fourier_coeff_Fm = constant * value.  The constant is re-derived by
    one-point calibration in the test suite rather than trusted.
    """
    grid = f_m.grid
    vals = np.asarray(f_m.values, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        divided = np.where(grid > 0, vals / np.maximum(grid, 1e-300) ** m, 0.0)
    if grid.size > 3 and m > 0:
        # f_m ~ c r^m near 0: extrapolate the r -> 0 limit quadratically
        divided[0] = 2.0 * divided[1] - divided[2]
    if not np.all(np.isfinite(divided)):
        raise ValueError("f_m(r) r^{-m} is singular at the origin")
    shifted = RadialProfile(grid, divided, f_m.decay)
    value = radial_fourier(n + 2 * m, shifted, lam)
    return DimensionShift(complex(value), (-1j) ** m)


def zonal_identity_constant(n: int, m: int, kappa: float = 2.0) -> complex:
    """C_{n,m} in the plane-wave / Bessel zonal identity, calibrated at one
    kappa by sphere quadrature of e^{i kappa <x', omega>} S_m(omega)."""
    harm = zonal_harmonic(n, m)
    pole = np.zeros(n)
    pole[-1 if n == 3 else 0] = 1.0  # a point where the harmonic is extremal
    lhs = sphere_quadrature(
        n, lambda pts: np.exp(1j * kappa * (pts @ pole)) * np.asarray(harm(pts)),
        n_polar=60, n_azimuth=120)
    rhs = bessel_j(n / 2.0 + m - 1.0, kappa) / kappa ** (n / 2.0 - 1.0) * harm(pole)
    return complex(lhs) / complex(rhs)
