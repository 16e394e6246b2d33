"""Jacobi functions, the weight and c-function, and the Jacobi transform pair.

Conventions: rho = alpha + beta + 1, phi_lambda(0) = 1, and the transform

    J(f)(lambda) = int_0^inf f(r) phi_lambda(r) Delta(r) dr

is inverted against |c(lambda)|^{-2} d lambda with the constant 1/(2 pi)
(confirmed numerically by the round-trip and mass tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .numkernel import QuadratureSpec
from .profiles import RadialProfile, SpectralProfile
from .specfun import gauss_2f1, log_gamma, _series_2f1

__all__ = [
    "DecayInsufficient",
    "PoleAtZero",
    "JacobiParams",
    "jacobi_phi",
    "jacobi_phi_grid",
    "jacobi_assoc_phi",
    "weight_delta",
    "log_weight_delta",
    "jacobi_c",
    "plancherel_density",
    "log_plancherel_density",
    "jacobi_transform",
    "jacobi_inverse",
    "phi_growth_check",
    "spectral_grid",
]

INVERSION_CONSTANT = 1.0 / (2.0 * math.pi)


class DecayInsufficient(ValueError):
    """The profile decays too slowly for the requested transform."""


class PoleAtZero(ArithmeticError):
    """c(lambda) has a Gamma(i lambda) pole at lambda = 0."""


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError("need alpha > -1")
        if self.alpha + self.beta < -1 or self.alpha - self.beta < -1:
            raise ValueError("need alpha +- beta >= -1 for inversion validity")

    @property
    def rho(self) -> float:
        return self.alpha + self.beta + 1.0

    def shifted(self, p: int, q: int) -> "JacobiParams":
        return JacobiParams(self.alpha + p, self.beta + q)


def _abc(params: JacobiParams, lam):
    lam = np.asarray(lam, dtype=complex)
    a = (params.rho + 1j * lam) / 2.0
    b = (params.rho - 1j * lam) / 2.0
    return a, b, params.alpha + 1.0


def jacobi_phi(params: JacobiParams, lam, r):
    """phi_lambda^(alpha,beta)(r) via 2F1 at -(sinh r)^2.

    Scalar lam and r use the fully error-controlled evaluation; array input
    (either slot) uses the grid policy of gauss_2f1.
    """
    a, b, c = _abc(params, lam)
    r = np.asarray(r, dtype=float)
    z = -np.sinh(r) ** 2
    strict = a.ndim == 0 and r.ndim == 0
    return gauss_2f1(a, b, c, z, strict=strict)


def jacobi_phi_grid(params: JacobiParams, lam, r):
    """Vectorised phi over broadcastable (lam, r) arrays (grid policy)."""
    a, b, c = _abc(params, lam)
    z = -np.sinh(np.asarray(r, dtype=float)) ** 2
    return gauss_2f1(a, b, c, z, strict=False)


def jacobi_assoc_phi(params: JacobiParams, p: int, q: int, lam, r):
    """(sinh r)^p (cosh r)^q phi^(alpha+p, beta+q)_lambda(r)."""
    if p < 0:
        raise ValueError("need p >= 0")
    shifted = params.shifted(p, q)
    r = np.asarray(r, dtype=float)
    return np.sinh(r) ** p * np.cosh(r) ** q * jacobi_phi(shifted, lam, r)


def weight_delta(params: JacobiParams, r):
    """Delta(r) = (2 sinh r)^{2 alpha + 1} (2 cosh r)^{2 beta + 1}."""
    r = np.asarray(r, dtype=float)
    return (2.0 * np.sinh(r)) ** (2 * params.alpha + 1) * (2.0 * np.cosh(r)) ** (2 * params.beta + 1)


def log_weight_delta(params: JacobiParams, r):
    # log(2 sinh r) = r + log1p(-e^{-2r}) stays finite where sinh overflows
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        log_2sinh = r + np.log1p(-np.exp(-2.0 * r))
        log_2cosh = r + np.log1p(np.exp(-2.0 * r))
        return ((2 * params.alpha + 1) * log_2sinh
                + (2 * params.beta + 1) * log_2cosh)


def log_plancherel_density(params: JacobiParams, lam):
    """log |c(lambda)|^{-2} for real lambda > 0 (stable at huge lambda)."""
    lam = np.asarray(lam, dtype=float)
    return -2.0 * np.real(_log_c(params, lam))


def _log_c(params: JacobiParams, lam):
    """log c(lambda); lam may be complex but not at Gamma poles."""
    rho = params.rho
    lam = np.asarray(lam, dtype=complex)
    return ((rho - 1j * lam) * math.log(2.0) + log_gamma(params.alpha + 1.0)
            + log_gamma(1j * lam)
            - log_gamma((1j * lam + rho) / 2.0)
            - log_gamma((1j * lam + params.alpha - params.beta + 1.0) / 2.0))


def jacobi_c(params: JacobiParams, lam):
    """Harish-Chandra c-function for real lambda > 0."""
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(lam_arr <= 0):
        raise PoleAtZero("c(lambda) is singular at lambda = 0")
    return np.exp(_log_c(params, lam_arr))


def plancherel_density(params: JacobiParams, lam):
    """|c(lambda)|^{-2} for real lambda >= 0, extended by 0 at lambda = 0."""
    lam = np.asarray(lam, dtype=float)
    scalar = lam.ndim == 0
    lam = np.atleast_1d(lam)
    out = np.zeros_like(lam)
    pos = lam > 0
    out[pos] = np.exp(-2.0 * np.real(_log_c(params, lam[pos])))
    return out[0] if scalar else out


def c_inv_minus(params: JacobiParams, lam):
    """1/c(-lambda), analytic in the upper half lambda-plane."""
    rho = params.rho
    lam = np.asarray(lam, dtype=complex)
    num = (log_gamma((-1j * lam + rho) / 2.0)
           + log_gamma((-1j * lam + params.alpha - params.beta + 1.0) / 2.0))
    den = (rho + 1j * lam) * math.log(2.0) + log_gamma(params.alpha + 1.0) + log_gamma(-1j * lam)
    return np.exp(num - den)


def hc_remainder(params: JacobiParams, lam, r):
    """F2 in phi = c(lam) Phi_lam + c(-lam) Phi_{-lam} with
    Phi_lam(r) = (2 sinh r)^{i lam - rho} F2(lam, r); needs sinh r > 1."""
    a, b, c = _abc(params, lam)
    r = np.asarray(r, dtype=float)
    e2 = np.exp(-2.0 * r)  # -1/sinh^2 r, overflow-free
    inv_z = -4.0 * e2 / (1.0 - e2) ** 2
    return _series_2f1(b, b - c + 1.0, b - a + 1.0, inv_z)


def spectral_grid(params: JacobiParams, t: float, step: float = 0.01,
                  sigma: float = 8.0) -> np.ndarray:
    """lambda grid resolving e^{-t lambda^2}: uniform on [0, rho + sigma/sqrt t]."""
    lam_max = params.rho + sigma / math.sqrt(t)
    return np.arange(0.0, lam_max + step, step)


def _transform_r_nodes(profile: RadialProfile, oversample: int = 1) -> np.ndarray:
    base = profile.grid
    if oversample <= 1:
        return base
    nodes = [base]
    for k in range(1, oversample):
        nodes.append(base[:-1] + np.diff(base) * k / oversample)
    return np.sort(np.concatenate(nodes))


def jacobi_transform(profile: RadialProfile, params: JacobiParams, lam,
                     spec: QuadratureSpec = QuadratureSpec()):
    """J(f)(lambda) = int_0^inf f(r) phi_lambda(r) Delta(r) dr.

    lam may be a real array or a complex scalar.  Complex lambda is admitted
    only when the profile's decay model certifies integrability of
    |f(r)| (1+r) e^{(|Im lambda| + rho) r}.
    """
    lam_c = np.asarray(lam, dtype=complex)
    im_max = float(np.max(np.abs(lam_c.imag))) if lam_c.size else 0.0
    if im_max > 0:
        if profile.decay.kind == "Unknown":
            raise DecayInsufficient("complex lambda needs a certified decay model")
        if profile.decay.kind == "Gaussian" and profile.decay.parameter <= 0:
            raise DecayInsufficient("Gaussian rate must be positive")
    r = _transform_r_nodes(profile)[1:]  # drop r=0 where Delta vanishes
    fr = profile(r)
    w = np.exp(log_weight_delta(params, r))
    if np.ndim(lam) == 0:
        ph = jacobi_phi_grid(params, complex(lam_c), r)
        vals = np.concatenate([[0.0 + 0.0j], fr * ph * w])
    else:
        ph = jacobi_phi_grid(params, lam_c[:, None], r[None, :])
        vals = np.concatenate(
            [np.zeros((lam_c.size, 1), dtype=complex), fr[None, :] * ph * w[None, :]], axis=1)
    rfull = np.concatenate([[0.0], r])
    out = simpson(vals, x=rfull, axis=-1)
    return complex(out) if np.ndim(lam) == 0 else out


def jacobi_inverse(F: SpectralProfile, params: JacobiParams, r,
                   spec: QuadratureSpec = QuadratureSpec()):
    """(1/2pi) int_0^inf F(lambda) phi_lambda(r) |c|^{-2} d lambda."""
    lam = F.grid
    if lam[0] > 0:
        lam = np.concatenate([[0.0], lam])
        vals = np.concatenate([[0.0], F.values * F.density])
    else:
        vals = F.values * F.density
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    out = np.empty(r_arr.shape, dtype=complex)
    chunk = max(1, int(4e6 // max(lam.size, 1)))
    for i in range(0, r_arr.size, chunk):
        rr = r_arr[i:i + chunk]
        ph = jacobi_phi_grid(params, lam[None, 1:], rr[:, None])
        block = np.concatenate([np.zeros((rr.size, 1), dtype=complex),
                                vals[None, 1:] * ph], axis=1)
        out[i:i + chunk] = np.trapezoid(block, lam, axis=1)
    out = INVERSION_CONSTANT * out
    return complex(out[0]) if scalar else out


def phi_growth_check(params: JacobiParams, lam, r_grid) -> float:
    """max over the grid of |phi_lambda(r)| / ((1+r) e^{r(|Im lam| - rho)})."""
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0) or np.any(r_grid > 20.0):
        raise ValueError("r_grid must lie in (0, 20]")
    lam_c = complex(lam)
    worst = 0.0
    for r in r_grid:
        val = abs(jacobi_phi(params, lam_c, float(r)))
        env = (1.0 + r) * math.exp(r * (abs(lam_c.imag) - params.rho))
        worst = max(worst, val / env)
    return worst
