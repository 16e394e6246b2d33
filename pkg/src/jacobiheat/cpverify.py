"""Cowling-Price verdict engine.

Evaluates the two weighted integrals

    space side:    int_0^inf |f(r) Xi(r)^w e^{a r^2}|^p (1+r)^{-k} Delta(r) dr
    spectral side: int_0^inf |F(l)|^q e^{q b l^2} (1+l)^{-l_pow} |c(l)|^{-2} dl

as dyadic-window verdicts (all bookkeeping in log space so that divergent
integrands never overflow), fits the Gaussian-times-polynomial shape the
uncertainty theorems predict, applies the degree bound, and runs the staged
heat-kernel characterization pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .numkernel import (IntegralVerdict, QuadratureSpec, decide_integral,
                        dyadic_window_sums, tail_verdict)
from .profiles import RadialProfile, SpectralProfile
from .jacobi import (JacobiParams, jacobi_transform, log_weight_delta,
                     log_plancherel_density, plancherel_density)
from .symmspace import RankOneSpace, KType, ktypes_below, log_xi
from .heat import kernel_profile, log_heat_kernel

__all__ = [
    "IllConditioned",
    "CPConditionSpec",
    "GaussianPolyFit",
    "DegreeBound",
    "HeatCharacterization",
    "evaluate_cp_space",
    "evaluate_cp_spectral",
    "spectral_profile_from_transform",
    "fit_gaussian_poly",
    "degree_bound",
    "characterize_heat",
    "ktype_cutoff_filter",
]


class IllConditioned(ArithmeticError):
    pass


@dataclass(frozen=True)
class CPConditionSpec:
    side: str                      # 'Space' or 'Spectral'
    p_or_q: float
    a_or_b: float
    poly_power: float
    weight_exponent: Optional[float] = None  # Xi exponent; default 2/p - 1

    def __post_init__(self):
        if self.side not in ("Space", "Spectral"):
            raise ValueError("side must be 'Space' or 'Spectral'")
        if self.p_or_q < 1:
            raise ValueError("need p, q >= 1")
        if self.a_or_b <= 0:
            raise ValueError("need a, b > 0")
        if self.poly_power <= 0:
            raise ValueError("need a positive polynomial power")

    @property
    def xi_exponent(self) -> float:
        if self.weight_exponent is not None:
            return self.weight_exponent
        return 2.0 / self.p_or_q - 1.0


def _head_integral(log_integrand, hi: float, n: int = 513):
    x = np.linspace(0.0, hi, n)
    logs = np.asarray(log_integrand(x), dtype=float)
    m = float(np.max(logs))
    if not np.isfinite(m):
        return (0.0, 0.0) if m == -math.inf else (math.inf, math.inf)
    v = float(np.trapezoid(np.exp(logs - m), x)) * math.exp(min(m, 700.0))
    return v, abs(v) * 1e-6


def evaluate_cp_space(space: RankOneSpace, f: RadialProfile,
                      cond: CPConditionSpec,
                      spec: QuadratureSpec = QuadratureSpec()) -> IntegralVerdict:
    """Verdict on the space-side Cowling-Price integral for a radial profile."""
    if cond.side != "Space":
        raise ValueError("condition is not a space-side condition")
    p, a, k, w = cond.p_or_q, cond.a_or_b, cond.poly_power, cond.xi_exponent

    def log_integrand(r):
        r = np.asarray(r, dtype=float)
        xi_term = w * log_xi(space, r) if w != 0.0 else 0.0
        return (p * (f.log_abs(r) + xi_term + a * r ** 2)
                - k * np.log1p(r) + log_weight_delta(space.jacobi, r))

    head = _head_integral(log_integrand, 1.0)
    if math.isinf(head[0]):
        return IntegralVerdict("Divergent", tail_slope=math.inf)
    return decide_integral(log_integrand, spec, r0=1.0,
                           head_value=head[0], head_error=head[1])


def evaluate_cp_spectral(space: RankOneSpace, F: SpectralProfile,
                         cond: CPConditionSpec,
                         spec: QuadratureSpec = QuadratureSpec()) -> IntegralVerdict:
    """Verdict on the spectral-side integral against the Plancherel density."""
    if cond.side != "Spectral":
        raise ValueError("condition is not a spectral-side condition")
    q, b, l_pow = cond.p_or_q, cond.a_or_b, cond.poly_power
    params = space.jacobi

    def log_integrand(lam):
        lam = np.asarray(lam, dtype=float)
        lam_safe = np.maximum(lam, 1e-12)
        return (q * (F.log_abs(lam) + b * lam ** 2)
                - l_pow * np.log1p(lam) + log_plancherel_density(params, lam_safe))

    head = _head_integral(log_integrand, 0.5)
    if math.isinf(head[0]):
        return IntegralVerdict("Divergent", tail_slope=math.inf)
    return decide_integral(log_integrand, spec, r0=0.5,
                           head_value=head[0], head_error=head[1])


def spectral_profile_from_transform(space: RankOneSpace, f: RadialProfile,
                                    t: float, lam_max: Optional[float] = None,
                                    step: float = 0.01) -> SpectralProfile:
    """Sample J(f) on [0, lam_max] and attach a modelled log-tail.

    Quadrature can resolve the transform only down to ~1e-8 of its peak, so
    the Gaussian rate is least-squares fitted on that trusted range.  When
    the fitted rate agrees with t within sampling resolution (2%), the tail
    is modelled as polynomial-times-e^{-t lambda^2} with the polynomial from
    fit_gaussian_poly: at the Gaussian boundary the dyadic windows then
    decide the polynomial budget, which is the theorems' actual content.
    Away from the boundary the fitted rate itself is kept.
    """
    params = space.jacobi
    if lam_max is None:
        lam_max = max(5.0, 6.0 / math.sqrt(t) + params.rho)
    lam = np.arange(0.0, lam_max + step, step)
    vals = jacobi_transform(f, params, lam)
    dens = plancherel_density(params, lam)
    mags = np.abs(vals)
    peak = float(np.max(mags))
    trusted = mags >= 1e-8 * peak
    lam_trust = float(lam[trusted][-1]) if np.any(trusted) else lam[-1]
    fit_band = (lam >= 0.5 * lam_trust) & (lam <= lam_trust) & (mags > 0)
    # c0 + c1 log(1+lam) - b lam^2: the log term soaks up any polynomial
    # prefactor that would otherwise bias the fitted Gaussian rate
    A = np.stack([np.ones(np.sum(fit_band)), np.log1p(lam[fit_band]),
                  lam[fit_band] ** 2], axis=1)
    coef, *_ = np.linalg.lstsq(A, np.log(mags[fit_band]), rcond=None)
    c0, c1, neg_b = float(coef[0]), float(coef[1]), float(coef[2])
    b_fit = -neg_b

    if abs(b_fit - t) <= 0.02 * t:
        # boundary case: model = P(lambda) e^{-t lambda^2} with P fitted on
        # the clean band only (e^{t lambda^2} amplifies sampling noise)
        clean = lam <= min(lam_trust, math.sqrt(13.0 / t))
        y = np.real(vals[clean]) * np.exp(t * lam[clean] ** 2)
        best = None
        for d in range(0, 5):
            coefs, resid, _ = _poly_fit_residual(lam[clean], y, d)
            if best is None or resid < 0.99 * best[1]:
                best = (coefs, resid)
        pcoef = np.asarray(best[0])

        def tail(ll):
            with np.errstate(divide="ignore"):
                return (np.log(np.maximum(np.abs(
                    np.polynomial.polynomial.polyval(ll, pcoef)), 1e-300))
                    - t * ll ** 2)
    else:
        def tail(ll):
            return c0 + c1 * np.log1p(np.asarray(ll, dtype=float)) - b_fit * ll ** 2

    def log_abs_fn(ll):
        ll = np.asarray(ll, dtype=float)
        inside = ll <= lam_trust
        li = np.minimum(ll, lam[-1])
        with np.errstate(divide="ignore"):
            core = np.log(np.abs(np.interp(li, lam, np.real(vals))
                                 + 1j * np.interp(li, lam, np.imag(vals))))
        return np.where(inside, core, tail(ll))

    return SpectralProfile(lam, vals, dens, log_abs_fn=log_abs_fn)


@dataclass(frozen=True)
class GaussianPolyFit:
    b: float
    coefficients: tuple
    residual: float
    degree: int
    not_gaussian_poly: bool = False
    condition: float = 0.0


def _poly_fit_residual(x, y, deg):
    # scaled-variable least squares keeps the Vandermonde condition tame
    scale = max(float(np.max(x)), 1e-12)
    xs = x / scale
    V = np.vander(xs, deg + 1, increasing=True)
    cond = float(np.linalg.cond(V))
    coef, *_ = np.linalg.lstsq(V, y, rcond=None)
    resid = float(np.max(np.abs(V @ coef - y)))
    unscaled = coef / scale ** np.arange(deg + 1)
    return unscaled, resid, cond


def fit_gaussian_poly(F: SpectralProfile, b: float, max_degree: int = 8,
                      noise_floor: float = 0.0) -> GaussianPolyFit:
    """Least-squares polynomial fit of F(lambda) e^{b lambda^2}.

    The degree is chosen by a residual elbow: the smallest degree that no
    higher degree (up to +2, to be parity-safe) improves by more than 1%.
    noise_floor short-circuits the elbow: once a degree's sup-residual is
    below it, deeper structure is treated as sampling error, not signal
    (the e^{b lambda^2} factor amplifies smooth quadrature error into
    exactly the shape a polynomial would fit).  A 30%-shorter subgrid refit
    that improves the residual threefold flags the sample as not
    Gaussian-times-polynomial at this b.
    """
    lam = F.grid
    if lam[-1] < 4.0 / math.sqrt(b) - 1e-9:
        raise ValueError("need samples out to lambda >= 4/sqrt(b)")
    y = np.real(F.values) * np.exp(b * lam ** 2)
    fits = {}
    conds = []
    for d in range(max_degree + 1):
        coef, resid, cond = _poly_fit_residual(lam, y, d)
        if cond > 1e12:
            raise IllConditioned(f"Vandermonde condition {cond:.2e} at degree {d}")
        fits[d] = (coef, resid)
        conds.append(cond)
    degree = max_degree
    for d in range(max_degree + 1):
        if fits[d][1] <= noise_floor:
            degree = d
            break
        later = [fits[dd][1] for dd in range(d + 1, min(d + 3, max_degree + 1))]
        if not later or fits[d][1] < 1.01 * min(later) + 1e-300:
            degree = d
            break
    coef, resid = fits[degree]
    # trailing-zero trim at 1e-9 (relative to the largest coefficient)
    tol = 1e-9 * max(1.0, float(np.max(np.abs(coef))))
    trimmed = np.array(coef)
    while trimmed.size > 1 and abs(trimmed[-1]) <= tol:
        trimmed = trimmed[:-1]
    # stability probe: refit on the lower 70% of the grid
    cut = lam <= 0.7 * lam[-1]
    _, resid_sub, _ = _poly_fit_residual(lam[cut], y[cut], min(degree, max_degree))
    scale_y = max(1.0, float(np.max(np.abs(y))))
    ngp = resid > 3.0 * resid_sub + 1e-7 * scale_y and resid > 1e-6 * scale_y
    return GaussianPolyFit(b=b, coefficients=tuple(float(c) for c in trimmed),
                           residual=resid, degree=trimmed.size - 1,
                           not_gaussian_poly=bool(ngp), condition=max(conds))


@dataclass(frozen=True)
class DegreeBound:
    bound: float
    constant_forced: bool


def degree_bound(p: float, q: float, k: float, l: float, V: int,
                 n: int = 1, card_sigma0: int = 1) -> DegreeBound:
    """deg P < min{2|Sigma_0^+|/p' + k/p + 1, (l - V - n)/q}; the constant
    clause fires when l <= q + V + n."""
    if p < 1 or q < 1:
        raise ValueError("need p, q >= 1")
    first = (0.0 if p == 1 else 2.0 * card_sigma0 * (1.0 - 1.0 / p)) + k / p + 1.0
    second = (l - V - n) / q
    return DegreeBound(min(first, second), bool(l <= q + V + n))


@dataclass(frozen=True)
class HeatCharacterization:
    is_heat_kernel: bool
    scale: float = math.nan
    failing_stage: str = ""
    stages: tuple = ()
    fit: Optional[GaussianPolyFit] = None


def characterize_heat(space: RankOneSpace, f: RadialProfile, t: float,
                      p: float = 2.0, q: float = 2.0,
                      k: Optional[float] = None,
                      l: Optional[float] = None) -> HeatCharacterization:
    """Staged pipeline for 'f is the time-t heat kernel'.

    space verdict (a = 1/4t) -> spectral verdict (b = t) -> constant
    Gaussian fit of J(f) -> normalization J(f)(i rho) = 1.  The failing
    stage is named so that a contaminated input reports which hypothesis
    broke rather than a bare boolean.
    """
    params = space.jacobi
    if k is None:
        k = (space.dim_X - 1) * p + 2 + 1 + 1
    if l is None:
        l = q + space.V + 1
    stages = []
    cond_s = CPConditionSpec("Space", p, 1.0 / (4.0 * t), k)
    v_space = evaluate_cp_space(space, f, cond_s)
    stages.append(("space_verdict", v_space.kind))
    if not v_space.convergent:
        return HeatCharacterization(False, failing_stage="space_verdict",
                                    stages=tuple(stages))
    F = spectral_profile_from_transform(space, f, t)
    cond_f = CPConditionSpec("Spectral", q, t, l)
    v_spec = evaluate_cp_spectral(space, F, cond_f)
    stages.append(("spectral_verdict", v_spec.kind))
    if not v_spec.convergent:
        return HeatCharacterization(False, failing_stage="spectral_verdict",
                                    stages=tuple(stages))
    # fit on the minimal admissible range: past it the e^{t lambda^2} factor
    # amplifies quadrature noise beyond any polynomial signal
    lam_fit = 4.05 / math.sqrt(t)
    sub = F.grid <= lam_fit
    F_fit = SpectralProfile(F.grid[sub], F.values[sub], F.density[sub])
    # kernel profiles carry ~1e-10 relative error; amplified by e^{t lam^2}
    # over the fit range that is the resolvable floor for polynomial signal
    floor = 2e-3 * float(np.max(np.abs(np.real(F_fit.values)
                                       * np.exp(t * F_fit.grid ** 2))))
    fit = fit_gaussian_poly(F_fit, b=t, noise_floor=floor)
    scale_g = max(1.0, abs(fit.coefficients[0]))
    ok_fit = (fit.degree == 0 and not fit.not_gaussian_poly
              and fit.residual <= 1e-2 * scale_g)
    stages.append(("spectral_fit", f"degree={fit.degree}"))
    if not ok_fit:
        return HeatCharacterization(False, failing_stage="spectral_fit",
                                    stages=tuple(stages), fit=fit)
    scale = float(np.real(jacobi_transform(f, params, 1j * params.rho)))
    stages.append(("normalization", f"{scale:.8g}"))
    if abs(scale - 1.0) > 1e-5:
        return HeatCharacterization(False, scale=scale,
                                    failing_stage="normalization",
                                    stages=tuple(stages), fit=fit)
    return HeatCharacterization(True, scale=scale, stages=tuple(stages), fit=fit)


def ktype_cutoff_filter(space: RankOneSpace, f_components, p: float, k: float):
    """Keep the K-types with p_delta < (k-1)/p; verify the dropped ones are
    Divergent under the space-side condition built from their own decay."""
    cutoff = (k - 1.0) / p
    allowed = {(d.p, d.q) for d in ktypes_below(space, cutoff)}
    kept, dropped = [], []
    for delta, prof in f_components:
        if (delta.p, delta.q) in allowed:
            kept.append(delta)
        else:
            rate = prof.decay.parameter if prof.decay.kind == "Gaussian" else None
            if rate is None or not np.isfinite(rate):
                raise ValueError("dropped components need a Gaussian decay model")
            cond = CPConditionSpec("Space", p, rate, k)
            verdict = evaluate_cp_space(space, prof, cond)
            dropped.append((delta, verdict))
    for delta, verdict in dropped:
        if not verdict.divergent:
            raise AssertionError(
                f"component {delta} beyond the cutoff was not Divergent: {verdict.kind}")
    return kept, dropped
