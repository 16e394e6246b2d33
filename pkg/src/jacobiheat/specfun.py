"""Special functions: complex log-Gamma, Pochhammer symbols, the Gauss
hypergeometric function on the negative real axis, and Bessel J.

All entry points accept scalars or numpy arrays (broadcasting).  The 2F1
evaluator is restricted to real z <= 0, which covers every Jacobi-function
argument -(sinh r)^2; three series regimes are used (direct, Pfaff, 1/z
connection) with an ODE-continuation rescue for the ill-conditioned band
|z| ~ 1 at large |a - b|.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "PoleAtNonPositiveInteger",
    "PoleInC",
    "SeriesNotConverged",
    "log_gamma",
    "pochhammer",
    "gauss_2f1",
    "bessel_j",
]


class PoleAtNonPositiveInteger(ArithmeticError):
    pass


class PoleInC(ArithmeticError):
    pass


class SeriesNotConverged(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# log Gamma
# ---------------------------------------------------------------------------

_BERNOULLI = (
    1.0 / 6, -1.0 / 30, 1.0 / 42, -1.0 / 30,
    5.0 / 66, -691.0 / 2730, 7.0 / 6, -3617.0 / 510,
)


def _is_nonpositive_int(z, tol=1e-12):
    z = np.asarray(z, dtype=complex)
    return (np.abs(z.imag) < tol) & (z.real < 0.5) & (np.abs(z.real - np.round(z.real)) < tol)


def log_gamma(z):
    """log Gamma(z), Stirling series after an upward recurrence shift.

    exp(log_gamma(z)) reproduces Gamma(z) to ~1e-14 relative for |z| <= 50.
    The imaginary part is continuous on the right half plane; on the
    reflection branch (Re z < 0.5) it is correct modulo 2*pi*i, which every
    consumer in this package exponentiates away.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(_is_nonpositive_int(z)):
        raise PoleAtNonPositiveInteger("Gamma pole at a non-positive integer")
    refl = z.real < 0.5
    zz = np.where(refl, 1.0 - z, z)
    shift = np.zeros_like(zz)
    w = zz.copy()
    for _ in range(13):
        need = w.real < 12.0
        if not np.any(need):
            break
        shift = np.where(need, shift + np.log(w), shift)
        w = np.where(need, w + 1.0, w)
    out = (w - 0.5) * np.log(w) - w + 0.5 * math.log(2.0 * math.pi)
    for k, b in enumerate(_BERNOULLI, start=1):
        out = out + b / ((2 * k) * (2 * k - 1) * w ** (2 * k - 1))
    out = out - shift
    if np.any(refl):
        zr = z[refl]
        # log sin(pi z) without overflow: peel off the dominant exponential
        sgn = np.where(zr.imag >= 0, 1.0, -1.0)
        log_sin = (1j * sgn * math.pi / 2 - math.log(2.0) - 1j * sgn * math.pi * zr
                   + np.log1p(-np.exp(2j * sgn * math.pi * zr)))
        out[refl] = math.log(math.pi) - log_sin - out[refl]
    return out[0] if scalar else out


def gamma_fn(z):
    return np.exp(log_gamma(z))


def pochhammer(z, m: int):
    """(z)_m = z (z+1) ... (z+m-1) as a finite product; (z)_0 = 1."""
    if m < 0 or m != int(m):
        raise ValueError("m must be a nonnegative integer")
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for k in range(int(m)):
        out = out * (z + k)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# 2F1 on the negative real axis
# ---------------------------------------------------------------------------

_MAX_TERMS = 6000


def _series_2f1(a, b, c, z, max_terms=_MAX_TERMS, dtype=complex):
    """sum_k (a)_k (b)_k / ((c)_k k!) z^k, elementwise over broadcast arrays.

    Stops once three consecutive terms fall below 1e-17 of the running sum
    on every element.  dtype=np.clongdouble buys ~3 extra digits against
    cancellation on the scalar path; grids use complex128 for speed.
    """
    a, b, c, z = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in (a, b, c, z)))
    shp = a.shape
    a, b, c, z = (x.astype(dtype) for x in (a, b, c, z))
    term = np.ones(shp, dtype=dtype)
    total = np.ones(shp, dtype=dtype)
    streak = np.zeros(shp, dtype=np.int8)
    for k in range(max_terms):
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total = total + term
        small = np.abs(term) <= 1e-17 * np.abs(total)
        streak = np.where(small, np.minimum(streak + 1, 3), 0)
        if np.all(streak >= 3):
            return total.astype(complex)
    raise SeriesNotConverged(f"2F1 series did not converge in {max_terms} terms")


def _terminating_2f1(n, a_other, c, z):
    """2F1 with a first parameter equal to -n (exact finite sum)."""
    a, b, c, z = np.broadcast_arrays(
        np.asarray(-float(n), dtype=complex), np.asarray(a_other, dtype=complex),
        np.asarray(c, dtype=complex), np.asarray(z, dtype=complex))
    term = np.ones(a.shape, dtype=np.clongdouble)
    total = np.ones(a.shape, dtype=np.clongdouble)
    for k in range(int(n)):
        term = term * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z.astype(np.clongdouble)
        total = total + term
    return total.astype(complex)


def _connection_1z(a, b, c, z, dtype=complex):
    """DLMF 15.8.2: 2F1 via two series in 1/z, for |z| > 1, a - b not integer."""
    lg = log_gamma
    f1 = _series_2f1(a, a - c + 1, a - b + 1, 1.0 / z, dtype=dtype)
    f2 = _series_2f1(b, b - c + 1, b - a + 1, 1.0 / z, dtype=dtype)
    t1 = np.exp(lg(c) + lg(b - a) - lg(b) - lg(c - a) - a * np.log(-z)) * f1
    t2 = np.exp(lg(c) + lg(a - b) - lg(a) - lg(c - b) - b * np.log(-z)) * f2
    return t1 + t2


def _ode_continue(a, b, c, z_targets):
    """Continue y(r) = 2F1(a,b;c;-sinh^2 r) down from a radius where the 1/z
    branch is well conditioned.  Scalar parameters, several targets allowed."""
    rs = np.arcsinh(np.sqrt(np.abs(np.asarray(z_targets, dtype=float))))
    r_lo = float(np.min(rs))
    s = float(np.abs(complex(a) - complex(b)))
    z_safe = max(1.6, s / 30.0)
    r0 = max(1.02 * float(np.max(rs)), float(np.arcsinh(math.sqrt(z_safe))))
    z0 = -math.sinh(r0) ** 2
    y0 = complex(_connection_1z(a, b, c, z0, dtype=np.clongdouble))
    dF = (a * b / c) * complex(_connection_1z(a + 1, b + 1, c + 1, z0, dtype=np.clongdouble))
    dy0 = dF * (-math.sinh(2.0 * r0))
    # recover the Jacobi ODE data: c = alpha+1, a+b = rho, 4ab = lam^2 + rho^2
    alpha = complex(c) - 1.0
    beta = complex(a + b) - alpha - 1.0
    ev = -4.0 * complex(a * b)

    def rhs(r, y):
        cothr = 1.0 / math.tanh(r)
        tanhr = math.tanh(r)
        coeff = (2 * alpha + 1) * cothr + (2 * beta + 1) * tanhr
        return [y[1], -coeff * y[1] + ev * y[0]]

    sol = solve_ivp(rhs, [r0, r_lo], np.array([y0, dy0], dtype=complex),
                    method="DOP853", rtol=1e-13, atol=1e-15, dense_output=True)
    if not sol.success:
        raise SeriesNotConverged("ODE continuation failed: " + sol.message)
    return np.asarray([sol.sol(float(r))[0] for r in rs])


def _degenerate_1z(a, b, c, z, dtype=complex):
    """Integer a-b: Richardson-extrapolated symmetric parameter perturbation."""
    def S(eps):
        return 0.5 * (_connection_1z(a + eps, b - eps, c, z, dtype=dtype)
                      + _connection_1z(a - eps, b + eps, c, z, dtype=dtype))
    e = 1e-3
    return (4.0 * S(0.5 * e) - S(e)) / 3.0


def gauss_2f1(a, b, c, z, strict: bool = True):
    """2F1(a, b; c; z) for real z <= 0.

    Broadcasts over arrays.  With strict=True (scalar inputs only) the
    ill-conditioned band |z| ~ 1 with large |a-b| is rescued by ODE
    continuation so that the result stays at ~1e-12 relative; grid callers
    pass strict=False and rely on their own spectral weights to make that
    band irrelevant.
    """
    a, b, c, z = np.broadcast_arrays(*(np.asarray(x, dtype=complex) for x in (a, b, c, z)))
    if np.any(z.imag != 0) or np.any(z.real > 0):
        raise ValueError("gauss_2f1 is restricted to real z <= 0")
    if np.any(_is_nonpositive_int(c)):
        raise PoleInC("c is a non-positive integer")
    scalar = a.ndim == 0
    a, b, c = np.atleast_1d(a), np.atleast_1d(b), np.atleast_1d(c)
    zr = np.atleast_1d(z.real)

    out = np.empty(a.shape, dtype=complex)
    done = np.zeros(a.shape, dtype=bool)

    # terminating cases are exact for any z
    for p, q in ((a, b), (b, a)):
        t = _is_nonpositive_int(p) & ~done
        if np.any(t):
            idx = np.nonzero(t)
            for i in zip(*idx):
                out[i] = _terminating_2f1(int(-p[i].real), q[i], c[i], zr[i])
            done |= t

    az = np.abs(zr)
    d = a - b

    if scalar and strict and not done.all():
        # amplification-aware scalar policy with ODE rescue
        A, B, C, Z = a.item(), b.item(), c.item(), float(zr.item())
        s = abs(A - B)
        if abs(Z) <= 0.5 and s * math.sqrt(abs(Z)) <= 18.0:
            out[...] = _series_2f1(A, B, C, Z, dtype=np.clongdouble)
        elif abs(Z) <= 2.2 and s * math.sqrt(abs(Z / (Z - 1.0))) <= 18.0:
            w = Z / (Z - 1.0)
            out[...] = (1.0 - Z) ** (-A) * _series_2f1(A, C - B, C, w, dtype=np.clongdouble)
        elif abs(Z) > max(1.1, s / 36.0):
            d = A - B
            if abs(d.imag) < 1e-8 and abs(d.real - round(d.real)) < 1e-8:
                out[...] = _degenerate_1z(A, B, C, Z, dtype=np.clongdouble)
            else:
                out[...] = _connection_1z(A, B, C, Z, dtype=np.clongdouble)
        else:
            out[...] = _ode_continue(A, B, C, [Z])[0]
        return out[0] if scalar else out

    # plain grid policy: branch purely on |z|; Pfaff argument z/(z-1) is
    # always smaller in modulus than z for z < 0, so it covers the mid band
    m1 = ~done & (az <= 0.05)
    if np.any(m1):
        out[m1] = _series_2f1(a[m1], b[m1], c[m1], zr[m1])
    m2 = ~done & ~m1 & (az <= 2.2)
    if np.any(m2):
        w = zr[m2] / (zr[m2] - 1.0)
        out[m2] = (1.0 - zr[m2]) ** (-a[m2]) * _series_2f1(a[m2], c[m2] - b[m2], c[m2], w)
    m3 = ~done & ~m1 & ~m2
    if np.any(m3):
        deg = m3 & (np.abs(d.imag) < 1e-8) & (np.abs(d.real - np.round(d.real)) < 1e-8)
        plain = m3 & ~deg
        if np.any(plain):
            out[plain] = _connection_1z(a[plain], b[plain], c[plain], zr[plain])
        if np.any(deg):
            idx = np.nonzero(deg)
            for i in zip(*idx):
                out[i] = _degenerate_1z(a[i], b[i], c[i], zr[i])
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# Bessel J
# ---------------------------------------------------------------------------

def _bessel_series(nu, x):
    """Ascending series; adequate for x <= 10."""
    x = np.asarray(x, dtype=np.longdouble)
    q = (0.5 * x) ** 2
    lead = np.exp(nu * np.log(np.maximum(0.5 * x, 1e-300)) - log_gamma(nu + 1.0).real)
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 200):
        term = term * (-q) / (k * (nu + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-19 * np.abs(total)):
            break
    out = lead * total.astype(float)
    if np.ndim(nu) == 0 and nu == 0:
        out = np.where(x == 0, 1.0, out)
    else:
        out = np.where(x == 0, 0.0, out)
    return out.astype(float)


def _bessel_miller(nu, x):
    """Downward (Miller) recurrence for x > 10, real nu >= 0.

    Normalised with (x/2)^nu = sum_k (nu+2k) Gamma(nu+k)/k! J_{nu+2k}(x)
    (for nu = 0 this is 1 = J_0 + 2 J_2 + 2 J_4 + ...).
    """
    x = np.asarray(x, dtype=float)
    frac = nu - math.floor(nu)
    xmax = float(np.max(x))
    M = int(xmax + 1.7 * xmax ** 0.55 + nu + 40)
    jp = np.zeros_like(x)           # J_{frac + M + 1}
    jc = np.full_like(x, 1e-280)    # J_{frac + M}
    orders = np.arange(M, -1, -1, dtype=float) + frac
    want = int(round(nu - frac))
    out = np.zeros_like(x)
    # normalisation accumulators
    norm = np.zeros_like(x)
    for m in range(M, -1, -1):
        ordm = orders[M - m]
        if m == want:
            out = jc.copy()
        if m % 2 == 0:
            k = m // 2
            if frac == 0.0:
                coeff = 1.0 if k == 0 else 2.0
            else:
                # (frac + 2k) Gamma(frac + k) / k!
                coeff = (frac + 2 * k) * math.exp(
                    log_gamma(frac + k).real - log_gamma(k + 1.0).real)
            norm = norm + coeff * jc
        jm = (2.0 * ordm / x) * jc - jp
        jp, jc = jc, jm
        big = np.abs(jc) > 1e250
        if np.any(big):
            scale = np.where(big, 1e-250, 1.0)
            jc = jc * scale
            jp = jp * scale
            out = out * scale
            norm = norm * scale
    target = (0.5 * x) ** frac if frac != 0.0 else np.ones_like(x)
    return out * target / norm


def bessel_j(nu: float, x):
    """Bessel function of the first kind, real order nu >= 0, x >= 0."""
    if nu < 0:
        raise ValueError("nu must be >= 0")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    out = np.empty_like(x)
    small = x <= 10.0
    if np.any(small):
        out[small] = _bessel_series(nu, x[small])
    if np.any(~small):
        out[~small] = _bessel_miller(nu, x[~small])
    return out[0] if scalar else out
