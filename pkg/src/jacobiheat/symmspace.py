"""Rank-1 symmetric-space presets, K-type parametrization, Kostant
polynomials, Eisenstein matrix coefficients and the Xi function.

The catalog ships as presets.txt (key=value rows); every entry is verified
against the defining relations at load time rather than trusted as data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .jacobi import JacobiParams, jacobi_phi, jacobi_phi_grid, jacobi_assoc_phi
from .specfun import pochhammer, gauss_2f1

__all__ = [
    "UnknownPreset",
    "RankOneSpace",
    "KType",
    "preset",
    "preset_names",
    "ktypes_below",
    "kostant_q",
    "eisenstein_phi1",
    "xi_function",
    "log_xi",
    "tilde_delta",
]


class UnknownPreset(KeyError):
    pass


@dataclass(frozen=True)
class RankOneSpace:
    name: str
    family: str
    m_gamma: int
    m_2gamma: int
    alpha: float
    beta: float
    rho0: float
    dim_X: int
    V: int

    def __post_init__(self):
        if abs(self.alpha - (self.m_gamma + self.m_2gamma - 1) / 2.0) > 1e-12:
            raise ValueError(f"{self.name}: alpha inconsistent with multiplicities")
        if abs(self.beta - (self.m_2gamma - 1) / 2.0) > 1e-12:
            raise ValueError(f"{self.name}: beta inconsistent with multiplicities")
        if abs(self.rho0 - (self.alpha + self.beta + 1.0)) > 1e-12:
            raise ValueError(f"{self.name}: rho0 != alpha + beta + 1")
        if abs(self.rho0 - (self.m_gamma + 2 * self.m_2gamma) / 2.0) > 1e-12:
            raise ValueError(f"{self.name}: rho0 != (m_gamma + 2 m_2gamma)/2")
        if self.dim_X != self.m_gamma + self.m_2gamma + 1:
            raise ValueError(f"{self.name}: dim_X != m_gamma + m_2gamma + 1")
        if self.V != self.m_gamma + self.m_2gamma:
            raise ValueError(f"{self.name}: V != m_gamma + m_2gamma")
        self.jacobi  # inversion-validity constraints

    @property
    def jacobi(self) -> JacobiParams:
        return JacobiParams(self.alpha, self.beta)


@dataclass(frozen=True, order=True)
class KType:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 0:
            raise ValueError("need p >= 0")
        for s in (self.p + self.q, self.p - self.q):
            if s < 0 or s % 2 != 0:
                raise ValueError("need p +- q in 2Z+")

    @property
    def trivial(self) -> bool:
        return self.p == 0 and self.q == 0


def _load_catalog() -> dict:
    catalog = {}
    text = resources.files("jacobiheat").joinpath("presets.txt").read_text()
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        kv = dict(item.split("=", 1) for item in line.split())
        catalog[kv["name"]] = RankOneSpace(
            name=kv["name"], family=kv["family"],
            m_gamma=int(kv["m_gamma"]), m_2gamma=int(kv["m_2gamma"]),
            alpha=float(kv["alpha"]), beta=float(kv["beta"]),
            rho0=float(kv["rho0"]), dim_X=int(kv["dim_X"]), V=int(kv["V"]))
    return catalog


_CATALOG = _load_catalog()

_ALIASES = {"H3": "H3_real", "H4": "H4_real", "H5": "H5_real",
            "SL2C": "H3_real", "H2C": "H2_complex", "H3C": "H3_complex"}


def _canonical(name: str) -> str:
    name = name.strip()
    if name in _CATALOG:
        return name
    if name in _ALIASES:
        return _ALIASES[name]
    # Hn_real(4) / Hn_complex(2) / Hn_quaternionic(2) spellings
    for fam in ("real", "complex", "quaternionic"):
        prefix = f"Hn_{fam}("
        if name.startswith(prefix) and name.endswith(")"):
            return f"H{int(name[len(prefix):-1])}_{fam}"
    return name


def preset(name: str) -> RankOneSpace:
    key = _canonical(name)
    if key not in _CATALOG:
        raise UnknownPreset(f"unknown preset {name!r}; known: {sorted(_CATALOG)}")
    return _CATALOG[key]


def preset_names() -> list[str]:
    return sorted(_CATALOG)


def ktypes_below(space: RankOneSpace, m: float) -> list[KType]:
    """All class-1 K-types with p < m, under the per-family q rules.

    real: q = 0 (so p even); complex: q of either sign with p +- q even;
    quaternionic/octonionic: q >= 0 with p +- q even.
    """
    if m < 0:
        raise ValueError("need m >= 0")
    out = []
    p = 0
    while p < m:
        if space.family == "real":
            qs = [0] if p % 2 == 0 else []
        elif space.family == "complex":
            qs = [q for q in range(-p, p + 1) if (p + q) % 2 == 0]
        else:
            qs = [q for q in range(0, p + 1) if (p + q) % 2 == 0]
        out.extend(KType(p, q) for q in qs)
        p += 1
    return sorted(out)


def tilde_delta(delta: KType) -> KType:
    """(p, |q|): the representative whose heat estimates apply directly."""
    return KType(delta.p, abs(delta.q))


def kostant_q(space: RankOneSpace, delta: KType, lam):
    """Q_delta(lambda), a Pochhammer product of degree p_delta."""
    lam = np.asarray(lam, dtype=complex)
    a1 = (space.alpha + space.beta + 1.0 + 1j * lam) / 2.0
    a2 = (space.alpha - space.beta + 1.0 + 1j * lam) / 2.0
    return pochhammer(a1, (delta.p + delta.q) // 2) * pochhammer(a2, (delta.p - delta.q) // 2)


def eisenstein_phi1(space: RankOneSpace, delta: KType, lam, r):
    """Phi^1_{lambda,delta}(a_r) per the Helgason expansion: Kostant
    polynomial times the associated Jacobi function, normalised by
    (alpha+1)_{p_delta}."""
    params = space.jacobi
    norm = pochhammer(space.alpha + 1.0, delta.p)
    q = kostant_q(space, delta, lam)
    return q / norm * jacobi_assoc_phi(params, delta.p, delta.q, lam, r)


def log_xi(space: RankOneSpace, r):
    """log Xi(a_r), stable out to arbitrarily large r.

    For r >= 2 uses the Harish-Chandra decomposition at a small real
    spectral parameter (Xi is the lambda -> 0 limit; phi is even in lambda
    so the bias is O(eps^2 r^2))."""
    from .jacobi import jacobi_c, hc_remainder  # deferred: avoids cycle at import
    params = space.jacobi
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    scalar = np.ndim(r) == 0
    out = np.empty(r_arr.shape)
    small = r_arr < 2.0
    if np.any(small):
        out[small] = np.log(np.maximum(xi_function(space, r_arr[small]), 1e-300))
    if np.any(~small):
        rr = r_arr[~small]
        L = rr + np.log1p(-np.exp(-2.0 * rr))  # log(2 sinh r)
        # the eps-limit needs eps*L << 1 or the linear-in-L growth of the
        # lambda -> 0 limit turns into a spurious oscillation
        eps = np.minimum(1e-5, 0.02 / np.maximum(L, 1.0))
        c_eps = jacobi_c(params, eps)
        f2p = hc_remainder(params, eps, rr)
        f2m = hc_remainder(params, -eps, rr)
        amp = (c_eps * np.exp(1j * eps * L) * f2p
               + np.conj(c_eps) * np.exp(-1j * eps * L) * f2m)
        out[~small] = np.log(np.maximum(np.real(amp), 1e-300)) - params.rho * L
    return float(out[0]) if scalar else out


def xi_function(space: RankOneSpace, r):
    """Xi(a_r) = phi_0(r), vectorised over r."""
    params = space.jacobi
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    out = np.empty(r_arr.shape, dtype=float)
    small = r_arr < 1.3
    if np.any(small):
        a = params.rho / 2.0
        out[small] = np.real(gauss_2f1(a, a, params.alpha + 1.0,
                                       -np.sinh(r_arr[small]) ** 2, strict=False))
    if np.any(~small):
        # lambda -> 0 limit through a small real eps; phi is even in lambda
        # so the bias is O(eps^2 r^2), ~1e-8 relative on the scan ranges
        eps = 1e-5
        vals = jacobi_phi_grid(params, eps, r_arr[~small])
        out[~small] = np.real(vals)
    return float(out[0]) if scalar else out
