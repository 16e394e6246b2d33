"""Command-line front door.

    jacobiheat kernel   --space H3 --t 0.5 [--r-max 12 --r-step 0.01] [--out f.csv]
    jacobiheat cp       --scenario thm4.3-heat [--space H3 --t 0.5] [--out f.csv]
    jacobiheat selftest [--seed 7] [--out f.csv]
    jacobiheat presets

Exit codes: 0 pass, 1 selftest failure, 2 scenario/invariant mismatch,
3 numeric error, 64 usage error.  CSV columns use 17 significant digits;
selftest and kernel output carry no timing columns so identical
configurations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

__all__ = ["main"]

EXIT_OK = 0
EXIT_SELFTEST = 1
EXIT_MISMATCH = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return f"{x:.17g}"
    return str(x)


def _emit(lines, path):
    text = "\n".join(lines) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)


def _read_config(path):
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
    return out


def cmd_kernel(args) -> int:
    from .symmspace import preset
    from .heat import HeatSpec, log_heat_kernel, log_ady_envelope

    space = preset(args.space)
    spec = HeatSpec(space, args.t, r_max=args.r_max, r_step=args.r_step)
    r = np.arange(spec.r_step, spec.r_max + 0.5 * spec.r_step, spec.r_step)
    lh = log_heat_kernel(space, args.t, r)
    le = log_ady_envelope(space, args.t, r)
    ratio = np.exp(lh - le)
    lines = ["r,h_t,envelope,ratio"]
    for i in range(r.size):
        lines.append(",".join(_fmt(float(v)) for v in
                              (r[i], math.exp(lh[i]), math.exp(le[i]), ratio[i])))
    _emit(lines, args.out)
    if not np.all(np.isfinite(ratio)):
        return EXIT_NUMERIC
    c, C = float(np.min(ratio)), float(np.max(ratio))
    return EXIT_OK if C / c <= 50.0 else EXIT_MISMATCH


def cmd_cp(args) -> int:
    from .scenarios import run_scenario, scenario_names

    if args.scenario not in scenario_names():
        print(f"unknown scenario {args.scenario!r}; known: {scenario_names()}",
              file=sys.stderr)
        return EXIT_USAGE
    kwargs = {}
    if args.scenario in ("thm4.3-heat", "thm4.3-contaminations", "thm5.3-filter",
                         "cor4.2", "cor4.4", "cor4.5"):
        kwargs = {"space_name": args.space, "t": args.t}
    rows = run_scenario(args.scenario, **kwargs)
    lines = ["scenario_id,stage,verdict,value,error,runtime"]
    for row in rows:
        lines.append(",".join([
            row.scenario_id, row.stage.replace(",", ";"),
            row.outcome.replace(",", ";"),
            _fmt(row.value), _fmt(row.error), _fmt(row.runtime)]))
    _emit(lines, args.out)
    return EXIT_OK if all(row.ok for row in rows) else EXIT_MISMATCH


def _selftest_checks(seed: int):
    """Per-module invariant battery; deterministic given the seed."""
    import numpy as np
    from .numkernel import adaptive_quad, tail_verdict, dyadic_window_sums, convolve_1d
    from .specfun import log_gamma, pochhammer, gauss_2f1, bessel_j
    from .jacobi import (JacobiParams, jacobi_phi, weight_delta, plancherel_density,
                         jacobi_transform)
    from .symmspace import preset, kostant_q, KType, xi_function
    from .heat import heat_kernel, h3_closed_form, log_heat_kernel, log_ady_envelope
    from .euclidean import gauss_heat, sphere_quadrature, zonal_harmonic
    from . import sl2c

    rng = np.random.default_rng(seed)
    checks = []

    def check(module, name, metric, tol):
        checks.append((module, name, float(metric), float(tol), bool(metric <= tol)))

    v, _ = adaptive_quad(lambda x: 1.0, 0.0, 1.0)
    check("numkernel", "unit integral", abs(v - 1.0), 1e-12)
    v, _ = adaptive_quad(lambda x: math.exp(-x * x), 0.0, 9.0)
    check("numkernel", "gaussian integral", abs(v - math.sqrt(math.pi) / 2), 1e-10)
    ws = dyadic_window_sums(lambda r: -np.asarray(r) ** 2, r0=1.0, n_windows=8)
    check("numkernel", "gaussian tail convergent",
          0.0 if tail_verdict(ws).convergent else 1.0, 0.5)

    z = rng.uniform(0.5, 10, 25) + 1j * rng.uniform(-5, 5, 25)
    rec = np.exp(log_gamma(z + 1)) / (z * np.exp(log_gamma(z)))
    check("specfun", "gamma recurrence", float(np.max(np.abs(rec - 1))), 1e-12)
    check("specfun", "pochhammer (1)_5", abs(pochhammer(1.0, 5) - 120), 1e-12)
    check("specfun", "2F1 log identity",
          abs(gauss_2f1(1.0, 1.0, 2.0, -1.0) - math.log(2.0)), 1e-12)
    check("specfun", "bessel half-integer",
          abs(bessel_j(0.5, math.pi) - 0.0), 1e-12)

    H3 = JacobiParams(0.5, -0.5)
    lam, r = 1.7, 1.3
    check("jacobi", "H3 closed form",
          abs(jacobi_phi(H3, lam, r) - math.sin(lam * r) / (lam * math.sinh(r))), 1e-11)
    check("jacobi", "weight H3", abs(weight_delta(H3, 1.0) - (2 * math.sinh(1.0)) ** 2), 1e-12)
    check("jacobi", "plancherel H3", abs(plancherel_density(H3, 2.0) - 4.0), 1e-10)

    sp = preset("H3_real")
    check("symmspace", "xi(2) = 2/sinh 2", abs(xi_function(sp, 2.0) - 2.0 / math.sinh(2.0)), 1e-9)
    # ((1+i)/2)((2+i)/2) = (1+3i)/4 from the Pochhammer product at H3 parameters
    q = kostant_q(sp, KType(2, 0), 1.0)
    check("symmspace", "kostant (2,0) at 1", abs(q - (1 + 3j) / 4.0), 1e-12)

    tq = 0.5
    rs = rng.uniform(0.2, 5.0, 4)
    hv = heat_kernel(H3, tq, rs)
    check("heat", "H3 inversion vs closed form",
          float(np.max(np.abs(hv - h3_closed_form(tq, rs)) / h3_closed_form(tq, rs))), 1e-8)
    rr = np.linspace(0.01, 12.0, 60)
    ratio = np.exp(log_heat_kernel(sp, tq, rr) - log_ady_envelope(sp, tq, rr))
    check("heat", "ADY ratio spread", float(np.max(ratio) / np.min(ratio)), 50.0)

    check("euclidean", "sphere area", abs(sphere_quadrature(3, lambda p: np.ones(len(p)))
                                          - 4 * math.pi), 1e-10)
    h2 = zonal_harmonic(3, 2)
    check("euclidean", "harmonic norm",
          abs(sphere_quadrature(3, lambda p: np.asarray(h2(p)) ** 2) - 1.0), 1e-8)
    check("euclidean", "heat mass n=3",
          abs(adaptive_quad(lambda s: gauss_heat(3, 0.7, s) * 4 * math.pi * s * s,
                            0.0, 12.0)[0] - 1.0), 1e-8)

    spec = sl2c.CounterexampleSpec(sl2c.BumpSpec(0.2))
    ts = rng.uniform(0.1, 4.0, 3)
    worst = max(abs(sl2c.construct_g_spectral(spec, float(t))
                    - sl2c.construct_g_convolution(spec, float(t)))
                / abs(sl2c.construct_g_spectral(spec, float(t))) for t in ts)
    check("sl2c", "two-route agreement", worst, 1e-7)
    return checks


def cmd_selftest(args) -> int:
    checks = _selftest_checks(args.seed)
    lines = ["module,check,status,metric,tolerance"]
    width = max(len(f"{m}.{n}") for m, n, *_ in checks)
    for module, name, metric, tol, ok in checks:
        lines.append(",".join([module, name.replace(",", ";"),
                               "pass" if ok else "FAIL", _fmt(metric), _fmt(tol)]))
    _emit(lines, args.out)
    for module, name, metric, tol, ok in checks:
        print(f"{(module + '.' + name).ljust(width)}  "
              f"{'pass' if ok else 'FAIL'}  ({metric:.3e} <= {tol:.1e})",
              file=sys.stderr)
    return EXIT_OK if all(c[-1] for c in checks) else EXIT_SELFTEST


def cmd_presets(args) -> int:
    from .symmspace import preset_names, preset
    lines = ["name,family,m_gamma,m_2gamma,alpha,beta,rho0,dim_X,V"]
    for name in preset_names():
        s = preset(name)
        lines.append(",".join(_fmt(v) for v in
                              (s.name, s.family, s.m_gamma, s.m_2gamma,
                               s.alpha, s.beta, s.rho0, s.dim_X, s.V)))
    _emit(lines, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacobiheat", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--config", help="key=value config file with defaults")
    sub = ap.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", help="heat kernel vs envelope scan (CSV)")
    k.add_argument("--space", default="H3")
    k.add_argument("--t", type=float, default=0.5)
    k.add_argument("--r-max", type=float, default=12.0)
    k.add_argument("--r-step", type=float, default=0.01)
    k.add_argument("--out")
    k.set_defaults(func=cmd_kernel)

    c = sub.add_parser("cp", help="run a Cowling-Price scenario (CSV)")
    c.add_argument("--scenario", required=True)
    c.add_argument("--space", default="H3")
    c.add_argument("--t", type=float, default=0.5)
    c.add_argument("--out")
    c.set_defaults(func=cmd_cp)

    s = sub.add_parser("selftest", help="run the cross-module invariant battery")
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--out")
    s.set_defaults(func=cmd_selftest)

    p = sub.add_parser("presets", help="print the symmetric-space catalog")
    p.add_argument("--out")
    p.set_defaults(func=cmd_presets)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage problems; the documented convention is 64
        return EXIT_USAGE if exc.code not in (0, None) else 0
    if args.config:
        cfg = _read_config(args.config)
        for key, val in cfg.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and getattr(args, attr) == ap.get_default(attr):
                current = getattr(args, attr)
                cast = type(current) if current is not None else str
                setattr(args, attr, cast(val))
    try:
        if getattr(args, "t", 1.0) <= 0:
            print("t must be positive", file=sys.stderr)
            return EXIT_USAGE
        return args.func(args)
    except KeyError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, ValueError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
