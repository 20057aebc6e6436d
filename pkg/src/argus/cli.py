"""Batch command-line front end.

Usage:
    argus verify-all --tolerance 1e-8
    argus index-profile --builtin counterexample --grid geometric:0.25:0.001:12 --format csv
    argus blaschke-cert --M 20 --N 20
    argus jump-check --builtin three-radius

Every command writes one report (JSON by default, CSV for tabular output) to
--output or stdout. Exit status: 0 when every check passes, 1 when a check
fails, 2 on a numerical-engine or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone

import numpy as np

from . import checks as checks_mod
from . import suites
from .blaschke import BlaschkeSpec, CuspExampleSequence, assembled_counterexample, blaschke_product
from .boundary import cone_certify, vanishing_order
from .cusp import CuspProfile, envelope_exponent, kaiser_lehner_form, monomial_envelope_exponent
from .errors import ArgusError
from .factory import FactorySpec, build, counterexample
from .geometry import FunctionHandle, Region
from .profile import (
    COUNTEREXAMPLE_SCALE,
    ZeroLedger,
    counterexample_j,
    j_profile,
    jump_at,
    profile,
    s_bound_check,
    summation_relation,
)

SCHEMA = 1
COMMANDS = (
    "index-profile",
    "jump-check",
    "summation-check",
    "j-profile",
    "blaschke-eval",
    "blaschke-cert",
    "cusp-envelope",
    "vanishing-order",
    "cone-certify",
    "verify-all",
)
INJECTABLE = ("jump-law",)

record = checks_mod.record


# ----------------------------------------------------------------- inputs


def parse_grid(text: str) -> np.ndarray:
    """``geometric:start:end:count``, ``linear:start:end:count`` or a comma list."""
    if ":" in text:
        kind, start, end, count = text.split(":")
        start, end, count = float(start), float(end), int(count)
        if count < 2:
            raise argparse.ArgumentTypeError("grid needs at least 2 points")
        if kind == "geometric":
            if start <= 0 or end <= 0:
                raise argparse.ArgumentTypeError("geometric grid needs positive endpoints")
            return np.geomspace(start, end, count)
        if kind == "linear":
            return np.linspace(start, end, count)
        raise argparse.ArgumentTypeError(f"unknown grid kind {kind!r}")
    return np.array([float(v) for v in text.split(",")])


def parse_tolerance(text: str) -> float:
    tol = float(text)
    if not 1e-12 <= tol <= 1e-2:
        raise argparse.ArgumentTypeError("tolerance must lie in [1e-12, 1e-2]")
    return tol


def parse_region(text: str) -> Region:
    """cone-infinity | cone:C | slit-plane | half-plane:re:im | upper-half-plane."""
    parts = text.split(":")
    kind = parts[0]
    if kind == "cone":
        return Region.cone(float(parts[1]))
    if kind == "cone-infinity":
        return Region.cone_infinity()
    if kind == "slit-plane":
        return Region.slit_plane()
    if kind == "half-plane":
        return Region.half_plane(complex(float(parts[1]), float(parts[2]) if len(parts) > 2 else 0.0))
    if kind == "upper-half-plane":
        return Region.upper_half_plane()
    raise argparse.ArgumentTypeError(f"unknown region {text!r}")


def _assembled(z):
    return assembled_counterexample(np.asarray(z, dtype=complex))


def builtin_names() -> list:
    return ["counterexample", "cusp-example-product"] + [fx.name for fx in suites.jump_suite()]


def resolve_function(args) -> FunctionHandle:
    if getattr(args, "function_spec", None):
        with open(args.function_spec, encoding="utf-8") as fh:
            return build(FactorySpec.from_json(fh.read()))
    name = getattr(args, "builtin", None) or "counterexample"
    if name == "counterexample":
        return counterexample()
    if name == "cusp-example-product":
        return FunctionHandle(evaluator=_assembled, name=name)
    for fx in suites.jump_suite():
        if fx.name == name:
            return fx.handle()
    raise argparse.ArgumentTypeError(f"unknown builtin {name!r}")


# --------------------------------------------------------------- commands
# each returns (data, check records, table) with table = (header, rows) or None


def cmd_index_profile(args):
    f = resolve_function(args)
    prof = profile(f, args.grid, args.tolerance, jumps=args.jumps)
    scaled = prof.scaled()
    rows = [(r, v, e, s) for r, v, e, s in zip(prof.radii, prof.values, prof.errors, scaled)]
    checks = []
    if f.name == "counterexample":
        for r, s in zip(prof.radii, scaled):
            checks.append(record(f"index-profile/scaled/r={r:.6g}", "closed-form index of the infinitely flat example",
                                 s, COUNTEREXAMPLE_SCALE, 1e-6, abs(s - COUNTEREXAMPLE_SCALE) < 1e-6 * COUNTEREXAMPLE_SCALE))
    data = {
        "function": f.name,
        "radii": prof.radii.tolist(),
        "values": prof.values.tolist(),
        "errors": prof.errors.tolist(),
        "jumps": [{"radius": r, "left": lo, "right": hi} for r, lo, hi in prof.jump_radii],
    }
    return data, checks, (("r", "I", "err", "I_sqrt_r"), rows)


def cmd_jump_check(args):
    f = resolve_function(args)
    ledger = ZeroLedger.from_handle(f)
    radii = [args.radius] if args.radius else ledger.radii
    checks, rows = [], []
    for r in radii:
        j = jump_at(f, r, ledger, args.delta, args.tolerance)
        rows.append((r, j.left, j.right, j.jump, j.expected, j.residual))
        checks.append(record(f"jump-law/{f.name}/r={r:.6g}", "jump of the semicircle index across a zero radius",
                             j.jump, j.expected, 1e-3, abs(j.residual) < 1e-3))
    data = {"function": f.name, "jumps": [dict(zip(("radius", "left", "right", "jump", "expected", "residual"), row))
                                          for row in rows]}
    return data, checks, (("r", "left", "right", "jump", "expected", "residual"), rows)


def cmd_summation_check(args):
    f = resolve_function(args)
    ledger = ZeroLedger.from_handle(f)
    if not len(ledger):
        raise ArgusError("function declares no zeros; nothing to telescope")
    inner = args.inner_radius or 0.5 * ledger.radii[-1]
    ledger = ZeroLedger.from_handle(f, extra_radii=(inner,))
    N = args.N or len(ledger) - 1
    res = summation_relation(f, ledger, N, args.delta, args.tolerance)
    checks = [record(f"telescoping/{f.name}", "telescoped jump relation with segment indices",
                     res.residual, 0.0, 1e-3, abs(res.residual) < 1e-3)]
    if args.region:
        region = parse_region(args.region)
        ok = s_bound_check(f, ledger, N, region, s_values=res.s_values)
        checks.append(record(f"s-bound/{region.kind}", "segment index sum bounded by distinct diameter zeros",
                             math.fsum(res.s_values), "<= bound", 1e-6, ok))
    data = {
        "function": f.name,
        "N": N,
        "residual": res.residual,
        "outer_limit": res.outer_limit,
        "inner_limit": res.inner_limit,
        "kappa_sum": res.kappa_sum,
        "kappa_tilde_sum": res.kappa_tilde_sum,
        "s_values": list(res.s_values),
        "per_radius_residuals": list(res.per_radius),
    }
    return data, checks, None


def cmd_j_profile(args):
    f = resolve_function(args)
    n = args.per_factor4 * args.k_max
    grid = np.exp(np.linspace(0.0, args.k_max * math.log(0.25), n + 1))
    prof = profile(f, grid, args.tolerance)
    rows, checks, js = [], [], []
    closed = f.name == "counterexample"
    for k in range(1, args.k_max + 1):
        r = grid[args.per_factor4 * k]
        j = j_profile(prof, r)
        js.append(j.value)
        exact = float(counterexample_j(r)) if closed else float("nan")
        rows.append((r, j.value, j.error, exact))
        if closed:
            checks.append(record(f"j-profile/closed-form/k={k}", "log-averaged index of the infinitely flat example",
                                 j.value, exact, 1e-4, abs(j.value - exact) < 1e-4 * exact))
    if closed and len(js) > 1:
        inc = all(b > a for a, b in zip(js, js[1:]))
        checks.append(record("j-profile/strictly-increasing", "growth of the log-averaged index", inc, True, None, inc))
    data = {"function": f.name, "radii": [r[0] for r in rows], "J": js, "errors": [r[2] for r in rows]}
    return data, checks, (("r", "J", "err", "J_closed_form"), rows)


def cmd_blaschke_eval(args):
    spec = BlaschkeSpec.cusp_window(args.M, args.N, args.rho)
    radius = min(0.9, args.rho)
    x = np.linspace(-radius, radius, args.grid_size)
    z = (x[:, None] + 1j * x[None, :]).ravel()
    z = z[np.abs(z) <= radius]
    vals, bound = blaschke_product(spec, z)
    peak = float(np.max(np.abs(vals)))
    checks = [record("blaschke/modulus-bound", "product modulus bounded by one plus tail",
                     peak, f"<= 1 + {bound:.6g}", bound, peak <= 1 + bound)]
    rows = [(p.real, p.imag, v.real, v.imag, abs(v)) for p, v in zip(z, vals)]
    data = {"window": {"M": args.M, "N": args.N}, "rho": args.rho, "truncation_bound": bound, "points": len(rows)}
    return data, checks, (("z_re", "z_im", "value_re", "value_im", "abs"), rows)


def cmd_blaschke_cert(args):
    cert = CuspExampleSequence.certificate(args.M, args.N)
    checks = [record("blaschke/pointwise-bound", "pointwise bound on 1 - |alpha|^2",
                     cert.min_margin, "> 0", 0.0, cert.pointwise_bound_checked and cert.min_margin > 0)]
    return cert.to_dict(), checks, None


def cmd_cusp_envelope(args):
    coeffs = tuple(float(c) for c in args.coeffs.split(","))
    prof = CuspProfile(coeffs, args.leading, args.a)
    kl = kaiser_lehner_form(prof)
    monomial = len(coeffs) == 1
    rows, checks = [], []
    grid = args.grid if args.grid is not None else np.geomspace(0.9 * args.a, 0.1 * args.a, 10)
    for t in grid:
        q = envelope_exponent(prof, float(t))
        if monomial:
            exact = float(monomial_envelope_exponent(coeffs[0], args.leading, t, args.a))
            checks.append(record(f"cusp/envelope/t={t:.6g}", "closed-form envelope for a monomial cusp",
                                 q, exact, 1e-8, abs(math.expm1(q - exact)) < 1e-8))
        else:
            exact = float("nan")
        rows.append((t, math.exp(q), q, exact))
    data = {"profile": {"coeffs": list(coeffs), "leading": args.leading, "a": args.a}, "kaiser_lehner": kl.to_dict()}
    return data, checks, (("t", "F", "log_F", "log_F_closed_form"), rows)


def cmd_vanishing_order(args):
    f = resolve_function(args)
    rep = vanishing_order(f, complex(args.point), n_max=args.n_max, base=args.base)
    checks = []
    if args.expect:
        checks.append(record("vanishing/classification", "vanishing order at a boundary point",
                             rep.label, args.expect, None, rep.label == args.expect))
    return rep.to_dict(), checks, (("scale", "local_order"), rep.trace)


def cmd_cone_certify(args):
    f = resolve_function(args)
    lo, hi = (float(v) for v in args.interval.split(":"))
    region = parse_region(args.region)
    res = cone_certify(f, (lo, hi), region, args.samples)
    data = {
        "function": f.name,
        "region": region.kind,
        "interval": [lo, hi],
        "ok": res.ok,
        "worst_margin": res.worst_margin,
        "witness": res.witness,
        "witness_value": res.witness_value,
    }
    checks = [record(f"cone-certify/{region.kind}", "boundary values inside the target region",
                     res.ok, True, None, res.ok)]
    return data, checks, None


def _run_check(name: str, tol: float, inject: tuple) -> list:
    fn = dict(checks_mod.CHECKS)[name]
    try:
        return fn(tol, frozenset(inject))
    except ArgusError as exc:
        return [record(f"{name}/engine-error", type(exc).__name__, str(exc), None, None, False)]


def worker_count() -> int:
    raw = os.environ.get("ARGUS_THREADS", "0")
    n = int(raw) if raw.strip() else 0
    return n if n > 0 else (os.cpu_count() or 1)


def cmd_verify_all(args):
    names = [name for name, _ in checks_mod.CHECKS]
    inject = tuple(args.inject_failure or ())
    workers = min(worker_count(), len(names))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_check, names, [args.tolerance] * len(names), [inject] * len(names)))
    else:
        results = [_run_check(n, args.tolerance, inject) for n in names]
    recs = [r for group in results for r in group]
    return {"suites": names, "injected": list(inject)}, recs, None


HANDLERS = {
    "index-profile": cmd_index_profile,
    "jump-check": cmd_jump_check,
    "summation-check": cmd_summation_check,
    "j-profile": cmd_j_profile,
    "blaschke-eval": cmd_blaschke_eval,
    "blaschke-cert": cmd_blaschke_cert,
    "cusp-envelope": cmd_cusp_envelope,
    "vanishing-order": cmd_vanishing_order,
    "cone-certify": cmd_cone_certify,
    "verify-all": cmd_verify_all,
}


# ----------------------------------------------------------------- output


def jsonable(obj):
    """Recursively convert numpy scalars, complex numbers and non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def render_json(command, args, data, checks, error=None) -> str:
    report = {
        "schema": SCHEMA,
        "command": command,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "tolerance": args.tolerance,
        "checks": checks,
        "all_pass": error is None and all(c["pass"] for c in checks),
        "data": data,
    }
    if error is not None:
        report["error"] = error
    return json.dumps(jsonable(report), indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="argus", description="Boundary uniqueness verification lab.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, function=True):
        p.add_argument("--tolerance", type=parse_tolerance, default=1e-8)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", "-o", default=None)
        if function:
            g = p.add_mutually_exclusive_group()
            g.add_argument("--builtin", choices=builtin_names(), default=None)
            g.add_argument("--function-spec", default=None, help="FactorySpec JSON file")

    p = sub.add_parser("index-profile", help="semicircle index on a radius grid")
    common(p)
    p.add_argument("--grid", type=parse_grid, default=parse_grid("geometric:0.9:0.01:20"))
    p.add_argument("--jumps", action="store_true", help="annotate one-sided limits at zero radii")

    p = sub.add_parser("jump-check", help="index jump at each declared zero radius")
    common(p)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--delta", type=float, default=1e-4)

    p = sub.add_parser("summation-check", help="telescoped jump relation")
    common(p)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--inner-radius", type=float, default=None)
    p.add_argument("--delta", type=float, default=1e-4)
    p.add_argument("--region", default=None, help="also check the segment-index bound for this region")

    p = sub.add_parser("j-profile", help="log-averaged index at r = 4^-k")
    common(p)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--per-factor4", type=int, default=64)

    p = sub.add_parser("blaschke-eval", help="cusp-window Blaschke product on a grid")
    common(p, function=False)
    p.add_argument("--M", type=int, default=20)
    p.add_argument("--N", type=int, default=20)
    p.add_argument("--rho", type=float, default=0.95)
    p.add_argument("--grid-size", type=int, default=20)

    p = sub.add_parser("blaschke-cert", help="convergence certificate of the cusp sequence")
    common(p, function=False)
    p.add_argument("--M", type=int, default=20)
    p.add_argument("--N", type=int, default=20)

    p = sub.add_parser("cusp-envelope", help="envelope table and exponent coefficients")
    common(p, function=False)
    p.add_argument("--coeffs", default="1", help="comma list a_N, a_(N+1), ...")
    p.add_argument("--leading", type=int, default=2)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--grid", type=parse_grid, default=None, help="t values in (0, a]; default 0.9a .. 0.1a")

    p = sub.add_parser("vanishing-order", help="classify vanishing at a boundary point")
    common(p)
    p.add_argument("--point", default="0")
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--base", type=float, default=2.0)
    p.add_argument("--expect", default=None, help="expected label, e.g. order-3")

    p = sub.add_parser("cone-certify", help="sampled region membership of boundary values")
    common(p)
    p.add_argument("--interval", default="-0.9:0.9")
    p.add_argument("--region", default="cone-infinity")
    p.add_argument("--samples", type=int, default=400)

    p = sub.add_parser("verify-all", help="run every verification suite")
    common(p, function=False)
    p.add_argument("--inject-failure", action="append", choices=INJECTABLE,
                   help="add a fixture whose declared ledger is wrong")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        data, checks, table = HANDLERS[args.command](args)
        error = None
    except (ArgusError, ValueError, argparse.ArgumentTypeError) as exc:
        data, checks, table = None, [], None
        error = {"type": type(exc).__name__, "message": str(exc)}
    if args.format == "csv" and error is None:
        if table is None:
            header = ("name", "measured", "expected", "tolerance", "pass")
            table = (header, [tuple(c[k] for k in header) for c in checks])
        text = render_csv(*table)
    else:
        text = render_json(args.command, args, data, checks, error)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if error is not None:
        sys.stderr.write(f"argus: {error['type']}: {error['message']}\n")
        return 2
    return 0 if all(c["pass"] for c in checks) else 1
