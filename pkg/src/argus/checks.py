"""The verify-all battery: one function per property, each returning check records.

Every check function is module level so it can run in a worker process.
Records carry {name, paper_anchor, measured, expected, tolerance, pass}.
"""

from __future__ import annotations

import math

import numpy as np

from . import suites
from .blaschke import BlaschkeSpec, CuspExampleSequence, blaschke_factor, blaschke_product
from .boundary import cone_certify, infinitesimal_wrt, vanishing_order
from .contour import closed_path_zero_count, index_of_image
from .cusp import CuspProfile, envelope_exponent, kaiser_lehner_form, monomial_envelope_exponent
from .factory import build, counterexample
from .geometry import FunctionHandle, Region, circle, semicircle, wrap
from .profile import (
    ZeroLedger,
    counterexample_index,
    counterexample_j,
    jump_at,
    j_profile,
    oscillation_check,
    profile,
    radial_identity_check,
    summation_relation,
)


def record(name, anchor, measured, expected, tolerance, passed) -> dict:
    return {
        "name": name,
        "paper_anchor": anchor,
        "measured": measured,
        "expected": expected,
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def _monomial(k: int) -> FunctionHandle:
    return wrap(lambda z: z**k, f"z^{k}", derivative=lambda z: k * z ** (k - 1))


def check_winding(tol: float, inject=()) -> list:
    out = []
    for k in range(1, 7):
        f = _monomial(k)
        half = index_of_image(f, semicircle(0.7), tol).value
        out.append(record(f"winding/semicircle/z^{k}", "index of a power along the upper semicircle",
                          half, k / 2, 1e-9, abs(half - k / 2) < 1e-9))
        full = closed_path_zero_count(f, circle(0.7), tol)
        out.append(record(f"winding/circle/z^{k}", "argument principle zero count",
                          full, k, 1e-9, abs(full - k) < 1e-9 and round(full) == k))
    return out


def check_counterexample_index(tol: float, inject=()) -> list:
    f = counterexample()
    out = []
    for r in (0.25, 0.04, 0.01, 0.0025):
        v = index_of_image(f, semicircle(r), tol).value
        exact = float(counterexample_index(r))
        out.append(record(f"counterexample-index/r={r:g}", "closed-form index of the infinitely flat example",
                          v, exact, 1e-6, abs(v - exact) < 1e-6 * exact))
    return out


def check_jump_law(tol: float, inject=()) -> list:
    out = []
    fixtures = [(fx.name, fx.handle(), fx.radii) for fx in suites.jump_suite()]
    if "jump-law" in inject:
        fixtures.append(("broken-ledger", suites.broken_ledger_handle(), (0.5,)))
    for name, f, radii in fixtures:
        ledger = ZeroLedger.from_handle(f)
        for r in radii:
            j = jump_at(f, r, ledger, 1e-4, tol)
            out.append(record(f"jump-law/{name}/r={r:g}", "jump of the semicircle index across a zero radius",
                              j.jump, j.expected, 1e-3, abs(j.residual) < 1e-3))
    return out


def annulus_grids(f: FunctionHandle, points: int = 50, delta: float = 1e-4, r_min: float = 0.02, r_max: float = 0.99):
    cuts = [r_max] + ZeroLedger.from_handle(f).radii + [r_min]
    for hi, lo in zip(cuts[:-1], cuts[1:]):
        yield np.linspace(hi - 2 * delta, lo + 2 * delta, points)


def check_oscillation(tol: float, inject=()) -> list:
    out = []
    for fx in suites.jump_suite():
        if not fx.real_boundary:
            continue
        f = fx.handle()
        for grid in annulus_grids(f):
            for ann in oscillation_check(profile(f, grid, tol), margin=1e-3):
                out.append(record(
                    f"oscillation/{fx.name}/({ann['r_inner']:.4f},{ann['r_outer']:.4f})",
                    "oscillation of the index inside a zero-free annulus",
                    ann["oscillation"], "< 2", 1e-3, ann["pass"]))
    return out


def check_telescoping(tol: float, inject=()) -> list:
    out = []
    for spec in (suites.three_radius_spec(), suites.three_radius_twisted_spec()):
        f = build(spec)
        ledger = ZeroLedger.from_handle(f, extra_radii=(0.1,))
        res = summation_relation(f, ledger, 3, 1e-4, tol)
        out.append(record(f"telescoping/{spec.name}", "telescoped jump relation with segment indices",
                          res.residual, 0.0, 1e-3, abs(res.residual) < 1e-3))
    return out


def check_radial_identity(tol: float, inject=()) -> list:
    out = []
    for name, f in suites.zero_free_fixtures():
        for r in (0.2, 0.5, 0.8):
            res = radial_identity_check(f, r, tol)
            out.append(record(f"radial-identity/{name}/r={r:g}", "index as mean radial derivative of ln|f|",
                              res.residual, 0.0, 1e-5, abs(res.residual) < 1e-5))
    return out


def check_j_divergence(tol: float, inject=()) -> list:
    f = counterexample()
    grid = np.exp(np.linspace(0.0, 8 * math.log(0.25), 8 * 64 + 1))
    prof = profile(f, grid, tol)
    rs = [grid[64 * k] for k in range(1, 9)]
    js = [j_profile(prof, r).value for r in rs]
    out = []
    for k, (r, j) in enumerate(zip(rs, js), start=1):
        exact = float(counterexample_j(r))
        out.append(record(f"j-profile/closed-form/k={k}", "log-averaged index of the infinitely flat example",
                          j, exact, 1e-4, abs(j - exact) < 1e-4 * exact))
    inc = all(b > a for a, b in zip(js, js[1:]))
    out.append(record("j-profile/strictly-increasing", "growth of the log-averaged index", inc, True, None, inc))
    ratio = js[-1] / js[0]
    out.append(record("j-profile/ratio", "growth of the log-averaged index", ratio, "> 10", None, ratio > 10))
    return out


def check_blaschke_certificate(tol: float, inject=()) -> list:
    out = []
    cert = CuspExampleSequence.certificate(50, 50)
    out.append(record("blaschke/pointwise-bound", "pointwise bound on 1 - |alpha|^2",
                      cert.min_margin, "> 0", 0.0, cert.pointwise_bound_checked and cert.min_margin > 0))
    prev = None
    for side in (25, 50, 100):
        c = CuspExampleSequence.certificate(side, side)
        if prev is not None:
            grow = c.total - prev.total
            out.append(record(f"blaschke/monotone/{prev.window[0]}->{side}", "summability of 1 - |alpha|",
                              grow, "<= 0", 1e-12, grow <= 1e-12))
        prev = c
    return out


def check_blaschke_product(tol: float, inject=()) -> list:
    out = []
    rng = np.random.default_rng(20240601)
    rad = np.sqrt(rng.uniform(0, 0.99**2, 100))
    a = rad * np.exp(1j * rng.uniform(0, 2 * np.pi, 100))
    theta = rng.uniform(0, 2 * np.pi, 100)
    dev = max(abs(abs(blaschke_factor(ai, np.exp(1j * t))) - 1) for ai, t in zip(a, theta))
    out.append(record("blaschke/unimodular", "Blaschke factors are unimodular on the circle",
                      dev, 0.0, 1e-12, dev < 1e-12))
    spec = BlaschkeSpec.cusp_window(20, 20)
    x = np.linspace(-0.9, 0.9, 20)
    grid = (x[:, None] + 1j * x[None, :]).ravel()
    grid = grid[np.abs(grid) <= 0.9]
    vals, bound = blaschke_product(spec, grid)
    peak = float(np.max(np.abs(vals)))
    out.append(record("blaschke/modulus-bound", "product modulus bounded by one plus tail",
                      peak, f"<= 1 + {bound:.6g}", bound, peak <= 1 + bound))
    v11, _ = blaschke_product(spec, CuspExampleSequence.alpha(1, 1))
    out.append(record("blaschke/zero-alpha11", "product vanishes at included zeros",
                      abs(v11), "<= tail bound", bound, abs(v11) <= bound))
    return out


def check_cusp(tol: float, inject=()) -> list:
    out = []
    for t, a in [(0.05, 0.5), (0.1, 0.5), (0.2, 0.5), (0.3, 0.5), (0.45, 0.5),
                 (0.02, 0.2), (0.08, 0.3), (0.15, 0.9), (0.5, 0.9), (0.7, 0.8)]:
        q = envelope_exponent(CuspProfile.monomial(1.0, 2, a), t)
        exact = float(monomial_envelope_exponent(1.0, 2, t, a))
        # relative error of F = exp(q) is |q - exact| to first order
        err = abs(math.expm1(q - exact))
        out.append(record(f"cusp/envelope/t={t:g},a={a:g}", "closed-form envelope for the parabolic cusp",
                          q, exact, 1e-8, err < 1e-8))
    for coeffs, n in [((1.0,), 2), ((2.0,), 2), ((1.0, 0.5, 0.25), 3)]:
        kl = kaiser_lehner_form(CuspProfile(coeffs, n, 0.3))
        exact = math.pi / (n * coeffs[0])
        out.append(record(f"cusp/kaiser-lehner/N={n},a_N={coeffs[0]:g}", "leading exponent coefficient",
                          kl.coefficients[0], exact, 1e-10, abs(kl.coefficients[0] - exact) < 1e-10))
    return out


def _gauss_flat(C: float) -> FunctionHandle:
    return FunctionHandle(
        evaluator=lambda z: np.exp(-C / np.abs(z) ** 2) + 0j,
        log_abs=lambda z: -C / np.abs(z) ** 2,
        name=f"exp(-{C:g}/|z|^2)",
    )


def cusp_map_envelope() -> FunctionHandle:
    """exp(-pi / (2 t^2)) in t = |z|."""
    return _gauss_flat(math.pi / 2)


def check_vanishing(tol: float, inject=()) -> list:
    out = []
    for k in (1, 2, 3, 5):
        rep = vanishing_order(_monomial(k), 0.0)
        out.append(record(f"vanishing/z^{k}", "finite vanishing order", rep.label, f"order-{k}", 0.1,
                          rep.label == f"order-{k}"))
    rep = vanishing_order(counterexample(), 0.0, n_max=40)
    out.append(record("vanishing/counterexample", "infinite-order vanishing at the origin",
                      rep.label, "infinite-order-up-to(40)", None, rep.label == "infinite-order-up-to(40)"))
    g = cusp_map_envelope()
    for C in (math.pi / 4, math.pi / 2 + 0.1, 2.0):
        ok, _ = infinitesimal_wrt(_gauss_flat(C), g, 0.0, n_max=1)
        want = C > math.pi / 2
        out.append(record(f"infinitesimal/C={C:.6g}", "infinitesimal with respect to the cusp envelope",
                          ok, want, None, ok == want))
    return out


def check_negative_controls(tol: float, inject=()) -> list:
    res = cone_certify(wrap(lambda z: 1j * z), (-0.9, 0.9), Region.cone_infinity())
    return [record("negative/iz-cone-infinity", "boundary values on the imaginary axis leave the cone",
                   res.ok, False, None, not res.ok)]


CHECKS = (
    ("winding", check_winding),
    ("counterexample-index", check_counterexample_index),
    ("jump-law", check_jump_law),
    ("oscillation", check_oscillation),
    ("telescoping", check_telescoping),
    ("radial-identity", check_radial_identity),
    ("j-divergence", check_j_divergence),
    ("blaschke-certificate", check_blaschke_certificate),
    ("blaschke-product", check_blaschke_product),
    ("cusp", check_cusp),
    ("vanishing", check_vanishing),
    ("negative-controls", check_negative_controls),
)
