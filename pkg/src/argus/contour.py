"""Winding index of curves and image curves.

The index of an open curve is the real number (1/2pi) * (total continuous
change of argument). Two independent routes are provided:

* adaptive phase unwrapping: bisect until consecutive image points differ
  in argument by less than pi/2, then sum the principal argument steps;
* adaptive Gauss-Kronrod quadrature of Im(f'/f(gamma) gamma') / 2pi.

Phase unwrapping is the default authority; the quadrature is a cross-check
that runs only when the handle carries an analytic derivative (or the caller
explicitly allows central differences).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonIntegerResult,
    OriginTooClose,
    QuadratureMismatch,
    RefinementExhausted,
    UnsupportedRegion,
    ZeroOnPath,
)
from .geometry import FunctionHandle, PathSpec, Region
from .quadrature import integrate

MAX_DEPTH = 30
STEP_LIMIT = math.pi / 2
# a large modulus ratio between neighbours flags a nearby zero, where a
# multiple turn can alias to a small principal step
LOG_MODULUS_LIMIT = 1.0
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class IndexResult:
    value: float
    error: float
    depth: int
    phase_track: list | None = None
    cross_value: float | None = None
    cross_error: float | None = None
    samples: int = 0
    methods: tuple = field(default=("unwrap",))


@dataclass
class _Unwrapped:
    change: float
    error: float
    depth: int
    ts: np.ndarray
    ws: np.ndarray
    steps: np.ndarray


def _unit(w: np.ndarray) -> np.ndarray:
    return w / np.abs(w)


def _refine(w_of_t, ts, ws, depth, max_depth):
    """Bisect intervals whose argument or log-modulus step is too large."""
    while True:
        u = _unit(ws)
        steps = np.angle(u[1:] * np.conj(u[:-1]))
        logm = np.log(np.abs(ws))
        bad = (np.abs(steps) >= STEP_LIMIT) | (np.abs(np.diff(logm)) >= LOG_MODULUS_LIMIT)
        if not bad.any():
            return ts, ws, depth, steps
        if (depth[bad] >= max_depth).any():
            t_bad = float(ts[:-1][bad & (depth >= max_depth)][0])
            raise OriginTooClose(f"argument jump unresolved after {max_depth} bisections near t={t_bad:.12g}")
        idx = np.flatnonzero(bad)
        t_new = 0.5 * (ts[idx] + ts[idx + 1])
        w_new = _checked(w_of_t, t_new)
        d_new = depth[idx] + 1
        ts = np.insert(ts, idx + 1, t_new)
        ws = np.insert(ws, idx + 1, w_new)
        depth = depth.copy()
        depth[idx] = d_new
        depth = np.insert(depth, idx + 1, d_new)


def _checked(w_of_t, t):
    w = np.asarray(w_of_t(t), dtype=complex)
    if not np.all(np.isfinite(w)):
        raise OriginTooClose("curve evaluation produced non-finite values")
    if np.any(w == 0):
        t0 = float(np.asarray(t)[np.flatnonzero(w == 0)[0]])
        raise OriginTooClose(f"curve hits the origin at t={t0:.12g}")
    return w


def unwrap_argument(w_of_t, tol_angle: float, n_init: int = 64, max_depth: int = MAX_DEPTH) -> _Unwrapped:
    """Continuous argument change of t -> w(t) on [0, 1].

    Intervals are bisected until every principal argument step is below
    pi/2 and |ln|w|| changes by less than 1 between neighbours. After that
    refinement converges, every interval is halved once more;
    the two sums agree to rounding unless the coarse grid aliased a full turn,
    so their difference is the error estimate. Aliasing triggers further
    global halvings (at most six).
    """
    ts = np.linspace(0.0, 1.0, n_init + 1)
    ws = _checked(w_of_t, ts)
    depth = np.zeros(n_init, dtype=int)
    ts, ws, depth, steps = _refine(w_of_t, ts, ws, depth, max_depth)
    for _ in range(7):
        coarse = math.fsum(steps)
        t_mid = 0.5 * (ts[:-1] + ts[1:])
        w_mid = _checked(w_of_t, t_mid)
        n = ts.size
        fine_t = np.empty(2 * n - 1)
        fine_w = np.empty(2 * n - 1, dtype=complex)
        fine_t[0::2], fine_t[1::2] = ts, t_mid
        fine_w[0::2], fine_w[1::2] = ws, w_mid
        fine_depth = np.repeat(depth + 1, 2)
        u = _unit(fine_w)
        fine_steps = np.angle(u[1:] * np.conj(u[:-1]))
        fine = math.fsum(fine_steps)
        roundoff = 8 * _EPS * (fine_steps.size + abs(fine))
        error = abs(fine - coarse) + roundoff
        ts, ws, depth = fine_t, fine_w, fine_depth
        if error <= tol_angle:
            return _Unwrapped(fine, error, int(depth.max()), ts, ws, fine_steps)
        if depth.max() > max_depth:
            break
        ts, ws, depth, steps = _refine(w_of_t, ts, ws, depth, max_depth)
    raise RefinementExhausted(f"phase unwrapping error {error:.3g} above {tol_angle:.3g}")


def _track(pieces_unwrapped) -> list:
    out = []
    offset = None
    for k, uw in enumerate(pieces_unwrapped):
        start = float(np.angle(uw.ws[0])) if offset is None else offset
        phase = start + np.concatenate([[0.0], np.cumsum(uw.steps)])
        out.extend(zip((k + uw.ts).tolist(), phase.tolist()))
        offset = float(phase[-1])
    return out


def index_of_curve(path: PathSpec, tol: float = 1e-10, track: bool = False, n_init: int = 64) -> IndexResult:
    """Index of the curve ``path`` itself with respect to the origin."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    scale = max(abs(path.start), max(float(np.max(np.abs(p.point(np.linspace(0, 1, 33))))) for p in path.pieces))
    pieces = []
    for piece in path.pieces:

        def w_of_t(t, piece=piece):
            w = piece.point(t)
            if np.any(np.abs(w) < 1e-13 * scale):
                raise OriginTooClose("curve passes within 1e-13*scale of the origin")
            return w

        pieces.append(unwrap_argument(w_of_t, 2 * math.pi * tol / len(path.pieces), n_init))
    return _assemble(pieces, track)


def _assemble(pieces, track) -> IndexResult:
    change = math.fsum(uw.change for uw in pieces)
    error = sum(uw.error for uw in pieces) / (2 * math.pi)
    return IndexResult(
        value=change / (2 * math.pi),
        error=error,
        depth=max(uw.depth for uw in pieces),
        phase_track=_track(pieces) if track else None,
        samples=sum(uw.ts.size for uw in pieces),
    )


def _check_declared_zeros(f: FunctionHandle, path: PathSpec) -> None:
    for rec in f.zeros:
        if path.distance(rec.location) <= 1e-12 * max(1.0, abs(rec.location)):
            raise ZeroOnPath(f"declared zero {rec.location} lies on the path")


def _modulus_dip_scan(uw: _Unwrapped) -> None:
    """Min-modulus scan over the ordered samples of one piece."""
    a = np.abs(uw.ws)
    if a.size > 2:
        dip = a[1:-1] < 1e-13 * np.minimum(a[:-2], a[2:])
        if dip.any():
            t0 = float(uw.ts[1:-1][dip][0])
            raise ZeroOnPath(f"isolated modulus dip at t={t0:.12g}: zero on the path")


def quadrature_index(f: FunctionHandle, path: PathSpec, tol: float, allow_fd: bool = False):
    """Re((1/2pi i) int f'/f dz) by adaptive quadrature; returns (value, error)."""
    total, err = 0.0, 0.0
    for piece in path.pieces:

        def integrand(t, piece=piece):
            z = piece.point(t)
            return (f.logderiv_at(z, allow_fd=allow_fd) * piece.tangent(t)).imag

        res = integrate(integrand, 0.0, 1.0, abstol=math.pi * tol / len(path.pieces))
        total += res.value
        err += res.error
    return total / (2 * math.pi), err / (2 * math.pi)


def index_of_image(
    f: FunctionHandle,
    path: PathSpec,
    tol: float = 1e-10,
    allow_fd: bool = False,
    cross_check: bool = True,
    track: bool = False,
    n_init: int = 64,
) -> IndexResult:
    """Ind(f o path), cross-checked against the f'/f quadrature.

    Raises ZeroOnPath when a declared zero sits on the path or the unwrapping
    meets an unresolvable argument jump, and QuadratureMismatch when the two
    routes differ by more than 5 * tol.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check_declared_zeros(f, path)
    pieces = []
    for piece in path.pieces:

        def w_of_t(t, piece=piece):
            return f(piece.point(t))

        try:
            uw = unwrap_argument(w_of_t, 2 * math.pi * tol / len(path.pieces), n_init)
        except OriginTooClose as exc:
            raise ZeroOnPath(f"f vanishes on the path: {exc}") from exc
        _modulus_dip_scan(uw)
        pieces.append(uw)
    result = _assemble(pieces, track)
    if not cross_check or not (f.has_analytic_derivative or allow_fd):
        return result
    value_b, err_b = quadrature_index(f, path, tol, allow_fd)
    if abs(value_b - result.value) > 5 * tol:
        raise QuadratureMismatch(
            f"phase unwrapping gives {result.value:.15g}, f'/f quadrature gives {value_b:.15g}"
        )
    return IndexResult(
        value=result.value,
        error=result.error,
        depth=result.depth,
        phase_track=result.phase_track,
        cross_value=value_b,
        cross_error=err_b,
        samples=result.samples,
        methods=("unwrap", "logderiv-quadrature"),
    )


def closed_path_zero_count(f: FunctionHandle, closed: PathSpec, tol: float = 1e-10, **kwargs) -> float:
    """Argument-principle count: Ind(f o closed), required to be near an integer."""
    if not closed.closed:
        raise ValueError("path is not flagged closed")
    value = index_of_image(f, closed, tol, **kwargs).value
    if abs(value - round(value)) > tol:
        raise NonIntegerResult(f"closed-path index {value:.15g} is not within {tol:g} of an integer")
    return value


INDEX_BOUNDS = {
    "cone-infinity": 0.5,
    "cone-C": 0.5,
    "half-plane": 0.5,
    "slit-plane": 1.0,
}


def index_bound_check(region: Region, index: IndexResult | float) -> bool:
    """Does |Ind| respect the bound implied by the curve lying in ``region``?

    Curves in the plane minus a line through 0 (cone-infinity, and the
    smaller cones and closed half-planes) have |Ind| < 1/2; curves avoiding
    the positive imaginary axis have |Ind| < 1. The half-plane bound is
    attained by curves running along its edge, so it is checked as <=.
    """
    if region.kind not in INDEX_BOUNDS:
        raise UnsupportedRegion(f"no index bound for region {region.kind!r}")
    value = index.value if isinstance(index, IndexResult) else float(index)
    bound = INDEX_BOUNDS[region.kind]
    if region.kind == "half-plane":
        return abs(value) <= bound
    return abs(value) < bound
