"""Boundary behaviour at a point: vanishing order, relative infinitesimals,
and cone certification of boundary values on the diameter."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import GVanishes, UnderflowDominated
from .geometry import FunctionHandle, LineSegment, PathSpec, Region, segment

STABLE_SPREAD = 0.1
TINY_LOG = math.log(1e-300)


@dataclass(frozen=True)
class VanishingReport:
    point: complex
    classification: str  # "order", "infinite-order" or "nonvanishing"
    order: int | None
    n_max: int
    trace: list = field(default_factory=list)  # (scale, local order)
    base: float = 2.0

    @property
    def label(self) -> str:
        if self.classification == "order":
            return f"order-{self.order}"
        if self.classification == "infinite-order":
            return f"infinite-order-up-to({self.n_max})"
        return "nonvanishing"

    def to_dict(self) -> dict:
        return {
            "point": [self.point.real, self.point.imag],
            "classification": self.label,
            "order": self.order,
            "n_max": self.n_max,
            "base": self.base,
            "trace": [{"scale": s, "local_order": k} for s, k in self.trace],
        }


def radial_approach(a: complex, direction: complex = 1.0, length: float = 0.5) -> PathSpec:
    """Straight approach ending at ``a`` from a + length * direction."""
    direction = complex(direction) / abs(direction)
    return segment(a + length * direction, a)


def approach_points(path: PathSpec, a: complex, scales: np.ndarray) -> np.ndarray:
    """Points on the last piece of ``path`` at distance ``scales`` from ``a``."""
    piece = path.pieces[-1]
    scales = np.asarray(scales, dtype=float)
    if abs(piece.point(1.0) - a) > 1e-12 * max(1.0, abs(a)):
        raise ValueError("approach path must terminate at the boundary point")
    if isinstance(piece, LineSegment):
        d = piece.start - piece.end
        return a + scales[:, None].squeeze(-1) * d / abs(d)
    # bisection on the parameter; distance is assumed monotone on the piece
    if np.any(scales >= abs(piece.point(0.0) - a)):
        raise ValueError("scale exceeds the length of the final approach piece")
    lo = np.zeros_like(scales)
    hi = np.ones_like(scales)
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        far = np.abs(piece.point(mid) - a) > scales
        lo = np.where(far, mid, lo)
        hi = np.where(far, hi, mid)
    return piece.point(0.5 * (lo + hi))


def _scales(base: float, k_min: int, k_max: int) -> np.ndarray:
    return base ** -np.arange(k_min, k_max + 1, dtype=float)


def _resolved(approach: PathSpec, a: complex, scales: np.ndarray):
    """Approach points, cut at the first scale the path cannot resolve.

    Curved pieces lose the distance to ``a`` to cancellation below about
    eps times the piece size; those samples would flatten every slope.
    """
    pts = approach_points(approach, a, scales)
    good = np.abs(np.abs(pts - a) / scales - 1) < 1e-6
    stop = int(np.argmin(good)) if not good.all() else good.size
    return scales[:stop], pts[:stop]


def vanishing_order(
    f: FunctionHandle,
    a: complex = 0.0,
    approach: PathSpec | None = None,
    n_max: int = 40,
    base: float = 2.0,
    k_min: int = 4,
    k_max: int = 60,
) -> VanishingReport:
    """Classify the vanishing of f at ``a`` from log-log secant slopes.

    |f| is sampled at distances base**-k (k = k_min..k_max) along the
    approach. The local order at scale s is the slope of ln|f| against ln s
    between consecutive scales. Three consecutive slopes within 0.1 of each
    other and of an integer k give order-k (order 0 is "nonvanishing");
    a finest slope above ``n_max`` gives infinite-order-up-to(n_max).
    """
    a = complex(a)
    approach = approach or radial_approach(a)
    scales, pts = _resolved(approach, a, _scales(base, k_min, k_max))
    if scales.size == 0:
        raise ValueError("approach path does not resolve the coarsest scale")
    logs = f.log_modulus(pts)
    usable = np.isfinite(logs) & (logs > TINY_LOG if f.log_abs is None else True)
    if not usable[0]:
        raise UnderflowDominated("f underflows at the coarsest scale", float(scales[0]))
    stop = int(np.argmin(usable)) if not usable.all() else usable.size
    scales, logs = scales[:stop], logs[:stop]
    slopes = (logs[:-1] - logs[1:]) / (np.log(scales[:-1]) - np.log(scales[1:]))
    trace = [(float(s), float(k)) for s, k in zip(scales[1:], slopes)]
    if slopes.size >= 3:
        last = slopes[-3:]
        k = round(float(last[-1]))
        stable = np.ptp(last) <= STABLE_SPREAD and np.all(np.abs(last - k) <= STABLE_SPREAD)
        if stable and k <= 0:
            return VanishingReport(a, "nonvanishing", 0, n_max, trace, base)
        if stable:
            return VanishingReport(a, "order", int(k), n_max, trace, base)
    if slopes.size and slopes[-1] > n_max:
        return VanishingReport(a, "infinite-order", None, n_max, trace, base)
    raise UnderflowDominated(
        "local order did not stabilise before the deepest reliable scale", float(scales[-1])
    )


def infinitesimal_wrt(
    f: FunctionHandle,
    g: FunctionHandle,
    a: complex = 0.0,
    approach: PathSpec | None = None,
    n_max: int = 40,
    base: float = 2.0,
    k_min: int = 4,
    k_max: int = 24,
):
    """Check |f| / |g|**N -> 0 along the approach for every N <= n_max.

    Works with L_N = ln|f| - N ln|g|: N passes when L_N strictly decreases
    over the last three scales and ends below 0. Returns (ok, trace) where
    trace maps N to its last three L_N values.
    """
    a = complex(a)
    approach = approach or radial_approach(a)
    _, pts = _resolved(approach, a, _scales(base, k_min, k_max))
    if pts.size < 3:
        raise ValueError("approach resolves fewer than three scales")
    lf = f.log_modulus(pts)
    lg = g.log_modulus(pts)
    if np.any(np.isneginf(lg)):
        raise GVanishes("g vanishes at a sample point on the approach")
    trace = {}
    ok = True
    for n in range(1, n_max + 1):
        with np.errstate(invalid="ignore"):
            ln = (lf - n * lg)[-3:]
        passed = bool(np.all(np.diff(ln) < 0) and ln[-1] < 0)
        trace[n] = {"log_ratio": ln.tolist(), "pass": passed}
        ok = ok and passed
    return ok, trace


@dataclass(frozen=True)
class CertifyResult:
    ok: bool
    worst_margin: float
    witness: float | None
    witness_value: complex | None = None


CROSSING_KINDS = ("cone-C", "cone-infinity", "slit-plane")
CROSSING_RATIO = 1e3


def _axis_crossings(f: FunctionHandle, x: np.ndarray, w: np.ndarray, steps: int = 60):
    """Points where the boundary curve meets the imaginary axis between samples.

    Each sign change of Re w between neighbours is bisected; the crossing
    counts only when |Im w| dominates |Re w| at the bracket, so curves that
    pass through 0 (real-valued f, simple zeros) are not flagged. Returns
    (x, i Im w) pairs.
    """
    idx = np.flatnonzero(w.real[:-1] * w.real[1:] < 0)
    if idx.size == 0:
        return []
    lo, hi = x[idx].copy(), x[idx + 1].copy()
    s_lo = np.sign(w.real[idx])
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        same = np.sign(f(mid.astype(complex)).real) == s_lo
        lo = np.where(same, mid, lo)
        hi = np.where(same, hi, mid)
    mid = 0.5 * (lo + hi)
    wl, wh, wm = (np.asarray(f(t.astype(complex)), dtype=complex) for t in (lo, hi, mid))
    re = np.maximum(np.abs(wl.real), np.abs(wh.real))
    im = np.minimum(np.abs(wl.imag), np.abs(wh.imag))
    hit = im > CROSSING_RATIO * re
    return [(float(mid[i]), 1j * float(wm[i].imag)) for i in np.flatnonzero(hit)]


def cone_certify(
    f: FunctionHandle, interval: tuple, region: Region, samples: int = 400, tol: float = 0.0
) -> CertifyResult:
    """Sample f on a real interval and test every image against ``region``.

    The worst margin is the minimum of ``region.margin`` over the samples;
    the witness is the first point, in increasing x, whose image falls
    outside. For the cones and the slit plane, sign changes of Re w between
    samples are also bisected: a curve that reaches the imaginary axis away
    from 0 leaves these regions even when every sample is inside.
    """
    lo, hi = map(float, interval)
    if not -1 <= lo < hi <= 1:
        raise ValueError("interval must lie in [-1, 1]")
    x = np.linspace(lo, hi, samples)
    w = np.asarray(f(x.astype(complex)), dtype=complex)
    margin = region.margin(w)
    inside = region.contains(w, tol)
    worst = float(np.min(margin))
    bad = [(float(x[i]), complex(w[i])) for i in np.flatnonzero(~inside)[:1]]
    if region.kind in CROSSING_KINDS:
        for xc, wc in _axis_crossings(f, x, w):
            if not region.contains(wc, tol):
                worst = min(worst, float(region.margin(wc)))
                bad.append((xc, wc))
                break
    if not bad:
        return CertifyResult(True, worst, None)
    xw, ww = min(bad, key=lambda p: p[0])
    return CertifyResult(False, worst, xw, ww)
