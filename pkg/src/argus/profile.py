"""Semicircle index profile I(r) and the identities it satisfies.

I(r) is the index of f along the upper semicircle of radius r. Across a
radius carrying zeros the profile jumps: an interior zero moves the index
from -1/4 to 3/4 and a diameter zero from 0 to 1/2 (per unit multiplicity).
Between zero radii the profile is smooth, and the segment indices s(n) on
the diameter close the books in the telescoping sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .boundary import cone_certify
from .contour import index_of_image
from .errors import (
    ExtrapolationDiverged,
    GridTooCoarse,
    UnsupportedRegion,
    ZeroNearRadius,
    ZeroOffRadius,
    ZeroOnPath,
)
from .geometry import FunctionHandle, Region, segment, semicircle
from .quadrature import integrate

DELTA0 = 1e-4
RADIUS_RTOL = 1e-12
S_CONVERGED = 1e-4


# ------------------------------------------------------------------ ledger


@dataclass(frozen=True)
class LedgerEntry:
    radius: float
    kappa: int = 0  # interior zeros on the radius, with multiplicity
    kappa_tilde: int = 0  # diameter zeros, with multiplicity
    kappa_prime: int = 0  # diameter zeros, distinct

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("ledger radius must be positive")
        if min(self.kappa, self.kappa_tilde, self.kappa_prime) < 0:
            raise ValueError("ledger counts must be nonnegative")
        if self.kappa_prime > self.kappa_tilde:
            raise ValueError("distinct count exceeds multiplicity count")

    @property
    def expected_jump(self) -> float:
        return self.kappa + 0.5 * self.kappa_tilde


@dataclass(frozen=True)
class ZeroLedger:
    entries: tuple = ()

    def __post_init__(self):
        entries = tuple(sorted(self.entries, key=lambda e: -e.radius))
        radii = [e.radius for e in entries]
        if len(set(radii)) != len(radii):
            raise ValueError("ledger radii must be distinct")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_zeros(cls, zeros, extra_radii=()) -> ZeroLedger:
        """Group zero records by radius; ``extra_radii`` adds zero-free entries."""
        groups: list[list] = []
        for rec in sorted(zeros, key=lambda z: -z.radius):
            if groups and abs(groups[-1][0].radius - rec.radius) <= RADIUS_RTOL * rec.radius:
                groups[-1].append(rec)
            else:
                groups.append([rec])
        entries = []
        for g in groups:
            inner = [z for z in g if z.placement == "interior"]
            diam = [z for z in g if z.placement == "boundary-diameter"]
            entries.append(
                LedgerEntry(
                    radius=g[0].radius,
                    kappa=sum(z.multiplicity for z in inner),
                    kappa_tilde=sum(z.multiplicity for z in diam),
                    kappa_prime=len(diam),
                )
            )
        for r in extra_radii:
            if all(abs(e.radius - r) > RADIUS_RTOL * r for e in entries):
                entries.append(LedgerEntry(float(r)))
        return cls(tuple(entries))

    @classmethod
    def from_handle(cls, f: FunctionHandle, extra_radii=()) -> ZeroLedger:
        return cls.from_zeros(f.zeros, extra_radii)

    @property
    def radii(self) -> list:
        return [e.radius for e in self.entries]

    def entry(self, r: float) -> LedgerEntry:
        for e in self.entries:
            if abs(e.radius - r) <= RADIUS_RTOL * r:
                return e
        return LedgerEntry(float(r))

    def __len__(self):
        return len(self.entries)


# ----------------------------------------------------------------- profile


@dataclass(frozen=True)
class IndexProfile:
    radii: np.ndarray
    values: np.ndarray
    errors: np.ndarray
    source: FunctionHandle
    jump_radii: list = field(default_factory=list)  # (r_n, left, right)
    delta: float = DELTA0

    def scaled(self) -> np.ndarray:
        """I(r) * sqrt(r), constant for the counterexample."""
        return self.values * np.sqrt(self.radii)


def _zero_radii(f: FunctionHandle) -> np.ndarray:
    return np.array(ZeroLedger.from_handle(f).radii)


def index_at(f: FunctionHandle, r: float, tol: float = 1e-10, **kw) -> float:
    try:
        return index_of_image(f, semicircle(r), tol, **kw).value
    except ZeroOnPath as exc:
        raise ZeroOnPath(str(exc), radius=r) from exc


def profile(
    f: FunctionHandle,
    radii,
    tol: float = 1e-10,
    delta: float = DELTA0,
    jumps: bool = False,
    **kw,
) -> IndexProfile:
    """I(r) on a grid of radii (sorted into decreasing order).

    Radii within ``delta`` of a declared zero radius raise ZeroOnPath with
    the radius attached. With ``jumps`` set, the one-sided limits at every
    declared zero radius inside the grid span are recorded as well.
    """
    radii = np.array(sorted(set(float(r) for r in radii), reverse=True))
    if radii.size == 0 or radii[-1] <= 0:
        raise ValueError("radii must be positive")
    zr = _zero_radii(f)
    values, errors = [], []
    for r in radii:
        if zr.size and np.min(np.abs(zr - r)) < delta:
            raise ZeroOnPath(f"radius {r:.12g} within {delta:g} of a declared zero radius", radius=float(r))
        try:
            res = index_of_image(f, semicircle(r), tol, **kw)
        except ZeroOnPath as exc:
            raise ZeroOnPath(str(exc), radius=float(r)) from exc
        values.append(res.value)
        errors.append(res.error)
    jump_radii = []
    if jumps:
        ledger = ZeroLedger.from_handle(f)
        for e in ledger.entries:
            if radii[-1] < e.radius < radii[0]:
                j = jump_at(f, e.radius, ledger, delta, tol)
                jump_radii.append((e.radius, j.left, j.right))
    return IndexProfile(radii, np.array(values), np.array(errors), f, jump_radii, delta)


def oscillation_check(prof: IndexProfile, margin: float = 1e-3) -> list:
    """Oscillation of I inside every zero-free annulus covered by the grid.

    Returns one dict per annulus with at least two grid radii:
    {r_outer, r_inner, oscillation, pass} where pass means osc < 2 - margin.
    """
    cuts = [np.inf] + list(_zero_radii(prof.source)) + [0.0]
    out = []
    for hi, lo in zip(cuts[:-1], cuts[1:]):
        mask = (prof.radii < hi) & (prof.radii > lo)
        if mask.sum() < 2:
            continue
        v = prof.values[mask]
        osc = float(v.max() - v.min())
        out.append({
            "r_outer": float(prof.radii[mask][0]),
            "r_inner": float(prof.radii[mask][-1]),
            "oscillation": osc,
            "pass": osc < 2 - margin,
        })
    return out


# ------------------------------------------------------------ jump law


def richardson3(v4, v2, v1) -> float:
    """Limit as h -> 0 from samples at 4h, 2h, h assuming v = L + a h + b h^2."""
    r_coarse = 2 * v2 - v4
    r_fine = 2 * v1 - v2
    return (4 * r_fine - r_coarse) / 3


@dataclass(frozen=True)
class JumpResult:
    radius: float
    left: float
    right: float
    jump: float
    expected: float
    residual: float
    raw_left: tuple = ()  # I(r - 4d), I(r - 2d), I(r - d)
    raw_right: tuple = ()


def _check_radius_zeros(f: FunctionHandle, r: float, reach: float) -> None:
    for z in f.zeros:
        if abs(z.radius - r) <= RADIUS_RTOL * r:
            continue
        if abs(z.radius - r) <= reach:
            raise ZeroOffRadius(f"declared zero {z.location} at modulus {z.radius:.12g} is off radius {r:.12g}")


def one_sided_limit(f: FunctionHandle, r: float, side: int, delta: float, tol: float, **kw):
    """Richardson limit of I(r + side * k * delta) over k = 4, 2, 1."""
    raw = tuple(index_at(f, r + side * k * delta, tol, **kw) for k in (4, 2, 1))
    return richardson3(*raw), raw


def jump_at(
    f: FunctionHandle, r_n: float, ledger: ZeroLedger | None = None, delta: float = DELTA0, tol: float = 1e-10, **kw
) -> JumpResult:
    """I(r_n^+) - I(r_n^-) with one-sided limits from Richardson extrapolation.

    The residual is measured against kappa + kappa_tilde / 2 from the ledger.
    Raises ZeroOffRadius if a declared zero sits within 4 * delta of the
    radius without lying on it.
    """
    if not 0 < 4 * delta < r_n:
        raise ValueError("need 0 < 4 * delta < r_n")
    ledger = ledger or ZeroLedger.from_handle(f)
    _check_radius_zeros(f, r_n, 4 * delta)
    left, raw_l = one_sided_limit(f, r_n, -1, delta, tol, **kw)
    right, raw_r = one_sided_limit(f, r_n, +1, delta, tol, **kw)
    expected = ledger.entry(r_n).expected_jump
    jump = right - left
    return JumpResult(r_n, left, right, jump, expected, jump - expected, raw_l, raw_r)


# ----------------------------------------------------- telescoping sum


@dataclass(frozen=True)
class SegmentSum:
    r_outer: float
    r_inner: float
    value: float
    raw: tuple  # S(4d), S(2d), S(d)


def segment_index_sum(
    f: FunctionHandle, r_outer: float, r_inner: float, delta: float = DELTA0, tol: float = 1e-10, **kw
) -> SegmentSum:
    """s(n): limit of Ind(f o [r_in + e, r_out - e]) + Ind(f o [-r_out + e, -r_in - e]).

    Samples e in {4d, 2d, d} and extrapolates. The two first-level
    Richardson values must agree within 1e-4 and the raw differences must
    not grow as e shrinks, else ExtrapolationDiverged.
    """
    if not 0 < r_inner + 8 * delta < r_outer - 8 * delta:
        raise ValueError("radii too close for the requested delta")
    raw = []
    for k in (4, 2, 1):
        e = k * delta
        plus = index_of_image(f, segment(r_inner + e, r_outer - e), tol, **kw).value
        minus = index_of_image(f, segment(-r_outer + e, -r_inner - e), tol, **kw).value
        raw.append(plus + minus)
    s4, s2, s1 = raw
    d1, d2 = s2 - s4, s1 - s2
    r_coarse, r_fine = 2 * s2 - s4, 2 * s1 - s2
    if abs(r_fine - r_coarse) >= S_CONVERGED or abs(d2) > abs(d1) + 1e-12:
        raise ExtrapolationDiverged(
            f"segment indices {s4:.12g}, {s2:.12g}, {s1:.12g} do not converge as eps -> 0"
        )
    return SegmentSum(r_outer, r_inner, richardson3(s4, s2, s1), tuple(raw))


@dataclass(frozen=True)
class SummationResult:
    residual: float
    outer_limit: float  # I(r_1^+)
    inner_limit: float  # I(r_{N+1}^+)
    kappa_sum: int
    kappa_tilde_sum: int
    s_values: tuple
    per_radius: tuple = ()  # residuals of the single-radius relations


def summation_relation(
    f: FunctionHandle, ledger: ZeroLedger, N: int, delta: float = DELTA0, tol: float = 1e-10, **kw
) -> SummationResult:
    """Residual of I(r_1^+) - I(r_{N+1}^+) = sum kappa + sum kappa_tilde / 2 - sum s.

    The ledger must list at least N + 1 radii; zero-free radii are allowed
    (see ZeroLedger.from_zeros ``extra_radii``).
    """
    if N < 1 or len(ledger) < N + 1:
        raise ValueError(f"ledger needs at least N + 1 = {N + 1} radii")
    ent = ledger.entries
    for e in ent[: N + 1]:
        _check_radius_zeros(f, e.radius, 4 * delta)
    plus = [one_sided_limit(f, e.radius, +1, delta, tol, **kw)[0] for e in ent[: N + 1]]
    s_vals = tuple(
        segment_index_sum(f, ent[n].radius, ent[n + 1].radius, delta, tol, **kw).value for n in range(N)
    )
    k_sum = sum(e.kappa for e in ent[:N])
    kt_sum = sum(e.kappa_tilde for e in ent[:N])
    residual = plus[0] - plus[N] - k_sum - 0.5 * kt_sum + math.fsum(s_vals)
    per = tuple(
        ent[n].expected_jump - (plus[n] - plus[n + 1] + s_vals[n]) for n in range(N)
    )
    return SummationResult(residual, plus[0], plus[N], k_sum, kt_sum, s_vals, per)


S_BOUND_FACTORS = {"slit-plane": 1.0, "cone-infinity": 0.5, "cone-C": 0.5, "half-plane": 0.5}


def s_bound_check(
    f: FunctionHandle | None,
    ledger: ZeroLedger,
    N: int,
    region: Region,
    s_values=None,
    slack: float = 1e-6,
    delta: float = DELTA0,
    tol: float = 1e-10,
    certify: bool = True,
) -> bool:
    """sum_{n<=N} s(n) <= factor * sum_{n<=N} kappa'(n) for the region's factor.

    The factor is 1 for the slit plane and 1/2 for the line complements
    (cones and half-planes). ``s_values`` bypasses the numerical s(n), which
    is how synthetic ledgers are checked.
    """
    if region.kind not in S_BOUND_FACTORS:
        raise UnsupportedRegion(f"no s-bound for region {region.kind!r}")
    if s_values is None:
        if len(ledger) < N + 1:
            raise ValueError(f"ledger needs at least N + 1 = {N + 1} radii")
        ent = ledger.entries
        if certify:
            r1 = ent[0].radius
            if not cone_certify(f, (-r1, r1), region).ok:
                raise ValueError(f"boundary image leaves region {region.kind}")
        s_values = [segment_index_sum(f, ent[n].radius, ent[n + 1].radius, delta, tol).value for n in range(N)]
    s_sum = math.fsum(list(s_values)[:N])
    kp_sum = sum(e.kappa_prime for e in ledger.entries[:N])
    return s_sum <= S_BOUND_FACTORS[region.kind] * kp_sum + slack


# ------------------------------------------------------ radial identity


@dataclass(frozen=True)
class RadialResult:
    radius: float
    index: float
    integral: float
    residual: float


def radial_identity_check(f: FunctionHandle, r: float, tol: float = 1e-10) -> RadialResult:
    """Compare I(r) with (1/2pi) int_0^pi r d/dr ln|f(r e^{it})| dt.

    The radial derivative is a central difference with step h = 1e-6 r.
    Raises ZeroNearRadius if a declared zero lies within 2h of the circle.
    """
    h = 1e-6 * r
    for z in f.zeros:
        if abs(z.radius - r) <= 2 * h:
            raise ZeroNearRadius(f"declared zero {z.location} within {2 * h:.3g} of radius {r:.12g}")
    index = index_at(f, r, tol)

    def integrand(theta):
        u = np.exp(1j * theta)
        return r * (f.log_modulus((r + h) * u) - f.log_modulus((r - h) * u)) / (2 * h)

    # the difference quotient carries ~1e-10 rounding noise; aim above it
    res = integrate(integrand, 0.0, math.pi, abstol=max(tol, 1e-8))
    integral = res.value / (2 * math.pi)
    return RadialResult(r, index, integral, index - integral)


# ---------------------------------------------------------- log average


@dataclass(frozen=True)
class JResult:
    radius: float
    value: float
    error: float
    points: int


def _trapezoid_log(radii: np.ndarray, values: np.ndarray) -> float:
    u = np.log(radii)
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(u)))


def j_profile(prof: IndexProfile, r: float) -> JResult:
    """J(r) = (1 / ln(1/r)) int_r^1 I(t) / t dt by trapezoid in u = ln t.

    The profile must contain r and 1 among its radii and at least three
    points in [r, 1]. The error estimate is |T_h - T_2h| / 3 from dropping
    every other grid point.
    """
    if not 0 < r < 1:
        raise ValueError("need 0 < r < 1")
    radii = prof.radii[::-1]
    vals = prof.values[::-1]
    tol = 1e-12
    if not (np.any(np.abs(radii - r) <= tol * r) and np.any(np.abs(radii - 1.0) <= tol)):
        raise GridTooCoarse("profile grid must contain both r and 1")
    mask = (radii >= r * (1 - tol)) & (radii <= 1 + tol)
    t, v = radii[mask], vals[mask]
    if t.size < 3:
        raise GridTooCoarse("need at least three radii in [r, 1]")
    inner = [z for z in _zero_radii(prof.source) if r < z < 1]
    if inner:
        raise GridTooCoarse("declared zero radii inside (r, 1): trapezoid would straddle a jump")
    fine = _trapezoid_log(t, v)
    keep = np.arange(0, t.size, 2)
    if keep[-1] != t.size - 1:
        keep = np.append(keep, t.size - 1)
    coarse = _trapezoid_log(t[keep], v[keep])
    L = math.log(1.0 / r)
    return JResult(r, fine / L, abs(fine - coarse) / 3 / L, int(t.size))


def j_profile_estimate(f: FunctionHandle, r: float, per_factor4: int = 64, tol: float = 1e-10) -> JResult:
    """J(r) from a fresh geometric grid on [r, 1] with ``per_factor4`` points per factor 4."""
    steps = max(2, int(math.ceil(per_factor4 * math.log(1 / r) / math.log(4))))
    grid = np.exp(np.linspace(0.0, math.log(r), steps + 1))
    grid[0], grid[-1] = 1.0, r
    return j_profile(profile(f, grid, tol), r)


# ------------------------------------------------- counterexample oracles


COUNTEREXAMPLE_SCALE = 1.0 / (math.sqrt(2) * math.pi)


def counterexample_index(r):
    """Closed form I(r) = r^{-1/2} / (sqrt(2) pi) for exp(-e^{i pi/4}/sqrt z)."""
    return COUNTEREXAMPLE_SCALE / np.sqrt(r)


def counterexample_j(r):
    """Closed form J(r) = (2 / (sqrt(2) pi)) (r^{-1/2} - 1) / ln(1/r)."""
    r = np.asarray(r, dtype=float)
    return 2 * COUNTEREXAMPLE_SCALE * (r ** -0.5 - 1) / np.log(1 / r)
