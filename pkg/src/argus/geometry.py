"""Complex-plane primitives: regions, piecewise-smooth paths, function handles.

Points are plain Python/numpy complex numbers. Every evaluator in this
package is vectorised: it takes an ndarray of complex points and returns an
ndarray of the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

ComplexFn = Callable[[np.ndarray], np.ndarray]

BOUNDARY_TOL = 1e-10

REGION_KINDS = (
    "cone-C",
    "cone-infinity",
    "half-plane",
    "upper-half-disc",
    "upper-half-plane",
    "slit-plane",
)


def as_point(z) -> complex:
    """Coerce to a finite Python complex, rejecting NaN and infinities."""
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"non-finite complex point {z!r}")
    return z


def upper_sqrt(z):
    """Principal square root with -0.0 imaginary parts treated as +0.0.

    On the closed upper half-plane the result has argument in [0, pi/2], so
    the root is continuous on the closed upper half-disc minus the origin.
    """
    z = np.asarray(z, dtype=complex)
    z = np.where(z.imag == 0.0, z.real + 0j, z)
    return np.sqrt(z)


# ---------------------------------------------------------------- regions


@dataclass(frozen=True)
class Region:
    kind: str
    parameter: complex | float | bool | None = None

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise ValueError(f"unknown region kind {self.kind!r}")
        if self.kind == "cone-C":
            if self.parameter is None or not float(self.parameter) > 0:
                raise ValueError("cone-C requires a parameter C > 0")
        if self.kind == "half-plane":
            if self.parameter is None or complex(self.parameter) == 0:
                raise ValueError("half-plane requires a nonzero complex coefficient")

    @classmethod
    def cone(cls, C: float) -> Region:
        return cls("cone-C", float(C))

    @classmethod
    def cone_infinity(cls) -> Region:
        return cls("cone-infinity")

    @classmethod
    def half_plane(cls, a: complex) -> Region:
        return cls("half-plane", complex(a))

    @classmethod
    def upper_half_disc(cls) -> Region:
        return cls("upper-half-disc")

    @classmethod
    def upper_half_plane(cls) -> Region:
        return cls("upper-half-plane")

    @classmethod
    def slit_plane(cls, include_origin: bool = True) -> Region:
        # C minus {iy : y > 0}; the origin is already outside the slit.
        return cls("slit-plane", bool(include_origin))

    @property
    def closed(self) -> bool:
        return self.kind not in ("cone-infinity", "slit-plane")

    def margin(self, w) -> np.ndarray:
        """Signed distance-like margin: positive inside, negative outside.

        The origin receives +inf for the kinds that add it back explicitly
        (cone-infinity, slit-plane with include_origin).
        """
        w = np.asarray(w, dtype=complex)
        if self.kind == "cone-C":
            return float(self.parameter) * np.abs(w.real) - np.abs(w.imag)
        if self.kind == "cone-infinity":
            return np.where(w == 0, np.inf, np.abs(w.real))
        if self.kind == "half-plane":
            a = complex(self.parameter)
            return (a * w).real / abs(a)
        if self.kind == "upper-half-disc":
            return np.minimum(1.0 - np.abs(w), w.imag)
        if self.kind == "upper-half-plane":
            return w.imag
        m = np.maximum(np.abs(w.real), -w.imag)
        if self.parameter is None or self.parameter:
            m = np.where(w == 0, np.inf, m)
        return m

    def contains(self, w, tol: float = 0.0):
        """Membership with boundary comparisons slackened by ``tol``.

        Closed kinds accept margin >= -tol. cone-infinity and slit-plane are
        not closed: they need a strictly positive margin, and ``tol`` only
        widens the exceptional origin to the disc |w| <= tol.
        """
        w = np.asarray(w, dtype=complex)
        m = self.margin(w)
        if self.closed:
            out = m >= -tol
        else:
            out = m > 0
            if self.kind == "cone-infinity" or self.parameter is None or self.parameter:
                out = out | (np.abs(w) <= tol)
        return bool(out) if out.ndim == 0 else out


def region_contains(region: Region, z, tol: float = 0.0):
    return region.contains(z, tol)


# ------------------------------------------------------------------ paths


@dataclass(frozen=True)
class LineSegment:
    start: complex
    end: complex

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        if self.start == self.end:
            raise ValueError("segment has zero length")

    @property
    def length(self) -> float:
        return abs(self.end - self.start)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return self.start + (self.end - self.start) * t

    def tangent(self, t):
        t = np.asarray(t, dtype=float)
        return np.full(t.shape, self.end - self.start, dtype=complex)

    def reversed(self) -> LineSegment:
        return LineSegment(self.end, self.start)

    def distance(self, a: complex) -> float:
        d = self.end - self.start
        t = min(1.0, max(0.0, ((a - self.start) * d.conjugate()).real / abs(d) ** 2))
        return abs(a - (self.start + t * d))


@dataclass(frozen=True)
class UpperSemicircle:
    """Upper half of the circle |z - center| = radius.

    orientation +1 runs counterclockwise from center + radius to
    center - radius; -1 runs the other way.
    """

    center: complex
    radius: float
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def length(self) -> float:
        return math.pi * self.radius

    def _angle(self, t):
        t = np.asarray(t, dtype=float)
        return math.pi * (t if self.orientation == 1 else 1.0 - t)

    def point(self, t):
        return self.center + self.radius * np.exp(1j * self._angle(t))

    def tangent(self, t):
        return self.orientation * 1j * math.pi * self.radius * np.exp(1j * self._angle(t))

    def reversed(self) -> UpperSemicircle:
        return UpperSemicircle(self.center, self.radius, -self.orientation)

    def distance(self, a: complex) -> float:
        rel = a - self.center
        if rel.imag >= 0 and rel != 0:
            return abs(abs(rel) - self.radius)
        return min(abs(rel - self.radius), abs(rel + self.radius))


@dataclass(frozen=True)
class FullCircle:
    center: complex
    radius: float
    orientation: int = 1

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def length(self) -> float:
        return 2 * math.pi * self.radius

    def _angle(self, t):
        t = np.asarray(t, dtype=float)
        return 2 * math.pi * (t if self.orientation == 1 else 1.0 - t)

    def point(self, t):
        return self.center + self.radius * np.exp(1j * self._angle(t))

    def tangent(self, t):
        return self.orientation * 2j * math.pi * self.radius * np.exp(1j * self._angle(t))

    def reversed(self) -> FullCircle:
        return FullCircle(self.center, self.radius, -self.orientation)

    def distance(self, a: complex) -> float:
        return abs(abs(a - self.center) - self.radius)


Piece = LineSegment | UpperSemicircle | FullCircle


@dataclass(frozen=True)
class PathSpec:
    """An immutable chain of primitive pieces, each parametrised on [0, 1]."""

    pieces: tuple
    closed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ValueError("a path needs at least one piece")
        if self.closed:
            gap = abs(self.end - self.start)
            if gap > 1e-12 * max(self.diameter, 1.0):
                raise ValueError(f"path flagged closed but endpoints differ by {gap:.3g}")

    @property
    def start(self) -> complex:
        return complex(self.pieces[0].point(0.0))

    @property
    def end(self) -> complex:
        return complex(self.pieces[-1].point(1.0))

    @property
    def length(self) -> float:
        return sum(p.length for p in self.pieces)

    @property
    def diameter(self) -> float:
        _, pts, _ = sample_path(self, 16)
        return float(np.max(np.abs(pts[:, None] - pts[None, :])))

    def distance(self, a: complex) -> float:
        return min(p.distance(complex(a)) for p in self.pieces)

    def reversed(self) -> PathSpec:
        return PathSpec(tuple(p.reversed() for p in reversed(self.pieces)), self.closed)

    def __add__(self, other: PathSpec) -> PathSpec:
        return PathSpec(self.pieces + other.pieces)

    def __neg__(self) -> PathSpec:
        return self.reversed()


def sample_path(path: PathSpec, n: int):
    """Sample ``n`` points per piece with exact analytic tangents.

    Returns ``(params, points, tangents)`` arrays. The global parameter of
    piece k runs over [k, k + 1], so shared piece endpoints appear twice,
    once with each one-sided tangent.
    """
    if n < 2:
        raise ValueError("need at least 2 samples per piece")
    t = np.linspace(0.0, 1.0, n)
    params, points, tangents = [], [], []
    for k, piece in enumerate(path.pieces):
        params.append(k + t)
        points.append(piece.point(t))
        tangents.append(piece.tangent(t))
    return np.concatenate(params), np.concatenate(points), np.concatenate(tangents)


def semicircle(radius: float, center: complex = 0.0, orientation: int = 1) -> PathSpec:
    """gamma_r: the upper semicircle |z - center| = radius, Im z >= 0."""
    return PathSpec((UpperSemicircle(center, radius, orientation),))


def segment(start: complex, end: complex) -> PathSpec:
    return PathSpec((LineSegment(start, end),))


def circle(radius: float, center: complex = 0.0, orientation: int = 1) -> PathSpec:
    return PathSpec((FullCircle(center, radius, orientation),), closed=True)


def annular_sector_path(r_outer: float, r_inner: float) -> PathSpec:
    """Boundary of {r_inner < |z| < r_outer, Im z > 0}, positively oriented."""
    return PathSpec(
        (
            UpperSemicircle(0.0, r_outer, 1),
            LineSegment(-r_outer, -r_inner),
            UpperSemicircle(0.0, r_inner, -1),
            LineSegment(r_inner, r_outer),
        ),
        closed=True,
    )


def notched_annulus_path(
    r_outer: float, r_inner: float, b: float, eps: float, eps_neg: float | None = None
) -> PathSpec:
    """Closed path around the upper half-annulus with half-disc notches at +-b.

    Runs along the outer arc, then left to right along the diameter while
    hopping over -b and b on small upper semicircles of radii ``eps_neg``
    and ``eps``, and back over the inner arc.
    """
    eps_neg = eps if eps_neg is None else eps_neg
    if not 0 < r_inner < b < r_outer:
        raise ValueError("need 0 < r_inner < b < r_outer")
    if b - eps <= r_inner or b + eps >= r_outer or b - eps_neg <= r_inner or b + eps_neg >= r_outer:
        raise ValueError("notch radii must fit inside the annulus")
    return PathSpec(
        (
            UpperSemicircle(0.0, r_outer, 1),
            LineSegment(-r_outer, -b - eps_neg),
            UpperSemicircle(-b, eps_neg, -1),
            LineSegment(-b + eps_neg, -r_inner),
            UpperSemicircle(0.0, r_inner, -1),
            LineSegment(r_inner, b - eps),
            UpperSemicircle(b, eps, -1),
            LineSegment(b + eps, r_outer),
        ),
        closed=True,
    )


# -------------------------------------------------------- zeros, functions


PLACEMENTS = ("interior", "boundary-diameter")


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    multiplicity: int = 1
    placement: str | None = None

    def __post_init__(self):
        loc = as_point(self.location)
        object.__setattr__(self, "location", loc)
        if int(self.multiplicity) != self.multiplicity or self.multiplicity < 1:
            raise ValueError("multiplicity must be a positive integer")
        placement = self.placement
        if placement is None:
            placement = "boundary-diameter" if abs(loc.imag) <= BOUNDARY_TOL else "interior"
            object.__setattr__(self, "placement", placement)
        if placement not in PLACEMENTS:
            raise ValueError(f"unknown placement {placement!r}")
        if placement == "interior" and not loc.imag > BOUNDARY_TOL:
            raise ValueError("interior zeros need Im(location) > 0")
        if placement == "boundary-diameter" and abs(loc.imag) > BOUNDARY_TOL:
            raise ValueError("boundary zeros must lie on the real axis")

    @property
    def radius(self) -> float:
        return abs(self.location)


def central_difference(f: ComplexFn, z):
    z = np.asarray(z, dtype=complex)
    h = np.maximum(1e-7, 1e-7 * np.abs(z))
    return (f(z + h) - f(z - h)) / (2 * h)


@dataclass(frozen=True)
class FunctionHandle:
    """A vectorised holomorphic function with optional analytic extras.

    ``log_derivative`` (f'/f) and ``log_abs`` (ln|f|) are optional but let the
    index and vanishing-order routines avoid cancellation and underflow.
    Without any derivative, :meth:`derivative_at` falls back to a central
    difference with step max(1e-7, 1e-7|z|); this loses roughly half the
    significant digits and is unreliable next to zeros.
    """

    evaluator: ComplexFn
    derivative: ComplexFn | None = None
    zeros: tuple = ()
    domain: Region = field(default_factory=Region.upper_half_disc)
    log_derivative: ComplexFn | None = None
    log_abs: Callable[[np.ndarray], np.ndarray] | None = None
    name: str = ""

    def __call__(self, z):
        return self.evaluator(np.asarray(z, dtype=complex))

    @property
    def has_analytic_derivative(self) -> bool:
        return self.derivative is not None or self.log_derivative is not None

    def derivative_at(self, z):
        z = np.asarray(z, dtype=complex)
        if self.derivative is not None:
            return self.derivative(z)
        if self.log_derivative is not None:
            return self.evaluator(z) * self.log_derivative(z)
        return central_difference(self.evaluator, z)

    def logderiv_at(self, z, allow_fd: bool = False):
        z = np.asarray(z, dtype=complex)
        if self.log_derivative is not None:
            return self.log_derivative(z)
        if self.derivative is not None:
            return self.derivative(z) / self.evaluator(z)
        if not allow_fd:
            raise ValueError("no analytic derivative and finite differences not allowed")
        return central_difference(self.evaluator, z) / self.evaluator(z)

    def log_modulus(self, z):
        z = np.asarray(z, dtype=complex)
        if self.log_abs is not None:
            return np.asarray(self.log_abs(z), dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self.evaluator(z)))

    def check_declared_zeros(self, rel: float = 1e-9) -> None:
        """Raise ValueError unless |f| is negligible at every declared zero.

        The local scale is the largest |f| on a small circle around the zero.
        """
        theta = np.linspace(0, 2 * np.pi, 16, endpoint=False)
        for rec in self.zeros:
            rho = 1e-3 * max(1.0, abs(rec.location))
            scale = float(np.max(np.abs(self(rec.location + rho * np.exp(1j * theta)))))
            val = abs(complex(self(np.array([rec.location]))[0]))
            if not val < rel * scale:
                raise ValueError(f"declared zero {rec.location} has |f| = {val:.3g}")


def wrap(fn: Callable, name: str = "", **kwargs) -> FunctionHandle:
    """Build a handle from a plain callable (vectorised via numpy)."""
    return FunctionHandle(evaluator=lambda z: np.asarray(fn(z), dtype=complex), name=name, **kwargs)
