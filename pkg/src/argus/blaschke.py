"""Blaschke factors and products, the Cayley transform, and the cusp example
sequence a_{m,n} = 1 / (m^3 - i n^3) with its convergence certificate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundViolated, OriginInput, PoleAtZ, PoleInput, TailNotCertified
from .factory import envelope

DEFAULT_RHO = 0.95
_TINY = 1e-300


# ----------------------------------------------------------------- factors


def blaschke_factor(a, z):
    """B_a(z) = (z - a) / (1 - conj(a) z)."""
    a = complex(a)
    if not abs(a) < 1:
        raise ValueError("Blaschke zero must lie in the open unit disc")
    z = np.asarray(z, dtype=complex)
    den = 1 - a.conjugate() * z
    if np.any(np.abs(den) < _TINY):
        raise PoleAtZ(f"z hits the pole 1/conj({a})")
    out = (z - a) / den
    return complex(out) if out.ndim == 0 else out


def normalized_factor(a: complex, z: np.ndarray) -> np.ndarray:
    """(-conj(a)/|a|) B_a(z), which is |a| at z = 0; the factor for a = 0 is z."""
    if a == 0:
        return z
    return (-a.conjugate() / abs(a)) * (z - a) / (1 - a.conjugate() * z)


def cayley(z, direction: str = "to-disc"):
    """psi(z) = (z - i) / (z + i) and its inverse w -> i (1 + w) / (1 - w)."""
    z = np.asarray(z, dtype=complex)
    if direction == "to-disc":
        den = z + 1j
        if np.any(np.abs(den) < _TINY):
            raise PoleInput("cayley to-disc is undefined at -i")
        out = (z - 1j) / den
    elif direction == "to-half-plane":
        den = 1 - z
        if np.any(np.abs(den) < _TINY):
            raise PoleInput("cayley to-half-plane is undefined at 1")
        out = 1j * (1 + z) / den
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return complex(out) if out.ndim == 0 else out


# -------------------------------------------------------- tail integrals


def _tail_integral(x: float) -> float:
    """G(x) = int_x^inf du / (1 + u^6), an upper bound at rounding level.

    Below 2 it is pi/3 minus the elementary antiderivative, padded by a
    rounding allowance for the cancellation near x = 2; from 2 on the
    alternating series sum (-1)^k x^-(6k+5) / (6k+5) is cut after a positive
    term, which keeps it an upper bound.
    """
    if x < 0:
        raise ValueError("x must be nonnegative")
    if x < 2:
        s3 = math.sqrt(3.0)
        h = (
            -s3 / 12 * math.log(x * x - s3 * x + 1)
            + s3 / 12 * math.log(x * x + s3 * x + 1)
            + math.atan(x) / 3
            + math.atan(2 * x - s3) / 6
            + math.atan(2 * x + s3) / 6
        )
        return math.pi / 3 - h + 1e-15
    return math.fsum((-1) ** k * x ** -(6 * k + 5) / (6 * k + 5) for k in range(11))


# ------------------------------------------------- cusp example sequence


@dataclass(frozen=True)
class Certificate:
    window: tuple  # (M, N)
    partial_sum: float
    tail_bound: float
    pointwise_bound_checked: bool
    elements: int
    min_margin: float  # min over the window of 4/(n^3+1) - (1 - |alpha|^2)

    @property
    def total(self) -> float:
        return self.partial_sum + self.tail_bound

    def to_dict(self) -> dict:
        return {
            "window": {"M": self.window[0], "N": self.window[1]},
            "partial_sum": self.partial_sum,
            "tail_bound": self.tail_bound,
            "pointwise_bound_checked": self.pointwise_bound_checked,
            "elements": self.elements,
            "min_margin": self.min_margin,
        }


class CuspExampleSequence:
    """a_{m,n} = 1 / (m^3 - i n^3) for m in Z, n >= 1, and alpha = psi(a)."""

    @staticmethod
    def indices(M: int, N: int):
        """Window |m| <= M, 1 <= n <= N ordered by n, then |m|, then sign (+ first)."""
        if M < 0 or N < 1:
            raise ValueError("need M >= 0 and N >= 1")
        mags = np.arange(M + 1)
        row = np.concatenate([[0], np.ravel(np.column_stack([mags[1:], -mags[1:]]))]).astype(np.int64)
        m = np.tile(row, N)
        n = np.repeat(np.arange(1, N + 1, dtype=np.int64), row.size)
        return m, n

    @staticmethod
    def a(m, n):
        m = np.asarray(m, dtype=float)
        n = np.asarray(n, dtype=float)
        return 1.0 / (m**3 - 1j * n**3)

    @staticmethod
    def alpha(m, n):
        """Closed form (1 - n^3 - i m^3) / (1 + n^3 + i m^3)."""
        m3 = np.asarray(m, dtype=float) ** 3
        n3 = np.asarray(n, dtype=float) ** 3
        return (1 - m3**2 - n3**2 - 2j * m3) / ((1 + n3) ** 2 + m3**2)

    @staticmethod
    def alpha_via_cayley(m, n):
        return cayley(CuspExampleSequence.a(m, n), "to-disc")

    @staticmethod
    def one_minus_abs2(m, n):
        """1 - |alpha|^2 = 4 n^3 / ((1 + n^3)^2 + m^6), free of cancellation."""
        m3 = np.asarray(m, dtype=float) ** 3
        n3 = np.asarray(n, dtype=float) ** 3
        return 4 * n3 / ((1 + n3) ** 2 + m3**2)

    @staticmethod
    def one_minus_abs(m, n):
        q = CuspExampleSequence.one_minus_abs2(m, n)
        return q / (1 + np.sqrt(1 - q))

    @staticmethod
    def tail_bound(M: int, N: int) -> float:
        """Certified bound on the sum of 1 - |alpha| outside the window.

        Uses 1 - |alpha| <= 1 - |alpha|^2 = 4 n^3 / (A^2 + m^6), A = 1 + n^3.
        Rows n > N: sum_m 1/(A^2 + m^6) <= 1/A^2 + (2 pi / 3) A^(-5/3), then
        4/n^3 and 1/n^2 are summed by integral comparison, giving
        2/N^2 + 8 pi / (3N). Rows n <= N with |m| > M: integral comparison
        gives 8 n^3 A^(-5/3) G(M / A^(1/3)).
        """
        rows = 2.0 / N**2 + 8 * math.pi / (3 * N)
        cols = []
        for n in range(1, N + 1):
            A = 1.0 + float(n) ** 3
            cols.append(8 * float(n) ** 3 * A ** (-5 / 3) * _tail_integral(M / A ** (1 / 3)))
        return rows + math.fsum(cols)

    @classmethod
    def certificate(cls, M: int, N: int) -> Certificate:
        """Partial sum over the window, tail bound, and the pointwise check."""
        m, n = cls.indices(M, N)
        q = cls.one_minus_abs2(m, n)
        bound = 4.0 / (n.astype(float) ** 3 + 1)
        margin = bound - q
        alpha = cls.alpha_via_cayley(m, n)
        q_direct = 1 - np.abs(alpha) ** 2
        bad = (margin <= 0) | (q_direct >= bound)
        if bad.any():
            i = int(np.argmax(bad))
            raise BoundViolated(f"1 - |alpha|^2 >= 4/(n^3+1) at (m, n) = ({m[i]}, {n[i]})")
        partial = math.fsum(cls.one_minus_abs(m, n))
        return Certificate((M, N), partial, cls.tail_bound(M, N), True, int(m.size), float(margin.min()))


# ---------------------------------------------------------------- product


@dataclass(frozen=True)
class BlaschkeSpec:
    """Finite list of zeros plus a certified bound on the omitted sum of 1 - |a|."""

    zeros: tuple
    omitted_sum: float = 0.0
    rho: float = DEFAULT_RHO
    label: str = ""

    def __post_init__(self):
        zs = tuple(complex(z) for z in self.zeros)
        if any(not abs(z) < 1 for z in zs):
            raise ValueError("every zero must lie in the open unit disc")
        object.__setattr__(self, "zeros", zs)
        if not 0 < self.rho < 1:
            raise ValueError("rho must lie in (0, 1)")

    @classmethod
    def finite(cls, zeros, rho: float = DEFAULT_RHO) -> BlaschkeSpec:
        return cls(tuple(zeros), 0.0, rho, "finite")

    @classmethod
    def by_count(cls, zeros, K: int, omitted_sum: float, rho: float = DEFAULT_RHO) -> BlaschkeSpec:
        """First K zeros of an iterable; ``omitted_sum`` bounds the rest."""
        it = iter(zeros)
        return cls(tuple(next(it) for _ in range(K)), omitted_sum, rho, f"by-count({K})")

    @classmethod
    def cusp_window(cls, M: int, N: int, rho: float = DEFAULT_RHO) -> BlaschkeSpec:
        m, n = CuspExampleSequence.indices(M, N)
        zeros = tuple(CuspExampleSequence.alpha(m, n))
        return cls(zeros, CuspExampleSequence.tail_bound(M, N), rho, f"cusp-window({M},{N})")

    @classmethod
    def cusp_by_tail(cls, eps: float, rho: float = DEFAULT_RHO, max_side: int = 4096) -> BlaschkeSpec:
        """Smallest square window (doubling) whose truncation bound is below eps."""
        side = 8
        while side <= max_side:
            if truncation_bound(CuspExampleSequence.tail_bound(side, side), rho) <= eps:
                return cls.cusp_window(side, side, rho)
            side *= 2
        raise TailNotCertified(f"no window up to {max_side} certifies eps={eps:g} at rho={rho}")

    @property
    def truncation_bound(self) -> float:
        return truncation_bound(self.omitted_sum, self.rho)


def truncation_bound(omitted_sum: float, rho: float) -> float:
    """exp(2 S / (1 - rho)) - 1 bounds |full - partial| on |z| <= rho.

    Each omitted normalised factor differs from 1 by at most
    2 (1 - |a|) / (1 - rho) on |z| <= rho, and |prod(1 + u) - 1| <= exp(sum|u|) - 1.
    """
    return math.expm1(2 * omitted_sum / (1 - rho))


def blaschke_product(spec: BlaschkeSpec, z, eps: float | None = None):
    """Partial product over the spec's zeros, in their listed order.

    Returns (value, truncation bound). Points must satisfy |z| <= rho.
    Raises TailNotCertified when ``eps`` is given and the bound exceeds it.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) > spec.rho * (1 + 1e-15)):
        raise ValueError(f"|z| exceeds the compact-subset radius rho={spec.rho}")
    bound = spec.truncation_bound
    if eps is not None and bound > eps:
        raise TailNotCertified(f"truncation bound {bound:.3g} exceeds eps={eps:g}")
    value = _partial_product(spec.zeros, z)
    return (complex(value) if value.ndim == 0 else value), bound


def _partial_product(zeros, z: np.ndarray) -> np.ndarray:
    out = np.ones_like(z)
    for a in zeros:
        out = out * normalized_factor(a, z)
    return out


# ------------------------------------------------- assembled function


def assembled_counterexample(z, eps: float | None = None, M: int = 20, N: int = 20):
    """exp(-e^{i pi/4} / sqrt z) * F(z) with F the cusp-window Blaschke product at psi(z).

    On the real axis psi(z) lies on the unit circle, where every partial
    product is unimodular; the truncation bound only applies inside, so
    ``eps`` is enforced (TailNotCertified) only for |psi(z)| < 1.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(z == 0):
        raise OriginInput("the assembled function is not evaluated at 0")
    if np.any(z.imag < 0):
        raise ValueError("z must lie in the closed upper half-plane")
    w = cayley(z, "to-disc")
    w = np.asarray(w)
    m, n = CuspExampleSequence.indices(M, N)
    zeros = CuspExampleSequence.alpha(m, n)
    if eps is not None:
        interior = np.abs(w) < 1 - 1e-12
        if interior.any():
            rho = float(np.abs(w[interior]).max())
            bound = truncation_bound(CuspExampleSequence.tail_bound(M, N), max(rho, 1e-3))
            if bound > eps:
                raise TailNotCertified(f"window ({M},{N}) bound {bound:.3g} exceeds eps={eps:g}")
    out = envelope(z) * _partial_product(zeros, w)
    return complex(out) if out.ndim == 0 else out
