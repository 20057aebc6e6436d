"""Boundary asymptotics of the Riemann map at an analytic cusp.

For a cusp {0 < x < a, 0 < y < alpha(x)} the map modulus behaves like the
envelope F(t) = exp(-pi * int_t^a dr / (r alpha(r))). Profiles are power
series alpha(x) = sum_{j >= N} a_j x^j with N >= 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AlphaNonpositive, LeadingCoefficientZero, QuadratureFailed, RefinementExhausted
from .geometry import FunctionHandle
from .quadrature import integrate


@dataclass(frozen=True)
class CuspProfile:
    """alpha(x) = sum_k coeffs[k] x^(leading + k), used on (0, a]."""

    coeffs: tuple
    leading: int = 2
    a: float = 0.5
    validity_radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs or self.coeffs[0] == 0:
            raise LeadingCoefficientZero("leading coefficient a_N must be nonzero")
        if self.leading < 2:
            raise ValueError("a cusp needs leading exponent N >= 2")
        if not 0 < self.a < self.validity_radius:
            raise ValueError("need 0 < a < validity radius")
        x = np.linspace(0, self.a, 257)[1:]
        if np.any(self.alpha(x) <= 0):
            raise AlphaNonpositive("alpha is not positive on (0, a]")

    @classmethod
    def monomial(cls, coefficient: float, power: int, a: float = 0.5) -> CuspProfile:
        return cls((coefficient,), power, a)

    def alpha(self, x):
        x = np.asarray(x, dtype=float)
        return x**self.leading * np.polynomial.polynomial.polyval(x, np.array(self.coeffs))


def envelope_exponent(profile: CuspProfile, t: float, reltol: float = 1e-13) -> float:
    """-pi * int_t^a dr / (r alpha(r)), integrated in s = 1/r.

    After substitution the integrand is 1 / (s alpha(1/s)) on [1/a, 1/t],
    a polynomial s^(N-1) times a smooth factor for monomial-led profiles.
    """
    if not 0 < t <= profile.a:
        raise ValueError("need 0 < t <= a")
    if t == profile.a:
        return 0.0
    x = np.linspace(t, profile.a, 257)
    if np.any(profile.alpha(x) <= 0):
        raise AlphaNonpositive("alpha is not positive on [t, a]")

    def integrand(s):
        al = profile.alpha(1.0 / s)
        if np.any(al <= 0):
            raise AlphaNonpositive("alpha is not positive on [t, a]")
        return 1.0 / (s * al)

    try:
        res = integrate(integrand, 1.0 / profile.a, 1.0 / t, abstol=1e-300, reltol=reltol)
    except RefinementExhausted as exc:
        raise QuadratureFailed(str(exc)) from exc
    return -math.pi * res.value


def warschawski_envelope(profile: CuspProfile, t: float) -> float:
    """F(t) = exp(-pi * int_t^a dr / (r alpha(r)))."""
    return math.exp(envelope_exponent(profile, t))


def monomial_envelope_exponent(coefficient: float, power: int, t, a: float):
    """Closed form -pi (t^-N - a^-N) / (N a_N) for alpha(x) = a_N x^N."""
    t = np.asarray(t, dtype=float)
    return -math.pi * (t ** -power - a ** -power) / (power * coefficient)


@dataclass(frozen=True)
class KaiserLehnerForm:
    """ln F(t) = -sum_k c_k t^-(N-k) + power * ln t + const as t -> 0+.

    ``power`` comes from the r^-1 term of 1/(r alpha(r)); the prefactor
    exponent sigma of the map itself is not determined and stays "unknown".
    """

    leading: int
    coefficients: tuple  # c_0 .. c_{N-1}
    power: float
    sigma: str = "unknown"

    def exponent(self, t):
        t = np.asarray(t, dtype=float)
        n = self.leading
        out = -sum(c * t ** -(n - k) for k, c in enumerate(self.coefficients))
        return out + self.power * np.log(t)

    def to_dict(self) -> dict:
        return {
            "leading_power": self.leading,
            "coefficients": list(self.coefficients),
            "log_power": self.power,
            "sigma": self.sigma,
        }


def reciprocal_series(d, n_terms: int) -> list:
    """Coefficients b_k of 1 / (1 + d_1 x + d_2 x^2 + ...) up to x^(n_terms - 1)."""
    b = [1.0]
    for k in range(1, n_terms):
        b.append(-math.fsum(d[j] * b[k - j] for j in range(1, k + 1) if j < len(d)))
    return b


def kaiser_lehner_form(profile: CuspProfile) -> KaiserLehnerForm:
    """Exponent coefficients from term-by-term integration of -pi / (r alpha(r)).

    With 1/(r alpha) = r^-(N+1) / a_N * sum_k b_k r^k, the terms k < N give
    c_k = pi b_k / (a_N (N - k)), so c_0 = pi / (N a_N); the k = N term gives
    the power pi b_N / a_N of t.
    """
    a_n = profile.coeffs[0]
    if a_n == 0:
        raise LeadingCoefficientZero("leading coefficient a_N must be nonzero")
    n = profile.leading
    d = [1.0] + [c / a_n for c in profile.coeffs[1:]]
    b = reciprocal_series(d, n + 1)
    coeffs = tuple(math.pi * b[k] / (a_n * (n - k)) for k in range(n))
    return KaiserLehnerForm(n, coeffs, math.pi * b[n] / a_n)


# ------------------------------------------------------------ F-Holder


@dataclass(frozen=True)
class FHolderModulus:
    """Increasing modulus F on (0, inf); ``log_value`` avoids overflow."""

    value: Callable
    tag: str = ""
    log_value: Callable | None = None

    def __post_init__(self):
        s = np.geomspace(1e-2, 1e2, 64)
        v = self.log(s)
        if not np.all(np.diff(v) > 0):
            raise ValueError(f"modulus {self.tag!r} is not increasing on the sample grid")

    def log(self, s):
        s = np.asarray(s, dtype=float)
        if self.log_value is not None:
            return np.asarray(self.log_value(s), dtype=float)
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.value(s), dtype=float))

    @classmethod
    def power(cls, exponent: float) -> FHolderModulus:
        return cls(lambda s: s**exponent, f"s^{exponent:g}", lambda s: exponent * np.log(s))

    @classmethod
    def gaussian(cls, c: float = math.pi / 2) -> FHolderModulus:
        """F(s) = exp(c s^2)."""
        return cls(lambda s: np.exp(c * s**2), f"exp({c:g} s^2)", lambda s: c * s**2)


@dataclass(frozen=True)
class FHolderResult:
    sup_estimate: float
    ok: bool
    threshold: float
    values: np.ndarray


def fholder_check(u: FunctionHandle, modulus: FHolderModulus, pairs, threshold: float) -> FHolderResult:
    """max over pairs (z, z + h) of F(1/|h|) |u(z + h) - u(z)|, against a budget.

    Products are formed in log space. Where u(z) is exactly zero the
    difference modulus is taken from u's log-modulus at z + h, so handles
    with an analytic ln|u| stay accurate past underflow.
    """
    pairs = np.asarray(pairs, dtype=complex).reshape(-1, 2)
    z, w = pairs[:, 0], pairs[:, 1]
    h = np.abs(w - z)
    if np.any(h == 0):
        raise ValueError("pairs need distinct points")
    uz, uw = u(z), u(w)
    with np.errstate(divide="ignore"):
        logd = np.log(np.abs(uw - uz))
    at_zero = uz == 0
    if at_zero.any():
        logd[at_zero] = u.log_modulus(w[at_zero])
    with np.errstate(over="ignore"):
        vals = np.exp(modulus.log(1.0 / h) + logd)
    sup = float(np.max(vals))
    return FHolderResult(sup, sup < threshold, float(threshold), vals)
