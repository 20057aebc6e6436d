from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from argus.cusp import (
    CuspProfile,
    FHolderModulus,
    envelope_exponent,
    fholder_check,
    kaiser_lehner_form,
    monomial_envelope_exponent,
    reciprocal_series,
    warschawski_envelope,
)
from argus.errors import AlphaNonpositive, LeadingCoefficientZero
from argus.geometry import FunctionHandle, wrap


def test_parabolic_cusp_closed_form():
    p = CuspProfile.monomial(1.0, 2, 0.5)
    assert warschawski_envelope(p, 0.1) == pytest.approx(3.2354524054389545e-66, rel=1e-10)
    assert warschawski_envelope(p, 0.1) == pytest.approx(math.exp(-48 * math.pi), rel=1e-10)
    assert warschawski_envelope(p, 0.5) == 1.0


def test_cubic_cusp_closed_form():
    p = CuspProfile.monomial(1.0, 3, 0.5)
    closed = math.exp(-math.pi * (1 / (3 * 0.25**3) - 1 / (3 * 0.5**3)))
    assert warschawski_envelope(p, 0.25) == pytest.approx(closed, rel=1e-10)
    assert closed == pytest.approx(3.40127e-26, rel=1e-5)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.2, 3.0), st.integers(2, 5), st.floats(0.1, 0.9), st.floats(0.05, 1.0))
def test_monomial_envelope_matches_closed_form(coef, power, a, frac):
    t = a * frac
    q = envelope_exponent(CuspProfile.monomial(coef, power, a), t)
    exact = float(monomial_envelope_exponent(coef, power, t, a))
    # one ulp of a huge exponent already exceeds 1e-8 relative error in F
    assert abs(math.expm1(q - exact)) < 1e-8 + 1e-14 * abs(exact)


def test_envelope_increases_with_t():
    p = CuspProfile((1.0, 0.5, 0.25), 3, 0.4)
    q = [envelope_exponent(p, t) for t in np.linspace(0.05, 0.4, 12)]
    assert all(b > a for a, b in zip(q, q[1:]))


def test_profile_validation():
    with pytest.raises(LeadingCoefficientZero):
        CuspProfile((0.0, 1.0), 2)
    with pytest.raises(AlphaNonpositive):
        CuspProfile((1.0, -10.0), 2, 0.5)
    with pytest.raises(ValueError):
        CuspProfile((1.0,), 1)
    with pytest.raises(ValueError):
        envelope_exponent(CuspProfile.monomial(1.0, 2, 0.5), 0.6)


def test_reciprocal_series():
    # 1 / (1 + x) = 1 - x + x^2 - x^3
    assert reciprocal_series([1.0, 1.0], 4) == [1.0, -1.0, 1.0, -1.0]


# series division oracle (sympy), frozen: ln F(t) = -sum c_k t^-(N-k) + power ln t + const
KL_ORACLE = [
    ((1.0,), 2, (math.pi / 2, 0.0), 0.0),
    ((2.0,), 2, (math.pi / 4, 0.0), 0.0),
    ((1.0, 0.5, 0.25), 3, (math.pi / 3, -math.pi / 4, 0.0), math.pi / 8),
]


@pytest.mark.parametrize("coeffs,n,cs,power", KL_ORACLE)
def test_kaiser_lehner_frozen(coeffs, n, cs, power):
    kl = kaiser_lehner_form(CuspProfile(coeffs, n, 0.3))
    np.testing.assert_allclose(kl.coefficients, cs, atol=1e-14)
    assert kl.power == pytest.approx(power, abs=1e-14)
    assert kl.sigma == "unknown"
    assert kl.coefficients[0] == pytest.approx(math.pi / (n * coeffs[0]))


@pytest.mark.parametrize("coeffs,n", [((1.0, 0.5, 0.25), 3), ((2.0, -0.3, 0.7, 0.1), 4), ((1.5, 1.0), 2)])
def test_kaiser_lehner_against_sympy(coeffs, n):
    sp = pytest.importorskip("sympy")
    r = sp.symbols("r", positive=True)
    alpha = sum(sp.nsimplify(c) * r ** (n + k) for k, c in enumerate(coeffs))
    # ln F(t) = pi * P(t) + const where P is an antiderivative of 1/(r alpha)
    series = sp.series(1 / (r * alpha), r, 0, 0).removeO()
    P = sp.expand(sp.integrate(sp.expand(series), r))
    kl = kaiser_lehner_form(CuspProfile(coeffs, n, 0.2))
    for k, c in enumerate(kl.coefficients):
        assert float(-sp.pi * P.coeff(r, -(n - k))) == pytest.approx(c, abs=1e-12)
    assert float(sp.pi * P.coeff(sp.log(r))) == pytest.approx(kl.power, abs=1e-12)


@pytest.mark.parametrize("coeffs,n", [((1.0,), 2), ((1.0, 0.5, 0.25), 3), ((2.0, -0.3), 2)])
def test_kaiser_lehner_tracks_envelope(coeffs, n):
    p = CuspProfile(coeffs, n, 0.3)
    kl = kaiser_lehner_form(p)
    t = np.linspace(0.05, 0.3, 11)
    diff = np.array([envelope_exponent(p, x) for x in t]) - kl.exponent(t)
    # the difference is a constant plus O(t)
    assert np.ptp(diff) < 1.0
    assert np.ptp(diff[:3]) < np.ptp(diff)


def test_fholder_lipschitz_in_every_holder_class():
    u = wrap(lambda z: z)
    rng = np.random.default_rng(3)
    z = 0.5 * rng.uniform(size=40) * np.exp(1j * math.pi * rng.uniform(size=40))
    h = 1e-3 * np.exp(1j * math.pi * rng.uniform(size=40))
    pairs = np.column_stack([z, z + h])
    bound = float(np.max(np.abs(h))) ** 0.5
    res = fholder_check(u, FHolderModulus.power(0.5), pairs, threshold=bound * (1 + 1e-12))
    assert res.ok
    np.testing.assert_allclose(res.values, np.abs(h) ** 0.5, rtol=1e-12)


def test_fholder_envelope_products_bounded():
    u = FunctionHandle(
        evaluator=lambda z: np.exp(-math.pi / (2 * np.abs(z) ** 2)) + 0j,
        log_abs=lambda z: -math.pi / (2 * np.abs(z) ** 2),
    )
    t = np.geomspace(0.01, 0.5, 30)
    with np.errstate(divide="ignore"):
        res = fholder_check(u, FHolderModulus.gaussian(), np.column_stack([np.zeros(30), t]), threshold=1.5)
    # exp(pi / (2 t^2)) * exp(-pi / (2 t^2)) = 1, including past underflow at t = 0.01
    np.testing.assert_allclose(res.values, 1.0, rtol=1e-10)
    assert res.ok


def test_fholder_sqrt_is_not_lipschitz():
    u = wrap(lambda z: np.sqrt(np.abs(z)) + 0j)
    h = np.geomspace(1e-8, 1e-1, 20)
    res = fholder_check(u, FHolderModulus.power(1.0), np.column_stack([np.zeros(20), h]), threshold=10.0)
    assert not res.ok
    assert res.sup_estimate == pytest.approx(1e4, rel=1e-8)
    assert np.all(np.diff(res.values) < 0)  # grows as the pairs shrink toward 0


def test_modulus_must_increase():
    with pytest.raises(ValueError):
        FHolderModulus(lambda s: 1 / s, "decreasing")
