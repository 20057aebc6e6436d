from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from argus.boundary import cone_certify
from argus.contour import closed_path_zero_count
from argus.errors import BudgetExhausted, DegenerateSpec
from argus.factory import (
    Cofactor,
    FactorySpec,
    build,
    conjugate_symmetric,
    counterexample,
    counterexample_spec,
    perturb_to_cone,
)
from argus.geometry import Region, ZeroRecord, circle


def test_real_pair_expands_to_quadratic():
    f = build(FactorySpec((ZeroRecord(0.5), ZeroRecord(-0.5))))
    z = np.array([0.1 + 0.2j, -0.7 + 0.4j, 0.9j])
    np.testing.assert_allclose(f(z), z * z - 0.25, rtol=1e-15)


def test_declared_double_zero_with_exp_cofactor():
    loc = 0.3j * np.exp(0.2j)
    f = build(FactorySpec((ZeroRecord(loc, 2),), Cofactor(exp_poly=(0, 1))))
    assert abs(f(loc)) < 1e-12
    f.check_declared_zeros()
    assert closed_path_zero_count(f, circle(0.05, center=loc)) == pytest.approx(2, abs=1e-9)


def test_empty_plan_with_envelope_is_the_counterexample():
    f = counterexample()
    z = np.array([0.3 + 0.1j, -0.2 + 0.5j, 0.01j])
    np.testing.assert_allclose(f(z), np.exp(-np.exp(1j * math.pi / 4) / np.sqrt(z)), rtol=1e-14)
    assert counterexample_spec().cofactor.kind == "counterexample-envelope"
    assert f.zeros == ()


def test_mirror_adds_conjugate_partners():
    spec = conjugate_symmetric((ZeroRecord(0.5), ZeroRecord(0.3j, 2)), Cofactor(exp_poly=(0, 1)))
    assert sorted(spec.roots().tolist(), key=lambda c: (c.real, c.imag)) == [-0.3j, -0.3j, 0.3j, 0.3j, 0.5]
    f = build(spec)
    x = np.linspace(-0.9, 0.9, 11).astype(complex)
    assert np.max(np.abs(f(x).imag)) < 1e-15
    with pytest.raises(ValueError):
        conjugate_symmetric((ZeroRecord(0.5),), Cofactor(exp_poly=(1j,)))


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.1, 3.0))
def test_analytic_derivative_matches_central_difference(r, theta):
    spec = FactorySpec(
        (ZeroRecord(0.4), ZeroRecord(-0.6, 2), ZeroRecord(0.3 + 0.5j), ZeroRecord(0.2j, 3)),
        Cofactor(constant=2 - 1j, exp_poly=(0.1, 1j, 0.5)),
    )
    f = build(spec)
    z = r * np.exp(1j * theta)
    if np.min(np.abs(spec.roots() - z)) < 0.05:
        return
    h = 1e-6
    fd = (f(z + h) - f(z - h)) / (2 * h)
    assert abs(f.derivative_at(z) - fd) <= 1e-6 * abs(fd)
    assert abs(f.logderiv_at(z) - fd / f(z)) <= 1e-6 * abs(fd / f(z))
    assert f.log_modulus(z) == pytest.approx(math.log(abs(f(z))), abs=1e-12)


def test_ledger_is_exact_on_small_circles():
    zeros = (ZeroRecord(0.5), ZeroRecord(-0.5, 2), ZeroRecord(0.3 + 0.4j, 3), ZeroRecord(0.2j))
    f = build(FactorySpec(zeros, Cofactor(exp_poly=(0, 1j, 0.3))))
    for rec in zeros:
        count = closed_path_zero_count(f, circle(0.02, center=rec.location))
        assert count == pytest.approx(rec.multiplicity, abs=1e-9)


def test_duplicate_locations_rejected():
    with pytest.raises(DegenerateSpec):
        build(FactorySpec((ZeroRecord(0.5), ZeroRecord(0.5, 2))))


def test_json_round_trip():
    spec = FactorySpec(
        (ZeroRecord(0.5), ZeroRecord(0.3j, 2)),
        Cofactor(constant=1j, exp_poly=(0.5, 1j)),
        target_region=Region.half_plane(1 + 1j),
        mirror=False,
        name="round-trip",
    )
    back = FactorySpec.from_json(spec.to_json())
    assert back == spec
    assert FactorySpec.from_json(counterexample_spec().to_json()) == counterexample_spec()


def test_perturb_real_polynomial_needs_no_change():
    spec = conjugate_symmetric((ZeroRecord(0.5), ZeroRecord(-0.2), ZeroRecord(0.4j)))
    out = perturb_to_cone(spec, (-0.9, 0.9), Region.cone_infinity())
    assert out.cofactor == spec.cofactor
    assert out.target_region == Region.cone_infinity()


def test_perturb_single_interior_zero_is_recorded():
    spec = FactorySpec((ZeroRecord(0.3j),))
    out = perturb_to_cone(spec, (-0.9, 0.9), Region.cone(1.0))
    assert cone_certify(build(out), (-0.9, 0.9), Region.cone(1.0)).ok
    # the search outcome for this plan: a quarter-turn rotation with slope -1
    assert out.cofactor.exp_poly == pytest.approx((0.5j * math.pi, -1j))


def test_perturb_cannot_unwind_the_spiral():
    with pytest.raises(BudgetExhausted):
        perturb_to_cone(counterexample_spec(), (0.01, 0.9), Region.cone_infinity())


def test_perturb_budget():
    with pytest.raises(BudgetExhausted):
        perturb_to_cone(FactorySpec((ZeroRecord(0.3j),)), (-0.9, 0.9), Region.cone(1.0), budget=1)
    with pytest.raises(ValueError):
        perturb_to_cone(FactorySpec(), (-0.9, 0.9), Region.upper_half_disc())
