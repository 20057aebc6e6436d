from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from argus.boundary import (
    approach_points,
    cone_certify,
    infinitesimal_wrt,
    radial_approach,
    vanishing_order,
)
from argus.errors import GVanishes, UnderflowDominated
from argus.factory import counterexample
from argus.geometry import FunctionHandle, PathSpec, Region, UpperSemicircle, wrap


def _flat(C: float) -> FunctionHandle:
    return FunctionHandle(
        evaluator=lambda z: np.exp(-C / np.abs(z) ** 2) + 0j,
        log_abs=lambda z: -C / np.abs(z) ** 2,
    )


@pytest.mark.parametrize("k", [1, 2, 3, 5, 8])
def test_monomial_orders(k):
    assert vanishing_order(wrap(lambda z: z**k), 0.0).label == f"order-{k}"
    assert vanishing_order(wrap(lambda z: z**k), 0.0, base=3.0, k_max=30).label == f"order-{k}"


def test_nonvanishing_and_shifted_point():
    assert vanishing_order(wrap(lambda z: 1 + z), 0.0).label == "nonvanishing"
    rep = vanishing_order(wrap(lambda z: (z - 0.3) ** 2 * np.exp(z)), 0.3, radial_approach(0.3, 1j))
    assert rep.label == "order-2"
    assert rep.to_dict()["classification"] == "order-2"


def test_counterexample_is_infinitely_flat():
    for n_max in (5, 20, 40):
        assert vanishing_order(counterexample(), 0.0, n_max=n_max).label == f"infinite-order-up-to({n_max})"


def test_curved_approach():
    arc = PathSpec((UpperSemicircle(0.5, 0.5, 1),))  # from 1 over the top down to 0
    pts = approach_points(arc, 0.0, np.array([0.1, 0.01]))
    np.testing.assert_allclose(np.abs(pts), [0.1, 0.01], rtol=1e-12)
    assert np.all(pts.imag > 0)
    assert vanishing_order(wrap(lambda z: z**3), 0.0, arc).label == "order-3"


def test_underflow_without_log_modulus():
    f = wrap(lambda z: np.exp(-1e4 / np.abs(z)) + 0j)
    with pytest.raises(UnderflowDominated):
        vanishing_order(f, 0.0)


def test_slow_vanishing_does_not_stabilise():
    # |f| = 1 / ln(1/|z|): slope tends to 0 only logarithmically
    f = wrap(lambda z: 1 / np.log(1 / np.abs(z)) + 0j)
    with pytest.raises(UnderflowDominated):
        vanishing_order(f, 0.0, k_max=12)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.floats(0.2, 5.0), st.floats(-3, 3))
def test_order_separates_smaller_and_larger_powers(k, c, phase):
    f = wrap(lambda z: c * np.exp(1j * phase) * z**k * (1 + z))
    rep = vanishing_order(f, 0.0)
    assert rep.label == f"order-{k}"
    s = np.array([s for s, _ in rep.trace])
    x = approach_points(radial_approach(0.0), 0.0, s)
    absf = np.abs(f(x))
    # ratios |f| / s^N along the trace: decreasing for N < k, increasing for N > k
    assert np.all(np.diff(absf / s ** (k - 1)) < 0)
    assert np.all(np.diff(absf / s ** (k + 1)) > 0)


def test_infinitesimal_truth_table_at_first_power():
    g = _flat(math.pi / 2)
    for C, want in ((math.pi / 4, False), (math.pi / 2 + 0.1, True), (2.0, True)):
        ok, trace = infinitesimal_wrt(_flat(C), g, 0.0, n_max=1)
        assert ok == want
        assert set(trace) == {1}


def test_infinitesimal_fails_for_all_powers_up_to_forty():
    # |f| / |g|^N has exponent (N pi / 2 - C) / t^2, which diverges once N pi / 2 > C
    g = _flat(math.pi / 2)
    for C in (math.pi / 4, math.pi / 2 + 0.1, 2.0):
        ok, trace = infinitesimal_wrt(_flat(C), g, 0.0, n_max=40)
        assert not ok
        assert not trace[40]["pass"]
    ok, trace = infinitesimal_wrt(_flat(3 * math.pi), g, 0.0, n_max=40)
    assert not ok
    assert [n for n in trace if trace[n]["pass"]] == [1, 2, 3, 4, 5]


def test_function_is_not_infinitesimal_wrt_itself():
    g = _flat(math.pi / 2)
    ok, trace = infinitesimal_wrt(g, g, 0.0, n_max=2)
    assert not ok
    assert not trace[1]["pass"] and not trace[2]["pass"]


def test_vanishing_g_is_rejected():
    with pytest.raises(GVanishes):
        infinitesimal_wrt(wrap(lambda z: z), wrap(lambda z: 0 * z), 0.0, n_max=1)


def test_cone_certify_examples():
    res = cone_certify(wrap(lambda z: z**2), (-0.9, 0.9), Region.cone(1.0))
    assert res.ok and res.witness is None
    res = cone_certify(wrap(lambda z: 1j * z), (-0.9, 0.9), Region.cone_infinity())
    assert not res.ok
    assert res.witness != 0
    assert res.witness_value == pytest.approx(1j * res.witness)
    assert cone_certify(wrap(lambda z: z), (-0.5, 0.5), Region.slit_plane(), samples=101).ok
    with pytest.raises(ValueError):
        cone_certify(wrap(lambda z: z), (-2, 0), Region.slit_plane())


def test_spiralling_boundary_values_leave_the_cone():
    samples = 400
    res = cone_certify(counterexample(), (0.01, 0.9), Region.cone(1.0), samples=samples)
    assert not res.ok
    # direct argument oracle: arg f(x) = -sin(pi/4) / sqrt(x) mod 2 pi;
    # the double cone |Im| <= |Re| holds iff |arg| <= pi/4 or |arg| >= 3 pi/4
    x = np.linspace(0.01, 0.9, samples)
    arg = np.abs(np.angle(np.exp(-1j * math.sin(math.pi / 4) / np.sqrt(x))))
    outside = (arg > math.pi / 4) & (arg < 3 * math.pi / 4)
    assert res.witness == x[np.argmax(outside)]
    assert res.witness < 0.2


def test_axis_crossing_between_samples_is_caught():
    # the spiral crosses the imaginary axis between samples, so every sample lies in the open cone
    res = cone_certify(counterexample(), (0.01, 0.9), Region.cone_infinity())
    assert not res.ok
    assert abs(res.witness_value.real) == 0 and res.witness_value.imag != 0
    # oracle: first crossing of arg = -pi/2 - k pi, i.e. sin(pi/4) / sqrt(x) = pi/2 + k pi
    k = np.arange(0, 100)
    xs = (math.sin(math.pi / 4) / (math.pi / 2 + k * math.pi)) ** 2
    first = xs[(xs > 0.01) & (xs < 0.9)].min()
    assert res.witness == pytest.approx(first, rel=1e-9)


def test_curve_through_origin_is_not_a_crossing():
    # (z - 0.5) e^{0.3 i} passes through 0, which every cone admits
    f = wrap(lambda z: (z - 0.5) * np.exp(0.3j))
    assert cone_certify(f, (-0.9, 0.9), Region.cone_infinity()).ok
    assert cone_certify(f, (-0.9, 0.9), Region.cone(1.0)).ok
    assert cone_certify(wrap(lambda z: z**3 - 0.1 * z), (-0.9, 0.9), Region.slit_plane()).ok
