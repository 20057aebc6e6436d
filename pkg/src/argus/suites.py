"""Fixture suites with exact zero ledgers, shared by the CLI and the tests."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .factory import Cofactor, FactorySpec, build, conjugate_symmetric, counterexample
from .geometry import FunctionHandle, ZeroRecord, wrap


@dataclass(frozen=True)
class Fixture:
    name: str
    spec: FactorySpec
    radii: tuple  # zero radii whose jump is checked
    category: str
    real_boundary: bool = False

    def handle(self) -> FunctionHandle:
        return build(self.spec)


def _z(loc, mult=1):
    return ZeroRecord(complex(loc), mult)


def jump_suite() -> list:
    """Twelve functions covering every zero configuration the jump law knows."""
    e = np.exp
    pi = math.pi
    out = [
        Fixture("interior-simple-rotated", FactorySpec((_z(0.5 * e(1j * pi / 3)),), Cofactor(exp_poly=(0, 1))),
                (0.5,), "interior simple"),
        Fixture("interior-simple-axis", FactorySpec((_z(0.4j),), Cofactor(constant=2.0)), (0.4,), "interior simple"),
        Fixture("interior-double", FactorySpec((_z(0.35 * e(1j * pi / 4), 2),), Cofactor(exp_poly=(0, 0.5j))),
                (0.35,), "interior simple"),
        Fixture("boundary-pair", FactorySpec((_z(0.5), _z(-0.5))), (0.5,), "boundary simple x2", True),
        Fixture("boundary-pair-gauss", FactorySpec((_z(0.6), _z(-0.6)), Cofactor(exp_poly=(0, 0, 0.5))),
                (0.6,), "boundary simple x2", True),
        Fixture("boundary-double", FactorySpec((_z(0.5, 2),)), (0.5,), "boundary double", True),
        Fixture("boundary-double-left", FactorySpec((_z(-0.45, 2),), Cofactor(exp_poly=(0, 1))),
                (0.45,), "boundary double", True),
        Fixture("boundary-triple-twisted", FactorySpec((_z(0.55, 3),), Cofactor(exp_poly=(0, 1j))),
                (0.55,), "boundary double"),
        Fixture("mixed-same-radius", FactorySpec((_z(0.5), _z(0.5j))), (0.5,), "mixed radius"),
        Fixture("mixed-two-radii", FactorySpec((_z(0.7), _z(0.3j)), Cofactor(exp_poly=(0, 0.3))),
                (0.7, 0.3), "mixed radius"),
        Fixture("mirror-symmetric",
                conjugate_symmetric((_z(0.5), _z(-0.5), _z(0.5 * e(2j * pi / 3))), Cofactor(exp_poly=(0, 1))),
                (0.5,), "mixed radius", True),
        Fixture("three-radius", three_radius_spec(), (0.5, 0.3, 0.2), "mixed radius", True),
    ]
    return out


def three_radius_spec() -> FactorySpec:
    """(z^2 - 0.25)(z^2 - 0.04)(z - 0.3i)(z + 0.3i): zeros on radii 0.5, 0.3, 0.2."""
    return conjugate_symmetric((_z(0.5), _z(-0.5), _z(0.3j), _z(0.2), _z(-0.2)), name="three-radius")


def three_radius_twisted_spec() -> FactorySpec:
    """Same zeros without the mirror and with an e^{iz} cofactor, so s(n) != 0."""
    return FactorySpec((_z(0.5), _z(-0.5), _z(0.3j), _z(0.2), _z(-0.2)), Cofactor(exp_poly=(0, 1j)),
                       name="three-radius-twisted")


def broken_ledger_fixture() -> Fixture:
    """Negative control: one boundary zero at 0.5 but the ledger claims a double zero."""
    return Fixture("broken-ledger", FactorySpec((_z(0.5, 2),)), (0.5,), "negative control")


def broken_ledger_handle() -> FunctionHandle:
    """Evaluates (z - 0.5) while declaring a zero of multiplicity 2 at 0.5."""
    spec = broken_ledger_fixture().spec
    real = build(FactorySpec((_z(0.5),)))
    return FunctionHandle(
        evaluator=real.evaluator,
        derivative=real.derivative,
        zeros=spec.zeros,
        log_derivative=real.log_derivative,
        log_abs=real.log_abs,
        name="broken-ledger",
    )


def zero_free_fixtures() -> list:
    """Five functions without zeros in the closed unit half-disc."""
    return [
        ("exp", build(FactorySpec(cofactor=Cofactor(exp_poly=(0, 1))))),
        ("exp-quadratic", build(FactorySpec(cofactor=Cofactor(exp_poly=(0.1, 1j, 1))))),
        ("exp-cubic-rotated", build(FactorySpec(cofactor=Cofactor(constant=1j, exp_poly=(0, 0, 0, 2j))))),
        ("shifted-linear", wrap(lambda z: 2 + z, "shifted-linear", derivative=lambda z: np.ones_like(z))),
        ("counterexample", counterexample()),
    ]
