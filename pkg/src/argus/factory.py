"""Holomorphic test functions with exactly known zero ledgers.

A function is built as f(z) = prod_j (z - alpha_j)^{l_j} * phi(z) where the
cofactor phi(z) = c * exp(P(z)) * [exp(-e^{i pi/4} / sqrt z)] is zero-free.
With ``mirror`` set, every interior zero alpha also gets a partner at
conj(alpha) in the lower half-plane, so the polynomial part has real
coefficients and real boundary values.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from numpy.polynomial import polynomial as P

from .boundary import cone_certify
from .errors import BudgetExhausted, DegenerateSpec
from .geometry import FunctionHandle, Region, ZeroRecord, upper_sqrt

ENVELOPE_PHASE = np.exp(1j * np.pi / 4)


def envelope(z):
    """exp(-e^{i pi/4} / sqrt z) with the upper branch of the square root."""
    return np.exp(-ENVELOPE_PHASE / upper_sqrt(z))


def envelope_log_derivative(z):
    z = np.asarray(z, dtype=complex)
    return 0.5 * ENVELOPE_PHASE / (upper_sqrt(z) * z)


def envelope_log_abs(z):
    return (-ENVELOPE_PHASE / upper_sqrt(z)).real


@dataclass(frozen=True)
class Cofactor:
    """Zero-free factor c * exp(sum_k coeffs[k] z^k) * optional envelope."""

    constant: complex = 1.0
    exp_poly: tuple = ()  # ascending coefficients of P
    envelope: bool = False

    def __post_init__(self):
        if complex(self.constant) == 0:
            raise ValueError("cofactor constant must be nonzero")
        object.__setattr__(self, "exp_poly", tuple(complex(c) for c in self.exp_poly))

    @property
    def kind(self) -> str:
        if self.envelope:
            return "counterexample-envelope"
        return "exp-poly" if self.exp_poly else "constant"

    def _poly(self, z):
        if not self.exp_poly:
            return np.zeros_like(z)
        return P.polyval(z, np.array(self.exp_poly))

    def value(self, z):
        z = np.asarray(z, dtype=complex)
        out = complex(self.constant) * np.exp(self._poly(z))
        return out * envelope(z) if self.envelope else out

    def log_derivative(self, z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        if len(self.exp_poly) > 1:
            out = out + P.polyval(z, P.polyder(np.array(self.exp_poly)))
        return out + envelope_log_derivative(z) if self.envelope else out

    def log_abs(self, z):
        z = np.asarray(z, dtype=complex)
        out = math.log(abs(complex(self.constant))) + self._poly(z).real
        return out + envelope_log_abs(z) if self.envelope else out

    def to_dict(self) -> dict:
        c = complex(self.constant)
        return {
            "constant": [c.real, c.imag],
            "exp_poly": [[c.real, c.imag] for c in self.exp_poly],
            "envelope": self.envelope,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Cofactor:
        return cls(
            constant=complex(*d.get("constant", [1.0, 0.0])),
            exp_poly=tuple(complex(*c) for c in d.get("exp_poly", [])),
            envelope=bool(d.get("envelope", False)),
        )


@dataclass(frozen=True)
class FactorySpec:
    zeros: tuple = ()
    cofactor: Cofactor = field(default_factory=Cofactor)
    target_region: Region | None = None
    mirror: bool = False
    name: str = ""

    def __post_init__(self):
        recs = tuple(z if isinstance(z, ZeroRecord) else ZeroRecord(*z) for z in self.zeros)
        object.__setattr__(self, "zeros", tuple(sorted(recs, key=lambda r: -r.radius)))

    def roots(self) -> np.ndarray:
        """All roots of the polynomial part, with multiplicity (mirrors included)."""
        out = []
        for rec in self.zeros:
            out += [rec.location] * rec.multiplicity
            if self.mirror and rec.placement == "interior":
                out += [rec.location.conjugate()] * rec.multiplicity
        return np.array(out, dtype=complex)

    def to_dict(self) -> dict:
        region = None
        if self.target_region is not None:
            p = self.target_region.parameter
            if isinstance(p, complex):
                p = [p.real, p.imag]
            region = {"kind": self.target_region.kind, "parameter": p}
        return {
            "name": self.name,
            "zeros": [
                {"location": [r.location.real, r.location.imag], "multiplicity": r.multiplicity, "placement": r.placement}
                for r in self.zeros
            ],
            "cofactor": self.cofactor.to_dict(),
            "target_region": region,
            "mirror": self.mirror,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> FactorySpec:
        zeros = tuple(
            ZeroRecord(complex(*z["location"]), int(z.get("multiplicity", 1)), z.get("placement"))
            for z in d.get("zeros", [])
        )
        region = None
        if d.get("target_region"):
            p = d["target_region"].get("parameter")
            if isinstance(p, list):
                p = complex(*p)
            region = Region(d["target_region"]["kind"], p)
        return cls(
            zeros=zeros,
            cofactor=Cofactor.from_dict(d.get("cofactor", {})),
            target_region=region,
            mirror=bool(d.get("mirror", False)),
            name=d.get("name", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> FactorySpec:
        return cls.from_dict(json.loads(text))


def _check_distinct(spec: FactorySpec) -> None:
    for r1, r2 in itertools.combinations(spec.zeros, 2):
        if abs(r1.location - r2.location) <= 1e-14 * max(1.0, abs(r1.location)):
            raise DegenerateSpec(f"zero {r1.location} appears in more than one record")


def build(spec: FactorySpec) -> FunctionHandle:
    """Realise ``spec`` as a FunctionHandle with analytic f', f'/f and ln|f|."""
    _check_distinct(spec)
    roots = spec.roots()
    mult = [(complex(r), 1) for r in roots]
    cof = spec.cofactor
    poly = P.polyfromroots(roots) if roots.size else np.array([1.0 + 0j])
    dpoly = P.polyder(poly)

    def evaluator(z):
        z = np.asarray(z, dtype=complex)
        out = cof.value(z)
        for a, _ in mult:
            out = out * (z - a)
        return out

    def derivative(z):
        z = np.asarray(z, dtype=complex)
        return cof.value(z) * (P.polyval(z, dpoly) + P.polyval(z, poly) * cof.log_derivative(z))

    def log_derivative(z):
        z = np.asarray(z, dtype=complex)
        out = cof.log_derivative(z)
        for a, _ in mult:
            out = out + 1.0 / (z - a)
        return out

    def log_abs(z):
        z = np.asarray(z, dtype=complex)
        out = cof.log_abs(z)
        with np.errstate(divide="ignore"):
            for a, _ in mult:
                out = out + np.log(np.abs(z - a))
        return out

    return FunctionHandle(
        evaluator=evaluator,
        derivative=derivative,
        zeros=spec.zeros,
        log_derivative=log_derivative,
        log_abs=log_abs,
        name=spec.name or "factory",
    )


def conjugate_symmetric(zeros, cofactor: Cofactor | None = None, name: str = "") -> FactorySpec:
    """Preset with mirrored interior zeros and a real cofactor: real boundary values."""
    cofactor = cofactor or Cofactor()
    if complex(cofactor.constant).imag != 0 or any(c.imag != 0 for c in cofactor.exp_poly) or cofactor.envelope:
        raise ValueError("conjugate-symmetric preset needs a real cofactor without envelope")
    return FactorySpec(zeros=tuple(zeros), cofactor=cofactor, mirror=True, name=name)


def counterexample_spec() -> FactorySpec:
    return FactorySpec(cofactor=Cofactor(envelope=True), name="counterexample")


def counterexample() -> FunctionHandle:
    """f(z) = exp(-e^{i pi/4} / sqrt z)."""
    return build(counterexample_spec())


def perturb_to_cone(
    spec: FactorySpec,
    interval: tuple,
    region: Region,
    samples: int = 400,
    rotations: int = 24,
    slopes: tuple = (0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0),
    budget: int | None = None,
) -> FactorySpec:
    """Grid search over cofactor adjustments exp(i theta + i b z).

    A unimodular constant rotates the whole image; the i b z term adds a
    linear phase drift along the real axis. The first (b, theta) pair whose
    build passes cone_certify on ``interval`` is returned (the unmodified
    spec is tried first). Raises BudgetExhausted after ``budget`` trials.
    """
    if region.kind not in ("cone-C", "cone-infinity", "slit-plane"):
        raise ValueError("region must be a cone or the slit plane")
    trials = [(0.0, 0.0)] + [
        (b, 2 * math.pi * k / rotations) for b in slopes for k in range(rotations) if (b, k) != (0.0, 0)
    ]
    if budget is not None:
        trials = trials[:budget]
    base = spec.cofactor
    coeffs = list(base.exp_poly) or [0j]
    for b, theta in trials:
        adj = list(coeffs) + [0j] * (2 - len(coeffs)) if b else list(coeffs)
        adj[0] = adj[0] + 1j * theta
        if b:
            adj[1] = adj[1] + 1j * b
        while len(adj) > 1 and adj[-1] == 0:
            adj.pop()
        cand = replace(spec, cofactor=replace(base, exp_poly=tuple(adj) if any(adj) else ()), target_region=region)
        if cone_certify(build(cand), interval, region, samples).ok:
            return cand
    raise BudgetExhausted(f"no cofactor adjustment out of {len(trials)} trials certifies {region.kind}")
