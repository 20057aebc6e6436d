"""Numerical lab for boundary uniqueness of holomorphic maps.

Winding indices of image curves, the semicircle index profile and its jump
and telescoping identities, Blaschke products with certified truncation,
cusp envelopes of Riemann maps, and boundary vanishing-order analysis.
"""

from __future__ import annotations

from .blaschke import (
    BlaschkeSpec,
    CuspExampleSequence,
    assembled_counterexample,
    blaschke_factor,
    blaschke_product,
    cayley,
)
from .boundary import VanishingReport, cone_certify, infinitesimal_wrt, vanishing_order
from .contour import IndexResult, closed_path_zero_count, index_bound_check, index_of_curve, index_of_image
from .cusp import CuspProfile, FHolderModulus, fholder_check, kaiser_lehner_form, warschawski_envelope
from .factory import Cofactor, FactorySpec, build, counterexample, perturb_to_cone
from .geometry import FunctionHandle, PathSpec, Region, ZeroRecord, region_contains, semicircle, wrap
from .profile import (
    IndexProfile,
    ZeroLedger,
    j_profile,
    jump_at,
    profile,
    radial_identity_check,
    s_bound_check,
    summation_relation,
)

__version__ = "0.1.0"
