"""Exact Weil algebras, jet evaluation, microlinearity certificates and an orbifold lab."""

from .certificates import Certificate
from .errors import *  # noqa: F401,F403
from .finite import Association, compose, disjoint_sum, product_association, union_check
from .jet import (
    SmoothProgram,
    TangentVector,
    ZeroLocus,
    default_registry,
    derivative,
    lift_eval,
    mixed_partial,
    pushforward,
    scale_tangent,
    tangent_combine,
    tangent_space,
    taylor,
)
from .microlinear import (
    InfSquare,
    LiftProblem,
    axis_square,
    is_r_pushout,
    lift_against_square,
    microlinearity_battery,
    named_square,
)
from .orbifold import (
    Crystallographic,
    FiniteActionScene,
    GaussianRational,
    IntMatrix2,
    LatticeBasis,
    basis_change,
    cycle_check,
    fiber_action,
    lattice_equal,
    mobius,
    stabilizer_and_transporter,
    torus_fixed_points,
)
from .points import SpecPoint, kl_evaluate, validate_point
from .presentation import AugPresentation, parse_presentation, standardize
from .weil import (
    AlgebraMorphism,
    WeilAlgebra,
    WeilElement,
    algebra,
    dual_numbers,
    first_order_patch,
    invert,
    normalize,
    tensor,
    truncated,
    validate_morphism,
)

__version__ = "0.1.0"
