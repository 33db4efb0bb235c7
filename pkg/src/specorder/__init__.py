"""Spectral order, q-observable functions and daseinisation for Hermitian matrices."""

__version__ = "0.1.0"

from .errors import (
    DimMismatch,
    InputError,
    InternalInvariantViolation,
    InvalidContext,
    InvalidFamily,
    InvalidProjection,
    NoAdjoint,
    NoConvergence,
    NonFiniteValue,
    NotAbstractQObservable,
    NotComplete,
    NotFound,
    NotHermitian,
    NotInContext,
    NotMonotone,
    NotPSD,
    NumericError,
    SpecOrderError,
    TooManyAtoms,
)
from .linalg import DEFAULT_TOL, HermitianOperator, Projection, Tolerance, eigh, is_psd, kernel_projection
from .projlat import AbelianContext, complement, das_inner_proj, das_outer_proj, join, meet, proj_leq
from .spectral import Continuity, SpectralFamily, evaluate, family_from_operator, operator_from_family, validate_family
from .qobs import QAntonymous, QObservable, a_eval, family_from_o, image_on_nonzero, o_eval, order_compare_via_o, z_eval
from .order import OrderVerdict, power_order_check, spectral_join, spectral_leq, spectral_meet, vector_lattice_counterexample
from .daseinise import DaseinisedPair, das_inner, das_outer, daseinise, domain_extension_check, restriction_check_inner, restriction_check_outer
from .calculus import MonotoneExtFunction, apply_ext, apply_to_operator, check_family_shift, check_ofA_eq_foA, right_adjoint_fn
