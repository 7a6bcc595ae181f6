"""Exact-arithmetic toolkit for twisted bilinear modules.

The package decides semistability of sigma-twisted quadratic and
alternating modules over the rationals and prime fields, produces
destabilizing one-parameter subgroups and graded degenerations, and
enumerates the dual-number matrix-group fibers and Pfaffian types that
classify the alternating case.  Everything is computed in exact
arithmetic; nothing here floats.
"""

from .errors import (
    BoundExceededError,
    FieldError,
    InternalCheckError,
    IsotropyError,
    ParseError,
    ShapeError,
    SingularMatrixError,
    StabilityError,
    TwistmodError,
    UsageError,
)
from .linalg import GF, QQ, Matrix, Subspace, field_from_name, field_name
from .sigmamod import (
    NOT_ISOTROPIC,
    SIGMA_ISOTROPIC,
    TOTALLY_ISOTROPIC,
    InvolutionSpace,
    IsoResult,
    LinearPiece,
    SigmaModule,
    act,
    direct_sum,
    hyperbolic_module,
    is_isomorphic,
    isotropic_reduction,
    isotropy_class,
    orthogonal,
    reduced_form,
    symmetrize,
    twisted_transpose,
    validate,
)
from .hilbert import (
    MINUS_INFINITY,
    OneParamSubgroup,
    adapted_forms,
    block_exponents,
    destabilizing_1ps,
    limit_at_zero,
    mu,
)
from .stability import (
    DEFAULT_ENUM_BOUND,
    DEFAULT_PRIMES,
    NO_DESTABILIZER_FOUND,
    STABLE,
    STRICTLY_SEMISTABLE,
    UNSTABLE,
    Filtration,
    GradedModule,
    Provenance,
    Verdict,
    enumerate_totally_isotropic,
    graded,
    hilbert_mumford_sweep,
    iso_filtration,
    joint_kernel,
    s_equivalent,
    semistability_verdict,
)
from .dualnum import (
    DualNumberMatrix,
    FiberReport,
    TypeVector,
    dn_det,
    dn_inverse,
    dn_mul,
    fiber_structure_check,
    is_fixed_alternating,
    is_fixed_plus,
    is_fixed_unramified,
    pfaffian,
    type_vector,
    unramified_fixed_count,
)
from .serialize import (
    ModuleFile,
    module_file_to_dict,
    module_from_dict,
    module_to_dict,
    parse_matrix_file,
    parse_module_file,
    to_json,
    verdict_to_dict,
)

__version__ = "0.1.0"

__all__ = [
    "BoundExceededError",
    "FieldError",
    "InternalCheckError",
    "IsotropyError",
    "ParseError",
    "ShapeError",
    "SingularMatrixError",
    "StabilityError",
    "TwistmodError",
    "UsageError",
    "GF",
    "QQ",
    "Matrix",
    "Subspace",
    "field_from_name",
    "field_name",
    "NOT_ISOTROPIC",
    "SIGMA_ISOTROPIC",
    "TOTALLY_ISOTROPIC",
    "InvolutionSpace",
    "IsoResult",
    "LinearPiece",
    "SigmaModule",
    "act",
    "direct_sum",
    "hyperbolic_module",
    "is_isomorphic",
    "isotropic_reduction",
    "isotropy_class",
    "orthogonal",
    "reduced_form",
    "symmetrize",
    "twisted_transpose",
    "validate",
    "MINUS_INFINITY",
    "OneParamSubgroup",
    "adapted_forms",
    "block_exponents",
    "destabilizing_1ps",
    "limit_at_zero",
    "mu",
    "DEFAULT_ENUM_BOUND",
    "DEFAULT_PRIMES",
    "NO_DESTABILIZER_FOUND",
    "STABLE",
    "STRICTLY_SEMISTABLE",
    "UNSTABLE",
    "Filtration",
    "GradedModule",
    "Provenance",
    "Verdict",
    "enumerate_totally_isotropic",
    "graded",
    "hilbert_mumford_sweep",
    "iso_filtration",
    "joint_kernel",
    "s_equivalent",
    "semistability_verdict",
    "DualNumberMatrix",
    "FiberReport",
    "TypeVector",
    "dn_det",
    "dn_inverse",
    "dn_mul",
    "fiber_structure_check",
    "is_fixed_alternating",
    "is_fixed_plus",
    "is_fixed_unramified",
    "pfaffian",
    "type_vector",
    "unramified_fixed_count",
    "ModuleFile",
    "module_file_to_dict",
    "module_from_dict",
    "module_to_dict",
    "parse_matrix_file",
    "parse_module_file",
    "to_json",
    "verdict_to_dict",
]
