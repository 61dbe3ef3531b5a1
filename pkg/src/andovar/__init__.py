"""Dilations, inner multipliers and distinguished-variety norm bounds for
commuting contractive matrix pairs."""

from .colligation import Colligation, build_colligation, defect_series_residuals
from .dilation import (
    TruncatedDilation,
    build_dilation,
    compression_residuals,
    intertwining_residuals,
    minimality_defect,
    mpsi_isometry_residual,
)
from .errors import (
    AndovarError,
    BoundaryPoleError,
    ChainViolationError,
    CommutationError,
    ContractionError,
    DimensionMismatchError,
    InputError,
    NotPSDError,
    NumericError,
    PurityError,
    ValidationError,
)
from .pair_analysis import (
    ContractionPair,
    DefectData,
    PairReport,
    Tolerances,
    defect,
    generate_pair,
    truncation_degree,
    validate_pair,
)
from .transfer import (
    BoundaryScan,
    CanonicalSplit,
    TransferFunction,
    adjoint_transfer,
    boundary_scan,
    canonical_split,
    check_no_unimodular_eigs,
    cnu_part,
    eval_tau,
    forward_transfer,
    schur_identity_residual,
    split_residual,
    taylor_symbols,
)
from .variety import (
    VarietySample,
    boundary_samples,
    joint_eig_membership,
    membership_residual,
    symmetry_residual,
    variety_fiber,
)
from .vn import (
    BivariatePolynomial,
    VNReport,
    eval_poly_pair,
    sup_on_bidisc,
    sup_on_variety,
    vn_report,
)

__version__ = "0.1.0"
