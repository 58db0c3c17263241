"""caralab: numerical boundary theory of Schur-Agler functions on the bidisk."""

from .boundary import (
    BoundaryReport,
    CarapointScan,
    DerivativeEntry,
    DerivativeTable,
    JuliaRow,
    NontangentialGrid,
    NontangentialLimit,
    build_grid,
    cara_quotient,
    classify_model,
    default_direction_pairs,
    default_directions,
    derivative_fd,
    derivative_model,
    derivative_table,
    detect_carapoint,
    julia_quotient_ray,
    linearity_defect,
    nt_limit_phi,
    satisfies_aperture,
    standard_model_pair,
    standard_model_residual,
)
from .errors import (
    BadApertureError,
    CaralabError,
    DegenerateParameterError,
    InadmissibleDirectionError,
    NoConvergenceError,
    NoLimitError,
    NotHermitianError,
    NotIsometricError,
    PoleHitError,
    SingularCalculusError,
    SingularDenominatorError,
    SingularResolventError,
    SpectrumOutOfRangeError,
    UnconvergedError,
)
from .hermitian import (
    KernelProjectors,
    PositiveContraction,
    SpectralDecomposition,
    apply_calculus,
    hermitian_defect,
    kernel_projectors,
    matrix_from_json,
    matrix_to_json,
    opnorm,
    random_positive_contraction,
    spectral_decompose,
    validate_positive_contraction,
)
from .pencil import (
    ContractivityScan,
    OperatorPencil,
    contractivity_scan,
    i_y_derivative_at_tau,
    i_y_difference_at_tau,
    i_y_eval,
    i_y_spectral_form,
)
from .points import (
    BoundaryPoint,
    DiskPoint,
    direction_entry_time,
    is_admissible_direction,
)
from .realization import (
    Colligation,
    GeneralizedRealization,
    RayLimit,
    colligation_with_ray_limit,
    dump_model,
    load_model,
    random_colligation,
    validate_colligation,
)
from .scalar_family import (
    ScalarModelVector,
    model_vector_bound,
    phi_y_directional_derivative,
    phi_y_eval,
    phi_y_model_residual,
    phi_y_model_vector,
    rotation_basis,
)

__version__ = "0.1.0"
