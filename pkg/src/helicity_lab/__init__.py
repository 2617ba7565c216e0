"""helicity_lab: spectral toolkit for exact divergence-free fields on the
flat 3-torus.

Sparse truncated Fourier fields with enforced reality, incompressibility
and zero mean; curl and its inverse as Fourier multipliers; the helical
eigenbasis; helicity and related functionals with paired independent
evaluation routes; exactly volume-preserving shear diffeomorphisms with
Lagrangian push-forward; transport flows with conservation logging; and
explicit constant-helicity paths between fields.
"""

from ._accel import NUMBA_ENABLED, active_lane
from .curl_ops import (
    HelicalDecomposition,
    curl,
    curl_inv,
    eigenvalue,
    helical_decompose,
    helical_field,
    helical_frame,
    helical_reconstruct,
    helical_vectors,
    write_decomposition_csv,
)
from .errors import (
    AliasingError,
    BlowUpError,
    CostCapError,
    DegenerateFieldError,
    HelicityLabError,
    InputError,
    InternalInconsistencyError,
    PathPreconditionError,
    RealityError,
    ToleranceError,
    TruncationError,
    VerificationError,
)
from .functionals import (
    AlignmentReport,
    check_kernel_alignment,
    commutator,
    commutator_pointwise,
    derivative_vanishing_test,
    energy,
    helicity_quadrature,
    helicity_spectral,
    inner_product_l2,
    integral_invariant_2pt,
    partial_helicity,
)
from .paths import (
    BasisMode,
    HelicityPath,
    basis_field,
    choose_basis_mode,
    constant_path,
    expansion_coefficient,
    export_path,
    negative_path,
    positive_path,
    rescale_to_level,
    zero_path,
)
from .shears import (
    DiffeoChain,
    ShearMap,
    identity_chain,
    pushforward,
    random_shear_chain,
    read_chain,
    transport_scalar,
    write_chain,
)
from .spectral import (
    TAU,
    VOLUME,
    AnalyzeResult,
    GridSampling,
    ScalarField,
    SpectralField,
    abc_field,
    analyze,
    analyze_scalar,
    band_kvecs,
    grid_integral,
    grid_points,
    leray_project,
    linear_combination,
    random_field,
    read_field,
    read_scalar_field,
    sample,
    sample_scalar,
    write_field,
    write_grid_csv,
    write_scalar_field,
)
from .transport import (
    AdvectSeries,
    FlowState,
    advect,
    helicity_drift_report,
    max_relative_drift,
)

__version__ = "0.1.0"
