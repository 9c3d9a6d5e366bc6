"""Exact calculus of bigraded forms on calibrated polyhedral complexes,
with atomic Monge-Ampere measures of tropical polynomials."""

from .calibration import (
    Calibration,
    Discordance,
    VectorVolume,
    boundary_data,
    canonical_calibration,
    discordance,
    is_harmonious,
    pushforward_calibration,
)
from .errors import (
    AmbientMismatch,
    ArityMismatch,
    BidegreeMismatch,
    EmptyCell,
    IncompatibleDecompositions,
    NonPositiveEpsilon,
    NotADecomposition,
    NotCodimOne,
    NotPure,
    NotSymmetric,
    ParseError,
    SuperformError,
    UnboundedCell,
    UnknownCommand,
    UnsupportedBidegree,
    ValidationError,
)
from .forms import (
    AffineMap,
    Polynomial,
    PositivityKind,
    Superform,
    check_positivity,
    d_prime,
    d_prime_d_second,
    d_second,
    involution_J,
    is_symmetric,
    pullback,
    restrict,
    wedge,
)
from .integration import (
    IntegralResult,
    green_residual,
    integrate_boundary,
    integrate_top,
    stokes_residual,
)
from .monge_ampere import (
    AtomicMeasure,
    TropicalHypersurface,
    TropicalPolynomial,
    corner_locus,
    linearity_complex,
    lse_density,
    lse_ma_quadrature,
    ma_measure,
    mixed_ma,
)
from .polyhedra import (
    AffineForm,
    Cell,
    CellComplex,
    WeightedComplex,
    build_cell,
    cell_complex,
    cell_from_points,
    cell_volume,
    faces,
    hull_volume,
    refine,
    triangulate_cell,
)
from .scene import Scene, load_result, load_scene, save_result

__version__ = "0.1.0"
