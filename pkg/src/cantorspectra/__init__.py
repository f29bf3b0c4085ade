"""Subshifts of finite type, regular Cantor sets, dimension bounds,
Markov/Lagrange spectra, symbolic splice surgery, and sumset certificates,
on exact rational and quadratic-surd arithmetic."""

__version__ = "0.1.0"

from .errors import (
    BracketUndefinedError,
    CoverBlowupError,
    EmptySubshiftError,
    ExactArithmeticError,
    InputError,
    NoPathError,
    OutOfRangeError,
    PresentationError,
    SurgeryError,
)
from .intervals import IntervalUnion, ThicknessResult, thickness_of_union
from .surd import SurdSum
from .symbolic import (
    Cylinder,
    FiniteWord,
    LazySequence,
    RecodedSFT,
    SymbolicSequence,
    TransitionMatrix,
    bracket,
    connecting_word,
    count_paths,
    enumerate_periodic,
    forbid_word,
    is_admissible,
    metric_distance,
    remove_cylinder,
)
from .cantor import (
    Branch,
    CantorPresentation,
    MoebiusMap,
    PiecewiseAffineMap,
    build_cover,
    cf_value,
    cf_value_digits,
    continued_fraction_cantor,
    k_alpha_cantor,
    limit_geometry,
    middle_third_cantor,
    remove_word,
    thickness,
)
from .dimension import (
    DimensionBounds,
    PartitionStats,
    derivative_bounds,
    dimension_bounds,
    removed_cylinder_bounds,
    solve_pressure,
)
from .spectra import (
    CFObservable,
    ScanResult,
    SpectrumSample,
    SurgeryContext,
    TableObservable,
    ValueEnclosure,
    build_periodic_surgery_context,
    build_surgery_context,
    check_L_subset_M,
    classical_lagrange,
    lagrange_value,
    markov_value,
    random_identity_suite,
    spectrum_scan,
    surgery_A,
    surgery_A1,
    surgery_A1_prefix,
    verify_limsup_identity,
    verify_sup_identity,
)
from .sumsets import (
    AffineCombination,
    BoxImageMap,
    CertificateRefusal,
    IntervalCertificate,
    SumCover,
    certify_interval,
    image_cover,
    measure_upper_bound,
    sum_cover,
)
from .horseshoe import (
    AffinePlaneMap,
    ConjugacyObservable,
    DemoConfig,
    ProductHorseshoe,
    QuadraticCapMap,
    check_H_phi,
    conjugacy_point,
    demo_main,
    demo_refusal,
    main_theorem_demo,
)
