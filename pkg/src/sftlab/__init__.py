"""Exact toolkit for 1-block factor codes on shifts of finite type.

Computes degrees and degree certificates, fibers over periodic points,
ergodic lifts with multiplicities, degree joinings and canonical lifts,
transition classes with class degree and class-maximal measures, plus
closed forms and Monte Carlo estimates for the modular difference and sum
code families.
"""

from .classes import (
    ClassMaximalReport,
    ClassPartition,
    LocallyConstantPotential,
    bi_transition_exists,
    class_degree_at,
    class_degree_joining,
    class_maximal,
    class_multiplicities,
    class_parallel,
    class_partition,
    class_representatives,
    verify_no_bitransition_tuple,
)
from .codes import (
    BlockCode,
    DegreeCertificate,
    build_separated_product,
    degree,
    higher_block_code,
    identity_code,
    image_entropy_bounds,
    image_word_check,
    is_finite_to_one,
)
from .errors import (
    ArityMismatch,
    EmptyShift,
    ImageMismatch,
    InfiniteFiber,
    LengthMismatch,
    NotALift,
    NotEssential,
    NotFiniteToOne,
    NotInImage,
    NotIrreducible,
    ParseError,
    PreconditionError,
    RepresentativeClassCollision,
    ToolkitError,
    TwoIsAFactor,
    ValidationError,
)
from .estimate import (
    EstimateReport,
    EstimatorConfig,
    empirical_genericity,
    estimate_diagonal_mass,
)
from .fibers import (
    FiberGraph,
    LiftEntry,
    RationalMixture,
    TupleOrbitJoining,
    canonical_lift,
    degree_at,
    degree_joining,
    diagonal_mass,
    ergodic_lifts,
    fiber_graph,
    fiber_points,
    joining_permutation_equivalence,
    point_in_image,
)
from .groupcodes import (
    BernoulliMeasure,
    LiftDescriptor,
    difference_code,
    has_two_point_factor,
    least_period,
    multiplicity_closed_form,
    s_map,
    sum_code,
    sum_code_lifts,
)
from .shifts import (
    PeriodicOrbitMeasure,
    PeriodicPoint,
    Sft,
    entropy,
    entropy_bounds,
    essentialize,
    full_shift,
    higher_block,
    is_irreducible,
    periodic_points,
)

__version__ = "0.1.0"
