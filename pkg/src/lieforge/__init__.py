"""lieforge: exact computations in varieties of Lie algebra brackets.

Structure constants over exact rationals; Chevalley-Eilenberg style
second cohomology constrained to nilpotent/solvable varieties; rigidity
certificates; linear deformations with non-triviality witnesses.

Every value is immutable after construction and every operation is a
pure function, so results may be shared freely across threads.
"""

from .catalog import (
    GraphSpec,
    abelian,
    aff1,
    catalog_names,
    contraction_example,
    graph_algebra,
    heisenberg,
    named,
    non_gh_example,
    sl2,
    sl2_semidirect_c2,
)
from .cohomology import (
    CERTIFIED_RIGID,
    Cochain2,
    CohomologySpace,
    INCONCLUSIVE,
    LIE,
    Variety,
    coboundary,
    cohomology,
    differential,
    dual_number_oracle,
    in_tangent_space,
    mu_cochain,
    nil,
    nilpotency_constraint,
    nilpotency_constraint_composed,
    parse_variety,
    rigidity_certificate,
    sol,
    solvability_constraint,
    tangent_subspace,
    variety_membership,
)
from .core import (
    BasisDecomposition,
    InvariantVector,
    JacobiReport,
    LieAlgebra,
    MultilinearMap,
    adapted_basis,
    adjoint_restricted,
    bracket_power,
    center,
    centralizer,
    change_of_basis,
    commutator,
    compose,
    cyclic_sum,
    derived_power,
    direct_sum,
    invariant_vector,
    is_ideal,
    killing_form,
    nilpotency_class,
    quotient,
    series,
    solvability_class,
    structure_predicates,
    unit,
)
from .deform import (
    DEFAULT_SAMPLES,
    LinearDeformation,
    NONTRIVIAL,
    ScenarioResult,
    UNDETERMINED,
    WedgeCocycle,
    Witness,
    check_codim2_hypotheses,
    deform_codim2,
    deform_gh,
    dixmier_cocycle,
    make_deformation,
    scenario_abelian_factor,
    scenario_free_nilpotent,
    scenario_graph,
    scenario_heisenberg,
    witness,
)
from .errors import (
    DimensionMismatchError,
    HypothesisFailedError,
    InvalidAlgebraError,
    InvalidDeformationError,
    LieforgeError,
    NotAnIdealError,
    NotInVarietyError,
    ParseError,
    ResourceCapError,
    ScenarioRejectedError,
    SearchExhaustedError,
    SingularMatrixError,
)
from .hall import (
    HallBasis,
    HallWord,
    free_nilpotent,
    hall_basis,
    left_normed_word,
    necklace_layer_sizes,
    normalize,
)
from .lieio import emit_graph, emit_lie, parse_graph, parse_lie
from .linalg import (
    DualScalar,
    Matrix,
    Rational,
    Subspace,
    nullspace,
    rat,
    reduce,
    vector,
)

__version__ = "0.1.0"
