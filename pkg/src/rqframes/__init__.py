"""Rank-n frame families on right quaternionic vector spaces.

Quaternion scalars, right-module linear algebra with a complex-embedding
eigensolver, frame families under finite quadrature measures, and
closed-form perturbation-bound checks with a seeded verification harness.
"""

from .errors import (
    AmbientMismatch,
    DimensionMismatch,
    DivisionByZero,
    GapTooLarge,
    GenerationExhausted,
    NoConvergence,
    NotAFrame,
    NotARieszFamily,
    NotSelfAdjoint,
    RQFramesError,
    ShapeMismatch,
    SingularMatrix,
)
from .quat import Quaternion, qabs, qabs2, qconj, qmul
from .linalg import (
    QMatrix,
    QVector,
    Subspace,
    adjoint,
    basis_vector,
    embed,
    gap,
    hermitian_spectrum,
    identity,
    inner,
    neumann_invertible,
    operator_norm,
    orthonormalize,
    outer,
    solve,
    solve_columns,
    zero_matrix,
    zero_vector,
)
from .frames import (
    FrameBounds,
    FrameFamily,
    QuadratureMeasure,
    analysis,
    analysis_energy,
    bessel_bound,
    canonical_dual,
    coefficient_weighted_norm,
    frame_bounds,
    frame_operator,
    integrated_vectors,
    mixed_frame_operator,
    node_vectors_independent,
    reconstruct,
    riesz_bounds,
    synthesis,
)
from .perturb import (
    CHECKERS,
    THEOREMS,
    Condition,
    PerturbationQuantities,
    TheoremReport,
    check_dual_weighted_theorem,
    check_gap_theorem,
    check_kappa_theorem,
    check_riesz_theorem,
    check_sum_theorem,
    containment_tolerance,
    gamma,
    kappa,
    perturbation_quantities,
    span_restricted_dual_norms,
)
from .harness import (
    ExperimentConfig,
    SuiteReport,
    generate_frame,
    generate_perturbation,
    run_suite,
    splitmix64,
    trial_seed,
)

__version__ = "0.1.0"
