"""Affine estimators with certified risk for fidelity and observable expectations."""

from ._core import (
    BaselineResult,
    ConvergenceError,
    CoverageReport,
    DensityMatrix,
    EstimateReport,
    EstimatorArtifact,
    Granularity,
    MeasurementScheme,
    Observable,
    OutcomeDataset,
    PauliString,
    Povm,
    PureState,
    SaddleSolution,
    SolverConfig,
    apply_estimator,
    basis_state,
    born_distribution,
    build_observable,
    certify_gap,
    clopper_pearson_lower,
    cluster_state,
    coverage_test,
    depolarize,
    dfe_baseline,
    dfe_weighted_scheme,
    expectation_value,
    extract_estimator,
    ghz_state,
    mle_baseline,
    pauli_expectation,
    pauli_scheme,
    random_pure_state,
    random_rank1_scheme,
    sample_outcomes,
    scheme_digest,
    solve_saddle,
    stabilizer_scheme,
    swap_matrix,
    target_basis_scheme,
    theta,
    w_state,
    werner_state,
)

__all__ = [
    "BaselineResult",
    "ConvergenceError",
    "CoverageReport",
    "DensityMatrix",
    "EstimateReport",
    "EstimatorArtifact",
    "Granularity",
    "MeasurementScheme",
    "Observable",
    "OutcomeDataset",
    "PauliString",
    "Povm",
    "PureState",
    "SaddleSolution",
    "SolverConfig",
    "apply_estimator",
    "basis_state",
    "born_distribution",
    "build_observable",
    "certify_gap",
    "clopper_pearson_lower",
    "cluster_state",
    "coverage_test",
    "depolarize",
    "dfe_baseline",
    "dfe_weighted_scheme",
    "expectation_value",
    "extract_estimator",
    "ghz_state",
    "mle_baseline",
    "pauli_expectation",
    "pauli_scheme",
    "random_pure_state",
    "random_rank1_scheme",
    "sample_outcomes",
    "scheme_digest",
    "solve_saddle",
    "stabilizer_scheme",
    "swap_matrix",
    "target_basis_scheme",
    "theta",
    "w_state",
    "werner_state",
]

__version__ = "0.1.0"
