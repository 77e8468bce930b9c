"""Sparse recovery with a certified link between the noise bound and the
l1 penalty weight: constrained and penalized solvers, penalty-weight
bounds from the support spectrum, and a dual scan that identifies the
penalty matching a given noise bound."""

from ._core import (  # noqa: F401
    BetaBounds,
    BracketError,
    DenseMatrix,
    DualScan,
    EqualityResult,
    InfeasibleSupportError,
    LpnResult,
    LpnStatus,
    SensingProblem,
    SignVector,
    SingularMatrixError,
    SparseSolution,
    TrialParams,
    TrialReport,
    beta_equality,
    beta_lower,
    beta_max,
    beta_upper,
    check_boundary,
    derive_seed_for_trial,
    dual_value,
    exact_bounds,
    gaussian_beta_interval,
    gaussian_eigen_estimates,
    generate_gaussian_matrix,
    generate_problem,
    generate_spike_signal,
    gram,
    kkt_residual,
    log_space,
    make_beta_grid,
    normalized_error,
    qp_objective,
    residual_at_beta,
    residual_eigen_coefficients,
    run_trial,
    scan_dual,
    soft_threshold,
    solve_lpn,
    solve_qp,
    solve_spd,
    symmetric_eigenvalues,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
