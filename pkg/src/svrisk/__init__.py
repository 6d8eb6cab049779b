"""High-dimensional asymptotics and finite-sample solvers for hard/soft SVR."""

from .noise import (
    InvalidNoiseModel,
    NoiseModel,
    noise_cdf,
    noise_pdf,
    noise_second_moment,
    sample_noise,
    scale_mixture,
    standard_gaussian,
)
from .expectations import (
    DEFAULT_QUAD,
    QuadratureSpec,
    boxed_max_chi_objective,
    boxed_max_value,
    e_hinge_abs,
    e_hinge_huber,
    e_hinge_sq,
    e_hinge_sq_quad2d,
    hinge_sq_mean,
    lemma_max_value,
    soft_expectation,
)
from .asymptotics import (
    AsymptoticSolution,
    HsvrProblem,
    SsvrProblem,
    d_value,
    dbar_value,
    delta_star,
    epsilon_star,
    hsvr_risk,
    ssvr_risk,
    tune_hsvr,
    tune_ssvr,
)
from .solvers import (
    Dataset,
    SolverConfig,
    SvrFit,
    cosine_similarity,
    estimate_noise_signal,
    generate_dataset,
    oracle_ridge,
    prediction_risk,
    solve_hard_svr,
    solve_ridge,
    solve_soft_svr,
)
from .montecarlo import SweepRow, SweepSpec, feasibility_curve, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AsymptoticSolution",
    "Dataset",
    "DEFAULT_QUAD",
    "HsvrProblem",
    "InvalidNoiseModel",
    "NoiseModel",
    "QuadratureSpec",
    "SolverConfig",
    "SsvrProblem",
    "SvrFit",
    "SweepRow",
    "SweepSpec",
    "boxed_max_chi_objective",
    "boxed_max_value",
    "cosine_similarity",
    "d_value",
    "dbar_value",
    "delta_star",
    "e_hinge_abs",
    "e_hinge_huber",
    "e_hinge_sq",
    "e_hinge_sq_quad2d",
    "epsilon_star",
    "estimate_noise_signal",
    "feasibility_curve",
    "generate_dataset",
    "hinge_sq_mean",
    "hsvr_risk",
    "lemma_max_value",
    "noise_cdf",
    "noise_pdf",
    "noise_second_moment",
    "oracle_ridge",
    "prediction_risk",
    "run_sweep",
    "sample_noise",
    "scale_mixture",
    "soft_expectation",
    "solve_hard_svr",
    "solve_ridge",
    "solve_soft_svr",
    "ssvr_risk",
    "standard_gaussian",
    "tune_hsvr",
    "tune_ssvr",
]
