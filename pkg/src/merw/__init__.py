"""Multi-dimensional elephant random walk: simulation, urn representation,
closed-form limit predictions and seeded Monte Carlo verification."""

from .ensemble import EnsembleConfig, EnsembleSummary, run_ensemble, simulate_replicas
from .enumeration import exact_small_n_pmf, project_pmf
from .montecarlo import (
    CheckResult,
    VerificationReport,
    verify_center_of_mass,
    verify_critical,
    verify_diffusive_clt,
    verify_slln,
    verify_superdiffusive,
)
from .params import (
    BudgetError,
    ModelParams,
    ParameterError,
    RegimeError,
    StepDirection,
)
from .theory import (
    CovarianceSpec,
    RegimeReport,
    classify_regime,
    cm_covariance,
    covariance_spec,
    critical_covariance,
    critical_memory,
    diffusive_covariance,
    memory_exponent,
    sigma_I,
)
from .urn import (
    SpectralData,
    UrnState,
    init_urn,
    mean_replacement_matrix,
    project_to_walk,
    urn_step,
)
from .walk import (
    PathSnapshot,
    WalkState,
    sample_first_step,
    sample_step,
    simulate_path,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CheckResult",
    "CovarianceSpec",
    "EnsembleConfig",
    "EnsembleSummary",
    "ModelParams",
    "ParameterError",
    "PathSnapshot",
    "RegimeError",
    "RegimeReport",
    "SpectralData",
    "StepDirection",
    "UrnState",
    "VerificationReport",
    "WalkState",
    "classify_regime",
    "cm_covariance",
    "covariance_spec",
    "critical_covariance",
    "critical_memory",
    "diffusive_covariance",
    "exact_small_n_pmf",
    "init_urn",
    "mean_replacement_matrix",
    "memory_exponent",
    "project_pmf",
    "project_to_walk",
    "run_ensemble",
    "sample_first_step",
    "sample_step",
    "sigma_I",
    "simulate_path",
    "simulate_replicas",
    "urn_step",
    "verify_center_of_mass",
    "verify_critical",
    "verify_diffusive_clt",
    "verify_slln",
    "verify_superdiffusive",
]
