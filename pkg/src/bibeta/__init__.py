"""Gamma-ratio bivariate beta distributions on the unit square, grid-based
Bayesian inference for screening-test parameters, and two-component system
survivability assessment."""

__version__ = "0.1.0"

from .special import BetaParams, beta_pdf, beta2_pdf, log_gamma, std_normal_cdf
from .families import (
    AN5,
    AN8,
    INDEPENDENT,
    OL_MINUS,
    OL_PLUS,
    OL_STAR,
    FamilySpec,
    NotClosedError,
    an8_embedding,
    complement,
    marginal_params,
    ol_minus_pdf,
    ol_plus_pdf,
    ol_star_pdf,
)
from .sampling import MomentEstimate, RngState, estimate_moments, gamma_sample, sample_pair, sample_pairs
from .grids import DensityGrid, density_grid
from .inference import (
    DegeneratePosteriorError,
    DiagnosticData,
    GridPosterior,
    PosteriorSummary,
    PriorSpec,
    joint_posterior,
    log_likelihood,
    marginal_posterior,
    pi_posterior,
    posterior_summary,
    predictive_propensity,
    predictive_values,
)
from .synth import SynthConfig, generate, naive_estimates, true_params
from .survivability import (
    Exchangeable,
    HierIndependent,
    Interdependent,
    MonteCarloSettings,
    SurvivabilityReport,
    SurvivabilityScenario,
    reproduce_table,
    survivability,
)

__all__ = [
    "BetaParams",
    "beta_pdf",
    "beta2_pdf",
    "log_gamma",
    "std_normal_cdf",
    "FamilySpec",
    "NotClosedError",
    "an8_embedding",
    "complement",
    "marginal_params",
    "ol_minus_pdf",
    "ol_plus_pdf",
    "ol_star_pdf",
    "OL_PLUS",
    "OL_MINUS",
    "OL_STAR",
    "AN5",
    "AN8",
    "INDEPENDENT",
    "RngState",
    "MomentEstimate",
    "gamma_sample",
    "sample_pair",
    "sample_pairs",
    "estimate_moments",
    "DensityGrid",
    "density_grid",
    "DiagnosticData",
    "PriorSpec",
    "GridPosterior",
    "PosteriorSummary",
    "DegeneratePosteriorError",
    "log_likelihood",
    "pi_posterior",
    "joint_posterior",
    "marginal_posterior",
    "posterior_summary",
    "predictive_values",
    "predictive_propensity",
    "SynthConfig",
    "true_params",
    "generate",
    "naive_estimates",
    "SurvivabilityScenario",
    "Exchangeable",
    "HierIndependent",
    "Interdependent",
    "MonteCarloSettings",
    "SurvivabilityReport",
    "survivability",
    "reproduce_table",
]
