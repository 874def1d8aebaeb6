"""Grid-based Bayesian inference for screening-test sensitivity and specificity.

The data d = (n, n1, k1, k2) come from giving all n subjects a confirmatory
test (n1 positives) and then the screening test (k1 true positives among the
n1, k2 true negatives among the n - n1).  Conditional on (pi, eta, theta) the
likelihood is a product of three binomials; pi factors out and stays
conjugate, while (eta, theta) get an m x m grid posterior under a joint
prior from the bivariate families.

One wrinkle inherited from the source model: the (1-theta) exponent is
n - n1 - k2, the count of screen-positive healthy subjects, which follows
from Binomial(n - n1, theta) for k2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from . import families
from .families import FamilySpec, closed_form_logpdf
from .grids import DEFAULT_GRID_SAMPLES, density_grid, grid_midpoints
from .sampling import RngState
from .special import BetaParams
from .serialize import csv_text, json_text


class DegeneratePosteriorError(RuntimeError):
    """Every grid cell has zero posterior weight (prior and likelihood disjoint)."""


@dataclass(frozen=True)
class DiagnosticData:
    """Observed counts from the confirmatory + screening test design."""

    n: int
    n1: int
    k1: int
    k2: int

    def __post_init__(self) -> None:
        ok = (
            0 <= self.n1 <= self.n
            and 0 <= self.k1 <= self.n1
            and 0 <= self.k2 <= self.n - self.n1
        )
        if not ok:
            raise ValueError(
                f"inconsistent diagnostic data (n={self.n}, n1={self.n1}, k1={self.k1}, k2={self.k2})"
            )

    @property
    def n2(self) -> int:
        return self.n - self.n1


@dataclass(frozen=True)
class PriorSpec:
    """Joint prior on (eta, theta) plus an independent beta prior on pi."""

    eta_theta_prior: FamilySpec
    pi_prior: BetaParams


@dataclass(frozen=True)
class PosteriorSummary:
    mean_eta: float
    mean_theta: float
    mode_cell: Tuple[int, int]
    correlation: float


@dataclass(frozen=True)
class GridPosterior:
    """Normalized m x m posterior weights; rows index eta, columns theta."""

    m: int
    weights: np.ndarray
    eta_axis: np.ndarray
    theta_axis: np.ndarray
    prior: PriorSpec
    data: DiagnosticData

    def to_csv(self) -> str:
        header = [f"{t:.12g}" for t in self.theta_axis]
        return csv_text(header, self.weights.tolist())

    def to_json(self, seed: Optional[Tuple[int, int]] = None) -> str:
        prior = self.prior
        meta = {
            "m": self.m,
            "data": {"n": self.data.n, "n1": self.data.n1, "k1": self.data.k1, "k2": self.data.k2},
            "prior_variant": prior.eta_theta_prior.variant,
            "prior_alphas": list(prior.eta_theta_prior.alphas)
            if prior.eta_theta_prior.alphas
            else None,
            "pi_prior": [prior.pi_prior.a, prior.pi_prior.b],
            "seed": list(seed) if seed else None,
        }
        if prior.eta_theta_prior.variant == families.INDEPENDENT:
            meta["prior_beta_eta"] = [prior.eta_theta_prior.beta_x.a, prior.eta_theta_prior.beta_x.b]
            meta["prior_beta_theta"] = [prior.eta_theta_prior.beta_y.a, prior.eta_theta_prior.beta_y.b]
        data = {
            "eta_axis": self.eta_axis.tolist(),
            "theta_axis": self.theta_axis.tolist(),
            "weights": self.weights.tolist(),
        }
        return json_text(meta, data)


def _log_term(base: float, exponent: float) -> float:
    # exponent * log(base) with the boundary convention: a zero base is only
    # legal when its exponent vanishes
    if base == 0.0:
        if exponent == 0.0:
            return 0.0
        raise ValueError("boundary parameter with a nonzero exponent has zero likelihood")
    return exponent * math.log(base)


def _log_binom(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_likelihood(pi: float, eta: float, theta: float, d: DiagnosticData) -> float:
    """Log of the three-binomial product likelihood at (pi, eta, theta)."""
    for name, value in (("pi", pi), ("eta", eta), ("theta", theta)):
        if not (0.0 <= value <= 1.0):
            raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return (
        _log_binom(d.n, d.n1)
        + _log_binom(d.n1, d.k1)
        + _log_binom(d.n2, d.k2)
        + _log_term(theta, d.k2)
        + _log_term(1.0 - theta, d.n2 - d.k2)
        + _log_term(eta, d.k1)
        + _log_term(1.0 - eta, d.n1 - d.k1)
        + _log_term(pi, d.n1)
        + _log_term(1.0 - pi, d.n2)
    )


def pi_posterior(d: DiagnosticData, prior: BetaParams) -> BetaParams:
    """Exact conjugate update: B(a + n1, b + n - n1)."""
    return BetaParams(prior.a + d.n1, prior.b + d.n2)


# One histogram per (family, m, n_samples, seed, stream): posterior re-runs
# across different data must vary only through the likelihood.  Bounded so
# seed sweeps don't accumulate grids indefinitely.
_PRIOR_GRID_CACHE: Dict[tuple, np.ndarray] = {}
_PRIOR_GRID_CACHE_LIMIT = 16


def _log_prior_grid(family: FamilySpec, m: int, rng: Optional[RngState], n_samples: int) -> np.ndarray:
    mid = grid_midpoints(m)
    if family.has_closed_form:
        eta, theta = np.meshgrid(mid, mid, indexing="ij")
        return closed_form_logpdf(family, eta, theta)
    if rng is None:
        raise ValueError(f"a {family.variant} prior needs an RngState for its density grid")
    key = (family, m, n_samples, rng.seed, rng.stream)
    cached = _PRIOR_GRID_CACHE.pop(key, None)
    if cached is None:
        grid = density_grid(family, m=m, n_samples=n_samples, rng=RngState(rng.seed, rng.stream))
        with np.errstate(divide="ignore"):
            cached = np.log(grid.cells)
        while len(_PRIOR_GRID_CACHE) >= _PRIOR_GRID_CACHE_LIMIT:
            _PRIOR_GRID_CACHE.pop(next(iter(_PRIOR_GRID_CACHE)))
    _PRIOR_GRID_CACHE[key] = cached  # re-insertion keeps hot grids newest
    return cached


def joint_posterior(
    d: DiagnosticData,
    prior: PriorSpec,
    m: int = 100,
    rng: Optional[RngState] = None,
    prior_samples: int = DEFAULT_GRID_SAMPLES,
) -> GridPosterior:
    """Grid posterior of (eta, theta) with pi profiled out by conjugacy.

    Cell (i, j) holds the likelihood in (eta, theta) at the midpoints times
    the prior density there, normalized to sum to one.  Estimated (AN5/AN8)
    priors identify their Monte Carlo grid by the rng's (seed, stream) and
    reuse one cached histogram per (family, m, n_samples, seed), so the rng
    generator state itself is never consumed here.  All arithmetic runs in
    log space with a single max subtraction: at n ~ 100 the linear-space
    likelihood underflows.
    """
    if m < 10:
        raise ValueError(f"posterior grid needs m >= 10, got {m}")
    mid = grid_midpoints(m)
    log_eta = d.k1 * np.log(mid) + (d.n1 - d.k1) * np.log1p(-mid)
    log_theta = d.k2 * np.log(mid) + (d.n2 - d.k2) * np.log1p(-mid)
    log_w = log_eta[:, None] + log_theta[None, :] + _log_prior_grid(
        prior.eta_theta_prior, m, rng, prior_samples
    )
    peak = log_w.max()
    if not np.isfinite(peak):
        raise DegeneratePosteriorError("posterior weights vanish on every grid cell")
    w = np.exp(log_w - peak)
    w /= w.sum()
    return GridPosterior(
        m=m, weights=w, eta_axis=mid, theta_axis=mid, prior=prior, data=d
    )


def marginal_posterior(gp: GridPosterior, coord: str) -> np.ndarray:
    """Marginal posterior masses of eta (row sums) or theta (column sums)."""
    if coord == "eta":
        return gp.weights.sum(axis=1)
    if coord == "theta":
        return gp.weights.sum(axis=0)
    raise ValueError(f"coord must be 'eta' or 'theta', got {coord!r}")


def marginal_csv(gp: GridPosterior, coord: str) -> str:
    axis = gp.eta_axis if coord == "eta" else gp.theta_axis
    masses = marginal_posterior(gp, coord)
    return csv_text(["coordinate", "probability"], zip(axis.tolist(), masses.tolist()))


def posterior_summary(gp: GridPosterior) -> PosteriorSummary:
    """Grid-weighted means, argmax cell and Pearson correlation.

    Argmax ties break toward the smaller (i, j) lexicographically.  A grid
    concentrated on a single cell has no correlation; 0 is reported.
    """
    w = gp.weights
    pe = w.sum(axis=1)
    pt = w.sum(axis=0)
    mean_eta = float(pe @ gp.eta_axis)
    mean_theta = float(pt @ gp.theta_axis)
    var_eta = float(pe @ gp.eta_axis**2) - mean_eta**2
    var_theta = float(pt @ gp.theta_axis**2) - mean_theta**2
    flat = int(np.argmax(w))
    mode = (flat // gp.m, flat % gp.m)
    if var_eta <= 0.0 or var_theta <= 0.0:
        corr = 0.0
    else:
        exy = float(gp.eta_axis @ w @ gp.theta_axis)
        corr = (exy - mean_eta * mean_theta) / math.sqrt(var_eta * var_theta)
    return PosteriorSummary(mean_eta, mean_theta, mode, corr)


def predictive_values(pi: float, eta: float, theta: float) -> Tuple[float, float]:
    """Predictive values of a positive / negative screen under the probability
    interpretation:

        Lambda = eta pi / (eta pi + (1-theta)(1-pi))
        Psi    = theta (1-pi) / (theta (1-pi) + (1-eta) pi)
    """
    for name, value in (("pi", pi), ("eta", eta), ("theta", theta)):
        if not (0.0 < value < 1.0):
            raise ValueError(f"{name} must lie in (0, 1), got {value}")
    lam = eta * pi / (eta * pi + (1.0 - theta) * (1.0 - pi))
    psi = theta * (1.0 - pi) / (theta * (1.0 - pi) + (1.0 - eta) * pi)
    return lam, psi


def predictive_propensity(
    gp: GridPosterior, pi_star: Optional[float] = None
) -> Tuple[float, float]:
    """Posterior predictive disease probabilities under the propensity reading.

    The eta-weighted marginal posterior mass gives the likelihood of disease
    after a positive screen, normalized against the complementary event; the
    theta-weighted mass handles the negative screen symmetrically.  On a
    point-mass grid this collapses exactly to predictive_values.  pi_star
    defaults to the posterior mean of the disease prevalence.
    """
    if pi_star is None:
        pi_star = pi_posterior(gp.data, gp.prior.pi_prior).mean
    if not (0.0 < pi_star < 1.0):
        raise ValueError(f"pi_star must lie in (0, 1), got {pi_star}")
    pe = gp.weights.sum(axis=1)
    pt = gp.weights.sum(axis=0)
    mean_eta = float(pe @ gp.eta_axis)
    mean_theta = float(pt @ gp.theta_axis)
    pos = pi_star * mean_eta
    pos_bar = (1.0 - pi_star) * (1.0 - mean_theta)
    neg = (1.0 - pi_star) * mean_theta
    neg_bar = pi_star * (1.0 - mean_eta)
    return pos / (pos + pos_bar), neg / (neg + neg_bar)
