"""Synthetic screening data with analytically known sensitivity and specificity.

Diagnostic scores are unit-variance normals: N(mu1, 1) for the diseased
class, N(mu0, 1) for the healthy class, with a classification threshold t
between the two means.  The implied true parameters are

    eta   = P(Z > t - mu1)    (diseased score exceeds t)
    theta = P(Z <= t - mu0)   (healthy score does not)

so generated datasets come with exact ground truth to validate inference
against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

from .inference import DiagnosticData
from .sampling import RngState
from .special import std_normal_cdf


@dataclass
class SynthConfig:
    """Ground-truth configuration: prevalence, sample size, score means, threshold."""

    pi: float
    n: int
    mu0: float
    mu1: float
    t: float
    rng: RngState

    def __post_init__(self) -> None:
        if not (0.0 < self.pi < 1.0):
            raise ValueError(f"prevalence must lie in (0, 1), got {self.pi}")
        if self.n < 1:
            raise ValueError(f"sample size must be positive, got {self.n}")
        if not (self.mu0 < self.t < self.mu1):
            raise ValueError(
                f"threshold must lie between the class means, got mu0={self.mu0}, t={self.t}, mu1={self.mu1}"
            )


def true_params(c: SynthConfig) -> Tuple[float, float]:
    """(eta, theta) implied by the score model; exact, no sampling."""
    return 1.0 - std_normal_cdf(c.t - c.mu1), std_normal_cdf(c.t - c.mu0)


def _floor_count(pi: float, n: int) -> int:
    # floor(pi * n) with a 1e-9 nudge: 0.35 * 100 is 34.999... in binary,
    # and the diseased count must be 35
    return int(math.floor(pi * n + 1e-9))


def generate(c: SynthConfig) -> DiagnosticData:
    """One synthetic dataset d = (n, n1, k1, k2).

    n1 = floor(pi n) is deterministic.  The diseased and healthy scores come
    from two sub-streams derived from the config seed, so datasets generated
    at growing n under the same seed are prefix-nested (common random
    numbers); generate is a pure function of its config.
    """
    n1 = _floor_count(c.pi, c.n)
    diseased = c.rng.child(0).normal(c.mu1, 1.0, n1)
    healthy = c.rng.child(1).normal(c.mu0, 1.0, c.n - n1)
    k1 = int((diseased > c.t).sum())
    k2 = int((healthy <= c.t).sum())
    return DiagnosticData(n=c.n, n1=n1, k1=k1, k2=k2)


def naive_estimates(d: DiagnosticData) -> Tuple[float, float, float]:
    """(eta_hat, theta_hat, pi_hat) = (k1/n1, k2/(n-n1), k/n).

    k counts every screen positive: the k1 true positives plus the
    n - n1 - k2 false positives.
    """
    if d.n1 == 0:
        raise ValueError("eta_hat undefined: no confirmed diseased subjects (n1 = 0)")
    if d.n2 == 0:
        raise ValueError("theta_hat undefined: no confirmed healthy subjects (n - n1 = 0)")
    eta_hat = d.k1 / d.n1
    theta_hat = d.k2 / d.n2
    pi_hat = (d.k1 + (d.n2 - d.k2)) / d.n
    return eta_hat, theta_hat, pi_hat
