"""Seeded random generation of gamma variates and bivariate-family samples.

Streams are backed by the counter-based Philox generator keyed through
``numpy.random.SeedSequence(seed, spawn_key=(stream, ...))``, so a given
(seed, stream) pair reproduces the same variate sequence on every platform
and parallel sub-streams can be derived without coordination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import sqrt
from typing import Optional, Sequence, Tuple

import numpy as np

from . import families
from .families import FamilySpec

# below this shape, gamma draws are built through the boost identity
# Gamma(a) = Gamma(a+1) * U^(1/a) taken in log space, so shapes like 1e-4
# keep their full magnitude information instead of underflowing to zero
LOG_SPACE_SHAPE = 0.02


@dataclass
class RngState:
    """A reproducible random stream identified by (seed, stream).

    Two states constructed with the same identifiers yield bit-identical
    variate sequences.  Drawing advances the state; distinct states may be
    used concurrently, a single state may not.
    """

    seed: int
    stream: int = 0
    _generator: Optional[np.random.Generator] = field(
        default=None, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        if self.seed < 0 or self.stream < 0:
            raise ValueError(f"seed and stream must be unsigned, got ({self.seed}, {self.stream})")

    @property
    def generator(self) -> np.random.Generator:
        if self._generator is None:
            self._generator = np.random.Generator(
                np.random.Philox(seed=np.random.SeedSequence(self.seed, spawn_key=(self.stream,)))
            )
        return self._generator

    def child(self, *key: int) -> np.random.Generator:
        """A fresh generator on a derived sub-stream; does not advance this state."""
        return np.random.Generator(
            np.random.Philox(seed=np.random.SeedSequence(self.seed, spawn_key=(self.stream, *key)))
        )

    def clone(self) -> "RngState":
        """An unconsumed copy positioned at the start of the stream."""
        return RngState(self.seed, self.stream)

    @property
    def identity(self) -> Tuple[int, int]:
        return (self.seed, self.stream)


@dataclass(frozen=True)
class MomentEstimate:
    """Monte Carlo marginal moments and Pearson correlation of one family."""

    mean_x: float
    mean_y: float
    var_x: float
    var_y: float
    correlation: float
    std_error_corr: float
    n_samples: int


def _log_gamma_draws(gen: np.random.Generator, shape: float, n: int) -> np.ndarray:
    # boost identity in logs: ln Gamma(shape) = ln Gamma(shape+1) + ln(U)/shape
    w = gen.standard_gamma(shape + 1.0, size=n)
    u = gen.random(n)
    with np.errstate(divide="ignore"):
        return np.log(w) + np.log(u) / shape


def gamma_sample(rng: RngState, shape: float, size: Optional[int] = None):
    """Draw from Gamma(shape, scale 1); a zero shape is the constant 0.

    Exact at every shape: below LOG_SPACE_SHAPE the draw is built through
    the log-space boost, so returned values underflow gracefully to zero
    (their magnitudes are far below the subnormal range) without biasing
    the law.  Returns a float when ``size`` is None, else an ndarray.
    """
    if shape < 0:
        raise ValueError(f"gamma shape must be >= 0, got {shape}")
    if shape == 0.0:
        return 0.0 if size is None else np.zeros(size)
    n = 1 if size is None else size
    if shape < LOG_SPACE_SHAPE:
        draws = np.exp(_log_gamma_draws(rng.generator, shape, n))
    else:
        draws = rng.generator.standard_gamma(shape, size=n)
    return float(draws[0]) if size is None else draws


# component index sets defining each coordinate as
# sum(numerator) / (sum(numerator) + sum(rest-of-denominator))
_RATIO_STRUCTURE = {
    families.OL_PLUS: (((0,), (2,)), ((1,), (2,))),
    families.OL_MINUS: (((0,), (2,)), ((1,), (2,))),
    families.OL_STAR: (((0,), (2,)), ((1,), (2,))),
    families.AN5: (((0, 2), (3, 4)), ((1, 3), (2, 4))),
    families.AN8: (((0, 4, 6), (2, 5, 7)), ((1, 4, 7), (3, 5, 6))),
    families.INDEPENDENT: (((0,), (1,)), ((2,), (3,))),
}


def _component_shapes(family: FamilySpec) -> Tuple[float, ...]:
    if family.variant == families.INDEPENDENT:
        bx, by = family.beta_x, family.beta_y
        return (bx.a, bx.b, by.a, by.b)
    return family.alphas


def _linear_ratio(num: Sequence[np.ndarray], rest: Sequence[np.ndarray]) -> np.ndarray:
    top = reduce(np.add, num)
    return top / reduce(np.add, rest, top)


def _log_ratio(num: Sequence[np.ndarray], rest: Sequence[np.ndarray]) -> np.ndarray:
    top = reduce(np.logaddexp, num)
    return np.exp(top - reduce(np.logaddexp, rest, top))


def sample_pairs(rng: RngState, family: FamilySpec, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """n draws of (x, y) built exactly per the family's gamma-ratio definition.

    When a component shape falls below LOG_SPACE_SHAPE the whole ratio is
    assembled in log space, so even marginals like B(1e-4, 1e-4), whose
    gamma components all underflow as linear doubles, keep their correct
    law instead of producing 0/0.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    shapes = _component_shapes(family)
    gen = rng.generator
    if any(0.0 < s < LOG_SPACE_SHAPE for s in shapes):
        neg_inf = np.full(n, -np.inf)
        with np.errstate(divide="ignore"):
            draws = [
                neg_inf
                if s == 0.0
                else (
                    _log_gamma_draws(gen, s, n)
                    if s < LOG_SPACE_SHAPE
                    else np.log(gen.standard_gamma(s, size=n))
                )
                for s in shapes
            ]
        ratio = _log_ratio
    else:
        draws = [np.zeros(n) if s == 0.0 else gen.standard_gamma(s, size=n) for s in shapes]
        ratio = _linear_ratio
    (xnum, xrest), (ynum, yrest) = _RATIO_STRUCTURE[family.variant]
    x = ratio([draws[i] for i in xnum], [draws[i] for i in xrest])
    y = ratio([draws[i] for i in ynum], [draws[i] for i in yrest])
    if family.variant == families.OL_MINUS:
        return x, 1.0 - y
    if family.variant == families.OL_STAR:
        return 1.0 - x, 1.0 - y
    return x, y


def sample_pair(rng: RngState, family: FamilySpec) -> Tuple[float, float]:
    """One draw of (x, y) from the family."""
    x, y = sample_pairs(rng, family, 1)
    return float(x[0]), float(y[0])


def estimate_moments(
    family: FamilySpec, n_samples: int = 1_000_000, rng: Optional[RngState] = None
) -> MomentEstimate:
    """Monte Carlo means, variances and Pearson correlation of a family.

    The correlation standard error is the large-sample analytic
    (1 - r^2) / sqrt(n); at the default 10^6 samples it sits near 1e-3,
    well below the 2-decimal resolution of published correlation tables.
    """
    if n_samples < 2:
        raise ValueError(f"n_samples must be >= 2, got {n_samples}")
    if rng is None:
        raise ValueError("estimate_moments requires an RngState")
    x, y = sample_pairs(rng, family, n_samples)
    mean_x = float(x.mean())
    mean_y = float(y.mean())
    var_x = float(x.var(ddof=1))
    var_y = float(y.var(ddof=1))
    cov = float(((x - mean_x) * (y - mean_y)).sum() / (n_samples - 1))
    corr = cov / sqrt(var_x * var_y)
    se = (1.0 - corr * corr) / sqrt(n_samples)
    return MomentEstimate(mean_x, mean_y, var_x, var_y, corr, se, n_samples)
