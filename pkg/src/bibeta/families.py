"""Gamma-ratio bivariate beta families on the unit square.

All families are built from independent unit-scale gamma variates
U_i ~ Gamma(alpha_i):

  OL+ :  (X, Y)      with X = U1/(U1+U3), Y = U2/(U2+U3)
  OL- :  (X, 1-Y)    negative dependence by complementing one coordinate
  OL* :  (1-X, 1-Y)  both coordinates complemented
  AN5 :  X = (U1+U3)/(U1+U3+U4+U5),  Y = (U2+U4)/(U2+U3+U4+U5)
  AN8 :  X = V/(1+V), Y = W/(1+W) with
         V = (U1+U5+U7)/(U3+U6+U8),  W = (U2+U5+U8)/(U4+U6+U7)

plus the independent product of two betas as a no-dependence baseline.
The OL variants have a closed-form joint density; AN5/AN8 do not and are
handled by Monte Carlo histograms (see grids.density_grid).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .special import BetaParams, log_beta, log_gamma

OL_PLUS = "ol-plus"
OL_MINUS = "ol-minus"
OL_STAR = "ol-star"
AN5 = "an5"
AN8 = "an8"
INDEPENDENT = "indep"

VARIANTS = frozenset({OL_PLUS, OL_MINUS, OL_STAR, AN5, AN8, INDEPENDENT})
OL_VARIANTS = frozenset({OL_PLUS, OL_MINUS, OL_STAR})
CLOSED_FORM_VARIANTS = frozenset({OL_PLUS, OL_MINUS, OL_STAR, INDEPENDENT})

_ALPHA_LENGTH = {OL_PLUS: 3, OL_MINUS: 3, OL_STAR: 3, AN5: 5, AN8: 8}


class NotClosedError(ValueError):
    """Raised when a family is not closed under the requested complementation."""


@dataclass(frozen=True)
class FamilySpec:
    """One bivariate family: a variant tag plus its parameters.

    ``alphas`` drives the gamma-ratio variants; the independent variant
    carries two explicit beta marginals instead.
    """

    variant: str
    alphas: Optional[Tuple[float, ...]] = None
    beta_x: Optional[BetaParams] = None
    beta_y: Optional[BetaParams] = None

    def __post_init__(self) -> None:
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown family variant {self.variant!r}")
        if self.variant == INDEPENDENT:
            if self.beta_x is None or self.beta_y is None or self.alphas is not None:
                raise ValueError("independent variant requires beta_x and beta_y, no alphas")
            return
        if self.alphas is None or self.beta_x is not None or self.beta_y is not None:
            raise ValueError(f"{self.variant} requires an alpha vector and no beta marginals")
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        n = _ALPHA_LENGTH[self.variant]
        if len(self.alphas) != n:
            raise ValueError(f"{self.variant} needs {n} alphas, got {len(self.alphas)}")
        if any(a < 0 or not math.isfinite(a) for a in self.alphas):
            raise ValueError(f"alphas must be finite and nonnegative, got {self.alphas}")
        if self.variant in OL_VARIANTS and any(a <= 0 for a in self.alphas):
            raise ValueError(f"{self.variant} needs strictly positive alphas, got {self.alphas}")
        # marginal_params validates positivity of every aggregate shape
        marginal_params(self)

    @classmethod
    def ol_plus(cls, a1: float, a2: float, a3: float) -> "FamilySpec":
        return cls(OL_PLUS, (a1, a2, a3))

    @classmethod
    def ol_minus(cls, a1: float, a2: float, a3: float) -> "FamilySpec":
        return cls(OL_MINUS, (a1, a2, a3))

    @classmethod
    def ol_star(cls, a1: float, a2: float, a3: float) -> "FamilySpec":
        return cls(OL_STAR, (a1, a2, a3))

    @classmethod
    def an5(cls, *alphas: float) -> "FamilySpec":
        return cls(AN5, tuple(alphas))

    @classmethod
    def an8(cls, *alphas: float) -> "FamilySpec":
        return cls(AN8, tuple(alphas))

    @classmethod
    def independent(cls, beta_x: BetaParams, beta_y: BetaParams) -> "FamilySpec":
        return cls(INDEPENDENT, beta_x=beta_x, beta_y=beta_y)

    @property
    def has_closed_form(self) -> bool:
        return self.variant in CLOSED_FORM_VARIANTS

    def label(self) -> str:
        if self.variant == INDEPENDENT:
            return f"indep[{self.beta_x},{self.beta_y}]"
        body = ",".join(f"{a:g}" for a in self.alphas)
        return f"{self.variant}({body})"


def marginal_params(family: FamilySpec) -> Tuple[BetaParams, BetaParams]:
    """Exact beta parameters of the two marginals.

    Read off the gamma sums in numerator and denominator of each ratio;
    complemented coordinates swap (a, b).
    """
    v = family.variant
    if v == INDEPENDENT:
        return family.beta_x, family.beta_y
    a = family.alphas
    if v == OL_PLUS:
        return BetaParams(a[0], a[2]), BetaParams(a[1], a[2])
    if v == OL_MINUS:
        return BetaParams(a[0], a[2]), BetaParams(a[2], a[1])
    if v == OL_STAR:
        return BetaParams(a[2], a[0]), BetaParams(a[2], a[1])
    if v == AN5:
        return (
            BetaParams(a[0] + a[2], a[3] + a[4]),
            BetaParams(a[1] + a[3], a[2] + a[4]),
        )
    # AN8: X num {1,5,7}, den {3,6,8}; Y num {2,5,8}, den {4,6,7} (1-indexed)
    return (
        BetaParams(a[0] + a[4] + a[6], a[2] + a[5] + a[7]),
        BetaParams(a[1] + a[4] + a[7], a[3] + a[5] + a[6]),
    )


# ---------------------------------------------------------------------------
# Closed-form OL densities
# ---------------------------------------------------------------------------

ArrayLike = Union[float, np.ndarray]


def _check_alphas3(alphas: Sequence[float]) -> Tuple[float, float, float]:
    if len(alphas) != 3:
        raise ValueError(f"OL densities need 3 alphas, got {len(alphas)}")
    a1, a2, a3 = (float(a) for a in alphas)
    if min(a1, a2, a3) <= 0:
        raise ValueError(f"OL densities need strictly positive alphas, got {alphas}")
    return a1, a2, a3


def ol_minus_log_normalizer(a1: float, a2: float, a3: float) -> float:
    """ln of the OL normalizing constant Gamma(a1+a2+a3)/(Gamma(a1)Gamma(a2)Gamma(a3)).

    The published density is stated only up to proportionality; the constant
    follows from integrating the shared gamma denominator out of the
    construction and is pinned by the quadrature normalization tests.
    """
    return log_gamma(a1 + a2 + a3) - log_gamma(a1) - log_gamma(a2) - log_gamma(a3)


def _ol_minus_logpdf(eta: ArrayLike, theta: ArrayLike, a1: float, a2: float, a3: float) -> ArrayLike:
    # eta^(a1-1) (1-eta)^(a2+a3-1) theta^(a1+a3-1) (1-theta)^(a2-1)
    #   / [1 - eta (1-theta)]^(a1+a2+a3), fully normalized
    return (
        ol_minus_log_normalizer(a1, a2, a3)
        + (a1 - 1.0) * np.log(eta)
        + (a2 + a3 - 1.0) * np.log1p(-eta)
        + (a1 + a3 - 1.0) * np.log(theta)
        + (a2 - 1.0) * np.log1p(-theta)
        - (a1 + a2 + a3) * np.log1p(-eta * (1.0 - theta))
    )


def ol_minus_pdf(eta: float, theta: float, alphas: Sequence[float]) -> float:
    """Joint density of the negatively dependent pair (X, 1-Y) of the OL construction."""
    a1, a2, a3 = _check_alphas3(alphas)
    if not (0.0 < eta < 1.0 and 0.0 < theta < 1.0):
        raise ValueError(f"ol_minus_pdf requires a point in the open unit square, got ({eta}, {theta})")
    return float(math.exp(_ol_minus_logpdf(eta, theta, a1, a2, a3)))


def ol_plus_pdf(x: float, y: float, alphas: Sequence[float]) -> float:
    """Joint density of the positively dependent OL pair (X, Y); equals ol_minus_pdf(x, 1-y)."""
    return ol_minus_pdf(x, 1.0 - y, alphas)


def ol_star_pdf(x: float, y: float, alphas: Sequence[float]) -> float:
    """Joint density of the doubly complemented pair (1-X, 1-Y); equals ol_plus_pdf(1-x, 1-y)."""
    return ol_plus_pdf(1.0 - x, 1.0 - y, alphas)


def closed_form_logpdf(family: FamilySpec, x: ArrayLike, y: ArrayLike) -> ArrayLike:
    """Vectorized log joint density for the closed-form variants.

    Arguments must lie strictly inside the unit square.  Raises for AN5/AN8,
    whose joint density has no closed form.
    """
    v = family.variant
    if v == INDEPENDENT:
        px, py = family.beta_x, family.beta_y
        return (
            (px.a - 1.0) * np.log(x)
            + (px.b - 1.0) * np.log1p(-x)
            - log_beta(px.a, px.b)
            + (py.a - 1.0) * np.log(y)
            + (py.b - 1.0) * np.log1p(-y)
            - log_beta(py.a, py.b)
        )
    if v not in OL_VARIANTS:
        raise ValueError(f"{v} has no closed-form joint density")
    a1, a2, a3 = family.alphas
    if v == OL_MINUS:
        return _ol_minus_logpdf(x, y, a1, a2, a3)
    if v == OL_PLUS:
        return _ol_minus_logpdf(x, 1.0 - np.asarray(y, dtype=float), a1, a2, a3)
    return _ol_minus_logpdf(1.0 - np.asarray(x, dtype=float), np.asarray(y, dtype=float), a1, a2, a3)


# ---------------------------------------------------------------------------
# Closure under complementation
# ---------------------------------------------------------------------------

# AN8 index permutations induced by V -> 1/V (complement x) and W -> 1/W
# (complement y).  Each U_i occupies one membership slot
# (V-side, W-side) in {num, den, none}^2:
#   1:(num,-) 2:(-,num) 3:(den,-) 4:(-,den) 5:(num,num) 6:(den,den)
#   7:(num,den) 8:(den,num)
# Inverting V swaps the V-side role, inverting W the W-side role; the new
# alpha vector reads each slot's occupant off the swapped table.
_COMP_X_PERM = (2, 1, 0, 3, 7, 6, 5, 4)
_COMP_Y_PERM = (0, 3, 2, 1, 6, 7, 4, 5)
_COMP_BOTH_PERM = (2, 3, 0, 1, 5, 4, 7, 6)

_AN8_PERMS = {"x": _COMP_X_PERM, "y": _COMP_Y_PERM, "both": _COMP_BOTH_PERM}

# Nonzero-slot patterns of the OL embeddings inside AN8 (0-indexed):
#   OL+(a,b,c) -> (a, b, 0, 0, 0, c, 0, 0)
#   OL-(a,b,c) -> (a, 0, 0, b, 0, 0, 0, c)
#   OL*(a,b,c) -> (0, 0, a, b, c, 0, 0, 0)
_OL_EMBED_SLOTS = {
    OL_PLUS: (0, 1, 5),
    OL_MINUS: (0, 3, 7),
    OL_STAR: (2, 3, 4),
}

# Direct variant relabelings: complementing these coordinates of the key
# variant lands exactly on another OL variant with the same alphas.
_OL_RELABEL = {
    (OL_PLUS, "y"): OL_MINUS,
    (OL_PLUS, "both"): OL_STAR,
    (OL_MINUS, "y"): OL_PLUS,
    (OL_MINUS, "x"): OL_STAR,
    (OL_STAR, "x"): OL_MINUS,
    (OL_STAR, "both"): OL_PLUS,
}


def an8_embedding(family: FamilySpec) -> FamilySpec:
    """The AN8 spec equal in law to an OL variant (or an AN8 passed through)."""
    if family.variant == AN8:
        return family
    if family.variant not in OL_VARIANTS:
        raise ValueError(f"no AN8 embedding for variant {family.variant}")
    vec = [0.0] * 8
    for slot, value in zip(_OL_EMBED_SLOTS[family.variant], family.alphas):
        vec[slot] = value
    return FamilySpec(AN8, tuple(vec))


def _lower_an8(alphas: Tuple[float, ...]) -> Optional[FamilySpec]:
    """Recognize an AN8 vector as an OL embedding and return the OL spec."""
    support = tuple(i for i, a in enumerate(alphas) if a != 0.0)
    for variant, slots in _OL_EMBED_SLOTS.items():
        if support == slots:
            return FamilySpec(variant, tuple(alphas[i] for i in slots))
    return None


def complement(family: FamilySpec, which: str) -> FamilySpec:
    """The FamilySpec whose law is that of the complemented pair.

    ``which`` selects the complemented coordinate(s): "x", "y" or "both".
    OL variants relabel in place where the three-variant taxonomy allows it;
    the remaining OL cases (the (1-X, Y)-type laws, which are not OL
    variants in this coordinate convention) go through the AN8 embedding,
    which is closed under every complementation.  AN8 results that match an
    OL embedding pattern are lowered back, so double complementation is an
    exact involution.  AN5 is not closed and raises.
    """
    if which not in ("x", "y", "both"):
        raise ValueError(f"which must be 'x', 'y' or 'both', got {which!r}")
    v = family.variant
    if v == AN5:
        raise NotClosedError("the AN5 family is not closed under complementation")
    if v == INDEPENDENT:
        bx = family.beta_x.swapped() if which in ("x", "both") else family.beta_x
        by = family.beta_y.swapped() if which in ("y", "both") else family.beta_y
        return FamilySpec.independent(bx, by)
    if v in OL_VARIANTS:
        target = _OL_RELABEL.get((v, which))
        if target is not None:
            return FamilySpec(target, family.alphas)
        return complement(an8_embedding(family), which)
    permuted = tuple(family.alphas[i] for i in _AN8_PERMS[which])
    lowered = _lower_an8(permuted)
    return lowered if lowered is not None else FamilySpec(AN8, permuted)
