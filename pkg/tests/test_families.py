"""Family specs, closed-form OL densities, and closure under complementation."""

import warnings

import numpy as np
import pytest
from scipy import integrate

from bibeta.families import (
    AN5,
    AN8,
    FamilySpec,
    NotClosedError,
    an8_embedding,
    closed_form_logpdf,
    complement,
    marginal_params,
    ol_minus_pdf,
    ol_plus_pdf,
    ol_star_pdf,
)
from bibeta.sampling import RngState, estimate_moments, sample_pairs
from bibeta.special import BetaParams, beta_pdf

ALPHA_SETS_3 = [(1.0, 1.0, 1.0), (3.0, 1.0, 1.0), (10.0, 2.5, 5.0)]


def quad_unit_square(pdf, **kwargs):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.dblquad(lambda y, x: pdf(x, y), 0.0, 1.0, 0.0, 1.0, **kwargs)
    return val


class TestFamilySpec:
    def test_variant_length_agreement(self):
        with pytest.raises(ValueError):
            FamilySpec("ol-plus", (1.0, 2.0))
        with pytest.raises(ValueError):
            FamilySpec("an5", (1.0, 2.0, 3.0))
        with pytest.raises(ValueError):
            FamilySpec("nope", (1.0, 2.0, 3.0))

    def test_ol_needs_positive_alphas(self):
        with pytest.raises(ValueError):
            FamilySpec.ol_plus(1.0, 0.0, 1.0)

    def test_an5_allows_zeros_with_positive_marginals(self):
        spec = FamilySpec.an5(0.0, 0.0, 1.0, 1.0, 1.0)  # the Dirichlet reduction
        mx, my = marginal_params(spec)
        assert mx == BetaParams(1.0, 2.0)
        assert my == BetaParams(1.0, 2.0)

    def test_an5_rejects_degenerate_marginal(self):
        with pytest.raises(ValueError):
            FamilySpec.an5(0.0, 1.0, 0.0, 1.0, 0.0)  # x numerator shape would be 0

    def test_independent_needs_two_marginals(self):
        with pytest.raises(ValueError):
            FamilySpec("indep", (1.0, 2.0, 3.0))
        spec = FamilySpec.independent(BetaParams(2, 3), BetaParams(1, 1))
        assert marginal_params(spec) == (BetaParams(2, 3), BetaParams(1, 1))


class TestMarginalParams:
    def test_ol_minus_screening_prior(self):
        mx, my = marginal_params(FamilySpec.ol_minus(10, 2.5, 5))
        assert mx == BetaParams(10, 5)
        assert my == BetaParams(5, 2.5)

    def test_an5_symmetric_survivability_prior(self):
        mx, my = marginal_params(FamilySpec.an5(10, 10, 0.1, 0.1, 10))
        assert mx == BetaParams(10.1, 10.1)
        assert my == BetaParams(10.1, 10.1)

    def test_ol_star_swaps_both(self):
        a, b, c = 4.0, 2.0, 7.0
        mx, my = marginal_params(FamilySpec.ol_star(a, b, c))
        assert mx == BetaParams(c, a)
        assert my == BetaParams(c, b)

    def test_an8_reads_off_ratio_memberships(self):
        a = (1.0, 2.0, 3.0, 0.5, 1.5, 2.5, 0.7, 1.2)
        mx, my = marginal_params(FamilySpec.an8(*a))
        assert mx == BetaParams(1.0 + 1.5 + 0.7, 3.0 + 2.5 + 1.2)
        assert my == BetaParams(2.0 + 1.5 + 1.2, 0.5 + 2.5 + 0.7)


class TestOlDensities:
    def test_symmetric_point_value(self):
        # alpha=(1,1,1): 2 * eta(1-eta) style terms collapse to
        # 2 * 0.5 * 0.5 / 0.75^3 = 32/27; normalization pinned below
        assert ol_minus_pdf(0.5, 0.5, (1, 1, 1)) == pytest.approx(32.0 / 27.0, rel=1e-12)

    def test_plus_is_minus_with_complemented_theta(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            x, y = rng.uniform(0.01, 0.99, size=2)
            assert ol_plus_pdf(x, y, (10, 2.5, 5)) == ol_minus_pdf(x, 1.0 - y, (10, 2.5, 5))

    def test_star_is_plus_of_complemented_pair(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            x, y = rng.uniform(0.01, 0.99, size=2)
            assert ol_star_pdf(x, y, (3, 1, 1)) == ol_plus_pdf(1.0 - x, 1.0 - y, (3, 1, 1))

    @pytest.mark.parametrize("alphas", ALPHA_SETS_3)
    @pytest.mark.parametrize("pdf", [ol_minus_pdf, ol_plus_pdf, ol_star_pdf])
    def test_normalization(self, pdf, alphas):
        val = quad_unit_square(lambda x, y: pdf(x, y, alphas))
        assert val == pytest.approx(1.0, abs=1e-6)

    def test_minus_marginal_is_beta(self):
        """Integrating theta out of the joint recovers the B(10, 5) marginal."""
        alphas = (10.0, 2.5, 5.0)
        for eta in (0.2, 0.5, 0.8):
            val, _ = integrate.quad(lambda t: ol_minus_pdf(eta, t, alphas), 0.0, 1.0, limit=200)
            assert val == pytest.approx(beta_pdf(eta, BetaParams(10, 5)), abs=1e-4)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            ol_minus_pdf(0.0, 0.5, (1, 1, 1))
        with pytest.raises(ValueError):
            ol_minus_pdf(0.5, 1.0, (1, 1, 1))
        with pytest.raises(ValueError):
            ol_minus_pdf(0.5, 0.5, (1, 1))
        with pytest.raises(ValueError):
            ol_minus_pdf(0.5, 0.5, (1, 0, 1))

    def test_closed_form_logpdf_matches_scalar_api(self):
        x = np.array([0.2, 0.6])
        y = np.array([0.3, 0.9])
        spec = FamilySpec.ol_star(3, 1, 1)
        vec = np.exp(closed_form_logpdf(spec, x, y))
        for i in range(2):
            assert vec[i] == pytest.approx(ol_star_pdf(x[i], y[i], (3, 1, 1)), rel=1e-14)

    def test_closed_form_logpdf_rejects_an5(self):
        with pytest.raises(ValueError):
            closed_form_logpdf(FamilySpec.an5(1, 1, 1, 1, 1), 0.5, 0.5)


def law_distance_ok(x1, y1, x2, y2, n):
    """Moment-based equality-in-law oracle at four combined standard errors."""
    checks = []
    for a, b in ((x1, x2), (y1, y2)):
        se = np.sqrt((a.var() + b.var()) / n)
        checks.append(abs(a.mean() - b.mean()) <= 4 * se)
        se2 = np.sqrt(((a - a.mean()) ** 2).var() / n + ((b - b.mean()) ** 2).var() / n)
        checks.append(abs(a.var() - b.var()) <= 4 * se2)
    r1 = np.corrcoef(x1, y1)[0, 1]
    r2 = np.corrcoef(x2, y2)[0, 1]
    se_r = np.sqrt((1 - r1**2) ** 2 + (1 - r2**2) ** 2) / np.sqrt(n)
    checks.append(abs(r1 - r2) <= 4 * se_r)
    return all(checks)


class TestComplement:
    def test_ol_plus_y_is_ol_minus(self):
        spec = FamilySpec.ol_plus(10, 2.5, 5)
        assert complement(spec, "y") == FamilySpec.ol_minus(10, 2.5, 5)

    def test_relabel_table(self):
        a = (3.0, 1.0, 2.0)
        assert complement(FamilySpec.ol_plus(*a), "both") == FamilySpec.ol_star(*a)
        assert complement(FamilySpec.ol_minus(*a), "y") == FamilySpec.ol_plus(*a)
        assert complement(FamilySpec.ol_minus(*a), "x") == FamilySpec.ol_star(*a)
        assert complement(FamilySpec.ol_star(*a), "x") == FamilySpec.ol_minus(*a)
        assert complement(FamilySpec.ol_star(*a), "both") == FamilySpec.ol_plus(*a)

    def test_unrepresentable_cases_fall_back_to_an8(self):
        spec = complement(FamilySpec.ol_plus(1, 2, 3), "x")
        assert spec.variant == AN8
        mx, my = marginal_params(spec)
        assert mx == BetaParams(3, 1)  # 1-X of X ~ B(1, 3)
        assert my == BetaParams(2, 3)

    @pytest.mark.parametrize("which", ["x", "y", "both"])
    @pytest.mark.parametrize(
        "spec",
        [
            FamilySpec.ol_plus(1.0, 2.0, 3.0),
            FamilySpec.ol_minus(10.0, 2.5, 5.0),
            FamilySpec.ol_star(3.0, 1.0, 1.0),
            FamilySpec.an8(1.0, 2.0, 3.0, 0.5, 1.5, 2.5, 0.7, 1.2),
            FamilySpec.independent(BetaParams(2, 3), BetaParams(1, 4)),
        ],
    )
    def test_involution(self, spec, which):
        assert complement(complement(spec, which), which) == spec

    def test_an5_not_closed(self):
        with pytest.raises(NotClosedError):
            complement(FamilySpec.an5(1, 1, 1, 1, 1), "y")

    def test_independent_swaps_affected_marginal(self):
        spec = FamilySpec.independent(BetaParams(2, 3), BetaParams(1, 4))
        assert complement(spec, "x") == FamilySpec.independent(BetaParams(3, 2), BetaParams(1, 4))
        assert complement(spec, "both") == FamilySpec.independent(
            BetaParams(3, 2), BetaParams(4, 1)
        )

    @pytest.mark.parametrize("which", ["x", "y", "both"])
    def test_an8_complement_equality_in_law(self, which):
        """Complemented samples of the original match samples of the returned spec."""
        n = 400_000
        spec = FamilySpec.an8(1.0, 2.0, 3.0, 0.5, 1.5, 2.5, 0.7, 1.2)
        x, y = sample_pairs(RngState(101), spec, n)
        if which in ("x", "both"):
            x = 1.0 - x
        if which in ("y", "both"):
            y = 1.0 - y
        flipped = complement(spec, which)
        x2, y2 = sample_pairs(RngState(102), flipped, n)
        assert law_distance_ok(x, y, x2, y2, n)

    def test_an8_reductions_match_ol_laws(self):
        """Zeroing the right AN8 slots reproduces each OL variant's law."""
        n = 400_000
        triple = (2.0, 3.0, 1.5)
        targets = [
            FamilySpec.ol_plus(*triple),
            FamilySpec.ol_minus(*triple),
            FamilySpec.ol_star(*triple),
        ]
        for i, target in enumerate(targets):
            embedded = an8_embedding(target)
            assert marginal_params(embedded) == marginal_params(target)
            x, y = sample_pairs(RngState(110 + i), target, n)
            x2, y2 = sample_pairs(RngState(120 + i), embedded, n)
            assert law_distance_ok(x, y, x2, y2, n)

    def test_correlation_sign_flips_once_per_coordinate(self):
        spec = FamilySpec.ol_plus(3, 3, 1)
        base = estimate_moments(spec, 200_000, RngState(131)).correlation
        comp = estimate_moments(complement(spec, "y"), 200_000, RngState(132)).correlation
        both = estimate_moments(complement(spec, "both"), 200_000, RngState(133)).correlation
        assert base > 0 and comp < 0 and both > 0
        assert abs(base + comp) < 0.01
        assert abs(base - both) < 0.01
