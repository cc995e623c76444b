import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate as sp_integrate
from scipy import stats

from orderstat.distributions import (
    FAMILIES,
    Exponential,
    Gamma,
    Gumbel,
    Monotone,
    NegatedPareto,
    Normal,
    Pareto,
    Uniform,
    Weibull,
    classify,
    hazard,
    parse_distribution,
    reverse_hazard,
)
from orderstat.errors import DomainError

from conftest import ALL_DISTS

# scipy.stats counterparts used as an independent reference.
SCIPY_TWINS = [
    (Uniform(-2.0, 3.0), stats.uniform(-2.0, 5.0)),
    (Exponential(3.0), stats.expon(scale=1 / 3.0)),
    (Normal(1.5, 2.0), stats.norm(1.5, 2.0)),
    (Weibull(0.5, 2.0), stats.weibull_min(0.5, scale=2.0)),
    (Weibull(2.0, 1.0), stats.weibull_min(2.0)),
    (Gamma(0.5, 1.5), stats.gamma(0.5, scale=1.5)),
    (Gamma(2.0, 1.0), stats.gamma(2.0)),
    (Gumbel(-1.0, 0.5), stats.gumbel_r(-1.0, 0.5)),
    (Pareto(2.0, 3.0), stats.pareto(3.0, scale=2.0)),
    (NegatedPareto(1.0, 0.75), stats.pareto(0.75)),
]


class TestDocumentedValues:
    def test_cdf(self):
        assert Uniform(0, 1).cdf(0.3) == pytest.approx(0.3, abs=1e-15)
        assert Pareto(1, 0.75).cdf(1.0) == 0.0
        assert Exponential(1).cdf(math.log(2)) == pytest.approx(0.5, abs=1e-15)

    def test_pdf(self):
        assert Uniform(0, 1).pdf(0.5) == 1.0
        assert Pareto(1, 0.75).pdf(2.0) == pytest.approx(0.75 * 2**-1.75, rel=1e-14)
        assert Normal(0, 1).pdf(0.0) == pytest.approx(0.3989423, abs=1e-7)

    def test_quantile(self):
        assert Uniform(0, 1).quantile(0.25) == 0.25
        assert Exponential(1).quantile(0.5) == pytest.approx(math.log(2), rel=1e-15)
        assert Pareto(1, 0.75).quantile(0.5) == pytest.approx(2 ** (4 / 3), rel=1e-15)

    def test_hazard(self):
        xs = np.array([0.1, 1.0, 7.0])
        np.testing.assert_allclose(hazard(Exponential(2), xs), 2.0, rtol=1e-14)
        assert hazard(Uniform(0, 1), 0.5) == pytest.approx(2.0)
        np.testing.assert_allclose(hazard(Pareto(1, 0.75), xs + 1), 0.75 / (xs + 1), rtol=1e-14)

    def test_reverse_hazard(self):
        assert reverse_hazard(Uniform(0, 1), 0.25) == pytest.approx(4.0)

    def test_hazard_undefined_points(self):
        with pytest.raises(DomainError):
            hazard(Uniform(0, 1), 1.0)
        with pytest.raises(DomainError):
            reverse_hazard(Exponential(1), 0.0)

    def test_outside_support(self):
        d = Uniform(0, 1)
        assert d.cdf(-1.0) == 0.0 and d.cdf(2.0) == 1.0
        assert d.pdf(-1.0) == 0.0 and d.pdf(2.0) == 0.0
        assert NegatedPareto(1, 0.75).cdf(-0.5) == 1.0
        assert NegatedPareto(1, 0.75).pdf(-0.5) == 0.0

    @pytest.mark.parametrize("u", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_quantile_domain(self, u):
        with pytest.raises(DomainError):
            Exponential(1).quantile(u)


class TestAgainstScipy:
    @pytest.mark.parametrize("ours,ref", SCIPY_TWINS, ids=lambda d: type(d).__name__)
    def test_cdf_pdf_quantile(self, ours, ref):
        if isinstance(ours, NegatedPareto):
            u = np.linspace(0.01, 0.99, 41)
            x = -ref.ppf(1 - u)
            np.testing.assert_allclose(ours.cdf(x), 1 - ref.cdf(-x), rtol=1e-12, atol=1e-15)
            np.testing.assert_allclose(ours.pdf(x), ref.pdf(-x), rtol=1e-12)
            np.testing.assert_allclose(ours.quantile(u), x, rtol=1e-12)
            return
        u = np.linspace(0.01, 0.99, 41)
        x = ref.ppf(u)
        np.testing.assert_allclose(ours.quantile(u), x, rtol=1e-11, atol=1e-14)
        np.testing.assert_allclose(ours.cdf(x), ref.cdf(x), rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(ours.sf(x), ref.sf(x), rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(ours.pdf(x), ref.pdf(x), rtol=1e-12)


class TestInvariants:
    def test_pdf_integrates_to_one(self, any_dist):
        lo, hi = any_dist.support
        mid = float(any_dist.quantile(0.5))
        kw = dict(limit=200, epsabs=1e-13)
        total = sum(
            sp_integrate.quad(any_dist.pdf, a, b, **kw)[0] for a, b in [(lo, mid), (mid, hi)]
        )
        assert total == pytest.approx(1.0, abs=1e-8)

    def test_cdf_nondecreasing_on_grid(self, any_dist):
        u = np.linspace(1e-6, 1 - 1e-6, 2001)
        x = any_dist.quantile(u)
        assert np.all(np.diff(x) >= 0)
        assert np.all(np.diff(any_dist.cdf(x)) >= 0)
        lo, hi = any_dist.support
        assert any_dist.cdf(lo) == 0.0
        assert any_dist.cdf(hi) == 1.0

    def test_sf_complements_cdf(self, any_dist):
        x = any_dist.quantile(np.linspace(0.001, 0.999, 101))
        np.testing.assert_allclose(any_dist.cdf(x) + any_dist.sf(x), 1.0, atol=1e-15)

    def test_isf_resolves_deep_tail(self, any_dist):
        s = np.array([1e-300, 1e-100, 1e-20])
        x = any_dist.isf(s)
        if np.all(np.isfinite(x)) and any_dist.support[1] == math.inf:
            np.testing.assert_allclose(any_dist.sf(x), s, rtol=1e-9)

    @settings(max_examples=200, deadline=None)
    @given(name=st.sampled_from(sorted(ALL_DISTS)), u=st.floats(1e-12, 1 - 1e-12))
    def test_quantile_round_trip(self, name, u):
        d = ALL_DISTS[name]
        assert abs(float(d.cdf(d.quantile(u))) - u) <= 1e-12

    @settings(max_examples=100, deadline=None)
    @given(name=st.sampled_from(sorted(ALL_DISTS)), u=st.floats(1e-6, 1 - 1e-6))
    def test_cdf_then_quantile(self, name, u):
        d = ALL_DISTS[name]
        x = float(d.quantile(u))
        assert float(d.quantile(d.cdf(x))) == pytest.approx(x, rel=1e-9, abs=1e-12)

    def test_quantile_pair_matches_quantile(self, any_dist):
        u = np.linspace(0.05, 0.95, 19)
        np.testing.assert_allclose(any_dist.quantile_pair(u, 1 - u), any_dist.quantile(u), rtol=1e-12, atol=1e-14)

    def test_density_quantile(self, any_dist):
        u = np.linspace(0.05, 0.95, 19)
        np.testing.assert_allclose(
            any_dist.density_quantile(u, 1 - u), any_dist.pdf(any_dist.quantile(u)), rtol=1e-11
        )


class TestValidation:
    @pytest.mark.parametrize(
        "make",
        [
            lambda: Uniform(1, 1),
            lambda: Uniform(2, 1),
            lambda: Exponential(0),
            lambda: Normal(0, -1),
            lambda: Weibull(0, 1),
            lambda: Gamma(1, 0),
            lambda: Gumbel(0, 0),
            lambda: Pareto(0, 1),
            lambda: NegatedPareto(1, 0),
            lambda: Exponential(math.nan),
            lambda: Normal(math.inf, 1),
        ],
    )
    def test_bad_parameters(self, make):
        with pytest.raises(DomainError):
            make()


class TestParse:
    def test_round_trip_every_family(self, any_dist):
        assert parse_distribution(any_dist.spec()) == any_dist

    def test_case_insensitive_and_aliases(self):
        assert parse_distribution("Pareto:A=1,V=0.75") == Pareto(1.0, 0.75)
        assert parse_distribution("negpareto:a=1,v=0.75") == NegatedPareto(1.0, 0.75)
        assert parse_distribution("exp:rate=2") == Exponential(2.0)

    def test_registry_covers_families(self):
        assert set(FAMILIES) >= {
            "uniform", "exponential", "normal", "weibull", "gamma", "gumbel", "pareto", "negatedpareto",
        }

    @pytest.mark.parametrize(
        "text",
        ["cauchy:loc=0", "gumbel:scale=-1", "uniform:lo=0,hi=1,mid=2", "normal:mean=x,stddev=1",
         "normal:mean=0,mean=1,stddev=1", "exponential:rate"],
    )
    def test_rejects(self, text):
        with pytest.raises(DomainError):
            parse_distribution(text)


class TestClassify:
    def test_exponential(self):
        v = classify(Exponential(1))
        assert v.mhr is Monotone.CONSTANT
        assert v.mrhr is Monotone.DECREASING
        assert v.is_mhr and v.is_mrhr

    def test_pareto(self):
        v = classify(Pareto(1, 0.75))
        assert v.mhr is Monotone.DECREASING
        assert not v.is_mhr

    def test_negated_pareto(self):
        v = classify(NegatedPareto(1, 0.75))
        assert v.mrhr is Monotone.INCREASING
        assert not v.is_mrhr

    def test_uniform(self):
        v = classify(Uniform(0, 1))
        assert (v.mhr, v.mrhr) == (Monotone.INCREASING, Monotone.DECREASING)

    def test_log_concave_families_are_both(self, log_concave):
        v = classify(log_concave)
        assert v.is_mhr and v.is_mrhr

    def test_weibull_below_one_is_decreasing_hazard(self):
        assert classify(Weibull(0.5, 1)).mhr is Monotone.DECREASING

    def test_records_grid(self):
        v = classify(Normal(0, 1), grid_size=64, u_margin=0.01)
        assert (v.grid_size, v.u_margin) == (64, 0.01)

    @pytest.mark.parametrize("kw", [dict(grid_size=2), dict(u_margin=0.0), dict(u_margin=0.5)])
    def test_bad_grid(self, kw):
        with pytest.raises(DomainError):
            classify(Normal(0, 1), **kw)
