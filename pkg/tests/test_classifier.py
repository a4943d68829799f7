import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from misinfonet.classifier import (
    InsufficientSupportError,
    POISSON,
    POWER_LAW,
    classify,
    expected_features,
    fit_poisson,
    fit_power_law,
)
from misinfonet.generators import GeneratorParams, gen_barabasi_albert, gen_erdos_renyi, gen_watts_strogatz
from misinfonet.graph import DegreeHistogram, Graph, GraphError, degree_histogram


def power_law_histogram(alpha=3.0, kmax=100, nodes=10**6, kmin=1):
    k = np.arange(kmin, kmax + 1)
    pmf = k ** -alpha / np.sum(k ** -alpha)
    return DegreeHistogram.from_counts(dict(zip(k.tolist(), np.rint(nodes * pmf).astype(int).tolist())))


def poisson_histogram(lam=10.0, nodes=10**6, kmax=60):
    counts = {k: round(nodes * math.exp(-lam) * lam**k / math.factorial(k)) for k in range(kmax + 1)}
    return DegreeHistogram.from_counts(counts)


histograms = st.dictionaries(st.integers(1, 60), st.integers(1, 500), min_size=3, max_size=25).map(
    DegreeHistogram.from_counts
)


class TestPowerLawFit:
    def test_recovers_exponent_three(self):
        fit = fit_power_law(power_law_histogram(3.0), k_min=1)
        assert fit.model == POWER_LAW
        assert fit.alpha == pytest.approx(3.0, abs=0.1)
        assert fit.delta < 0.02

    def test_analytic_histogram_delta_tiny(self):
        assert fit_power_law(power_law_histogram(2.5, kmax=200), k_min=1).delta < 1e-3

    def test_single_degree_is_insufficient(self):
        with pytest.raises(InsufficientSupportError):
            fit_power_law(DegreeHistogram.from_counts({10: 1000}))

    def test_k_min_excludes_low_degrees(self):
        h = DegreeHistogram.from_counts({1: 500, 2: 10, 3: 5})
        with pytest.raises(InsufficientSupportError):
            fit_power_law(h, k_min=2)

    @pytest.mark.slow
    def test_barabasi_albert_exponent(self):
        for seed in range(5):
            fit = fit_power_law(degree_histogram(gen_barabasi_albert(10000, 3, seed)), k_min=3)
            assert 2.3 <= fit.alpha <= 3.5

    @given(histograms, st.integers(2, 50))
    def test_scale_invariant(self, hist, factor):
        scaled = DegreeHistogram.from_counts({k: c * factor for k, c in hist.counts.items()})
        a, b = fit_power_law(hist, 1), fit_power_law(scaled, 1)
        assert b.alpha == pytest.approx(a.alpha, rel=1e-9, abs=1e-9)
        assert b.delta == pytest.approx(a.delta, rel=1e-9, abs=1e-12)

    @given(histograms)
    def test_delta_in_unit_interval(self, hist):
        assert 0.0 <= fit_power_law(hist, 1).delta <= 1.0
        assert 0.0 <= fit_poisson(hist, 0).delta <= 1.0


class TestPoissonFit:
    def test_pmf_value_at_ten(self):
        assert math.exp(-10) * 10**10 / math.factorial(10) == pytest.approx(0.12511, abs=5e-6)

    def test_recovers_lambda(self):
        fit = fit_poisson(poisson_histogram(10.0))
        assert fit.model == POISSON
        assert fit.lam == pytest.approx(10.0, abs=0.1)
        assert fit.delta < 0.01

    def test_all_isolated(self):
        fit = fit_poisson(DegreeHistogram.from_counts({0: 100}))
        assert fit.lam == 0.0
        assert fit.delta == 0.0

    def test_empty_histogram(self):
        with pytest.raises(GraphError):
            fit_poisson(DegreeHistogram.from_counts({}))

    def test_truncated_support_uses_mean_above_k_min(self):
        # mean of Poisson(3) conditioned on k >= 1 is 3 / (1 - e^-3)
        fit = fit_poisson(poisson_histogram(3.0), 1)
        assert fit.k_min == 1
        assert fit.lam == pytest.approx(3 / (1 - math.exp(-3)), abs=1e-4)

    @pytest.mark.slow
    def test_erdos_renyi_prefers_poisson(self):
        for seed in range(5):
            h = degree_histogram(gen_erdos_renyi(10000, 10 / 9999, seed))
            assert fit_poisson(h).delta < fit_power_law(h).delta


class TestExpectedFeatures:
    def test_erdos_renyi(self):
        ft = expected_features("erdos-renyi", 1000, GeneratorParams("erdos-renyi", 1000, p=10 / 999))
        assert ft.expected_edges == pytest.approx(5000)
        assert ft.expected_path_length == pytest.approx(3.0)
        assert ft.expected_clustering == pytest.approx(0.01)

    def test_barabasi_albert_edges(self):
        ft = expected_features("barabasi-albert", 1000, GeneratorParams("barabasi-albert", 1000, m=2))
        assert ft.expected_edges == 1998

    def test_watts_strogatz(self):
        ft = expected_features("watts-strogatz", 1000, GeneratorParams("watts-strogatz", 1000, p=0.1, k=10))
        assert ft.expected_edges == 5000
        assert ft.expected_path_length == pytest.approx(3.0)

    @pytest.mark.parametrize(
        "alpha, m, want",
        [
            (3.5, 2, math.log(1000)),
            (3.0, 2, math.log(1000) / math.log(math.log(1000))),
            (None, 2, math.log(1000) / math.log(math.log(1000))),
            (2.5, 2, math.log(math.log(1000))),
            (2.5, 1, math.log(1000)),
        ],
    )
    def test_barabasi_albert_path_regimes(self, alpha, m, want):
        ft = expected_features("barabasi-albert", 1000, GeneratorParams("barabasi-albert", 1000, m=m), alpha=alpha)
        assert ft.expected_path_length == pytest.approx(want)

    def test_barabasi_albert_clustering(self):
        ft = expected_features("barabasi-albert", 1000, GeneratorParams("barabasi-albert", 1000, m=2))
        assert ft.expected_clustering == pytest.approx(5 * (2 * 1998 / 1000) / 1000)

    def test_mismatched_kind(self):
        with pytest.raises(GraphError):
            expected_features("erdos-renyi", 1000, GeneratorParams("barabasi-albert", 1000, m=2))

    def test_pure(self):
        args = ("watts-strogatz", 500, GeneratorParams("watts-strogatz", 500, p=0.1, k=4))
        assert expected_features(*args) == expected_features(*args)


class TestClassify:
    def test_too_small(self):
        rep = classify(Graph.from_edges(3, [(0, 1), (1, 2)]))
        assert rep.label == "unclassified"
        assert "too few nodes" in rep.reason

    def test_no_edges(self):
        rep = classify(Graph.from_edges(200, []))
        assert rep.label == "unclassified"

    def test_regular_lattice_is_small_world(self):
        # one distinct degree: no power-law fit, Poisson wins by default
        rep = classify(gen_watts_strogatz(500, 10, 0.0, seed=0))
        assert rep.power_fit is None
        assert rep.label == "small-world"

    def test_deterministic(self):
        g = gen_barabasi_albert(1500, 3, seed=2)
        assert classify(g).to_json() == classify(g).to_json()

    def test_report_serializations(self):
        rep = classify(gen_erdos_renyi(400, 0.03, seed=5))
        data = json.loads(rep.to_json())
        assert data["label"] == rep.label
        assert {"power_fit", "poisson_fit", "clustering_ratio", "clustering", "path_length"} <= set(data)
        lines = dict(line.split(": ", 1) for line in rep.to_text().splitlines())
        assert lines["label"] == rep.label
        assert float(lines["poisson_fit.lam"]) == pytest.approx(rep.poisson_fit.lam)

    def test_label_follows_rule(self):
        # the label can be recomputed from the two recorded features alone
        for g in (gen_barabasi_albert(2000, 3, 1), gen_erdos_renyi(2000, 0.005, 1), gen_watts_strogatz(2000, 8, 0.02, 1)):
            rep = classify(g)
            power, poisson = rep.power_fit, rep.poisson_fit
            if power is not None and power.alpha > 1 and power.delta < poisson.delta:
                want = "scale-free" if power.delta <= 0.15 else "unclassified"
            elif rep.clustering_ratio >= 10:
                want = "small-world"
            else:
                want = "random" if poisson.delta <= 0.15 else "unclassified"
            assert rep.label == want

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "make, label",
        [
            (lambda s: gen_barabasi_albert(10000, 3, s), "scale-free"),
            (lambda s: gen_erdos_renyi(10000, 10 / 9999, s), "random"),
            (lambda s: gen_watts_strogatz(10000, 10, 0.01, s), "small-world"),
        ],
        ids=["ba", "er", "ws"],
    )
    def test_reference_graphs(self, make, label):
        assert classify(make(100)).label == label
