"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py`` to get the PASS/FAIL table in the
terminal summary.
"""
import filecmp
import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from misinfonet.classifier import classify
from misinfonet.cli import main
from misinfonet.epidemic import EpidemicParams, simulate_sir
from misinfonet.generators import (
    ba_edge_count,
    gen_barabasi_albert,
    gen_erdos_renyi,
    gen_erdos_renyi_mean_degree,
    gen_watts_strogatz,
)
from misinfonet.graph import Graph, average_clustering, average_clustering_exact, average_path_length
from misinfonet.immunization import CLUSTER, NONE, RANDOM, compare_immunization
from misinfonet.percolation import high_clustering_cluster

from oracles import average_clustering_by_pairs, percolation_by_brute_force, random_small_graph

SEEDS = [101, 202, 303, 404, 505]


def test_01_conservation(criterion):
    rng = np.random.default_rng(1)
    runs = violations = 0
    for run in range(1000):
        n = int(rng.integers(2, 501))
        g = gen_erdos_renyi(n, float(rng.uniform(0.0, min(1.0, 8.0 / n))), seed=run)
        order = rng.permutation(n)
        k = int(rng.integers(1, max(2, n // 20)))
        imm = int(rng.integers(0, n // 4 + 1))
        p = EpidemicParams(float(rng.random()), float(rng.random()), frozenset(order[:k].tolist()),
                           frozenset(order[k:k + imm].tolist()), int(rng.integers(1, 200)), run)
        steps = simulate_sir(g, p).steps
        violations += int(np.count_nonzero(steps[:, 1:].sum(axis=1) != n))
        runs += 1
    criterion(1, "S+I+R = N at every step", violations == 0, f"{runs} runs, {violations} violations")


def test_02_hand_trace(criterion):
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    tr = simulate_sir(g, EpidemicParams(1.0, 1.0, frozenset([0])))
    want = [[0, 2, 1, 0], [1, 1, 1, 1], [2, 0, 1, 2], [3, 0, 0, 3]]
    ok = tr.steps.tolist() == want and tr.infections.tolist() == [[1, 0, 1], [2, 1, 2]]
    criterion(2, "deterministic SIR hand trace on a-b-c", ok, f"steps={tr.steps.tolist()}")


def test_03_clustering_oracle(criterion):
    rng = np.random.default_rng(3)
    mismatches = worst = 0
    for _ in range(1000):
        n, edges = random_small_graph(rng)
        g = Graph.from_edges(n, [tuple(e) for e in edges])
        want = average_clustering_by_pairs(n, edges)
        if average_clustering_exact(g) != want:
            mismatches += 1
        worst = max(worst, abs(average_clustering(g) - float(want)))
    ok = mismatches == 0 and worst < 1e-12
    criterion(3, "average clustering equals brute force (1000 graphs)", ok,
              f"exact mismatches={mismatches}, max float diff={worst:.1e}")


def test_04_classifier_ba(criterion):
    labels, alphas, times = [], [], []
    for seed in SEEDS:
        t0 = time.perf_counter()
        rep = classify(gen_barabasi_albert(10000, 3, seed))
        times.append(time.perf_counter() - t0)
        labels.append(rep.label)
        alphas.append(rep.power_fit.alpha)
    ok = labels.count("scale-free") == 5 and all(2.3 <= a <= 3.5 for a in alphas) and max(times) < 60
    criterion(4, "BA(10000,3) classified scale-free", ok,
              f"labels={labels}, alpha={[round(a, 3) for a in alphas]}, max time={max(times):.1f}s")


def test_05_classifier_er(criterion):
    labels, ratios = [], []
    for seed in SEEDS:
        g = gen_erdos_renyi_mean_degree(10000, 10, seed)
        rep = classify(g)
        labels.append(rep.label)
        ratios.append(rep.clustering / (10 / 10000))
    ok = labels.count("random") >= 4 and all(0.5 <= r <= 2 for r in ratios)
    criterion(5, "ER(10000,<k>=10) classified random", ok,
              f"labels={labels}, C/(<k>/N)={[round(r, 3) for r in ratios]}")


def test_06_classifier_ws(criterion):
    labels, ratios = [], []
    for seed in SEEDS:
        rep = classify(gen_watts_strogatz(10000, 10, 0.01, seed))
        labels.append(rep.label)
        ratios.append(rep.clustering / (rep.mean_degree / rep.n))
    lattice = average_clustering(gen_watts_strogatz(10000, 10, 0.0, 0))
    ok = labels.count("small-world") == 5 and all(r >= 10 for r in ratios) and abs(lattice - 2 / 3) < 1e-9
    criterion(6, "WS(10000,10,0.01) classified small-world", ok,
              f"labels={labels}, min C/(<k>/N)={min(ratios):.1f}, lattice C={lattice!r}")


def test_07_path_length(criterion):
    target = math.log(1000) / math.log(10)
    lengths = [average_path_length(gen_erdos_renyi_mean_degree(1000, 10, s))[0] for s in SEEDS]
    ok = all(abs(l - target) <= 0.3 * target for l in lengths)
    criterion(7, "ER(1000,<k>=10) path length within 30% of ln N / ln <k>", ok,
              f"target={target:.3f}, measured={[round(l, 3) for l in lengths]}")


def test_08_edge_counts(criterion):
    ws = [gen_watts_strogatz(1000, 10, p, s).edge_count for p in (0.0, 0.01, 0.5, 1.0) for s in SEEDS[:2]]
    pairs, p = 1000 * 999 // 2, 10 / 999
    mean, sd = pairs * p, math.sqrt(pairs * p * (1 - p))
    er = [gen_erdos_renyi(1000, p, s).edge_count for s in SEEDS]
    ba_ok, deviations = True, []
    for n, m in [(1000, 1), (1000, 2), (5000, 3), (10000, 3)]:
        got = gen_barabasi_albert(n, m, SEEDS[0]).edge_count
        ba_ok &= got == ba_edge_count(n, m) == m * (n - m - 1) + m * (m + 1) // 2
        deviations.append(f"BA({n},{m})={got} vs m(N-1)={m * (n - 1)} (diff {got - m * (n - 1)})")
    ok = all(e == 5000 for e in ws) and all(abs(e - mean) <= 4 * sd for e in er) and ba_ok
    criterion(8, "edge-count formulas", ok,
              f"WS all 5000={all(e == 5000 for e in ws)}, ER={er} (mean {mean:.0f}, sd {sd:.1f}); "
              + "; ".join(deviations))


def test_09_percolation_oracle(criterion):
    rng = np.random.default_rng(9)
    mismatches = 0
    for _ in range(1000):
        n, edges = random_small_graph(rng)
        g = Graph.from_edges(n, [tuple(e) for e in edges])
        theta = Fraction(int(rng.integers(0, 13)), 12)
        members, comps = percolation_by_brute_force(n, edges, theta)
        res = high_clustering_cluster(g, float(theta))
        got_comps = sorted(res.component_sizes)
        giant_ok = (not comps and len(res.giant) == 0) or frozenset(res.giant.tolist()) in comps
        if set(res.members.tolist()) != members or got_comps != sorted(len(c) for c in comps) or not giant_ok:
            mismatches += 1
    criterion(9, "percolation cluster equals brute force (1000 graphs)", mismatches == 0, f"mismatches={mismatches}")


def test_10_isolation_claim(criterion):
    g = gen_barabasi_albert(5000, 3, SEEDS[0])
    res = compare_immunization(g, 0.1, 0.2, cluster_fraction=0.05, sources=10, runs=30, seed=SEEDS[1])
    p_cluster = res.pvalue(CLUSTER)
    p_random = res.pvalue(RANDOM)
    ok = res.mean(CLUSTER) < res.mean(NONE) and p_cluster < 0.05
    criterion(10, "percolation-cluster immunization lowers outbreak (Mann-Whitney)", ok,
              f"|cluster|={len(res.cluster)} (theta={res.theta:.4f}), mean none={res.mean(NONE):.1f}, "
              f"cluster={res.mean(CLUSTER):.1f} (p={p_cluster:.2e}), "
              f"random={res.mean(RANDOM):.1f} (p={p_random:.2e}, reported only)")


def test_11_experiment_reproducible(criterion, tmp_path):
    cfg = tmp_path / "experiment.yaml"
    cfg.write_text(
        "graph: barabasi-albert\nn: 2000\nm: 3\n"
        "actions: [classify, histogram, simulate, percolate, immunization-compare]\n"
        "runs: 5\nsources: 3\nmaster_seed: 2024\n",
        encoding="utf-8",
    )
    codes = [main(["experiment", str(cfg), "--output-dir", str(tmp_path / d)]) for d in ("run1", "run2")]
    names = sorted(p.name for p in (tmp_path / "run1").iterdir())
    match, mismatch, errors = filecmp.cmpfiles(tmp_path / "run1", tmp_path / "run2", names, shallow=False)
    ok = codes == [0, 0] and len(names) == 5 and match == names
    criterion(11, "experiment run twice is byte-identical", ok, f"exit codes={codes}, identical files={match}")
