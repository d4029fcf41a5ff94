import numpy as np
import pytest
from scipy.stats import binomtest

from strongldd.clustering import Clustering
from strongldd.generators import generate
from strongldd.graph import WeightedGraph
from strongldd.verify import (RunStats, audit_clustering, ci_cut_rate, cut_rates_csv,
                              strong_diameter, wilson_interval)


def clique(n):
    return WeightedGraph(n, [(a, b, 1.0) for a in range(n) for b in range(a + 1, n)])


def test_valid_single_cluster():
    g = clique(5)
    c = Clustering.empty(5, range(5))
    c.add(range(5), center=0)
    assert audit_clustering(g, c, expect_total=True, diameter_bound=1).violations == []


def test_split_off_node_fails_only_totality():
    g = clique(5)
    c = Clustering.empty(5, range(5))
    c.add(range(4), center=0)
    rep = audit_clustering(g, c, expect_total=True, diameter_bound=1)
    assert [v["kind"] for v in rep.violations] == ["not_total"]
    assert audit_clustering(g, c, expect_total=False, diameter_bound=1).ok


def test_disconnected_and_too_wide_clusters_reported():
    g = generate("path", 6)
    c = Clustering.empty(6, range(6))
    c.add([0, 2])
    c.add([3, 4, 5])
    kinds = [v["kind"] for v in audit_clustering(g, c, diameter_bound=1).violations]
    assert kinds == ["disconnected", "diameter"]


def test_strong_diameter_samples_large_clusters():
    g = generate("path", 600)
    d, exact = strong_diameter(g, range(600))
    assert not exact and d <= 599
    assert strong_diameter(g, range(10)) == (9.0, True)


@pytest.mark.parametrize("k,n", [(0, 1000), (250, 1000), (1000, 1000), (7, 40)])
def test_wilson_matches_scipy(k, n):
    ci = binomtest(k, n).proportion_ci(0.95, method="wilson")
    assert wilson_interval(k, n) == pytest.approx((ci.low, ci.high), abs=1e-12)


def test_wilson_reference_values():
    assert wilson_interval(0, 1000)[1] == pytest.approx(0.0038, abs=1e-4)
    lo, hi = wilson_interval(250, 1000)
    assert lo == pytest.approx(0.224, abs=1e-3) and hi == pytest.approx(0.278, abs=1e-3)
    assert wilson_interval(1000, 1000)[0] > 0.99


def test_ci_needs_enough_trials():
    stats = RunStats(np.array([3]), 20)
    with pytest.raises(ValueError):
        ci_cut_rate(stats, 0)
    with pytest.raises(ValueError):
        RunStats(np.array([21]), 20)


def test_csv_has_one_row_per_edge():
    g = generate("path", 5)
    text = cut_rates_csv(g, RunStats(np.array([0, 1, 2, 3]), 40))
    lines = text.splitlines()
    assert len(lines) == 5 and lines[0].startswith("schema_version,edge")
    assert lines[2].split(",")[5:8] == ["1", "40", "0.025000"]
