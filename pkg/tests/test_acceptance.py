"""Acceptance criteria, one test each.  Every test logs a PASS/FAIL line.

Runs use the exact backend and seeds 0..N-1 (constants were fitted on a
disjoint block starting at 10_000, see data/fit_constants.py).
"""

import math
import time

import numpy as np
from scipy import stats
from scipy.sparse.csgraph import dijkstra as sp_dijkstra

from strongldd import cli
from strongldd.backbone import build_backbone_clustering, path_net, refine
from strongldd.bbg import blur
from strongldd.generators import generate
from strongldd.graph import WeightedGraph, weighted_diameter
from strongldd.ldc import DriverConfig, build_ldc, build_ldd, measure_cut_rates
from strongldd.oracle import Oracle, approx_set_sssp
from strongldd.padded import pseudo_padded_decompose
from strongldd.sampling import TexpParams, make_rng, pick_uniform, sample_texp
from strongldd.separator import sample_weak_separator, verify_weak_separation
from strongldd.verify import audit_backbone, audit_clustering, strong_diameter, wilson_interval

from conftest import CRITERIA_LOG, DATA, corpus, floyd_warshall, frozen

CORPUS = corpus()


def report(num, ok, detail):
    line = f"CRITERION {num}: {'PASS' if ok else 'FAIL'} - {detail}"
    CRITERIA_LOG.append(line)
    print(line)
    assert ok, line


def test_criterion_01_padded_strong_diameter():
    D, eps, runs = 4.0, 0.0, 500
    t0 = time.perf_counter()
    violations, worst = 0, 0.0
    for name, (g, _) in CORPUS.items():
        for s in range(runs):
            dec = pseudo_padded_decompose(g, None, range(g.n), D, g.n, eps, None,
                                          make_rng(s, "acc-padded"))
            for members in dec.clusters():
                d, exact = strong_diameter(g, members)
                worst = max(worst, d)
                violations += (not exact) or d > 4 * (1 + eps) * D
    elapsed = time.perf_counter() - t0
    report(1, violations == 0 and elapsed <= 120,
           f"padded strong diameter: {violations} violations, worst {worst:g} <= {4 * D:g}, "
           f"{elapsed:.1f}s")


def test_criterion_02_ldc_diameter_and_clustering_probability():
    D, runs = 4.0, 500
    t0 = time.perf_counter()
    violations, fractions = 0, {}
    for name, (g, _) in CORPUS.items():
        fr = []
        for s in range(runs):
            c = build_ldc(g, None, range(g.n), D, g.n, None, make_rng(s, "acc-ldc"))
            violations += len(audit_clustering(g, c, diameter_bound=8 * D).violations)
            fr.append(c.clustered_fraction())
        fractions[name] = float(np.mean(fr))
    elapsed = time.perf_counter() - t0
    ok = violations == 0 and min(fractions.values()) >= 0.40 and elapsed <= 180
    report(2, ok, f"LDC: {violations} violations of 8D, mean clustered fraction "
                  f"{ {k: round(v, 3) for k, v in fractions.items()} }, {elapsed:.1f}s")


def test_criterion_03_ldd_totality_and_depth():
    D, runs = 16.0, 500
    bad, depth_ok = 0, {}
    for name, (g, _) in CORPUS.items():
        limit = 2 * math.log2(g.n) + 10
        within = 0
        for s in range(runs):
            c = build_ldd(g, None, D, rng=make_rng(s, "acc-ldd"))
            bad += not audit_clustering(g, c, expect_total=True, diameter_bound=D).ok
            within += c.depth <= limit
        depth_ok[name] = within / runs
    report(3, bad == 0 and min(depth_ok.values()) >= 0.99,
           f"LDD: {bad} runs not total/connected/within D, share of runs within depth bound "
           f"{depth_ok}")


def test_criterion_04_cut_rate_scaling():
    g, _ = CORPUS["path64"]
    trials = 2000
    c_fit = frozen("fitted.json")["cut_curve"]
    t0 = time.perf_counter()
    s8 = measure_cut_rates(g, DriverConfig("ldd", 8.0), trials, seed=0)
    s16 = measure_cut_rates(g, DriverConfig("ldd", 16.0), trials, seed=0)
    elapsed = time.perf_counter() - t0
    ratio = s16.rates() / np.maximum(s8.rates(), 1.0 / trials)
    ratio_ok = bool(np.all((ratio >= 0.3) & (ratio <= 0.8)))
    curve = c_fit * math.log2(g.n) * g.lengths / 8.0
    upper = np.array([wilson_interval(int(k), trials)[1] for k in s8.per_edge_cut_count])
    curve_ok = bool(np.all(upper <= 1.5 * curve))
    report(4, ratio_ok and curve_ok and elapsed <= 300,
           f"cut-rate ratio D=16/D=8 in [{ratio.min():.3f}, {ratio.max():.3f}] "
           f"(need [0.3, 0.8]); Wilson upper at D=8 <= 1.5x fitted curve: {curve_ok}; "
           f"{elapsed:.1f}s")


def test_criterion_05_blur_contract():
    g = generate("path", 11)
    rho, trials = 4.0, 10_000
    rng = make_rng(0, "acc-blur")
    hard = 0
    counts = np.zeros(g.m)
    dist_from_seed = np.arange(11, dtype=float)
    for _ in range(trials):
        res = blur(g, None, {0}, rho, None, rng)
        hard += not ({0} <= res.grown) or any(dist_from_seed[v] > 2 * rho for v in res.grown)
        counts[res.cut_edges] += 1
    rates = counts / trials
    expected = np.array([1.0 / rho if i < rho else 0.0 for i in range(g.m)])
    sigma = np.sqrt(expected * (1 - expected) / trials)
    within = np.abs(rates - expected) <= 3 * sigma + 1e-12
    report(5, hard == 0 and bool(within.all()),
           f"blur: {hard} superset/expansion failures; cut rates {np.round(rates[:5], 4)} vs "
           f"{1 / rho} per unit length, all within 3 sigma: {bool(within.all())}")


def test_criterion_06_weak_separator():
    eps, runs = 0.25, 200
    shares, bad_paths = {}, 0
    for name in ("grid64", "tree60", "ktree48"):
        g, k = CORPUS[name]
        D = weighted_diameter(g)
        passed = 0
        for s in range(runs):
            sep = sample_weak_separator(g, None, D, eps, k, Oracle(), make_rng(s, "acc-sep"))
            passed += verify_weak_separation(g, sep.removed, D)[0]
            full = g.to_scipy()
            for path, surround in sep.entries:
                length = sum(g.length(a, b) for a, b in zip(path, path[1:]))
                d = sp_dijkstra(full, directed=False, indices=path, min_only=True)
                bad_paths += length > 4 * D or any(d[u] > eps * D + 1e-9 for u in surround)
        shares[name] = passed / runs
    report(6, bad_paths == 0 and min(shares.values()) >= 0.95,
           f"separator: pass share {shares}, {bad_paths} path/surround violations")


def test_criterion_07_backbone_pseudo_diameter():
    D, runs = 4.0, 200
    violations = 0
    for name, (g, k) in CORPUS.items():
        for s in range(runs):
            bc = build_backbone_clustering(g, None, D, k, Oracle(), make_rng(s, "acc-backbone"),
                                           profile="desk")
            violations += len(audit_backbone(g, bc, D))
            violations += int(np.any(bc.cluster_of[sorted(bc.active)] < 0))
    report(7, violations == 0, f"backbone: {violations} members farther than D={D:g} "
                               f"from their backbone over {runs} runs x {len(CORPUS)} graphs")


def test_criterion_08_refinement_diameter():
    pd, runs = 2.0, 100
    violations, worst = 0, 0.0
    graphs = dict(CORPUS, path128=(generate("path", 128), 1))
    for name, (g, k) in graphs.items():
        for s in range(runs):
            bc = build_backbone_clustering(g, None, pd, k, Oracle(), make_rng(s, "acc-bb"),
                                           profile="desk")
            out = refine(g, bc, Oracle(), make_rng(s, "acc-refine"))
            for cl in out.clusters:
                d, exact = strong_diameter(g, cl.members)
                worst = max(worst, d)
                violations += (not exact) or d > 16 * pd
    report(8, violations == 0, f"refined clusters: {violations} above 16*{pd:g}, worst {worst:g}")


def test_criterion_09_path_nets():
    rng = np.random.default_rng(9)
    failures = 0
    for _ in range(10_000):
        length = int(rng.integers(1, 40))
        weights = rng.uniform(0.05, 10.0, size=length - 1)
        g = WeightedGraph(length, [(i, i + 1, float(w)) for i, w in enumerate(weights)],
                          weight_cap=100.0)
        delta = float(rng.uniform(0.05, 30.0))
        marks = path_net(g, list(range(length)), delta).marks
        pos = np.concatenate([[0.0], np.cumsum(weights)])
        at = pos[marks]
        packing = np.all(np.diff(at) > delta)
        covering = np.all(np.min(np.abs(pos[:, None] - at[None, :]), axis=1) <= delta + 1e-9)
        failures += not (packing and covering)
    report(9, failures == 0, f"nets: {failures} covering/packing failures on 10000 paths")


def test_criterion_10_round_accounting():
    c_round = frozen("fitted.json")["round"]
    ldc_over, ldd_over, sep_off, most = 0, 0, 0, 0
    for name, (g, k) in CORPUS.items():
        bound = 1.5 * c_round * math.log2(g.n) ** 2
        for s in range(100):
            calls = []

            def counted(g_, residual, oracle, rng):
                before = oracle.counters.sssp_calls
                out = build_ldc(g_, residual, residual, 16.0 / 8, g.n, oracle, rng)
                calls.append(oracle.counters.sssp_calls - before)
                return out

            o = Oracle()
            build_ldd(g, None, 16.0, ldc=counted, oracle=o, rng=make_rng(s, "acc-round"))
            most = max(most, max(calls))
            ldc_over += sum(c > 6 for c in calls)
            ldd_over += o.counters.sssp_calls > bound
            o = Oracle()
            sep = sample_weak_separator(g, None, 4.0, 0.25, k, o, make_rng(s, "acc-sepcalls"))
            sep_off += o.counters.sssp_calls != 2 * sep.iterations_run
    report(10, ldc_over == 0 and ldd_over == 0 and sep_off == 0,
           f"rounds: LDC applications over 6 calls {ldc_over} (max {most}), LDD over "
           f"1.5*{c_round:.3f}*log^2 n {ldd_over}, separator runs not at 2 per iteration {sep_off}")


def test_criterion_11_distributions():
    n = 100_000
    crit = stats.kstwo.ppf(0.99, n)
    ks = {}
    for lam in (2.0, 4.0, 2 + 2 * math.log2(64)):
        p = TexpParams(lam)
        x = sample_texp(p, make_rng(int(lam * 10), "acc-texp"), size=n)
        ks[lam] = float(stats.kstest(x, p.cdf).statistic)
    rng = make_rng(0, "acc-pick")
    counts = np.bincount([pick_uniform(range(8), rng) for _ in range(10_000)], minlength=8)
    chi_p = stats.chisquare(counts).pvalue
    ok = all(v < crit for v in ks.values()) and chi_p > 0.01
    report(11, ok, f"KS statistics { {round(k, 2): round(v, 5) for k, v in ks.items()} } "
                   f"vs critical {crit:.5f}; pick chi-square p={chi_p:.3f}")


def test_criterion_12_oracle_soundness():
    mismatches, broken = 0, 0
    graphs = [generate("random", n, seed=n) for n in (1, 2, 5, 13, 32, 64)]
    graphs += [generate("grid", 64), generate("tree", 60, seed=0)]
    for g in graphs:
        fw = floyd_warshall(g)
        for s in range(g.n):
            res = approx_set_sssp(g, None, None, [s], 0.0)
            mismatches += not np.allclose(res.dist, fw[s])
        for eps in (0.01, 0.1):
            o = Oracle("perturbed", seed=g.n)
            for s in range(0, g.n, max(1, g.n // 8)):
                src = {s, (s * 7 + 3) % g.n}
                res = o.sssp(g, src, epsilon=eps)
                exact = fw[sorted(src)].min(axis=0)
                broken += bool(np.any(res.dist < exact - 1e-9))
                broken += bool(np.any(res.dist > (1 + eps) * exact + 1e-9))
                for v in range(g.n):
                    p = res.pred[v]
                    if p >= 0:
                        broken += not math.isclose(res.dist[v], res.dist[p] + g.length(p, v),
                                                   abs_tol=1e-9)
    report(12, mismatches == 0 and broken == 0,
           f"oracle: {mismatches} exact mismatches vs Floyd-Warshall, {broken} perturbed "
           f"invariant failures")


def test_criterion_13_reproducibility(tmp_path):
    results = {}
    for run_dir in sorted((DATA / "runs").iterdir()):
        out = tmp_path / run_dir.name
        code = cli.main(["rerun", str(run_dir / "manifest.json"), "--out", str(out)])
        same = all((out / f.name).read_bytes() == f.read_bytes()
                   for f in run_dir.iterdir() if f.name != "manifest.json")
        results[run_dir.name] = code == 0 and same
    report(13, bool(results) and all(results.values()), f"reruns byte-identical: {results}")
