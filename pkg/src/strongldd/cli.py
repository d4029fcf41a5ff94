"""Command-line front end: generate graphs, run the decompositions, audit and reproduce runs."""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import platform
import sys
import time
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .backbone import build_backbone_clustering, marks_near, refine
from .generators import KINDS, declared_k, generate
from .graph import GraphError, WeightedGraph, weighted_diameter
from .io import read_graph, write_edge_list
from .ldc import DriverConfig, IterationCapError, measure_cut_rates, run_driver
from .oracle import Oracle
from .padded import CoveringError
from .sampling import log2_guard, make_rng
from .separator import sample_weak_separator, verify_weak_separation
from .verify import SCHEMA_VERSION, audit_backbone, audit_clustering, cut_rates_csv, dumps

SEED_ENV = "STRONGLDD_SEED"
EXIT_OK, EXIT_INPUT, EXIT_AUDIT, EXIT_CAP, EXIT_INTERNAL = 0, 2, 3, 4, 5


class InputError(Exception):
    pass


class AuditFailure(Exception):
    pass


# graph loading ------------------------------------------------------------

def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def load_graph(args) -> tuple[WeightedGraph, dict]:
    """The input graph and a manifest entry describing where it came from."""
    if args.graph:
        path = Path(args.graph)
        try:
            data = path.read_bytes()
            g = read_graph(path)
        except OSError as e:
            raise InputError(f"cannot read graph: {e}") from e
        return g, {"path": str(args.graph), "sha256": _sha256(data)}
    if not args.kind or not args.n:
        raise InputError("give --graph FILE or --kind KIND --n N")
    params = {}
    if args.width is not None:
        params["width"] = args.width
    if args.max_weight is not None:
        params["max_weight"] = args.max_weight
    g = generate(args.kind, args.n, seed=args.graph_seed, **params)
    return g, {"kind": args.kind, "n": args.n, "seed": args.graph_seed, "params": params}


def resolve_diameter(args, g: WeightedGraph) -> float:
    if args.diameter is None:
        raise InputError("--diameter is required")
    if args.diameter == "auto":
        d = weighted_diameter(g)
        if not d > 0:
            raise InputError("graph has zero weighted diameter; pass --diameter explicitly")
        return d
    try:
        d = float(args.diameter)
    except ValueError:
        raise InputError(f"--diameter must be a number or 'auto', got {args.diameter!r}") from None
    if not d > 0 or not math.isfinite(d):
        raise InputError("--diameter must be positive")
    return d


def resolve_k(args, g: WeightedGraph, source: dict) -> int:
    if args.k is not None:
        return args.k
    if "kind" in source and source["kind"] != "random":
        return declared_k(source["kind"], **source["params"])
    k = max(1, math.ceil(log2_guard(g.n)))
    print(f"warning: no --k given, assuming k = {k}", file=sys.stderr)
    return k


# outputs -----------------------------------------------------------------

def versions() -> dict:
    return {"strongldd": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


class Outputs:
    """Collects output files and writes them together with the run manifest."""

    def __init__(self, out_dir):
        self.dir = Path(out_dir) if out_dir else None
        self.files: dict[str, str] = {}

    def add(self, name: str, text: str):
        self.files[name] = text

    def write(self, config: dict, counters: dict) -> dict:
        manifest = {
            "schema_version": SCHEMA_VERSION,
            "config": config,
            "counters": counters,
            "versions": versions(),
            "outputs": {name: _sha256(text.encode()) for name, text in sorted(self.files.items())},
        }
        self.files["manifest.json"] = dumps(manifest)
        if self.dir is None:
            return manifest
        self.dir.mkdir(parents=True, exist_ok=True)
        for name, text in self.files.items():
            with open(self.dir / name, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        return manifest


def base_config(args, source: dict) -> dict:
    return {"command": args.command, "graph": source, "seed": args.seed,
            "backend": args.backend}


def _sum_counters(items) -> dict:
    total = {"sssp_calls": 0, "aggregation_passes": 0, "max_recursion_depth": 0}
    for c in items:
        total["sssp_calls"] += c.sssp_calls
        total["aggregation_passes"] += c.aggregation_passes
        total["max_recursion_depth"] = max(total["max_recursion_depth"], c.max_recursion_depth)
    return total


# subcommands ---------------------------------------------------------------

def cmd_gen(args):
    if not args.kind or not args.n:
        raise InputError("gen needs --kind and --n")
    g, _ = load_graph(args)
    if args.out and args.out != "-":
        write_edge_list(g, args.out)
    else:
        buf = io.StringIO()
        write_edge_list(g, buf)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def _clustering_run(args, algorithm: str):
    g, source = load_graph(args)
    d = resolve_diameter(args, g)
    k = resolve_k(args, g, source) if algorithm == "kpath-ldd" else 1
    cfg = DriverConfig(algorithm, d, k, args.profile, args.backend)
    c, counters = run_driver(g, cfg, args.seed, 0)
    stats = measure_cut_rates(g, cfg, args.trials, args.seed, jobs=args.jobs)
    config = base_config(args, source) | cfg.as_dict() | {"diameter_requested": args.diameter,
                                                           "trials": args.trials}
    out = Outputs(args.out)
    body = {"schema_version": SCHEMA_VERSION, "algorithm": algorithm, "diameter": d,
            "clustering": c.as_dict(),
            "clustered_fraction": c.clustered_fraction(),
            "mean_clustered_fraction": float(np.mean(stats.clustered_fraction_per_trial)),
            "max_depth": int(stats.recursion_depth)}
    out.add("clustering.json", dumps(body))
    out.add("cut_rates.csv", cut_rates_csv(g, stats))
    out.write(config, counters.as_dict())
    print(f"{algorithm}: {len(c.clusters)} clusters, {len(c.cut_edges)} cut edges, "
          f"{args.trials} trials")
    return EXIT_OK


def cmd_ldd(args):
    return _clustering_run(args, "ldd")


def cmd_ldc(args):
    return _clustering_run(args, "ldc")


def cmd_kpath(args):
    return _clustering_run(args, "kpath-ldd")


def cmd_separator(args):
    g, source = load_graph(args)
    d = resolve_diameter(args, g)
    k = resolve_k(args, g, source)
    if not 0 < args.epsilon <= 1:
        raise InputError("--epsilon must lie in (0, 1]")
    oracle = Oracle(args.backend, seed=args.seed)
    sep = sample_weak_separator(g, None, d, args.epsilon, k, oracle, make_rng(args.seed, "separator"),
                                track_potential=args.verbose)
    ok, offender = verify_weak_separation(g, sep.removed, d)
    body = {"schema_version": SCHEMA_VERSION, "diameter": d, "epsilon": args.epsilon, "k": k,
            "iterations_run": sep.iterations_run, "verified": ok, "offender": offender,
            "entries": [{"path": [int(v) for v in p], "surround": sorted(int(v) for v in s)}
                        for p, s in sep.entries],
            "removed": sorted(int(v) for v in sep.removed)}
    if args.verbose:
        body["potential"] = sep.potential_trace
    out = Outputs(args.out)
    out.add("separator.json", dumps(body))
    config = base_config(args, source) | {"diameter": d, "diameter_requested": args.diameter,
                                          "epsilon": args.epsilon, "k_declared": k}
    out.write(config, oracle.counters.as_dict())
    print(f"separator: {len(sep.entries)} paths, {len(sep.removed)} nodes removed, verified={ok}")
    return EXIT_OK


def cmd_backbone(args):
    g, source = load_graph(args)
    d = resolve_diameter(args, g)
    k = resolve_k(args, g, source)
    oracle = Oracle(args.backend, seed=args.seed)
    rng = make_rng(args.seed, "backbone")
    bc = build_backbone_clustering(g, None, d, k, oracle, rng, profile=args.profile)
    refined = refine(g, bc, oracle, make_rng(args.seed, "refine"))
    problems = audit_backbone(g, bc)
    rounds = np.array(bc.round_of_cluster + [0])
    owner = bc.cluster_of
    coarse_cut = sum(1 for e in refined.cut_edges
                     if owner[g.edges_u[e]] != owner[g.edges_v[e]])
    body = {"schema_version": SCHEMA_VERSION, "pseudo_diameter": d, "k": k,
            "profile": args.profile, "rounds": bc.rounds, "kappa": bc.kappa,
            "clusters": [{"id": i, "members": sorted(int(v) for v in m),
                          "round": int(rounds[i]),
                          "backbone": [[int(v) for v in p] for p in bc.backbones[i]],
                          "nets": [[int(v) for v in net.marks] for net in refined.info["nets"][i]],
                          "marks_near": marks_near(g, m, [v for net in refined.info["nets"][i]
                                                          for v in net.marks], 12.0 * d)}
                         for i, m in enumerate(bc.members)],
            "refined": refined.as_dict(),
            "cut_attribution": {"between_backbone_clusters": coarse_cut,
                                "inside_backbone_clusters": len(refined.cut_edges) - coarse_cut},
            "audit": problems}
    out = Outputs(args.out)
    out.add("backbone.json", dumps(body))
    config = base_config(args, source) | {"diameter": d, "diameter_requested": args.diameter,
                                          "k_declared": k, "profile": args.profile}
    out.write(config, oracle.counters.as_dict())
    print(f"backbone: {len(bc.members)} clusters, kappa={bc.kappa}, violations={len(problems)}")
    if problems:
        raise AuditFailure(f"{len(problems)} backbone violations")
    return EXIT_OK


def cmd_validate(args):
    g, source = load_graph(args)
    d = resolve_diameter(args, g)
    k = resolve_k(args, g, source) if args.algorithm == "kpath-ldd" else 1
    cfg = DriverConfig(args.algorithm, d, k, args.profile, args.backend)
    bound = 8.0 * d if args.algorithm == "ldc" else d
    total = args.algorithm != "ldc"
    reports, counters = [], []
    for t in range(args.trials):
        c, cnt = run_driver(g, cfg, args.seed, t)
        counters.append(cnt)
        rep = audit_clustering(g, c, expect_total=total, diameter_bound=bound)
        if set(c.cut_edges) != set(c.inter_cluster_edges(g)):
            rep.violations.append({"kind": "cut_edges_mismatch"})
        if not rep.ok:
            reports.append({"trial": t, **rep.as_dict()})
    body = {"schema_version": SCHEMA_VERSION, "algorithm": args.algorithm, "diameter": d,
            "bound": bound, "trials": args.trials, "failed_trials": reports,
            "ok": not reports}
    out = Outputs(args.out)
    out.add("audit.json", dumps(body))
    config = base_config(args, source) | cfg.as_dict() | {"trials": args.trials,
                                                           "diameter_requested": args.diameter}
    out.write(config, _sum_counters(counters))
    print(f"validate {args.algorithm}: {args.trials} trials, {len(reports)} with violations")
    if reports:
        raise AuditFailure(f"{len(reports)} trials violated the audit")
    return EXIT_OK


def cmd_bench(args):
    g, source = load_graph(args)
    d = resolve_diameter(args, g)
    k = resolve_k(args, g, source) if args.algorithm == "kpath-ldd" else 1
    cfg = DriverConfig(args.algorithm, d, k, args.profile, args.backend)
    counters, t0 = [], time.perf_counter()
    for t in range(args.trials):
        counters.append(run_driver(g, cfg, args.seed, t)[1])
    elapsed = time.perf_counter() - t0
    calls = [c.sssp_calls for c in counters]
    logn = log2_guard(g.n)
    body = {"schema_version": SCHEMA_VERSION, "algorithm": args.algorithm, "n": g.n, "m": g.m,
            "trials": args.trials, "sssp_calls_max": max(calls),
            "sssp_calls_mean": float(np.mean(calls)),
            "sssp_calls_per_log2n_sq": max(calls) / logn ** 2,
            "aggregation_passes_max": max(c.aggregation_passes for c in counters),
            "depth_max": max(c.max_recursion_depth for c in counters)}
    out = Outputs(args.out)
    out.add("bench.json", dumps(body))
    config = base_config(args, source) | cfg.as_dict() | {"trials": args.trials,
                                                           "diameter_requested": args.diameter}
    out.write(config, _sum_counters(counters))
    # wall time varies between runs, so it goes to the terminal only
    print(f"bench {args.algorithm}: {args.trials} trials in {elapsed:.3f}s, "
          f"max SetSSP calls {max(calls)}")
    return EXIT_OK


def cmd_rerun(args):
    """Re-execute a manifest's run and compare output hashes."""
    try:
        manifest = json.loads(Path(args.manifest).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"cannot read manifest: {e}") from e
    cfg = manifest["config"]
    argv = [cfg["command"]]
    src = cfg["graph"]
    if "path" in src:
        path = Path(src["path"])
        if not path.exists():
            path = Path(args.manifest).parent / path
        if not path.exists() or _sha256(path.read_bytes()) != src["sha256"]:
            raise InputError(f"graph file {path} is missing or does not match the manifest hash")
        argv += ["--graph", str(path)]
    else:
        argv += ["--kind", src["kind"], "--n", str(src["n"]), "--graph-seed", str(src["seed"])]
        for key, flag in (("width", "--width"), ("max_weight", "--max-weight")):
            if key in src["params"]:
                argv += [flag, str(src["params"][key])]
    argv += ["--seed", str(cfg["seed"]), "--backend", cfg["backend"]]
    if cfg.get("diameter_requested") is not None:
        argv += ["--diameter", str(cfg["diameter_requested"])]
    for key, flag in (("epsilon", "--epsilon"), ("k_declared", "--k"), ("profile", "--profile"),
                      ("trials", "--trials")):
        if key in cfg:
            argv += [flag, str(cfg[key])]
    if cfg["command"] in ("validate", "bench"):
        argv += ["--algorithm", cfg["algorithm"]]
    argv += ["--out", args.out]
    code = main(argv)
    if code != EXIT_OK:
        return code
    fresh = json.loads((Path(args.out) / "manifest.json").read_text())
    if fresh["outputs"] != manifest["outputs"]:
        print("rerun: outputs differ from the manifest", file=sys.stderr)
        return EXIT_AUDIT
    print("rerun: outputs identical")
    return EXIT_OK


# argument parsing ------------------------------------------------------------

def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_argument_group("graph source")
    src.add_argument("--graph", help="edge list (u v w per line) or DIMACS .gr file")
    src.add_argument("--kind", choices=KINDS, help="generate a graph of this family")
    src.add_argument("--n", type=int, help="node count for --kind")
    src.add_argument("--graph-seed", type=int, default=0, help="seed for the generator")
    src.add_argument("--width", type=int, help="tree width for --kind ktree")
    src.add_argument("--max-weight", type=float, help="largest edge weight for weighted kinds")
    run = common.add_argument_group("run")
    run.add_argument("--diameter", help="target diameter, a number or 'auto'")
    run.add_argument("--epsilon", type=float, default=0.25, help="separator margin factor")
    run.add_argument("--k", type=int, help="declared path separability")
    run.add_argument("--profile", choices=("paper", "desk"), default="desk",
                     help="constants for the backbone stage")
    run.add_argument("--trials", type=int, default=1)
    run.add_argument("--seed", type=int, default=None,
                     help=f"root seed (default: ${SEED_ENV} or 0)")
    run.add_argument("--backend", choices=Oracle.BACKENDS, default="exact")
    run.add_argument("--jobs", type=int, default=1, help="worker processes for trials")
    run.add_argument("--out", help="output directory (a file for gen)")
    run.add_argument("--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="strongldd", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (
            ("gen", cmd_gen, "write a generated graph as an edge list"),
            ("ldd", cmd_ldd, "total low-diameter decomposition"),
            ("ldc", cmd_ldc, "partial low-diameter clustering"),
            ("kpath-ldd", cmd_kpath, "decomposition for k-path separable graphs"),
            ("separator", cmd_separator, "sample a weak path separator"),
            ("backbone", cmd_backbone, "backbone clustering and its refinement"),
            ("validate", cmd_validate, "audit many seeded runs"),
            ("bench", cmd_bench, "count oracle calls over seeded runs")):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        if name in ("validate", "bench"):
            sp.add_argument("--algorithm", choices=("ldd", "ldc", "kpath-ldd"), default="ldd")
    rp = sub.add_parser("rerun", help="re-run a manifest and compare outputs")
    rp.add_argument("manifest")
    rp.add_argument("--out", required=True)
    rp.set_defaults(fn=cmd_rerun)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        if getattr(args, "trials", 1) < 1:
            raise InputError("--trials must be positive")
        if getattr(args, "jobs", 1) < 1:
            raise InputError("--jobs must be positive")
        return args.fn(args)
    except (InputError, GraphError, CoveringError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except AuditFailure as e:
        print(f"audit failed: {e}", file=sys.stderr)
        return EXIT_AUDIT
    except IterationCapError as e:
        print(f"iteration cap: {e}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, RuntimeError) as e:
        print(f"internal invariant broken: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
