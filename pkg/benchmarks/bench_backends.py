"""Benchmark the numba kernels against their numpy/Python fallbacks.

Runs the three hot kernels (PageRank power iteration, group Steiner
search, greedy snippet growth) on synthetic graphs under both backends
and prints median wall times plus the speedup. The first numba call per
kernel compiles it; a warmup round keeps that out of the timings.

Usage: python benchmarks/bench_backends.py [--triples N] [--repeat R]
"""
from __future__ import annotations

import argparse
import statistics
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))

from dsnip import DEGREE_PENALIZED, IllusnipConfig
from dsnip.kernels import HAS_NUMBA, growth, gstcore
from dsnip.kernels.pagerank import pagerank

from gens import random_groups, random_typed_graph


def _time(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def build_cases(n_triples: int):
    rng = np.random.default_rng(12)
    graph = random_typed_graph(rng, n_triples=n_triples)
    idx = graph.index()
    stats = graph.stats()
    config = IllusnipConfig()

    entity_ids = np.nonzero(~idx.is_literal)[0]
    rank = np.full(idx.n_nodes, -1, dtype=np.int64)
    rank[entity_ids] = np.arange(entity_ids.size)
    both = ~(idx.is_literal[idx.subj] | idx.is_literal[idx.obj])
    es, eo = rank[idx.subj[both]], rank[idx.obj[both]]
    src = np.concatenate([es, eo])
    dst = np.concatenate([eo, es])
    n_e = int(entity_ids.size)
    out_deg = np.bincount(src, minlength=n_e).astype(np.float64)

    groups = random_groups(rng, graph, max_groups=4, min_groups=3)
    keywords = tuple(groups.groups)
    offsets = np.zeros(len(keywords) + 1, dtype=np.int64)
    gids = []
    for i, kw in enumerate(keywords):
        ids = sorted(idx.node_id[n] for n in groups.groups[kw])
        offsets[i + 1] = offsets[i] + len(ids)
        gids.append(np.asarray(ids, dtype=np.int64))
    group_nodes = np.concatenate(gids)
    weights = idx.weights(DEGREE_PENALIZED)

    tot_class = float(np.sum(stats.class_freq_arr))
    tot_prop = float(np.sum(stats.prop_freq_arr))
    top_pr = stats.top_pagerank_sum(2 * config.k)
    pr = np.where(idx.is_literal, 0.0, stats.pagerank_arr)

    def run_pagerank(backend):
        pagerank(src, dst, out_deg, n_e, 0.85, 1e-10, 200, backend=backend)

    def run_gst(backend):
        gstcore.solve_states(idx.indptr, idx.adj_node, idx.adj_triple,
                             weights, idx.subj, idx.obj, offsets, group_nodes,
                             len(keywords), backend=backend)

    def run_growth(backend):
        growth.grow(idx.indptr, idx.adj_triple, idx.subj, idx.obj,
                    idx.class_of_triple, idx.pred_of_triple,
                    stats.class_freq_arr, stats.prop_freq_arr, pr,
                    tot_class, tot_prop, top_pr,
                    config.alpha, config.beta, config.gamma,
                    config.k, 0, backend=backend)

    return len(graph), {"pagerank": run_pagerank, "gst": run_gst,
                        "growth": run_growth}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--triples", type=int, default=20_000,
                    help="approximate graph size (default 20000)")
    ap.add_argument("--repeat", type=int, default=5,
                    help="repetitions per measurement (default 5)")
    args = ap.parse_args(argv)

    size, cases = build_cases(args.triples)
    print(f"graph: {size} triples; median of {args.repeat} runs\n")
    print(f"{'kernel':<10} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name, run in cases.items():
        run("numpy")  # warmup / sanity
        t_np = _time(lambda: run("numpy"), args.repeat)
        if HAS_NUMBA:
            run("numba")  # JIT compile outside the timing
            t_nb = _time(lambda: run("numba"), args.repeat)
            print(f"{name:<10} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms "
                  f"{t_np / t_nb:>8.1f}x")
        else:
            print(f"{name:<10} {t_np * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>9}")
    if not HAS_NUMBA:
        print("\nnumba is not importable; only the fallback was measured")
    return 0


if __name__ == "__main__":
    sys.exit(main())
