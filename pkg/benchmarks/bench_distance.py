"""Benchmark: compiled Dijkstra kernel vs the pure-Python twin.

Usage: python benchmarks/bench_distance.py [grid_n]
"""

import sys
import time

import numpy as np

from subnodal._kernels import KERNEL, pyref

try:
    from subnodal._kernels import _dijkstra

    compiled = _dijkstra.dijkstra_update
except ImportError:
    compiled = None

from subnodal.fd import nominal_grid
from subnodal.geom import build_distance_graph
from subnodal.vf import grushin


def run(update, graph, size, seeds, costs):
    dist = np.full(size, np.inf)
    t0 = time.perf_counter()
    update(graph.indptr, graph.indices, graph.costs, dist, seeds, costs)
    return dist, time.perf_counter() - t0


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 128
    G = grushin(1)
    g = nominal_grid(G, (n + 1, n))
    graph = build_distance_graph(G, g, stencil_radius=3)
    print(f"grid {g.shape} -> {g.size} nodes, {graph.num_edges} edges (active kernel: {KERNEL})")
    seeds = np.array([g.nearest_node((0.0, 0.0))], dtype=np.int64)
    costs = np.zeros(1)

    d_py, t_py = run(pyref.dijkstra_update, graph, g.size, seeds, costs)
    print(f"pure python : {t_py:8.3f} s")
    if compiled is not None:
        d_c, t_c = run(compiled, graph, g.size, seeds, costs)
        print(f"compiled    : {t_c:8.3f} s  (speedup x{t_py / t_c:.1f})")
        assert np.array_equal(d_py, d_c), "kernels disagree"
        print("results identical")
    else:
        print("compiled kernel not built; pure-Python fallback is in use")


if __name__ == "__main__":
    main()
