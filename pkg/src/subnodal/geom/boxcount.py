"""Greedy ball coverings: box-counting dimension slopes and measure proxies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .._kernels import dijkstra_update
from ..fd.grid import Grid
from ..vf.structure import SRStructure
from .graph import DistanceGraph, build_distance_graph
from .metric import DEFAULT_ETA


@dataclass
class BoxCountReport:
    eps: list[float]
    counts: list[int]
    slope: float
    proxies: dict[float, list[float]]  # exponent -> N(eps) * eps^s per level
    complete: bool

    def to_csv(self, exponent: float | None = None) -> str:
        lines = ["epsilon,count,proxy"]
        s = exponent if exponent is not None else next(iter(self.proxies), None)
        for i, (e, n) in enumerate(zip(self.eps, self.counts)):
            proxy = self.proxies[s][i] if s is not None else ""
            lines.append(f"{e:.12g},{n},{proxy:.12g}" if proxy != "" else f"{e:.12g},{n},")
        return "\n".join(lines) + "\n"


def greedy_cover_count(
    graph: DistanceGraph,
    n_nodes: int,
    cells: np.ndarray,
    eps: float,
    max_balls: int = 500_000,
) -> tuple[int, bool]:
    """Number of radius-eps balls the farthest-first greedy needs to cover ``cells``.

    Ball centers are chosen among the cells themselves (the farthest uncovered
    one each round), which is the standard 2-approximation of the covering
    number and keeps slopes stable.
    """
    cells = np.asarray(cells, dtype=np.int64)
    if cells.size == 0:
        return 0, True
    cover = np.full(n_nodes, np.inf)
    count = 0
    seed_cost = np.zeros(1)
    while count < max_balls:
        far_pos = int(np.argmax(cover[cells]))
        far = cells[far_pos]
        if cover[far] <= eps:
            return count, True
        count += 1
        dijkstra_update(
            graph.indptr,
            graph.indices,
            graph.costs,
            cover,
            np.array([far], dtype=np.int64),
            seed_cost,
        )
    return count, False


def boxcount_dimension(
    S: SRStructure,
    grid: Grid,
    cells: np.ndarray,
    eps_list,
    proxy_exponents=(),
    stencil_radius: float = 2.0,
    eta: float = DEFAULT_ETA,
    max_balls: int = 500_000,
    graph: DistanceGraph | None = None,
) -> BoxCountReport:
    """Covering counts N(eps) over >= 3 dyadic levels and the log-log slope.

    Also returns measure proxies N(eps)*eps^s for each requested exponent s.
    """
    eps_list = sorted(float(e) for e in eps_list)
    if len(eps_list) < 3:
        raise ValueError("eps_list must span at least 3 levels")
    if graph is None:
        graph = build_distance_graph(S, grid, stencil_radius, eta=eta)
    counts = []
    complete = True
    for eps in eps_list:
        n, ok = greedy_cover_count(graph, grid.size, cells, eps, max_balls=max_balls)
        counts.append(n)
        complete &= ok
    logs = np.log(np.array([max(c, 1) for c in counts], dtype=float))
    x = np.log(1.0 / np.array(eps_list))
    slope = float(np.polyfit(x, logs, 1)[0])
    proxies = {
        float(s): [c * e**s for c, e in zip(counts, eps_list)] for s in proxy_exponents
    }
    return BoxCountReport(eps=eps_list, counts=counts, slope=slope, proxies=proxies, complete=complete)
