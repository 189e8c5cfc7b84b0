"""Pure-Python reference Dijkstra; semantics identical to the compiled kernel."""

from __future__ import annotations

import heapq

import numpy as np


def dijkstra_update(indptr, indices, costs, dist, seed_nodes, seed_costs, trunc=np.inf):
    """Multi-source Dijkstra relaxing ``dist`` in place; only improvements spread.

    ``dist`` is both input (existing field, +inf where unknown) and output.
    Expansion stops at keys above ``trunc``. Returns the number of pops.
    """
    heap = []
    for node, d0 in zip(seed_nodes, seed_costs):
        node = int(node)
        d0 = float(d0)
        if d0 < dist[node]:
            dist[node] = d0
            heapq.heappush(heap, (d0, node))
    pops = 0
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        if d > trunc:
            break
        pops += 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            nd = d + costs[e]
            if nd < dist[v]:
                dist[v] = nd
                heapq.heappush(heap, (nd, int(v)))
    return pops
