"""Distance graphs over grids and Carnot-Caratheodory distance fields.

Edges join nodes within the stencil; each edge cost is the length of an
explicit admissible path (straight horizontal flow, plus commutator loops for
the part of the displacement the distribution cannot realize at lattice
precision, see geom.metric.path_cost). Graph distances are therefore
upper-consistent approximations of the control distance that decrease under
grid refinement and stencil enlargement.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .._kernels import dijkstra_update
from ..fd.grid import Grid
from ..vf.structure import SRStructure
from .metric import DEFAULT_ETA, bracket_fields, path_cost, path_cost_parts


def stencil_offsets(
    dim: int,
    radius: float,
    plane_stencils: list[tuple[int, int, int, int]] | None = None,
    extra_offsets=None,
) -> list[tuple[int, ...]]:
    """Integer offsets with euclidean norm <= radius, plus all offsets touching
    at most two axes within the Chebyshev box (long in-plane steps matter for
    anisotropic structures). ``plane_stencils`` entries (axis_a, axis_b, r_a,
    r_b) add rectangle offsets in one coordinate plane, used to reach
    shear-commensurate neighbors on adapted grids."""
    R = int(math.ceil(radius))
    out = set()
    for o in itertools.product(range(-R, R + 1), repeat=dim):
        if all(v == 0 for v in o):
            continue
        nz = sum(1 for v in o if v != 0)
        if sum(v * v for v in o) <= radius * radius + 1e-9 or nz <= 2:
            out.add(o)
    for (a, b, ra, rb) in plane_stencils or ():
        for ja in range(-ra, ra + 1):
            for jb in range(-rb, rb + 1):
                if ja == 0 and jb == 0:
                    continue
                o = [0] * dim
                o[a], o[b] = ja, jb
                out.add(tuple(o))
    for o in extra_offsets or ():
        o = tuple(int(v) for v in o)
        if len(o) != dim or all(v == 0 for v in o):
            continue
        out.add(o)
        out.add(tuple(-v for v in o))
    return sorted(out)


@dataclass
class DistanceGraph:
    indptr: np.ndarray
    indices: np.ndarray
    costs: np.ndarray
    stencil_radius: float
    eta: float
    closure: bool
    structure: str

    @property
    def num_edges(self) -> int:
        return int(self.indices.shape[0])


def _group_axes(S: SRStructure) -> list[int]:
    dep = set(S.coefficient_variables())
    for B in bracket_fields(S):
        dep |= B.variables_used()
    return sorted(dep)


def build_distance_graph(
    S: SRStructure,
    grid: Grid,
    stencil_radius: float = 2.0,
    eta: float = DEFAULT_ETA,
    closure: bool = True,
    plane_stencils: list[tuple[int, int, int, int]] | None = None,
    extra_offsets=None,
) -> DistanceGraph:
    """CSR edge graph; cached on the grid per (structure, stencil, eta, closure)."""
    cache = getattr(grid, "_graph_cache", None)
    if cache is None:
        cache = {}
        setattr(grid, "_graph_cache", cache)
    key = (S.name, float(stencil_radius), float(eta), bool(closure),
           tuple(plane_stencils) if plane_stencils else (),
           tuple(tuple(o) for o in extra_offsets) if extra_offsets else ())
    if key in cache:
        return cache[key]

    dim = grid.dim
    offsets = stencil_offsets(dim, stencil_radius, plane_stencils, extra_offsets)
    deltas = np.array([ax.delta for ax in grid.axes])
    dep = _group_axes(S)
    idx_grids = grid.index_grids()
    coords0 = [grid.axes[a].coords for a in range(dim)]
    probe = [grid.axes[a].coords[0] for a in range(dim)]

    ball_r2 = float(stencil_radius) ** 2 + 1e-9
    rows_all, cols_all, costs_all = [], [], []
    for o in offsets:
        v = np.array(o, dtype=float) * deltas
        target, valid = grid.shift_multi(o)
        in_ball = sum(c * c for c in o) <= ball_r2
        if dep:
            # cost depends on the midpoint only through the dep axes
            group_sizes = [grid.axes[a].n for a in dep]
            group_costs = np.empty(group_sizes)
            for combo in itertools.product(*(range(s) for s in group_sizes)):
                mid = list(probe)
                for a_pos, a in enumerate(dep):
                    mid[a] = coords0[a][combo[a_pos]] + v[a] / 2.0
                total, straight, loop = path_cost_parts(S, mid, v, eta=eta, closure=closure)
                # long offsets exist to provide exact or near-exact paths;
                # loop-dominated long edges are never competitive, drop them
                if not in_ball and math.isfinite(total) and loop > 0.3 * straight + 1e-12:
                    total = math.inf
                group_costs[combo] = total
            gidx = tuple(idx_grids[a] for a in dep)
            edge_cost = group_costs[gidx]
        else:
            c = path_cost(S, probe, v, eta=eta, closure=closure)
            edge_cost = np.full(grid.size, c)
        ok = valid & np.isfinite(edge_cost)
        if not ok.any():
            continue
        rows_all.append(np.nonzero(ok)[0])
        cols_all.append(target[ok])
        costs_all.append(edge_cost[ok])

    rows = np.concatenate(rows_all)
    cols = np.concatenate(cols_all).astype(np.int32)
    vals = np.concatenate(costs_all)
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    indptr = np.zeros(grid.size + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    indptr = np.cumsum(indptr)
    graph = DistanceGraph(
        indptr=indptr,
        indices=cols,
        costs=vals,
        stencil_radius=stencil_radius,
        eta=eta,
        closure=closure,
        structure=S.name,
    )
    cache[key] = graph
    return graph


@dataclass
class DistanceField:
    """Grid distance values from a source set; +inf marks unreachable nodes."""

    values: np.ndarray
    sources: str
    stencil_radius: float
    unreached: int

    def dump_text(self) -> str:
        lines = [f"sources {self.sources} stencil {self.stencil_radius} unreached {self.unreached}"]
        lines.extend(f"{v:.17g}" for v in self.values)
        return "\n".join(lines) + "\n"


def point_source(S: SRStructure, grid: Grid, q, eta: float = DEFAULT_ETA, box: int = 3):
    """Seed list for an arbitrary (possibly off-grid) point.

    Nodes within ``box`` cells of q per axis are seeded with the local
    admissible path cost from q; when q lies on a grid line the aligned seeds
    are exact, so on-grid queries degrade to a plain zero-cost source.
    """
    q = np.asarray(q, dtype=float)
    cand_per_axis: list[list[int]] = []
    for a, ax in enumerate(grid.axes):
        x = q[a]
        if ax.kind != "dirichlet":
            x = ax.lo + ((x - ax.lo) % ax.length)
        rel = (x - ax.coords[0]) / ax.delta
        lo = int(np.floor(rel))
        cand = set()
        for i in range(lo - box + 1, lo + box + 1):
            if ax.kind == "dirichlet":
                if 0 <= i < ax.n:
                    cand.add(i)
            else:
                cand.add(i % ax.n)
        cand_per_axis.append(sorted(cand))
    seeds = []
    for multi in itertools.product(*cand_per_axis):
        node = grid.flat_index(multi)
        p = np.array([grid.axes[a].coords[multi[a]] for a in range(grid.dim)])
        v = p - q
        for a, ax in enumerate(grid.axes):
            if ax.kind != "dirichlet":  # minimal image
                v[a] = (v[a] + ax.length / 2) % ax.length - ax.length / 2
        c = path_cost(S, q + v / 2.0, v, eta=eta, closure=True)
        if math.isfinite(c):
            seeds.append((node, c))
    if not seeds:
        raise ValueError("no admissible seed near the requested point")
    return seeds


def distance_to_point(
    S: SRStructure, grid: Grid, field: "DistanceField", q, eta: float = DEFAULT_ETA, box: int = 3
) -> float:
    """Distance value at an arbitrary point: min over nearby nodes of
    field + local path cost (the reverse of point_source seeding)."""
    best = math.inf
    for node, c in point_source(S, grid, q, eta=eta, box=box):
        if math.isfinite(field.values[node]):
            best = min(best, field.values[node] + c)
    return best


def sr_distance_map(
    S: SRStructure,
    grid: Grid,
    sources,
    stencil_radius: float = 2.0,
    eta: float = DEFAULT_ETA,
    closure: bool = True,
    trunc: float = math.inf,
    graph: DistanceGraph | None = None,
) -> DistanceField:
    """Multi-source shortest-path distance field.

    ``sources`` is an iterable of node indices, or of (node, initial_cost)
    pairs (used for off-grid points and nodal-cell midpoints).
    """
    if graph is None:
        graph = build_distance_graph(S, grid, stencil_radius, eta=eta, closure=closure)
    seeds, seed_costs = _normalize_sources(sources)
    if seeds.size == 0:
        raise ValueError("empty source set")
    dist = np.full(grid.size, np.inf)
    dijkstra_update(graph.indptr, graph.indices, graph.costs, dist, seeds, seed_costs, trunc)
    unreached = int(np.isinf(dist).sum()) if math.isinf(trunc) else 0
    return DistanceField(
        values=dist,
        sources=f"{seeds.size} seeds",
        stencil_radius=stencil_radius,
        unreached=unreached,
    )


def _normalize_sources(sources):
    seeds = []
    costs = []
    for s in sources:
        if isinstance(s, tuple):
            seeds.append(int(s[0]))
            costs.append(float(s[1]))
        else:
            seeds.append(int(s))
            costs.append(0.0)
    return np.asarray(seeds, dtype=np.int64), np.asarray(costs, dtype=np.float64)


def wrapped_displacement(grid: Grid, q, coords: list[np.ndarray]) -> list[np.ndarray]:
    """Per-axis displacement coords - q with minimal image on periodic axes."""
    out = []
    for a, ax in enumerate(grid.axes):
        d = coords[a] - float(q[a])
        if ax.kind != "dirichlet":
            d = (d + ax.length / 2) % ax.length - ax.length / 2
        out.append(d)
    return out
