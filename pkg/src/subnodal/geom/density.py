"""Nodal-set density statistic: largest sR distance from the nodal set."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fd.grid import Grid
from ..nodal import NodalDecomposition
from ..vf.structure import SRStructure
from .graph import DistanceGraph, build_distance_graph, sr_distance_map
from .metric import DEFAULT_ETA, path_cost


@dataclass
class DensityResult:
    rho: float  # max distance to the nodal set (boundary layer excluded)
    rho_all: float  # same without the boundary exclusion
    excluded_fraction: float
    field_values: np.ndarray


def nodal_cell_sources(
    S: SRStructure, grid: Grid, dec: NodalDecomposition, eta: float = DEFAULT_ETA
):
    """Seeds at nodal cells: crossing-edge endpoints at half the edge path cost,
    exact-zero nodes at zero."""
    coords = grid.node_coords()
    deltas = [ax.delta for ax in grid.axes]
    seeds: list[tuple[int, float]] = []
    half_cost_cache: dict[tuple, float] = {}
    for u, w, axis in dec.crossing_edges:
        key_coords = []
        mid = []
        for a in range(grid.dim):
            cu = coords[a][u]
            mid.append(cu + (deltas[a] / 4.0 if a == axis else 0.0))
            key_coords.append(round(cu, 12) if a in _dep_axes(S) else 0.0)
        v = np.zeros(grid.dim)
        v[axis] = deltas[axis] / 2.0
        key = (axis, tuple(key_coords))
        c = half_cost_cache.get(key)
        if c is None:
            c = path_cost(S, mid, v, eta=eta, closure=True)
            half_cost_cache[key] = c
        if math.isfinite(c):
            seeds.append((int(u), c))
            seeds.append((int(w), c))
    for u in dec.nodal_nodes:
        seeds.append((int(u), 0.0))
    return seeds


def _dep_axes(S: SRStructure) -> set[int]:
    return S.coefficient_variables()


def nodal_density_statistic(
    S: SRStructure,
    grid: Grid,
    dec: NodalDecomposition,
    stencil_radius: float = 2.0,
    eta: float = DEFAULT_ETA,
    graph: DistanceGraph | None = None,
) -> DensityResult:
    """rho = max over nodes of d(node, nodal set).

    Nodes within one ball-box of a Dirichlet wall are excluded from the max
    (the wall geometry contaminates the scaling); the unmasked value is also
    reported. rho = 0 for an everywhere-nodal vector.
    """
    if not dec.has_nodal_set:
        raise ValueError("decomposition has no nodal cells")
    if dec.nodal_nodes.size == grid.size:
        return DensityResult(0.0, 0.0, 0.0, np.zeros(grid.size))
    if graph is None:
        graph = build_distance_graph(S, grid, stencil_radius, eta=eta)
    seeds = nodal_cell_sources(S, grid, dec, eta=eta)
    field = sr_distance_map(S, grid, seeds, stencil_radius, eta=eta, graph=graph)
    d = field.values
    finite = np.isfinite(d)
    rho_all = float(d[finite].max())
    # exclusion zone: within rho_all (weight-1 axes are 1-Lipschitz in coordinates)
    coords = grid.node_coords()
    excl = np.zeros(grid.size, dtype=bool)
    for a, ax in enumerate(grid.axes):
        if ax.kind == "dirichlet":
            lo = ax.lo
            hi = ax.lo + ax.length
            excl |= (coords[a] - lo < rho_all) | (hi - coords[a] < rho_all)
    keep = finite & ~excl
    rho = float(d[keep].max()) if keep.any() else rho_all
    return DensityResult(
        rho=rho,
        rho_all=rho_all,
        excluded_fraction=float(excl.mean()),
        field_values=d,
    )
