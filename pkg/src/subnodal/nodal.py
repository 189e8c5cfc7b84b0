"""Nodal sets of grid functions: domains, Courant bound checks, crossings.

Nodes with |v| <= zero_tol * max|v| are nodal; the remaining nodes are joined
by axis-adjacent same-sign edges (2N-neighbor adjacency, matching the stencil
support of the assembled operators) and labelled by connected component.
Sign-change edges are recorded as nodal cells with sub-grid midpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .eig import EigenPair, cluster_multiplicities
from .fd.grid import Grid

DEFAULT_ZERO_TOL = 1e-9


@dataclass
class NodalDecomposition:
    labels: np.ndarray  # domain id >= 1 per node, 0 marks nodal nodes
    domain_count: int
    domain_sizes: np.ndarray
    crossing_edges: list[tuple[int, int, int]]  # (node, neighbor, axis), sign change
    nodal_nodes: np.ndarray  # indices with |v| below threshold
    zero_tol: float

    @property
    def has_nodal_set(self) -> bool:
        return bool(self.crossing_edges) or self.nodal_nodes.size > 0

    def nodal_midpoints(self, grid: Grid) -> np.ndarray:
        """Coordinates of nodal cells: crossing-edge midpoints plus nodal nodes."""
        coords = grid.node_coords()
        pts = []
        for u, w, axis in self.crossing_edges:
            p = np.array([coords[a][u] for a in range(grid.dim)])
            p[axis] += grid.axes[axis].delta / 2.0
            pts.append(p)
        for u in self.nodal_nodes:
            pts.append(np.array([coords[a][u] for a in range(grid.dim)]))
        return np.array(pts) if pts else np.zeros((0, grid.dim))


def _axis_edges(grid: Grid, axis: int):
    target, valid = grid.shift(axis, +1)
    src = np.nonzero(valid)[0]
    return src, target[src]


def nodal_decomposition(grid: Grid, v: np.ndarray, zero_tol: float = DEFAULT_ZERO_TOL) -> NodalDecomposition:
    if v.shape[0] != grid.size:
        raise ValueError("vector/grid size mismatch")
    if zero_tol < 0:
        raise ValueError("zero_tol must be >= 0")
    amax = float(np.max(np.abs(v)))
    tol = zero_tol * amax
    sign = np.zeros(grid.size, dtype=np.int8)
    sign[v > tol] = 1
    sign[v < -tol] = -1
    nodal_nodes = np.nonzero(sign == 0)[0]
    if amax == 0.0 or nodal_nodes.size == grid.size:
        return NodalDecomposition(
            labels=np.zeros(grid.size, dtype=np.int64),
            domain_count=0,
            domain_sizes=np.zeros(0, dtype=np.int64),
            crossing_edges=[],
            nodal_nodes=nodal_nodes,
            zero_tol=zero_tol,
        )
    rows, cols = [], []
    crossing: list[tuple[int, int, int]] = []
    for axis in range(grid.dim):
        src, dst = _axis_edges(grid, axis)
        s1, s2 = sign[src], sign[dst]
        same = (s1 == s2) & (s1 != 0)
        rows.append(src[same])
        cols.append(dst[same])
        cross = s1 * s2 == -1
        for u, w in zip(src[cross], dst[cross]):
            crossing.append((int(u), int(w), axis))
    adj = sp.coo_matrix(
        (np.ones(sum(len(r) for r in rows)), (np.concatenate(rows), np.concatenate(cols))),
        shape=(grid.size, grid.size),
    )
    ncomp, raw = connected_components(adj, directed=False)
    labels = np.zeros(grid.size, dtype=np.int64)
    live = sign != 0
    # canonical ids: order components by their smallest node index
    live_idx = np.nonzero(live)[0]
    comp_of_live = raw[live_idx]
    order = {}
    for node, comp in zip(live_idx, comp_of_live):
        if comp not in order:
            order[comp] = len(order) + 1
    labels[live_idx] = [order[c] for c in comp_of_live]
    count = len(order)
    sizes = np.bincount(labels[live_idx], minlength=count + 1)[1:]
    return NodalDecomposition(
        labels=labels,
        domain_count=count,
        domain_sizes=sizes,
        crossing_edges=crossing,
        nodal_nodes=nodal_nodes,
        zero_tol=zero_tol,
    )


def directional_crossing_count(grid: Grid, v: np.ndarray, axis: int, line: dict) -> int:
    """Sign changes of v along one coordinate line; ``line`` fixes the other
    axes by index (ints) or coordinate (floats)."""
    idx = []
    for a, ax in enumerate(grid.axes):
        if a == axis:
            idx.append(slice(None))
            continue
        if a not in line:
            raise ValueError(f"line must fix axis {a}")
        val = line[a]
        if isinstance(val, (int, np.integer)):
            i = int(val)
            if not 0 <= i < ax.n:
                raise ValueError("line outside grid")
        else:
            i = int(np.argmin(np.abs(ax.coords - float(val))))
        idx.append(i)
    arr = v.reshape(grid.shape)[tuple(idx)]
    s = np.sign(arr)
    pairs = s[:-1] * s[1:]
    count = int((pairs < 0).sum())
    if grid.axes[axis].kind != "dirichlet":
        if s[-1] * s[0] < 0:
            count += 1
    return count


@dataclass
class CourantRecord:
    mode_index: int  # 1-based
    eigenvalue: float
    mult: int
    cluster_gap: float
    domain_count: int
    bound: int
    passed: bool
    strong_passed: bool


@dataclass
class CourantReport:
    records: list[CourantRecord]

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.records)

    @property
    def all_strong_pass(self) -> bool:
        return all(r.strong_passed for r in self.records)

    def to_csv(self) -> str:
        lines = ["mode_index,eigenvalue,mult,domain_count,courant_bound,pass"]
        for r in self.records:
            lines.append(
                f"{r.mode_index},{r.eigenvalue:.12g},{r.mult},{r.domain_count},"
                f"{r.bound},{str(r.passed).lower()}"
            )
        return "\n".join(lines) + "\n"


def courant_check(
    pairs: list[EigenPair],
    decompositions: list[NodalDecomposition],
    rel_gap: float = 1e-6,
) -> CourantReport:
    """Nodal-domain count <= n + mult - 1 per mode (mult from eigenvalue clustering)."""
    if len(pairs) != len(decompositions):
        raise ValueError("one decomposition per eigenpair required")
    values = [p.value for p in pairs]
    _, mults, gaps = cluster_multiplicities(values, rel_gap=rel_gap)
    records = []
    for i, (p, dec) in enumerate(zip(pairs, decompositions)):
        n = i + 1
        bound = n + int(mults[i]) - 1
        records.append(
            CourantRecord(
                mode_index=n,
                eigenvalue=p.value,
                mult=int(mults[i]),
                cluster_gap=float(gaps[i]),
                domain_count=dec.domain_count,
                bound=bound,
                passed=dec.domain_count <= bound,
                strong_passed=dec.domain_count <= n,
            )
        )
    return CourantReport(records)


def nodal_component_count(
    grid: Grid,
    v: np.ndarray,
    zero_tol: float = DEFAULT_ZERO_TOL,
    open_axes: tuple[int, ...] = (),
) -> dict:
    """Connected components of the nodal set, classified by crossing axis.

    Crossing edges of each axis are grouped separately (two transversally
    intersecting sheets are crossed along different axes, so the classification
    recovers the sheet count for axis-aligned nodal sets); exact-zero nodes
    form their own class. Axes listed in ``open_axes`` are counted on the open
    fundamental cell instead of the torus: the seam gridline (index 0) and the
    wrap edges of that axis are excluded, so a sheet sitting exactly on the
    identification is not counted.
    """
    amax = float(np.max(np.abs(v)))
    tol = zero_tol * amax
    sign = np.zeros(grid.size, dtype=np.int8)
    sign[v > tol] = 1
    sign[v < -tol] = -1
    grids = grid.index_grids()
    seam = np.zeros(grid.size, dtype=bool)
    for axis in open_axes:
        seam |= grids[axis] == 0
    total = 0
    per_axis = {}
    for axis in range(grid.dim):
        src, dst = _axis_edges(grid, axis)
        cross = sign[src] * sign[dst] == -1
        for oa in open_axes:
            if oa == axis:
                cross &= grids[axis][src] != grid.axes[axis].n - 1
        cells = src[cross]
        if cells.size == 0:
            per_axis[axis] = 0
            continue
        # cells adjacent when their base nodes are grid neighbors (or equal)
        comp = _component_count_on(grid, cells)
        per_axis[axis] = comp
        total += comp
    zero_nodes = np.nonzero((sign == 0) & ~seam)[0]
    zero_comp = _component_count_on(grid, zero_nodes) if zero_nodes.size else 0
    total += zero_comp
    return {"total": total, "per_axis": per_axis, "zero_node_components": zero_comp}


def _component_count_on(grid: Grid, nodes: np.ndarray) -> int:
    mask = np.zeros(grid.size, dtype=bool)
    mask[nodes] = True
    pos = np.full(grid.size, -1, dtype=np.int64)
    pos[nodes] = np.arange(nodes.size)
    rows, cols = [], []
    for axis in range(grid.dim):
        target, valid = grid.shift(axis, +1)
        ok = valid & mask & mask[target]
        src = np.nonzero(ok)[0]
        rows.append(pos[src])
        cols.append(pos[target[src]])
    if nodes.size == 0:
        return 0
    adj = sp.coo_matrix(
        (
            np.ones(sum(len(r) for r in rows)),
            (np.concatenate(rows) if rows else [], np.concatenate(cols) if cols else []),
        ),
        shape=(nodes.size, nodes.size),
    )
    ncomp, _ = connected_components(adj, directed=False)
    return int(ncomp)
