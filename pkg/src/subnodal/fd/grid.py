"""Uniform grids over box domains with Dirichlet / periodic / twisted axes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..vf.structure import AxisDomain, SRStructure


@dataclass(frozen=True)
class GridAxis:
    kind: str  # dirichlet | periodic | twisted
    n: int  # unknowns along this axis
    delta: float
    coords: np.ndarray  # node coordinates, shape (n,)
    lo: float
    length: float
    shear_target: int | None = None
    shear_source: int | None = None
    shear_coeff: float = 0.0


class Grid:
    """Tensor grid; Dirichlet axes hold interior nodes only, periodic axes are
    node-centered starting at the seam (index 0 sits at the identification)."""

    def __init__(self, axes: tuple[GridAxis, ...]):
        self.axes = axes
        self.dim = len(axes)
        self.shape = tuple(ax.n for ax in axes)
        self.size = int(np.prod(self.shape))
        self._index_grids = None
        self._twist_shift: dict[int, np.ndarray] = {}
        for a, ax in enumerate(axes):
            if ax.kind == "twisted":
                self._twist_shift[a] = self._validate_twist(a, ax)

    def _validate_twist(self, axis: int, ax: GridAxis) -> np.ndarray:
        tgt, src = ax.shear_target, ax.shear_source
        if tgt is None or src is None:
            raise ValueError("twisted axis missing shear data")
        if axis != 0:
            raise ValueError("twisted wrap supported on the first axis only")
        tgt_ax = self.axes[tgt]
        src_coords = self.axes[src].coords
        shift = ax.shear_coeff * src_coords / tgt_ax.delta
        rounded = np.rint(shift)
        if not np.allclose(shift, rounded, atol=1e-9):
            raise ValueError(
                "twist requested where unsupported: shear does not map the grid to itself "
                f"(need {ax.shear_coeff} * coords({src}) divisible by delta({tgt}))"
            )
        return rounded.astype(np.int64)

    # -- indexing -----------------------------------------------------------
    def index_grids(self) -> tuple[np.ndarray, ...]:
        if self._index_grids is None:
            idx = np.indices(self.shape)
            self._index_grids = tuple(idx[a].ravel() for a in range(self.dim))
        return self._index_grids

    def flat_index(self, multi) -> int:
        return int(np.ravel_multi_index(tuple(int(i) for i in multi), self.shape))

    def node_coords(self) -> list[np.ndarray]:
        """Per-axis coordinate of every node, each shape (size,)."""
        grids = self.index_grids()
        return [self.axes[a].coords[grids[a]] for a in range(self.dim)]

    def nearest_node(self, point) -> int:
        multi = []
        for a, ax in enumerate(self.axes):
            x = float(point[a])
            if ax.kind != "dirichlet":
                x = ax.lo + ((x - ax.lo) % ax.length)
            i = int(np.argmin(np.abs(ax.coords - x)))
            multi.append(i)
        return self.flat_index(multi)

    def shift(self, axis: int, steps: int):
        """Flat target indices and validity mask for a uniform step along an axis.

        Periodic axes wrap; the twisted axis additionally shears the target
        axis index on wrap-around; Dirichlet axes mark out-of-range targets
        invalid (their function value is the boundary zero).
        """
        grids = [g.copy() for g in self.index_grids()]
        ax = self.axes[axis]
        moved = grids[axis] + steps
        if ax.kind == "dirichlet":
            valid = (moved >= 0) & (moved < ax.n)
            moved = np.clip(moved, 0, ax.n - 1)
        elif ax.kind == "periodic":
            valid = np.ones(self.size, dtype=bool)
            moved = moved % ax.n
        else:  # twisted
            valid = np.ones(self.size, dtype=bool)
            wraps = moved // ax.n  # signed wrap count
            moved = moved % ax.n
            shift = self._twist_shift[axis]
            tgt = ax.shear_target
            grids[tgt] = (grids[tgt] + wraps * shift[grids[ax.shear_source]]) % self.axes[tgt].n
        grids[axis] = moved
        flat = np.ravel_multi_index(tuple(grids), self.shape, mode="wrap")
        return flat, valid

    def shift_multi(self, offset):
        """Flat targets and validity for a multi-axis integer offset (twist-aware)."""
        grids = [g.copy() for g in self.index_grids()]
        valid = np.ones(self.size, dtype=bool)
        for a, st in enumerate(offset):
            if st == 0:
                continue
            ax = self.axes[a]
            moved = grids[a] + int(st)
            if ax.kind == "dirichlet":
                ok = (moved >= 0) & (moved < ax.n)
                valid &= ok
                moved = np.clip(moved, 0, ax.n - 1)
            elif ax.kind == "periodic":
                moved = moved % ax.n
            else:
                wraps = moved // ax.n
                moved = moved % ax.n
                shift = self._twist_shift[a]
                tgt = ax.shear_target
                grids[tgt] = (grids[tgt] + wraps * shift[grids[ax.shear_source]]) % self.axes[tgt].n
            grids[a] = moved
        flat = np.ravel_multi_index(tuple(grids), self.shape, mode="wrap")
        return flat, valid

    def dirichlet_boundary_mask(self, layers: int = 1) -> np.ndarray:
        """Nodes within ``layers`` of a Dirichlet wall."""
        mask = np.zeros(self.size, dtype=bool)
        grids = self.index_grids()
        for a, ax in enumerate(self.axes):
            if ax.kind == "dirichlet":
                mask |= (grids[a] < layers) | (grids[a] >= ax.n - layers)
        return mask

    def dump_text(self) -> str:
        lines = [f"dim {self.dim}", f"shape {' '.join(str(n) for n in self.shape)}"]
        for a, ax in enumerate(self.axes):
            lines.append(f"axis {a} {ax.kind} n={ax.n} delta={ax.delta:.17g} lo={ax.lo:.17g}")
        for a, ax in enumerate(self.axes):
            lines.append("coords " + " ".join(f"{c:.17g}" for c in ax.coords))
        return "\n".join(lines) + "\n"


def _build_axis(dom: AxisDomain, count: int, axis_index: int) -> GridAxis:
    if count < 3:
        raise ValueError("per-axis count must be >= 3")
    if dom.kind == "dirichlet":
        delta = (dom.hi - dom.lo) / (count + 1)
        coords = dom.lo + delta * np.arange(1, count + 1)
        return GridAxis("dirichlet", count, delta, coords, dom.lo, dom.hi - dom.lo)
    delta = dom.length / count
    coords = dom.lo + delta * np.arange(count)
    return GridAxis(
        dom.kind,
        count,
        delta,
        coords,
        dom.lo,
        dom.length,
        shear_target=dom.shear_target,
        shear_source=dom.shear_source,
        shear_coeff=dom.shear_coeff,
    )


def build_grid(domain: tuple[AxisDomain, ...], counts) -> Grid:
    """Grid with ``counts[a]`` unknowns per axis (interior counts on Dirichlet axes)."""
    counts = tuple(int(c) for c in counts)
    if len(counts) != len(domain):
        raise ValueError("one count per axis required")
    return Grid(tuple(_build_axis(d, c, a) for a, (d, c) in enumerate(zip(domain, counts))))


def nominal_grid(S: SRStructure, counts) -> Grid:
    """Grid from nominal per-axis point counts; Dirichlet axes spend 2 on walls.

    nominal_grid(heisenberg(), (48, 48, 64)) has 46*48*64 unknowns.
    """
    eff = []
    for dom, c in zip(S.domain, counts):
        eff.append(int(c) - 2 if dom.kind == "dirichlet" else int(c))
    return build_grid(S.domain, eff)
