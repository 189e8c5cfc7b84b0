"""Empirical ball-box sandwich: anisotropic boxes inside and outside sR balls."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..fd.grid import Grid
from ..vf.structure import SRStructure
from .graph import (
    DistanceGraph,
    point_source,
    sr_distance_map,
    wrapped_displacement,
)
from .metric import DEFAULT_ETA


@dataclass
class BallBoxEntry:
    eps: float
    inner: float  # largest a with Box(a*eps) contained in B_eps
    outer: float  # smallest b with B_eps contained in Box(b*eps)
    truncated: bool  # ball touches the Dirichlet boundary layer

    @property
    def ratio(self) -> float:
        return self.outer / self.inner if self.inner > 0 else math.inf


@dataclass
class BallBoxReport:
    point: tuple
    weights: tuple[int, ...]
    entries: list[BallBoxEntry]

    @property
    def max_ratio(self) -> float:
        return max(e.ratio for e in self.entries)


def ball_box_check(
    S: SRStructure,
    grid: Grid,
    q,
    eps_list,
    weights,
    stencil_radius: float = 3.0,
    eta: float = DEFAULT_ETA,
    graph: DistanceGraph | None = None,
) -> BallBoxReport:
    """Sandwich constants of B_eps(q) against boxes with side lengths eps^{w_i}.

    The box norm of a displacement d is max_i |d_i|^{1/w_i}; Box(r) is its
    r-sublevel set in the chart centered at q (the in-scope base points have
    polynomial privileged charts equal to the coordinate translation).
    """
    eps_list = sorted(float(e) for e in eps_list)
    weights = tuple(int(w) for w in weights)
    trunc = eps_list[-1] * 1.5
    field = sr_distance_map(
        S,
        grid,
        point_source(S, grid, q, eta=eta),
        stencil_radius=stencil_radius,
        eta=eta,
        trunc=trunc,
        graph=graph,
    )
    disp = wrapped_displacement(grid, q, grid.node_coords())
    boxnorm = np.zeros(grid.size)
    for a, w in enumerate(weights):
        boxnorm = np.maximum(boxnorm, np.abs(disp[a]) ** (1.0 / w))
    boundary = grid.dirichlet_boundary_mask(layers=1)
    entries = []
    d = field.values
    for eps in eps_list:
        ball = d <= eps
        if not ball.any():
            entries.append(BallBoxEntry(eps, 0.0, math.inf, False))
            continue
        outer = float(boxnorm[ball].max()) / eps
        non_ball = ~ball
        inner = float(boxnorm[non_ball].min()) / eps if non_ball.any() else outer
        inner = min(inner, outer)
        entries.append(
            BallBoxEntry(
                eps=eps,
                inner=inner,
                outer=outer,
                truncated=bool((ball & boundary).any()),
            )
        )
    return BallBoxReport(point=tuple(float(x) for x in q), weights=weights, entries=entries)
