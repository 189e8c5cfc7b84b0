"""Carnot-Caratheodory distance fields, ball-box checks, covering dimensions."""

from .metric import control_metric_cost, path_cost, bracket_fields, DEFAULT_ETA
from .graph import (
    distance_to_point,
    DistanceGraph,
    DistanceField,
    build_distance_graph,
    sr_distance_map,
    point_source,
    stencil_offsets,
    wrapped_displacement,
)
from .ballbox import BallBoxReport, BallBoxEntry, ball_box_check
from .boxcount import BoxCountReport, boxcount_dimension, greedy_cover_count
from .density import DensityResult, nodal_density_statistic, nodal_cell_sources

__all__ = [
    "control_metric_cost",
    "path_cost",
    "bracket_fields",
    "DEFAULT_ETA",
    "DistanceGraph",
    "DistanceField",
    "build_distance_graph",
    "sr_distance_map",
    "distance_to_point",
    "point_source",
    "stencil_offsets",
    "wrapped_displacement",
    "BallBoxReport",
    "BallBoxEntry",
    "ball_box_check",
    "BoxCountReport",
    "boxcount_dimension",
    "greedy_cover_count",
    "DensityResult",
    "nodal_density_statistic",
    "nodal_cell_sources",
]
