"""Grids and sparse finite-difference assembly of the model operators."""

from .grid import Grid, GridAxis, build_grid, nominal_grid
from .assemble import (
    SparseSymmetricOperator,
    assemble_sublaplacian,
    assemble_euclidean_laplacian,
    assemble_riemannian_blend,
    assemble_schrodinger_1d,
)

__all__ = [
    "Grid",
    "GridAxis",
    "build_grid",
    "nominal_grid",
    "SparseSymmetricOperator",
    "assemble_sublaplacian",
    "assemble_euclidean_laplacian",
    "assemble_riemannian_blend",
    "assemble_schrodinger_1d",
]
