"""Exact symbolic layer: polynomial vector fields, brackets, flags, gradings."""

from .poly import Polynomial
from .fields import VectorField, lie_bracket, divergence
from .parse import parse_vector_field, parse_polynomial, ExpressionError, eval_numeric
from .structure import (
    AxisDomain,
    SRStructure,
    structure_from_text,
    structure_from_file,
    grushin,
    heisenberg,
    desingularize_grushin,
)
from .flag import (
    FlagData,
    HormanderReport,
    compute_flag,
    check_hormander,
    nonholonomic_order,
    weights_from_growth,
    bracket_layers,
)
from .grading import (
    GradedDecomposition,
    SymbolicDilation,
    graded_decomposition,
    dilate_field,
    dilate_field_symbolic,
    nilpotent_approximation,
    term_weighted_degree,
)
from .expcoords import (
    Exp2Chart,
    privileged_coordinates_exp2,
    flow_polynomials,
    FlowTruncationError,
    FrameNotAdaptedError,
)

__all__ = [
    "Polynomial",
    "VectorField",
    "lie_bracket",
    "divergence",
    "parse_vector_field",
    "parse_polynomial",
    "ExpressionError",
    "eval_numeric",
    "AxisDomain",
    "SRStructure",
    "structure_from_text",
    "structure_from_file",
    "grushin",
    "heisenberg",
    "desingularize_grushin",
    "FlagData",
    "HormanderReport",
    "compute_flag",
    "check_hormander",
    "nonholonomic_order",
    "weights_from_growth",
    "bracket_layers",
    "GradedDecomposition",
    "SymbolicDilation",
    "graded_decomposition",
    "dilate_field",
    "dilate_field_symbolic",
    "nilpotent_approximation",
    "term_weighted_degree",
    "Exp2Chart",
    "privileged_coordinates_exp2",
    "flow_polynomials",
    "FlowTruncationError",
    "FrameNotAdaptedError",
]
