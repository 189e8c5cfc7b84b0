from fractions import Fraction

import pytest

from subnodal.vf import (
    FlowTruncationError,
    FrameNotAdaptedError,
    Polynomial,
    SRStructure,
    compute_flag,
    flow_polynomials,
    grushin,
    heisenberg,
    nonholonomic_order,
    parse_vector_field,
    privileged_coordinates_exp2,
)

F = Fraction


def _pushed_structure(S, chart):
    return SRStructure(S.dimension, chart.pushed_fields, S.measure_density, S.domain)


def test_flow_of_nilpotent_field_is_polynomial():
    Y = parse_vector_field("dy - x*dz", 3)
    flow = flow_polynomials(Y, max_degree=4)
    # flow: (x, y + t, z - x t)
    assert flow[0] == Polynomial.variable(0, 4)
    assert flow[1] == Polynomial.variable(1, 4) + Polynomial.variable(3, 4)
    assert flow[2] == Polynomial.variable(2, 4) - Polynomial.variable(0, 4) * Polynomial.variable(3, 4)


def test_flow_truncation_error_for_non_nilpotent():
    X = parse_vector_field("x^2*dx", 1)
    with pytest.raises(FlowTruncationError):
        flow_polynomials(X, max_degree=5)


def test_heisenberg_identity_centered_chart():
    H = heisenberg()
    frame = [H.fields[0], H.fields[1], parse_vector_field("dz", 3)]
    chart = privileged_coordinates_exp2(H, (F(0), F(0), F(0)), frame)
    assert [p.format() for p in chart.chart] == ["x", "y", "z"]
    assert chart.pushed_fields == H.fields  # left-invariant frame reproduces itself


def test_heisenberg_shifted_chart_order_contract():
    H = heisenberg()
    q = (F(1, 2), F(-1, 3), F(2))
    frame = [H.fields[0], H.fields[1], parse_vector_field("dz", 3)]
    chart = privileged_coordinates_exp2(H, q, frame)
    pushed = _pushed_structure(H, chart)
    origin = (F(0), F(0), F(0))
    flag = compute_flag(H, q)
    for i in range(3):
        xi = Polynomial.variable(i, 3)
        assert nonholonomic_order(pushed, xi, origin, p_max=flag.step + 1) == chart.weights[i]


def test_heisenberg_chart_inverts_forward():
    H = heisenberg()
    q = (F(1, 4), F(1, 5), F(-1))
    frame = [H.fields[0], H.fields[1], parse_vector_field("dz", 3)]
    chart = privileged_coordinates_exp2(H, q, frame)
    composed = [c.compose(list(chart.forward), max_degree=chart.max_degree) for c in chart.chart]
    for i, p in enumerate(composed):
        assert p == Polynomial.variable(i, 3)


def test_grushin_translation_chart_on_singular_line():
    G = grushin(1)
    q = (F(0), F(2, 3))
    frame = [parse_vector_field("dx", 2), parse_vector_field("dy", 2)]
    chart = privileged_coordinates_exp2(G, q, frame)
    # translation: chart = (x, y - 2/3)
    assert chart.chart[0] == Polynomial.variable(0, 2)
    assert chart.chart[1] == Polynomial.variable(1, 2) - Polynomial.constant(2, F(2, 3))
    pushed = _pushed_structure(G, chart)
    origin = (F(0), F(0))
    assert nonholonomic_order(pushed, Polynomial.variable(0, 2), origin) == 1
    assert nonholonomic_order(pushed, Polynomial.variable(1, 2), origin) == 2
    assert chart.weights == (1, 2)


def test_frame_not_adapted_rejected():
    G = grushin(1)
    q = (F(0), F(0))
    # dy is not in D^1 at the origin, so (dy, dx) ordered as weight-1 first fails
    frame = [parse_vector_field("dy", 2), parse_vector_field("dx", 2)]
    with pytest.raises(FrameNotAdaptedError):
        privileged_coordinates_exp2(G, q, frame)


def test_grushin_alpha2_chart_weights():
    G = grushin(2)
    q = (F(0), F(0))
    frame = [parse_vector_field("dx", 2), parse_vector_field("dy", 2)]
    chart = privileged_coordinates_exp2(G, q, frame)
    assert chart.weights == (1, 3)
    pushed = _pushed_structure(G, chart)
    assert nonholonomic_order(pushed, Polynomial.variable(1, 2), (F(0), F(0)), p_max=4) == 3
