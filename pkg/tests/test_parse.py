import math

import pytest

from subnodal.vf import (
    ExpressionError,
    eval_numeric,
    grushin,
    heisenberg,
    parse_polynomial,
    parse_vector_field,
    structure_from_text,
)


def test_parse_examples():
    assert parse_vector_field("dx", 2).format() == "dx"
    assert parse_vector_field("x^2*dy", 2).format() == "x^2*dy"
    heis_y = parse_vector_field("dy - x*dz", 3)
    assert heis_y.components[1].format() == "1"
    assert heis_y.components[2].format() == "-x"


def test_rational_coefficients():
    f = parse_vector_field("3/2*x*y*dz - dy", 3)
    assert str(f.components[2].terms[(1, 1, 0)]) == "3/2"


def test_roundtrip_through_printer():
    for text, dim in [
        ("dx", 2),
        ("x^2*dy", 2),
        ("dy - x*dz", 3),
        ("2*x*y*dx + 1/3*dz", 3),
        ("-dx + x^3*y^2*dw", 4),
    ]:
        f = parse_vector_field(text, dim)
        assert parse_vector_field(f.format(), dim) == f


def test_syntax_error_carries_position():
    with pytest.raises(ExpressionError) as err:
        parse_vector_field("dx + x^*dy", 2)
    assert err.value.pos == 7

    with pytest.raises(ExpressionError, match="out of range"):
        parse_vector_field("dz", 2)

    with pytest.raises(ExpressionError, match="no partial"):
        parse_vector_field("x + dy", 2)


def test_parse_polynomial():
    p = parse_polynomial("x^2*y - 3/4", 2)
    assert str(p.terms[(0, 0)]) == "-3/4"


def test_eval_numeric():
    assert eval_numeric("2*pi") == pytest.approx(2 * math.pi)
    assert eval_numeric("sqrt(pi/2)") == pytest.approx(math.sqrt(math.pi / 2))
    assert eval_numeric("-(1)/2 + 1") == pytest.approx(0.5)
    with pytest.raises(ExpressionError):
        eval_numeric("sqrt(")


def test_structure_file_roundtrip():
    for S in (grushin(2), heisenberg(), heisenberg(closed=True)):
        S2 = structure_from_text(S.to_text())
        assert S2.dimension == S.dimension
        assert S2.fields == S.fields
        assert S2.measure_density == S.measure_density
        for a, b in zip(S2.domain, S.domain):
            assert a.kind == b.kind
            assert a.extent == pytest.approx(b.extent)


def test_structure_file_errors():
    with pytest.raises(ValueError, match="unknown key"):
        structure_from_text("dimension = 2\nfields = dx\nbogus = 1\ndomain.x = periodic(1)\ndomain.y = periodic(1)")
    with pytest.raises(ValueError, match="line 1"):
        structure_from_text("what even is this")
