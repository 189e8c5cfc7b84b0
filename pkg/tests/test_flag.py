import math
from fractions import Fraction

import pytest

from subnodal.vf import (
    Polynomial,
    VectorField,
    check_hormander,
    compute_flag,
    desingularize_grushin,
    grushin,
    heisenberg,
    lie_bracket,
    nonholonomic_order,
    parse_vector_field,
    weights_from_growth,
)
from subnodal.vf.flag import _rank_exact

F = Fraction


def test_grushin_flag_at_singular_point():
    f = compute_flag(grushin(1), (F(0), F(0)))
    assert f.growth_vector == (1, 2)
    assert f.step == 2
    assert f.weights == (1, 2)
    assert f.homogeneous_dimension == 3
    assert f.regular is False
    assert f.hormander_confirmed


def test_grushin_flag_at_elliptic_point():
    f = compute_flag(grushin(1), (F(1), F(0)))
    assert f.growth_vector == (2,)
    assert f.weights == (1, 1)
    assert f.homogeneous_dimension == 2
    assert f.regular is True


def test_grushin_alpha_weights():
    for alpha in (2, 3):
        f = compute_flag(grushin(alpha), (F(0), F(0)))
        assert f.weights == (1, alpha + 1)
        assert f.step == alpha + 1


def test_heisenberg_flag_everywhere():
    H = heisenberg()
    for q in [(F(0), F(0), F(0)), (F(1, 3), F(-2, 5), F(7))]:
        f = compute_flag(H, q)
        assert f.growth_vector == (2, 3)
        assert f.weights == (1, 1, 2)
        assert f.homogeneous_dimension == 4
        assert f.regular is True


def test_flag_invariants_weights_sum():
    for growth in [(1, 2), (2, 3), (2,), (1, 2, 3)]:
        w = weights_from_growth(growth)
        assert sum(w) == sum(i * (a - b) for i, (a, b) in enumerate(zip(growth, (0,) + growth), 1))
        assert list(w) == sorted(w)


def _bracket_word_span_oracle(S, q, max_len):
    """Brute force: spans of all left-nested bracket words up to each length."""
    layers = {1: list(S.fields)}
    for ell in range(2, max_len + 1):
        layers[ell] = [
            lie_bracket(X, W) for X in S.fields for W in layers[ell - 1]
        ]
    growth = []
    vecs = []
    for ell in range(1, max_len + 1):
        vecs.extend(W.evaluate_exact(q) for W in layers[ell])
        growth.append(_rank_exact(vecs))
        if growth[-1] == S.dimension:
            break
    return tuple(growth)


@pytest.mark.parametrize(
    "S,q",
    [
        (grushin(1), (F(0), F(0))),
        (grushin(1), (F(1, 2), F(1))),
        (grushin(2), (F(0), F(0))),
        (heisenberg(), (F(1, 3), F(0), F(2))),
        (desingularize_grushin(1), (F(0), F(0), F(0))),
        (desingularize_grushin(2), (F(0), F(1), F(2))),
    ],
)
def test_growth_vector_matches_bracket_word_oracle(S, q):
    f = compute_flag(S, q, depth_max=4)
    oracle = _bracket_word_span_oracle(S, q, 4)
    assert f.growth_vector == oracle


def test_check_hormander_reports():
    H = heisenberg()
    rep = check_hormander(H, [(F(0), F(0), F(0)), (F(1), F(1), F(1))], depth_max=2)
    assert rep.all_pass
    assert "pass" in rep.summary()

    # single field in the plane cannot generate
    S = grushin(1)
    only_x = S.__class__(2, (parse_vector_field("dx", 2),), S.measure_density, S.domain)
    rep2 = check_hormander(only_x, [(F(0), F(0)), (F(1), F(1))], depth_max=4)
    assert not rep2.all_pass
    assert all(not f.hormander_confirmed for f in rep2.flags)


def test_hormander_alpha2_depth():
    rep = check_hormander(grushin(2), [(F(0), F(0))], depth_max=3)
    assert rep.all_pass
    assert rep.flags[0].growth_vector == (1, 1, 2)

    shallow = check_hormander(grushin(2), [(F(0), F(0))], depth_max=2)
    assert not shallow.all_pass


def test_nonholonomic_orders_grushin():
    G = grushin(1)
    origin = (F(0), F(0))
    one = Polynomial.constant(2, 1)
    x = Polynomial.variable(0, 2)
    y = Polynomial.variable(1, 2)
    assert nonholonomic_order(G, one, origin) == 0
    assert nonholonomic_order(G, x, origin) == 1
    assert nonholonomic_order(G, y, origin) == 2
    assert nonholonomic_order(G, Polynomial.zero(2), origin, p_max=3) == math.inf


def test_float_point_flag():
    f = compute_flag(heisenberg(), (0.3, -0.1, 2.2))
    assert f.growth_vector == (2, 3)
