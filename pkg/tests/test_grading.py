from fractions import Fraction

import numpy as np

from subnodal.vf import (
    VectorField,
    dilate_field,
    graded_decomposition,
    nilpotent_approximation,
    parse_vector_field,
)
from subnodal.vf.poly import Polynomial

F = Fraction


def test_grushin_monomial_single_component():
    X = parse_vector_field("x*dy", 2)
    dec = graded_decomposition(X, (1, 2))
    assert set(dec.components) == {-1}
    assert dec.nilpotent_part == X


def test_mixed_field_split():
    X = parse_vector_field("dx + x^2*dy", 2)
    dec = graded_decomposition(X, (1, 2))
    assert set(dec.components) == {-1, 0}
    assert dec.nilpotent_part == parse_vector_field("dx", 2)
    assert dec.components[0] == parse_vector_field("x^2*dy", 2)
    assert dec.remainder_part() == parse_vector_field("x^2*dy", 2)


def test_heisenberg_field_is_its_own_nilpotentization():
    Y = parse_vector_field("dy - x*dz", 3)
    dec = graded_decomposition(Y, (1, 1, 2))
    assert set(dec.components) == {-1}
    assert dec.nilpotent_part == Y


def test_reconstruction_random_fields():
    rng = np.random.default_rng(7)
    for _ in range(20):
        dim = int(rng.integers(2, 5))
        comps = []
        for _ in range(dim):
            terms = {}
            for _ in range(rng.integers(0, 5)):
                a = tuple(int(v) for v in rng.integers(0, 3, size=dim))
                terms[a] = F(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))
            comps.append(Polynomial(dim, terms))
        X = VectorField(comps)
        weights = tuple(int(w) for w in sorted(rng.integers(1, 4, size=dim)))
        dec = graded_decomposition(X, weights)
        assert dec.reconstruct() == X


def test_dilation_homogeneity_exact():
    X = parse_vector_field("dx + x^2*dy - y*dx", 2)
    weights = (1, 2)
    dec = graded_decomposition(X, weights)
    for eps in (F(2), F(3), F(1, 2)):
        for k, V in dec.components.items():
            assert dilate_field(V, weights, eps) == V.scale(eps**k)


def test_dilate_examples():
    X = parse_vector_field("x*dy", 2)
    assert dilate_field(X, (1, 2), F(1)) == X  # identity dilation
    assert dilate_field(X, (1, 2), F(2)) == X.scale(F(1, 2))  # degree -1
    dy = parse_vector_field("dy", 2)
    assert dilate_field(dy, (1, 2), F(2)) == dy.scale(F(1, 4))  # degree -2


def test_nilpotentization_idempotent():
    for text, dim, weights in [
        ("dx + x^2*dy", 2, (1, 2)),
        ("dy - x*dz + x*y*dz", 3, (1, 1, 2)),
        ("x*dy + y^2*dz", 3, (1, 2, 3)),
    ]:
        X = parse_vector_field(text, dim)
        hat = nilpotent_approximation(X, weights)
        assert nilpotent_approximation(hat, weights) == hat


def test_degrees_below_minus_one_reported():
    # dz has weighted degree -2 under weights (1,1,2): flagged, not raised
    Z = parse_vector_field("dz", 3)
    dec = graded_decomposition(Z, (1, 1, 2))
    assert dec.degrees_below_minus_one == (-2,)


def test_symbolic_dilation_examples():
    from subnodal.vf import dilate_field_symbolic

    X = parse_vector_field("x*dy", 2)
    sym = dilate_field_symbolic(X, (1, 2))
    assert sym.format() == "eps^-1*(x*dy)"
    assert sym.at(F(3)) == X.scale(F(1, 3))

    mixed = parse_vector_field("dx + x^2*dy", 2)
    sym2 = dilate_field_symbolic(mixed, (1, 2))
    assert set(sym2.components) == {-1, 0}
    assert sym2.at(F(1)) == mixed
