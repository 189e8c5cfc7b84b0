import math

import numpy as np
import pytest

from subnodal.eig import (
    EigenPair,
    cluster_multiplicities,
    count_below_separable,
    dump_eigenpair,
    orthogonality_defect,
    rayleigh_quotient,
    residual_norm,
    smallest_eigenpairs,
    translation_block_cluster,
    translation_block_spectrum,
)
from subnodal.fd import assemble_schrodinger_1d, assemble_sublaplacian, build_grid, nominal_grid
from subnodal.vf import AxisDomain, Polynomial, SRStructure, grushin, heisenberg, parse_vector_field


def interval_op(n):
    S = SRStructure(
        1,
        (parse_vector_field("dx", 1),),
        Polynomial.constant(1, 1),
        (AxisDomain("dirichlet", lo=0.0, hi=1.0),),
    )
    return assemble_sublaplacian(S, build_grid(S.domain, (n,)))


def test_tridiagonal_exact_values():
    op = interval_op(3)
    pairs = smallest_eigenpairs(op, 3)
    h = 0.25
    expected = [(2 - math.sqrt(2)) / h**2, 2 / h**2, (2 + math.sqrt(2)) / h**2]
    assert [p.value for p in pairs] == pytest.approx(expected, rel=1e-12)
    assert all(p.residual <= 1e-10 for p in pairs)


def test_discrete_dirichlet_eigenvalues_closed_form():
    n = 200
    op = interval_op(n)
    h = 1.0 / (n + 1)
    pairs = smallest_eigenpairs(op, 5)
    for j, p in enumerate(pairs, start=1):
        discrete = 4.0 * math.sin(j * math.pi * h / 2.0) ** 2 / h**2
        assert p.value == pytest.approx(discrete, rel=1e-10)
        assert abs(p.value - (j * math.pi) ** 2) <= discrete * (j * math.pi * h) ** 2


def test_orthogonality_and_ordering():
    G = grushin(1)
    op = assemble_sublaplacian(G, nominal_grid(G, (32, 24)))
    pairs = smallest_eigenpairs(op, 8, tol=1e-8, seed=5)
    vals = [p.value for p in pairs]
    assert vals == sorted(vals)
    assert orthogonality_defect(pairs) <= 1e-8


def test_determinism_same_seed():
    G = grushin(1)
    op = assemble_sublaplacian(G, nominal_grid(G, (24, 20)))
    a = smallest_eigenpairs(op, 4, seed=42)
    b = smallest_eigenpairs(op, 4, seed=42)
    for p, q in zip(a, b):
        assert p.value == q.value
        assert np.array_equal(p.vector, q.vector)


def test_rayleigh_quotient_contracts():
    G = grushin(1)
    op = assemble_sublaplacian(G, nominal_grid(G, (32, 24)))
    pairs = smallest_eigenpairs(op, 3, tol=1e-9)
    lam1 = pairs[0].value
    assert rayleigh_quotient(op, pairs[0].vector) == pytest.approx(lam1, rel=1e-8)
    rng = np.random.default_rng(0)
    for _ in range(1000):
        v = rng.standard_normal(op.dim)
        assert rayleigh_quotient(op, v) >= lam1 - 1e-8
    with pytest.raises(ValueError):
        rayleigh_quotient(op, np.zeros(op.dim))


def test_rayleigh_constant_in_kernel_on_periodic_grid():
    # pure periodic torus: constants are in the kernel
    S = SRStructure(
        2,
        (parse_vector_field("dx", 2), parse_vector_field("dy", 2)),
        Polynomial.constant(2, 1),
        (AxisDomain("periodic", length=1.0), AxisDomain("periodic", length=1.0)),
    )
    op = assemble_sublaplacian(S, build_grid(S.domain, (8, 8)))
    v = np.ones(op.dim)
    assert rayleigh_quotient(op, v) == pytest.approx(0.0, abs=1e-14)


def test_residual_norm_triangle_bound():
    op = interval_op(50)
    pairs = smallest_eigenpairs(op, 2, tol=1e-10)
    p = pairs[0]
    assert residual_norm(op, p) <= 1e-8
    rng = np.random.default_rng(1)
    delta = rng.standard_normal(op.dim) * 1e-6
    perturbed = EigenPair(p.value, p.vector + delta, 0.0)
    bound = np.linalg.norm(op.matrix @ delta) + abs(p.value) * np.linalg.norm(delta)
    assert residual_norm(op, perturbed) <= bound + 1e-12


def test_refinement_ladder_cauchy():
    G = grushin(1)
    lams = []
    for counts in ((16, 16), (32, 32), (64, 64)):
        op = assemble_sublaplacian(G, nominal_grid(G, counts))
        lams.append(smallest_eigenpairs(op, 1, tol=1e-9)[0].value)
    gaps = [abs(lams[i + 1] - lams[i]) for i in range(2)]
    assert gaps[1] < gaps[0]


def test_cluster_multiplicities():
    vals = [1.0, 1.0 + 1e-9, 2.0, 3.0, 3.0, 3.0]
    ids, mult, gaps = cluster_multiplicities(vals)
    assert list(mult) == [2, 2, 1, 3, 3, 3]
    assert gaps[2] == pytest.approx(1.0, rel=1e-6)


def test_translation_blocks_match_dense():
    H = heisenberg()
    g = nominal_grid(H, (8, 6, 6))
    op = assemble_sublaplacian(H, g)
    dense = np.linalg.eigvalsh(op.matrix.toarray())
    vals, _ = translation_block_spectrum(H, g, float(dense[-1]) + 1.0)
    assert vals.shape[0] == dense.shape[0]
    assert np.max(np.abs(np.sort(vals) - dense)) < 1e-10

    cl = translation_block_cluster(H, g, float(dense[3]), 1e-8, op=op)
    assert cl, "cluster must not be empty"
    for p in cl:
        assert p.residual < 1e-9
    V = np.stack([p.vector for p in cl], axis=1)
    assert np.abs(V.T @ V - np.eye(V.shape[1])).max() < 1e-10


def test_count_below_separable_is_cheap_estimate():
    H = heisenberg()
    g = nominal_grid(H, (10, 8, 8))
    c = count_below_separable(H, g, 10.0)
    assert c > 0


def test_shift_invert_matches_lobpcg():
    G = grushin(1)
    op = assemble_sublaplacian(G, nominal_grid(G, (28, 24)))
    a = smallest_eigenpairs(op, 6, method="lobpcg", tol=1e-8)
    b = smallest_eigenpairs(op, 6, method="shift-invert")
    for p, q in zip(a, b):
        assert p.value == pytest.approx(q.value, rel=1e-7)


def test_dump_eigenpair_format():
    op = interval_op(4)
    p = smallest_eigenpairs(op, 1)[0]
    text = dump_eigenpair(p)
    lines = text.splitlines()
    assert lines[0].startswith("value ")
    assert len(lines) == 1 + op.dim
