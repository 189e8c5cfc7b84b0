import math

import numpy as np
import pytest
import scipy.sparse.linalg as spla

from subnodal.fd import (
    assemble_euclidean_laplacian,
    assemble_riemannian_blend,
    assemble_schrodinger_1d,
    assemble_sublaplacian,
    build_grid,
    nominal_grid,
)
from subnodal.fd.assemble import SparseSymmetricOperator
from subnodal.vf import AxisDomain, Polynomial, SRStructure, grushin, heisenberg, parse_vector_field


def interval_structure():
    return SRStructure(
        1,
        (parse_vector_field("dx", 1),),
        Polynomial.constant(1, 1),
        (AxisDomain("dirichlet", lo=0.0, hi=1.0),),
        name="interval",
    )


def test_textbook_tridiagonal_stencil():
    g = build_grid(interval_structure().domain, (3,))
    op = assemble_sublaplacian(interval_structure(), g)
    h = 0.25
    expected = np.array([[2, -1, 0], [-1, 2, -1], [0, -1, 2]]) / h**2
    assert np.allclose(op.matrix.toarray(), expected, rtol=0, atol=1e-12)
    vals = np.linalg.eigvalsh(op.matrix.toarray())
    closed_form = np.array([(2 - math.sqrt(2)), 2.0, (2 + math.sqrt(2))]) / h**2
    assert np.allclose(vals, closed_form, rtol=1e-13)


def test_symmetry_and_psd_grushin():
    G = grushin(1)
    g = nominal_grid(G, (64, 64))
    op = assemble_sublaplacian(G, g)
    assert op.symmetry_defect() < 1e-12
    lam_min = spla.eigsh(op.matrix, k=1, which="SA", return_eigenvectors=False)[0]
    assert lam_min >= -1e-10


def test_heisenberg_interior_consistency_order():
    # applying the operator to phi_{1,1} approaches 4*pi*phi at O(h^2)
    H = heisenberg()
    c = math.sqrt(2 * math.pi)
    errs = []
    for counts in ((16, 16, 16), (32, 32, 32)):
        g = nominal_grid(H, counts)
        op = assemble_sublaplacian(H, g)
        coords = g.node_coords()
        phi = np.sin(c * coords[0]) * np.sin(c * coords[1])
        resid = op.matrix @ phi - 4 * math.pi * phi
        interior = ~g.dirichlet_boundary_mask(layers=2)
        errs.append(np.abs(resid[interior]).max())
    order = math.log(errs[0] / errs[1]) / math.log(2.0)
    assert order >= 1.8


def test_divergence_check_rejects():
    S = SRStructure(
        1,
        (parse_vector_field("x*dx", 1),),
        Polynomial.constant(1, 1),
        (AxisDomain("dirichlet", lo=0.0, hi=1.0),),
        name="bad",
    )
    g = build_grid(S.domain, (8,))
    with pytest.raises(NotImplementedError, match="divergence"):
        assemble_sublaplacian(S, g)


def test_blend_identity_and_form_monotonicity():
    G = grushin(1)
    g = nominal_grid(G, (20, 16))
    base = assemble_sublaplacian(G, g)
    blend0 = assemble_riemannian_blend(G, g, 0.0)
    assert (blend0.matrix - base.matrix).nnz == 0

    blend1 = assemble_riemannian_blend(G, g, 0.35)
    euclid = assemble_euclidean_laplacian(g)
    rng = np.random.default_rng(3)
    for _ in range(100):
        v = rng.standard_normal(g.size)
        qa = float(v @ (blend1.matrix @ v))
        q0 = float(v @ (base.matrix @ v))
        qe = float(v @ (euclid.matrix @ v))
        assert qa >= q0 - 1e-10 * abs(qa)
        assert qa == pytest.approx(q0 + 0.35**2 * qe, rel=1e-12)


def test_blend_lambda1_monotone_in_eps():
    from subnodal.eig import smallest_eigenpairs

    G = grushin(1)
    g = nominal_grid(G, (24, 20))
    lams = []
    for eps in (0.1, 0.2):
        op = assemble_riemannian_blend(G, g, eps)
        lams.append(smallest_eigenpairs(op, 1, tol=1e-9)[0].value)
    assert lams[1] >= lams[0] - 1e-12


def test_schrodinger_ground_energy_and_sign():
    from subnodal.eig import smallest_eigenpairs

    half = math.sqrt(math.pi / 2)
    op = assemble_schrodinger_1d({"m": 32.0}, -half, half, 4096)
    pair = smallest_eigenpairs(op, 1)[0]
    assert abs(pair.value / 32.0 - 1.0) <= 0.02
    assert pair.vector.min() > -1e-12  # positive after sign normalization

    pure = assemble_schrodinger_1d({"k": 0.0, "alpha": 1}, -1.0, 1.0, 2048)
    lam = smallest_eigenpairs(pure, 1)[0].value
    assert lam == pytest.approx((math.pi / 2) ** 2, rel=1e-5)


def test_operator_dump_roundtrip():
    g = build_grid(interval_structure().domain, (4,))
    op = assemble_sublaplacian(interval_structure(), g)
    text = op.dump_text()
    back = SparseSymmetricOperator.from_text(text)
    assert np.allclose(back.matrix.toarray(), op.matrix.toarray())
    assert text.splitlines()[0].startswith("dimension 4 nnz")


def test_rayleigh_uses_factors():
    from subnodal.eig import rayleigh_quotient

    G = grushin(1)
    g = nominal_grid(G, (16, 12))
    op = assemble_sublaplacian(G, g)
    rng = np.random.default_rng(0)
    v = rng.standard_normal(g.size)
    direct = float(v @ (op.matrix @ v)) / float(v @ v)
    assert rayleigh_quotient(op, v) == pytest.approx(direct, rel=1e-10)
