import math

import numpy as np
import pytest

from subnodal.fd import build_grid, nominal_grid
from subnodal.vf import AxisDomain, grushin, heisenberg, desingularize_grushin


def test_dirichlet_interior_counts_and_spacing():
    g = build_grid((AxisDomain("dirichlet", lo=0.0, hi=1.0),), (5,))
    assert g.shape == (5,)
    assert g.axes[0].delta == pytest.approx(1.0 / 6.0)
    assert g.axes[0].coords[0] == pytest.approx(1.0 / 6.0)
    assert g.axes[0].coords[-1] == pytest.approx(5.0 / 6.0)


def test_nominal_counts_match_unknown_arithmetic():
    gh = nominal_grid(heisenberg(), (48, 48, 64))
    assert gh.size == 46 * 48 * 64
    gg = nominal_grid(grushin(1), (64, 64))
    assert gg.size == 62 * 64


def test_count_validation():
    with pytest.raises(ValueError):
        build_grid((AxisDomain("periodic", length=1.0),), (2,))


def test_periodic_wrap_shift():
    g = build_grid(grushin(1).domain, (5, 6))
    target, valid = g.shift(1, +1)
    assert valid.all()
    grids = g.index_grids()
    assert (grids[1][target] == (grids[1] + 1) % 6).all()
    t2, v2 = g.shift(0, +1)
    assert (~v2).sum() == 6  # last dirichlet column has no upper neighbor


def test_shift_multi_matches_sequential():
    g = build_grid(heisenberg().domain, (4, 5, 6))
    t1, v1 = g.shift_multi((1, 2, -1))
    ta, va = g.shift(0, 1)
    assert (t1[va & v1] >= 0).all()
    # spot check one node
    multi = (1, 1, 0)
    flat = g.flat_index(multi)
    tgt, ok = g.shift_multi((1, 2, -1))
    assert ok[flat]
    assert tgt[flat] == g.flat_index((2, 3, 5))


def test_twisted_axis_validation_and_adjacency():
    H = heisenberg(closed=True)
    # n_z must be a multiple of n_y for the shear to map the grid to itself
    g = build_grid(H.domain, (4, 4, 8))
    tgt, ok = g.shift(0, +1)
    assert ok.all()
    # wrap from the last x-slab applies the shear z -> z + L*y
    multi = (3, 1, 0)
    flat = g.flat_index(multi)
    y1 = g.axes[1].coords[1]
    shear_steps = round(H.domain[0].shear_coeff * y1 / g.axes[2].delta)
    assert tgt[flat] == g.flat_index((0, 1, shear_steps % 8))

    with pytest.raises(ValueError, match="twist requested where unsupported"):
        build_grid(H.domain, (4, 4, 9))


def test_off_grid_twist_rejected_on_other_axes():
    bad = (
        AxisDomain("dirichlet", lo=0.0, hi=1.0),
        AxisDomain("twisted", length=1.0, shear_target=0, shear_source=0, shear_coeff=1.0),
    )
    with pytest.raises(ValueError, match="first axis"):
        build_grid(bad, (4, 4))


def test_nearest_node_and_coords():
    g = build_grid(grushin(1).domain, (5, 8))
    n = g.nearest_node((0.0, 2 * math.pi - 1e-9))
    coords = g.node_coords()
    assert coords[0][n] == pytest.approx(0.0)
    assert coords[1][n] == pytest.approx(0.0) or coords[1][n] == pytest.approx(
        2 * math.pi * 7 / 8
    )


def test_grid_dump_contains_metadata():
    g = build_grid(grushin(1).domain, (5, 8))
    text = g.dump_text()
    assert text.startswith("dim 2\nshape 5 8\n")
    assert "axis 0 dirichlet" in text
    assert "coords" in text


def test_boundary_mask():
    g = build_grid(grushin(1).domain, (5, 8))
    mask = g.dirichlet_boundary_mask()
    grids = g.index_grids()
    assert (mask == ((grids[0] == 0) | (grids[0] == 4))).all()
