import math

import numpy as np
import pytest

from subnodal._kernels import KERNEL, dijkstra_update, pyref
from subnodal.fd import build_grid, nominal_grid
from subnodal.geom import (
    ball_box_check,
    boxcount_dimension,
    build_distance_graph,
    control_metric_cost,
    distance_to_point,
    greedy_cover_count,
    nodal_density_statistic,
    path_cost,
    point_source,
    sr_distance_map,
    stencil_offsets,
)
from subnodal.nodal import nodal_decomposition
from subnodal.vf import (
    AxisDomain,
    Polynomial,
    SRStructure,
    grushin,
    heisenberg,
    parse_vector_field,
)


def test_control_metric_examples():
    H = heisenberg()
    origin = (0.0, 0.0, 0.0)
    for t in (0.25, 1.0, 2.0):
        assert control_metric_cost(H, origin, (t, 0.0, 0.0)) == pytest.approx(t * t)
    assert control_metric_cost(H, origin, (0.0, 0.0, 1.0)) == math.inf

    G = grushin(2)
    x0, s = 0.5, 0.3
    cost = control_metric_cost(G, (x0, 0.0), (0.0, s))
    assert cost == pytest.approx((s / x0**2) ** 2)
    assert control_metric_cost(G, (0.0, 0.0), (0.0, s)) == math.inf
    assert control_metric_cost(G, (0.0, 0.0), (0.0, 0.0)) == 0.0


def test_path_cost_closure_is_isoperimetric():
    H = heisenberg()
    z = 0.05
    c = path_cost(H, (0.0, 0.0, 0.0), (0.0, 0.0, z))
    assert c == pytest.approx(2 * math.sqrt(math.pi * z))
    assert path_cost(H, (0.0, 0.0, 0.0), (0.0, 0.0, z), closure=False) == math.inf


def test_stencil_offsets_shape():
    offs = stencil_offsets(2, 2)
    assert (1, 0) in offs and (-2, 2) in offs and (0, 0) not in offs
    offs3 = stencil_offsets(3, 1, plane_stencils=[(1, 2, 1, 3)])
    assert (0, 1, 3) in offs3
    offs_extra = stencil_offsets(3, 1, extra_offsets=[(0, 5, 7)])
    assert (0, 5, 7) in offs_extra and (0, -5, -7) in offs_extra


def test_distance_zero_at_source_and_symmetry():
    G = grushin(1)
    g = nominal_grid(G, (33, 32))
    graph = build_distance_graph(G, g, stencil_radius=3)
    src = g.nearest_node((0.5, 1.0))
    f = sr_distance_map(G, g, [src], graph=graph)
    assert f.values[src] == 0.0
    assert f.unreached == 0
    # symmetry on sampled pairs
    rng = np.random.default_rng(2)
    for _ in range(5):
        a = int(rng.integers(0, g.size))
        fa = sr_distance_map(G, g, [a], graph=graph)
        assert abs(fa.values[src] - f.values[a]) <= 1e-9 * (1 + f.values[a])


def test_stencil_monotonicity_and_ball_nesting():
    G = grushin(1)
    g = nominal_grid(G, (33, 32))
    src = g.nearest_node((0.0, 0.0))
    f2 = sr_distance_map(G, g, [src], stencil_radius=2)
    f3 = sr_distance_map(G, g, [src], stencil_radius=3)
    assert (f3.values <= f2.values + 1e-12).all()
    ball_05 = f3.values <= 0.5
    ball_08 = f3.values <= 0.8
    assert (ball_05 <= ball_08).all()  # set inclusion


def test_unreachable_reported():
    # a single horizontal field in the plane cannot leave its x-line
    S = SRStructure(
        2,
        (parse_vector_field("dx", 2),),
        Polynomial.constant(2, 1),
        (AxisDomain("dirichlet", lo=-1.0, hi=1.0), AxisDomain("periodic", length=1.0)),
        name="xonly",
    )
    g = build_grid(S.domain, (9, 8))
    f = sr_distance_map(S, g, [0], stencil_radius=2)
    assert f.unreached == g.size - 9


def test_heisenberg_on_axis_distance_exact():
    H = heisenberg()
    g = nominal_grid(H, (32, 32, 48))
    f = sr_distance_map(H, g, point_source(H, g, (0.0, 0.0, 0.0)), stencil_radius=2)
    for t in (0.4, 0.8):
        d = distance_to_point(H, g, f, (t, 0.0, 0.0))
        assert d == pytest.approx(t, rel=0.03)


def test_grushin_vertical_distance_exponent():
    G = grushin(1)
    g = nominal_grid(G, (129, 128))
    graph = build_distance_graph(G, g, stencil_radius=3)
    f = sr_distance_map(G, g, point_source(G, g, (0.0, 0.0)), graph=graph)
    deltas = (0.2, 0.4, 0.8)
    ds = [distance_to_point(G, g, f, (0.0, d)) for d in deltas]
    slope = float(np.polyfit(np.log(deltas), np.log(ds), 1)[0])
    assert abs(slope - 0.5) <= 0.12  # 1/(alpha+1) scaling at the singular line


def test_kernel_and_pyref_agree():
    G = grushin(1)
    g = nominal_grid(G, (17, 16))
    graph = build_distance_graph(G, g, stencil_radius=2)
    d1 = np.full(g.size, np.inf)
    d2 = np.full(g.size, np.inf)
    seeds = np.array([3], dtype=np.int64)
    costs = np.zeros(1)
    dijkstra_update(graph.indptr, graph.indices, graph.costs, d1, seeds, costs)
    pyref.dijkstra_update(graph.indptr, graph.indices, graph.costs, d2, seeds, costs)
    assert np.allclose(d1, d2, rtol=0, atol=0)
    assert KERNEL in ("compiled", "python")


def test_ballbox_origin_contains_center():
    G = grushin(1)
    g = nominal_grid(G, (65, 64))
    rep = ball_box_check(G, g, (0.0, 0.0), [0.1, 0.2, 0.4], (1, 2))
    for e in rep.entries:
        assert e.inner > 0
        assert e.inner <= e.outer


def test_ballbox_elliptic_point_tight():
    G = grushin(1)
    g = nominal_grid(G, (65, 64))
    rep = ball_box_check(G, g, (1.0, 0.0), [0.05, 0.1], (1, 1))
    assert rep.max_ratio <= 2.0
    assert rep.entries[-1].truncated  # ball reaches the x = 1 wall layer


def test_boxcount_single_node_flat():
    G = grushin(1)
    g = nominal_grid(G, (33, 32))
    cells = np.array([g.nearest_node((0.5, 1.0))])
    rep = boxcount_dimension(G, g, cells, [0.1, 0.2, 0.4])
    assert rep.counts == [1, 1, 1]
    assert abs(rep.slope) <= 1e-9


def test_boxcount_budget_partial():
    G = grushin(1)
    g = nominal_grid(G, (33, 32))
    graph = build_distance_graph(G, g, stencil_radius=2)
    n, complete = greedy_cover_count(graph, g.size, np.arange(g.size), 0.05, max_balls=3)
    assert n == 3 and not complete


def test_density_statistic_plane_and_all_nodal():
    G = grushin(1)
    g = build_grid(G.domain, (33, 64))
    y = g.node_coords()[1]
    v = np.sin(y - math.pi)  # nodal plane through the domain center row
    dec = nodal_decomposition(g, v)
    res = nodal_density_statistic(G, g, dec, stencil_radius=3)
    # farthest point sits on the singular line half a circle away in y
    direct = sr_distance_map(
        G, g, [s for s in _plane_sources(G, g, dec)], stencil_radius=3
    )
    assert res.rho_all == pytest.approx(np.max(direct.values), rel=1e-12)

    dec0 = nodal_decomposition(g, np.zeros(g.size))
    res0 = nodal_density_statistic(G, g, dec0, stencil_radius=3)
    assert res0.rho == 0.0


def _plane_sources(G, g, dec):
    from subnodal.geom import nodal_cell_sources

    return nodal_cell_sources(G, g, dec)


def test_distance_field_dump():
    G = grushin(1)
    g = nominal_grid(G, (17, 16))
    f = sr_distance_map(G, g, [0], stencil_radius=2)
    text = f.dump_text()
    assert text.splitlines()[0].startswith("sources 1 seeds")
    assert len(text.splitlines()) == 1 + g.size


@pytest.mark.slow
def test_heisenberg_on_axis_distance_at_stated_resolution():
    # straight horizontal segments are geodesic: d(0, (t,0,0)) = t exactly
    H = heisenberg()
    g = nominal_grid(H, (64, 64, 64))
    f = sr_distance_map(H, g, point_source(H, g, (0.0, 0.0, 0.0)), stencil_radius=2)
    for t in (0.2, 0.5, 1.0):
        d = distance_to_point(H, g, f, (t, 0.0, 0.0))
        assert d == pytest.approx(t, rel=0.03)
