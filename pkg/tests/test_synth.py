import math

import numpy as np
import pytest
from scipy.stats import chisquare

from conftest import random_rotation
from metgraph.geometry import PointCloud
from metgraph.params import InfeasibleParameters
from metgraph.pseudograph import is_isomorphic
from metgraph.synth import (
    PAIR_KINDS,
    Arc,
    Edge,
    EmbeddedGraph,
    Polyline,
    Segment,
    TubeModel,
    dist_to_graph,
    estimate_global_reach,
    grid_sample_dense,
    is_dense,
    lollipop_graph,
    lower_bound_pair,
    named_graph,
    sample_noiseless,
    sample_tube,
    segment_graph,
    worst_case_graph,
)

ANGLES = (math.pi / 3, math.pi / 2, 2 * math.pi / 3)


# -- curves -------------------------------------------------------------------

def _dense_dist(curve, q, m=100_000):
    pts = curve.point_at(np.linspace(0, curve.length, m))
    return np.sqrt(((pts[None, :, :] - q[:, None, :]) ** 2).sum(-1)).min(axis=1)


@pytest.mark.parametrize("curve", [
    Segment([0, 0, 0], [1, 2, -1]),
    Polyline([[0, 0], [1, 0], [1, 1], [3, 2]]),
    Arc([0.5, -0.2], 1.3, 0.4, 2.5),
    Arc([0, 0, 0], 0.7, -1.0, 2 * math.pi, basis=np.array([[1, 0, 0], [0, 0.6, 0.8]])),
])
def test_curve_closest_matches_discretisation(rng, curve):
    q = rng.uniform(-2, 2, size=(25, curve.dim))
    d, foot = curve.closest(q)
    np.testing.assert_allclose(d, _dense_dist(curve, q), atol=1e-5)
    np.testing.assert_allclose(np.sqrt(((q - foot) ** 2).sum(1)), d, atol=1e-12)


def test_arc_geometry():
    a = Arc([0, 0], 2.0, 0.0, math.pi / 2)
    assert a.length == pytest.approx(math.pi)
    np.testing.assert_allclose(a.start, [2, 0], atol=1e-15)
    np.testing.assert_allclose(a.end, [0, 2], atol=1e-15)
    np.testing.assert_allclose(a.point_at(a.length / 2), [math.sqrt(2), math.sqrt(2)])
    assert a.min_radius() == 2.0


# -- graphs -------------------------------------------------------------------

def test_degree_two_vertices_rejected():
    a, b, c = np.zeros(2), np.array([1.0, 0]), np.array([2.0, 0])
    with pytest.raises(ValueError):
        EmbeddedGraph([a, b, c], [Edge(0, 1, Segment(a, b)), Edge(1, 2, Segment(b, c))])


def test_endpoint_mismatch_rejected():
    with pytest.raises(ValueError):
        EmbeddedGraph([[0, 0], [1, 0]], [Edge(0, 1, Segment([0, 0], [1, 1e-6]))])


@pytest.mark.parametrize("alpha", ANGLES)
@pytest.mark.parametrize("tau", [1.0, 5.0])
def test_worst_case_geometry(alpha, tau):
    g = worst_case_graph(alpha, tau)
    x, xp = g.vertices[0], g.vertices[1]
    lens = [e for e in g.edges if isinstance(e.curve, Arc)]
    # the two lens arcs leave x at angle alpha
    ends = [e.curve.start_tangent() if e.u == 0 else e.curve.end_tangent() for e in lens]
    assert math.acos(np.clip(ends[0] @ ends[1], -1, 1)) == pytest.approx(alpha, abs=1e-9)
    for e in lens:
        assert e.curve.min_radius() == tau
        assert e.length == pytest.approx(alpha * tau, rel=1e-12)
    chord = np.linalg.norm(xp - x)
    assert chord == pytest.approx(2 * tau * math.sin(alpha / 2), rel=1e-12)
    assert 2 * tau * math.asin(chord / (2 * tau)) == pytest.approx(alpha * tau, rel=1e-12)
    p = g.params
    assert p.alpha == pytest.approx(alpha, abs=1e-9) and p.tau == tau
    assert min(g.edge_lengths) >= p.b - 1e-12


@pytest.mark.parametrize("alpha", ANGLES)
def test_worst_case_global_reach_bound(alpha):
    # the tightest far pair in the lens spans the two arcs near a vertex; a brute
    # discretisation must never beat the declared lower bound
    g = worst_case_graph(alpha, 1.0)
    xi = g.params.xi
    m = min(g.params.b, g.params.alpha * g.params.tau)
    pts, gd = g.discretize(m / 400)
    ed = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    far = gd >= m * (1 - 1e-9)
    assert ed[far].min() >= xi
    assert xi > 0.9 * ed[far].min()


def test_global_reach_of_two_parallel_segments():
    a, b, c, d = np.array([0.0, 0]), np.array([1.0, 0]), np.array([0.0, 0.3]), np.array([1.0, 0.3])
    g = EmbeddedGraph([a, b, c, d], [Edge(0, 1, Segment(a, b)), Edge(2, 3, Segment(c, d))])
    xi = estimate_global_reach(g, 0.5, step=0.01)
    assert 0.29 <= xi <= 0.3


def test_worst_case_embeds_in_higher_dimension():
    g = worst_case_graph(math.pi / 2, 1.0, dim=4)
    assert g.dim == 4 and np.all(g.vertices[:, 2:] == 0)
    assert is_isomorphic(g.topology(), worst_case_graph(math.pi / 2, 1.0).topology())


def test_worst_case_invalid():
    with pytest.raises(ValueError):
        worst_case_graph(0.0, 1.0)
    with pytest.raises(ValueError):
        worst_case_graph(1.0, -1.0)


@pytest.mark.parametrize("kind", PAIR_KINDS)
def test_lower_bound_pairs(kind):
    g_a, g_b = lower_bound_pair(kind)
    assert not is_isomorphic(g_a.topology(), g_b.topology())
    assert g_a.total_length == pytest.approx(g_b.total_length, rel=1e-12)


def test_pair_lengths_follow_parameter():
    g1, g2 = lower_bound_pair("shortest_edge", 0.3)
    assert g1.total_length == pytest.approx(1.3) and g2.params.b == pytest.approx(0.3)
    g7, g8 = lower_bound_pair("local_reach", 0.1)
    assert g7.total_length == pytest.approx(1 + 2 * math.pi * 0.1) and g7.params.tau == pytest.approx(0.1)
    g5, g6 = lower_bound_pair("global_reach", 0.15)
    assert g6.params.xi == pytest.approx(0.15, rel=0.05) and g6.params.xi <= 0.15


def test_pair_errors():
    with pytest.raises(ValueError):
        lower_bound_pair("nope")
    with pytest.raises(ValueError):
        lower_bound_pair("angle", 4.0)


def test_named_graph_lookup():
    assert named_graph("g4").topology().n_edges == 6
    assert named_graph("worst-case", alpha=1.0, tau=2.0).name.startswith("worst_case")
    with pytest.raises(ValueError):
        named_graph("unknown")


def test_json_round_trip(tmp_path):
    g = worst_case_graph(math.pi / 3, 2.0, dim=3)
    g.save(tmp_path / "g.json")
    h = EmbeddedGraph.load(tmp_path / "g.json")
    assert h.topology() == g.topology() and h.params == g.params
    q = np.random.default_rng(0).normal(size=(20, 3))
    np.testing.assert_allclose(h.dist(q), g.dist(q), atol=1e-12)


# -- distance -------------------------------------------------------------------

def test_dist_to_graph_simple():
    g = segment_graph(1.0)
    assert dist_to_graph(g, np.array([0.5, 0.3])) == pytest.approx(0.3)
    assert dist_to_graph(g, np.array([0.25, 0.0])) == 0.0


def test_dist_rigid_motion(rng):
    g = lollipop_graph(0.3, dim=3)
    rot, shift = random_rotation(rng, 3), rng.normal(size=3)
    q = rng.normal(size=(30, 3))
    np.testing.assert_allclose(g.transformed(rot, shift).dist(q @ rot.T + shift), g.dist(q), atol=1e-9)


# -- sampling -------------------------------------------------------------------

def test_noiseless_points_on_graph():
    g = worst_case_graph(math.pi / 2, 1.0)
    cloud = sample_noiseless(g, 2000, seed=3)
    assert np.all(g.dist(cloud.points) <= 1e-9)


def test_noiseless_edge_counts_multinomial():
    # arms of lengths 1, 2, 3
    c = np.zeros(2)
    tips = [np.array([1.0, 0]), np.array([0, 2.0]), np.array([-3.0, 0])]
    g = EmbeddedGraph([c, *tips], [Edge(0, k + 1, Segment(c, t)) for k, t in enumerate(tips)])
    pts = sample_noiseless(g, 100_000, seed=7).points
    d = np.stack([e.curve.closest(pts)[0] for e in g.edges], axis=1)
    counts = np.bincount(d.argmin(axis=1), minlength=3)
    assert chisquare(counts, 1e5 * np.array([1, 2, 3]) / 6).pvalue > 1e-3


def test_sampling_is_deterministic():
    g = worst_case_graph(math.pi / 3, 1.0)
    a = sample_tube(TubeModel(g, 0.05), 500, seed=11).points
    b = sample_tube(TubeModel(g, 0.05), 500, seed=11).points
    np.testing.assert_array_equal(a, b)


def test_sample_size_must_be_positive():
    with pytest.raises(ValueError):
        sample_noiseless(segment_graph(), 0)


def test_tube_points_inside():
    g = worst_case_graph(math.pi / 2, 1.0)
    m = TubeModel(g, 0.1)
    assert np.all(g.dist(sample_tube(m, 3000, seed=1).points) <= 0.1)


def test_tube_sigma_validated():
    g = worst_case_graph(math.pi / 2, 1.0)
    with pytest.raises(InfeasibleParameters):
        TubeModel(g, 0.5)


def test_tube_acceptance_rate_matches_volume():
    g = worst_case_graph(math.pi / 2, 1.0)
    sigma = 0.1
    lo, hi = g.bbox()
    lo, hi = lo - sigma, hi + sigma
    # independent Monte Carlo estimate of the tube's share of the box
    probe = np.random.default_rng(99).uniform(lo, hi, size=(200_000, 2))
    share = np.mean(g.dist(probe) <= sigma)
    rng = np.random.default_rng(5)
    cand = rng.uniform(lo, hi, size=(10_000, 2))
    rate = np.mean(g.dist(cand) <= sigma)
    se = math.sqrt(share * (1 - share) / 1e4)
    assert abs(rate - share) < 3 * se + 3 * math.sqrt(share * (1 - share) / 2e5)
    # the sampler itself: accepted points cover both sides of a straight edge evenly
    seg = segment_graph(1.0)
    pts = sample_tube(TubeModel(seg, 0.05), 10_000, seed=2).points
    frac = np.mean(pts[:, 1] > 0)
    assert abs(frac - 0.5) < 3 * math.sqrt(0.25 / 1e4)


def test_grid_unit_segment():
    assert len(grid_sample_dense(TubeModel(segment_graph(1.0)), 0.1)) == 11


def test_grid_spacing_positive():
    with pytest.raises(ValueError):
        grid_sample_dense(TubeModel(segment_graph(1.0)), 0.0)


@pytest.mark.parametrize("sigma", [0.0, 0.05])
def test_grid_sample_is_dense(sigma):
    g = worst_case_graph(math.pi / 2, 1.0)
    m = TubeModel(g, sigma)
    cloud = grid_sample_dense(m, 0.05)
    assert is_dense(cloud, m, 0.1)


def test_is_dense_detects_hole():
    g = worst_case_graph(math.pi / 2, 1.0)
    m = TubeModel(g)
    cloud = grid_sample_dense(m, 0.05)
    c = g.edges[0].curve.point_at(0.7)
    keep = np.sqrt(((cloud.points - c) ** 2).sum(1)) > 0.1
    assert not is_dense(PointCloud(cloud.points[keep]), m, 0.1)
    assert not is_dense(PointCloud(np.empty((0, 2))), m, 0.1)


def test_is_dense_never_accepts_sparse():
    g = segment_graph(1.0)
    m = TubeModel(g)
    # spacing 0.12 leaves gaps of 0.06 > 0.05 = delta / 2
    assert not is_dense(grid_sample_dense(m, 0.12), m, 0.1)
