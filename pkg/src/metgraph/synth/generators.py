"""Ground-truth graph families.

``worst_case_graph`` is the two-arc lens: two radius-``tau`` arcs meeting at
angle ``alpha`` at both ends. A pendant edge hangs off each lens vertex so the
vertices have degree 3 (a bare lens would only have degree-2 vertices and is
topologically a circle).

``lower_bound_pair`` returns the four pairs of nearly indistinguishable
graphs, one per shape parameter.
"""
from __future__ import annotations

import math

import numpy as np

from ..params import ShapeParams
from .curves import Arc, Segment
from .graph import Edge, EmbeddedGraph, estimate_global_reach

# reach declared for straight-only graphs, relative to their total length
_STRAIGHT_REACH = 1e3


def declare_params(graph: EmbeddedGraph, sigma: float = 0.0) -> ShapeParams:
    """Shape parameters measured from the construction.

    ``xi`` comes from :func:`estimate_global_reach`; straight-only graphs get a
    large finite reach since the formulas need ``tau < inf``.
    """
    b = float(graph.edge_lengths.min())
    alpha = graph.min_angle()
    tau = graph.min_reach()
    if not math.isfinite(tau):
        tau = _STRAIGHT_REACH * graph.total_length
    m = min(b, alpha * tau)
    xi = estimate_global_reach(graph, m, step=min(m, b) / 100)
    if not math.isfinite(xi):
        xi = _STRAIGHT_REACH * graph.total_length
    return ShapeParams(b=b, alpha=alpha, tau=tau, xi=xi, sigma=sigma)


def _finish(vertices, edges, name: str, dim: int) -> EmbeddedGraph:
    g = EmbeddedGraph(vertices, edges, name=name)
    g.params = declare_params(g)
    return g.embedded(dim) if dim != g.dim else g


def worst_case_graph(alpha: float, tau: float, dim: int = 2, pendant: float | None = None) -> EmbeddedGraph:
    """Lens of two radius-``tau`` arcs with apex angle ``alpha`` plus two pendants.

    Vertex 0 is ``x`` at the origin, vertex 1 is ``x'`` at distance
    ``2 tau sin(alpha/2)`` along the first axis, vertices 2 and 3 are the pendant
    tips. Each arc has length ``alpha * tau``; pendants default to the same.
    """
    if not 0 < alpha <= math.pi or tau <= 0:
        raise ValueError("need alpha in (0, pi] and tau > 0")
    if pendant is None:
        pendant = alpha * tau
    half = alpha / 2
    chord = 2 * tau * math.sin(half)
    h = tau * math.cos(half)
    x, xp = np.array([0.0, 0.0]), np.array([chord, 0.0])
    tip0, tip1 = np.array([-pendant, 0.0]), np.array([chord + pendant, 0.0])
    # lower arc: centre above the chord, runs x -> x'
    low = Arc([chord / 2, h], tau, -math.pi / 2 - half, alpha)
    # upper arc: centre below the chord, runs x' -> x
    up = Arc([chord / 2, -h], tau, math.pi / 2 - half, alpha)
    edges = [
        Edge(0, 1, low),
        Edge(1, 0, up),
        Edge(2, 0, Segment(tip0, x)),
        Edge(1, 3, Segment(xp, tip1)),
    ]
    return _finish([x, xp, tip0, tip1], edges, f"worst_case(alpha={alpha:g}, tau={tau:g})", dim)


def segment_graph(length: float = 1.0, dim: int = 2) -> EmbeddedGraph:
    a, b = np.zeros(2), np.array([length, 0.0])
    return _finish([a, b], [Edge(0, 1, Segment(a, b))], f"segment({length:g})", dim)


def star_graph(arm: float = 1.0, arms: int = 3, dim: int = 2) -> EmbeddedGraph:
    """Equiangular star; ``arms=3`` is the Y-junction."""
    c = np.zeros(2)
    tips = [arm * np.array([math.cos(2 * math.pi * k / arms), math.sin(2 * math.pi * k / arms)])
            for k in range(arms)]
    edges = [Edge(0, k + 1, Segment(c, t)) for k, t in enumerate(tips)]
    return _finish([c, *tips], edges, f"star({arms}x{arm:g})", dim)


def lollipop_graph(radius: float, stick: float = 1.0, dim: int = 2) -> EmbeddedGraph:
    """Loop of the given radius attached to an edge of length ``stick``."""
    v, tip = np.zeros(2), np.array([0.0, -stick])
    loop = Arc([0.0, radius], radius, -math.pi / 2, 2 * math.pi)
    edges = [Edge(0, 0, loop), Edge(0, 1, Segment(v, tip))]
    return _finish([v, tip], edges, f"lollipop(r={radius:g}, stick={stick:g})", dim)


def _shortest_edge_pair(b: float):
    a0, a1 = np.zeros(2), np.array([1.0 + b, 0.0])
    g1 = _finish([a0, a1], [Edge(0, 1, Segment(a0, a1))], f"G1(b={b:g})", 2)
    left, right, mid, top = np.zeros(2), np.array([1.0, 0.0]), np.array([0.5, 0.0]), np.array([0.5, b])
    g2 = _finish(
        [mid, left, right, top],
        [Edge(1, 0, Segment(left, mid)), Edge(0, 2, Segment(mid, right)), Edge(0, 3, Segment(mid, top))],
        f"G2(b={b:g})", 2,
    )
    return g1, g2


def _angle_pair(alpha: float):
    half = alpha / 2
    up, down = np.array([math.cos(half), math.sin(half)]), np.array([math.cos(half), -math.sin(half)])
    v = np.zeros(2)
    chord = 2 * math.sin(half)
    left3 = np.array([-(1.0 + chord), 0.0])
    g3 = _finish(
        [v, 2 * up, 2 * down, left3],
        [Edge(0, 1, Segment(v, 2 * up)), Edge(0, 2, Segment(v, 2 * down)), Edge(0, 3, Segment(v, left3))],
        f"G3(alpha={alpha:g})", 2,
    )
    left4 = np.array([-1.0, 0.0])
    g4 = _finish(
        [v, up, down, 2 * up, 2 * down, left4],
        [
            Edge(0, 1, Segment(v, up)), Edge(1, 3, Segment(up, 2 * up)),
            Edge(0, 2, Segment(v, down)), Edge(2, 4, Segment(down, 2 * down)),
            Edge(1, 2, Segment(up, down)), Edge(0, 5, Segment(v, left4)),
        ],
        f"G4(alpha={alpha:g})", 2,
    )
    return g3, g4


def _global_reach_pair(xi: float):
    a0, a1 = np.zeros(2), np.array([1.0, 0.0])
    g5 = _finish([a0, a1], [Edge(0, 1, Segment(a0, a1))], f"G5(xi={xi:g})", 2)
    p = [np.zeros(2), np.array([0.5, 0.0]), np.array([0.5 + xi, 0.0]), np.array([1.0 + xi, 0.0])]
    g6 = _finish(p, [Edge(0, 1, Segment(p[0], p[1])), Edge(2, 3, Segment(p[2], p[3]))], f"G6(xi={xi:g})", 2)
    return g5, g6


def _local_reach_pair(tau: float):
    g7 = lollipop_graph(tau, 1.0)
    g7.name = f"G7(tau={tau:g})"
    a0, a1 = np.zeros(2), np.array([1.0 + 2 * math.pi * tau, 0.0])
    g8 = _finish([a0, a1], [Edge(0, 1, Segment(a0, a1))], f"G8(tau={tau:g})", 2)
    return g7, g8


_PAIRS = {
    "shortest_edge": (_shortest_edge_pair, 0.5),
    "angle": (_angle_pair, math.pi / 3),
    "global_reach": (_global_reach_pair, 0.2),
    "local_reach": (_local_reach_pair, 0.2),
}

PAIR_KINDS = tuple(_PAIRS)


def lower_bound_pair(kind: str, value: float | None = None, dim: int = 2) -> tuple[EmbeddedGraph, EmbeddedGraph]:
    """The pair of graphs separating one shape parameter.

    ``kind`` is ``shortest_edge`` (G1, G2), ``angle`` (G3, G4),
    ``global_reach`` (G5, G6) or ``local_reach`` (G7, G8); ``value`` is the
    parameter being probed.
    """
    try:
        build, default = _PAIRS[kind]
    except KeyError:
        raise ValueError(f"unknown pair kind {kind!r}; choose from {PAIR_KINDS}") from None
    value = default if value is None else float(value)
    if value <= 0 or (kind == "angle" and value > math.pi):
        raise ValueError(f"invalid parameter {value} for {kind}")
    g_a, g_b = build(value)
    if dim != 2:
        g_a, g_b = g_a.embedded(dim), g_b.embedded(dim)
    return g_a, g_b


def named_graph(name: str, **kw) -> EmbeddedGraph:
    """Generator lookup used by the CLI: ``worst-case``, ``g1`` .. ``g8``, ``segment``,
    ``star``, ``lollipop``."""
    key = name.lower().replace("_", "-")
    dim = int(kw.pop("dim", 2))
    if key == "worst-case":
        return worst_case_graph(kw["alpha"], kw["tau"], dim=dim, pendant=kw.get("pendant"))
    if key == "segment":
        return segment_graph(kw.get("length", 1.0), dim=dim)
    if key == "star":
        return star_graph(kw.get("arm", 1.0), int(kw.get("arms", 3)), dim=dim)
    if key == "lollipop":
        return lollipop_graph(kw.get("radius", 0.2), kw.get("stick", 1.0), dim=dim)
    pairs = {"g1": "shortest_edge", "g2": "shortest_edge", "g3": "angle", "g4": "angle",
             "g5": "global_reach", "g6": "global_reach", "g7": "local_reach", "g8": "local_reach"}
    if key in pairs:
        pair = lower_bound_pair(pairs[key], kw.get("value"), dim=dim)
        return pair[(int(key[1]) - 1) % 2]
    raise ValueError(f"unknown generator {name!r}")
