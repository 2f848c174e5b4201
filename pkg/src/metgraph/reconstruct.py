"""Shell-labeling reconstruction of a metric graph's topology from a sample.

Pipeline: each point gets a local degree (Rips components of its shell
``r < |p - y| <= r + delta``); degree 2 means edge point, anything else a
preliminary vertex. Every point within ``p11`` of a preliminary vertex is
then promoted to vertex. Rips components of vertex points become graph
vertices; each Rips component of edge points becomes an edge between the
vertex components it touches (strictly closer than ``delta``).
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from . import _grid
from .geometry import PointCloud, euclidean_dist, near_mask
from .params import ShapeParams, expansion_radius, shell_inner_radius
from .pseudograph import Pseudograph
from .rips import ComponentLabeling, count_components, rips_components

log = logging.getLogger(__name__)


class PointLabel(enum.IntEnum):
    EDGE = 0
    PRELIMINARY_VERTEX = 1
    VERTEX = 2


@dataclass(frozen=True)
class ReconstructionConfig:
    r: float
    p11: float
    delta: float

    def __post_init__(self):
        if not (self.r > 0 and self.p11 > 0 and self.delta > 0):
            raise ValueError(f"r, p11 and delta must be positive, got {self}")

    @classmethod
    def from_params(cls, delta: float, params: ShapeParams) -> "ReconstructionConfig":
        return cls(shell_inner_radius(delta, params), expansion_radius(delta, params), delta)


@dataclass(frozen=True)
class Diagnostic:
    """Edge component that did not attach to one or two vertex components.

    ``kind`` is ``dangling`` (touches none), ``fragment`` (touches one but is
    too small to be a loop) or ``over_attached`` (touches three or more).
    """

    kind: str
    edge_component: int
    vertex_components: tuple[int, ...]
    size: int

    @property
    def is_failure(self) -> bool:
        return self.kind != "fragment"


@dataclass
class ReconstructionReport:
    labels: np.ndarray
    vertex_components: ComponentLabeling
    edge_components: ComponentLabeling
    graph: Pseudograph
    degrees: np.ndarray
    config: ReconstructionConfig
    diagnostics: list[Diagnostic] = field(default_factory=list)
    # edge component id behind each graph edge, aligned with graph.edges
    edge_witness: list[int] = field(default_factory=list)

    @property
    def flagged(self) -> bool:
        return any(d.is_failure for d in self.diagnostics)


def _cloud(cloud) -> PointCloud:
    return cloud if isinstance(cloud, PointCloud) else PointCloud(cloud)


def local_degree(cloud: PointCloud, y_index: int, r: float, delta: float) -> int:
    """Number of Rips components of the shell around point ``y_index``."""
    cloud = _cloud(cloud)
    shell = cloud.annulus_query(cloud[y_index], r, delta)
    return count_components(cloud.points[shell], delta)


def local_degrees(cloud: PointCloud, r: float, delta: float) -> np.ndarray:
    """Local degree of every point; grid kernel with a per-point fallback."""
    cloud = _cloud(cloud)
    if r <= 0 or delta <= 0:
        raise ValueError("r and delta must be positive")
    try:
        return _grid.shell_degrees_grid(cloud.points, r, delta)
    except OverflowError:
        log.debug("grid kernel unavailable, falling back to per-point shells")
        return np.array([local_degree(cloud, i, r, delta) for i in range(len(cloud))], dtype=np.int64)


def label_points(cloud: PointCloud, r: float, delta: float, degrees: np.ndarray | None = None) -> np.ndarray:
    """EDGE where the local degree is exactly 2, PRELIMINARY_VERTEX elsewhere."""
    if degrees is None:
        degrees = local_degrees(cloud, r, delta)
    return np.where(degrees == 2, PointLabel.EDGE, PointLabel.PRELIMINARY_VERTEX).astype(np.int8)


def expand_vertices(cloud: PointCloud, labels: np.ndarray, p11: float) -> np.ndarray:
    """Promote every point within ``p11`` (inclusive) of a preliminary vertex."""
    cloud = _cloud(cloud)
    labels = np.asarray(labels)
    prelim = labels == PointLabel.PRELIMINARY_VERTEX
    out = np.where(labels == PointLabel.EDGE, PointLabel.EDGE, PointLabel.VERTEX).astype(np.int8)
    if p11 > 0 and prelim.any():
        near = near_mask(cloud.points, cloud.points[prelim], p11)
        out[near] = PointLabel.VERTEX
    return out


def _diameter_exceeds(pts: np.ndarray, delta: float) -> bool:
    for i in range(len(pts)):
        if np.any(euclidean_dist(pts[i + 1:], pts[i]) > delta):
            return True
    return False


def _touching(e_pts: np.ndarray, e_lab: np.ndarray, v_pts: np.ndarray, v_lab: np.ndarray,
              delta: float) -> list[set[int]]:
    """For each edge component, the vertex components with a point at distance < delta."""
    touch: list[set[int]] = [set() for _ in range(int(e_lab.max()) + 1 if len(e_lab) else 0)]
    if not len(e_pts) or not len(v_pts):
        return touch
    tree = cKDTree(v_pts)
    close = near_mask(e_pts, v_pts, delta, strict=True)
    for i in np.flatnonzero(close):
        cand = np.asarray(tree.query_ball_point(e_pts[i], delta * (1 + 1e-9)), dtype=int)
        hits = cand[euclidean_dist(v_pts[cand], e_pts[i]) < delta]
        touch[e_lab[i]].update(int(k) for k in np.unique(v_lab[hits]))
    return touch


def _nearest_two(e_pts: np.ndarray, v_pts: np.ndarray, v_lab: np.ndarray, comps) -> tuple[int, int]:
    tree = cKDTree(e_pts)
    gaps = []
    for k in comps:
        d, _ = tree.query(v_pts[v_lab == k], k=1)
        gaps.append((float(d.min()), k))
    gaps.sort()
    return gaps[0][1], gaps[1][1]


def assemble_graph(cloud: PointCloud, final_labels: np.ndarray, delta: float):
    """Build the output pseudograph from final EDGE / VERTEX labels.

    Returns ``(graph, vertex_components, edge_components, diagnostics, witness)``.
    """
    cloud = _cloud(cloud)
    final_labels = np.asarray(final_labels)
    if np.any(final_labels == PointLabel.PRELIMINARY_VERTEX):
        raise ValueError("expand_vertices must run before assembly")
    v_idx = np.flatnonzero(final_labels == PointLabel.VERTEX)
    e_idx = np.flatnonzero(final_labels == PointLabel.EDGE)
    v_pts, e_pts = cloud.points[v_idx], cloud.points[e_idx]
    vc = rips_components(v_pts, delta)
    ec = rips_components(e_pts, delta)
    touch = _touching(e_pts, ec.labels, v_pts, vc.labels, delta)

    edges, witness, diags = [], [], []
    groups = ec.groups()
    for j, comps in enumerate(touch):
        members = groups[j]
        if len(comps) == 2:
            u, v = sorted(comps)
            edges.append((u, v))
            witness.append(j)
        elif len(comps) == 1:
            (u,) = comps
            if _diameter_exceeds(e_pts[members], delta):
                edges.append((u, u))
                witness.append(j)
            else:
                diags.append(Diagnostic("fragment", j, (u,), len(members)))
        elif not comps:
            diags.append(Diagnostic("dangling", j, (), len(members)))
        else:
            u, v = sorted(_nearest_two(e_pts[members], v_pts, vc.labels, sorted(comps)))
            edges.append((u, v))
            witness.append(j)
            diags.append(Diagnostic("over_attached", j, tuple(sorted(comps)), len(members)))
    # keep witnesses aligned with the sorted edge list of the pseudograph
    order = sorted(range(len(edges)), key=lambda k: (edges[k], witness[k]))
    graph = Pseudograph(vc.count, [edges[k] for k in order])
    return graph, vc, ec, diags, [witness[k] for k in order]


def reconstruct(cloud, cfg: ReconstructionConfig) -> ReconstructionReport:
    cloud = _cloud(cloud)
    if len(cloud) == 0:
        raise ValueError("cannot reconstruct from an empty cloud")
    degrees = local_degrees(cloud, cfg.r, cfg.delta)
    prelim = label_points(cloud, cfg.r, cfg.delta, degrees)
    final = expand_vertices(cloud, prelim, cfg.p11)
    graph, vc, ec, diags, witness = assemble_graph(cloud, final, cfg.delta)
    for d in diags:
        if d.is_failure:
            log.info("reconstruction diagnostic: %s", d)
    return ReconstructionReport(
        labels=final, vertex_components=vc, edge_components=ec, graph=graph,
        degrees=degrees, config=cfg, diagnostics=diags, edge_witness=witness,
    )
