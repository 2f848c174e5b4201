"""Embedded metric graphs: vertices in R^D joined by parametric curves."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial.distance import cdist

from ..params import ShapeParams
from ..pseudograph import Pseudograph
from .curves import Arc, Polyline, Segment, curve_from_dict

_ENDPOINT_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    u: int  # vertex at the curve's start
    v: int  # vertex at the curve's end
    curve: Segment | Polyline | Arc

    @property
    def length(self) -> float:
        return self.curve.length


class EmbeddedGraph:
    """Ground-truth metric graph used for sampling and as a distance oracle.

    Construction enforces the structural assumptions: curve endpoints sit on
    their vertices and no vertex has degree 2 (loops count twice).
    """

    def __init__(self, vertices, edges, params: ShapeParams | None = None, name: str = ""):
        self.vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        self.edges = [e if isinstance(e, Edge) else Edge(*e) for e in edges]
        self.params = params
        self.name = name
        self._validate()

    def _validate(self) -> None:
        nv, dim = self.vertices.shape
        if dim < 2:
            raise ValueError("embedding dimension must be at least 2")
        for k, e in enumerate(self.edges):
            if not (0 <= e.u < nv and 0 <= e.v < nv):
                raise ValueError(f"edge {k} references a missing vertex")
            if e.curve.dim != dim:
                raise ValueError(f"edge {k} lives in R^{e.curve.dim}, graph in R^{dim}")
            if (np.linalg.norm(e.curve.start - self.vertices[e.u]) > _ENDPOINT_TOL
                    or np.linalg.norm(e.curve.end - self.vertices[e.v]) > _ENDPOINT_TOL):
                raise ValueError(f"edge {k} endpoints do not match vertices {e.u}, {e.v}")
        bad = [v for v, d in enumerate(self.topology().degrees()) if d == 2]
        if bad:
            raise ValueError(f"degree-2 vertices are not allowed: {bad}")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.array([e.length for e in self.edges])

    @property
    def total_length(self) -> float:
        return float(self.edge_lengths.sum())

    def topology(self) -> Pseudograph:
        return Pseudograph(len(self.vertices), [(e.u, e.v) for e in self.edges])

    def closest(self, q) -> tuple[np.ndarray, np.ndarray]:
        q = np.atleast_2d(np.asarray(q, dtype=float))
        best = np.full(len(q), np.inf)
        foot = np.zeros_like(q)
        for e in self.edges:
            d, f = e.curve.closest(q)
            better = d < best
            best[better] = d[better]
            foot[better] = f[better]
        return best, foot

    def dist(self, q) -> np.ndarray:
        return self.closest(q)[0]

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        lows, highs = zip(*(e.curve.bbox() for e in self.edges))
        lo = np.minimum(np.min(lows, axis=0), self.vertices.min(axis=0))
        hi = np.maximum(np.max(highs, axis=0), self.vertices.max(axis=0))
        return lo, hi

    def transformed(self, rot, shift) -> "EmbeddedGraph":
        rot = np.asarray(rot, dtype=float)
        shift = np.asarray(shift, dtype=float)
        edges = [Edge(e.u, e.v, e.curve.transformed(rot, shift)) for e in self.edges]
        return EmbeddedGraph(self.vertices @ rot.T + shift, edges, self.params, self.name)

    def embedded(self, dim: int) -> "EmbeddedGraph":
        """Zero-pad into ``R^dim``."""
        if dim < self.dim:
            raise ValueError("can only pad to a higher dimension")
        return self.transformed(_pad_map(self.dim, dim), np.zeros(dim))

    # -- geometric descriptors ------------------------------------------------

    def vertex_angles(self) -> list[float]:
        """Smallest angle between edge ends at each vertex (``pi`` if < 2 ends)."""
        ends: list[list[np.ndarray]] = [[] for _ in range(len(self.vertices))]
        for e in self.edges:
            ends[e.u].append(e.curve.start_tangent())
            ends[e.v].append(e.curve.end_tangent())
        out = []
        for dirs in ends:
            best = math.pi
            for i in range(len(dirs)):
                for j in range(i + 1, len(dirs)):
                    c = float(np.clip(dirs[i] @ dirs[j], -1.0, 1.0))
                    best = min(best, math.acos(c))
            out.append(best)
        return out

    def min_angle(self) -> float:
        return min(self.vertex_angles(), default=math.pi)

    def min_reach(self) -> float:
        return min((e.curve.min_radius() for e in self.edges), default=math.inf)

    def discretize(self, step: float) -> tuple[np.ndarray, np.ndarray]:
        """Nodes along every edge (vertices included) and exact graph distances.

        Returns ``(points, dist)`` where ``dist[i, j]`` is the along-graph
        distance between nodes ``i`` and ``j`` (``inf`` across components).
        """
        pts = [v for v in self.vertices]
        rows, cols, w = [], [], []
        for e in self.edges:
            k = max(1, math.ceil(e.length / step - 1e-9))
            s = np.linspace(0.0, e.length, k + 1)
            ids = [e.u]
            for p in e.curve.point_at(s[1:-1]).reshape(-1, self.dim):
                ids.append(len(pts))
                pts.append(p)
            ids.append(e.v)
            for a, b in zip(ids[:-1], ids[1:]):
                rows.append(a)
                cols.append(b)
                w.append(e.length / k)
        pts = np.array(pts)
        n = len(pts)
        adj = coo_matrix((w, (rows, cols)), shape=(n, n)).tocsr()
        return pts, dijkstra(adj, directed=False)

    # -- serialisation --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dim,
            "vertices": self.vertices.tolist(),
            "edges": [{"u": e.u, "v": e.v, **e.curve.to_dict()} for e in self.edges],
            "params": self.params.to_dict() if self.params else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EmbeddedGraph":
        verts = np.asarray(data["vertices"], dtype=float)
        edges = []
        for ed in data["edges"]:
            u, v = int(ed["u"]), int(ed["v"])
            edges.append(Edge(u, v, curve_from_dict(ed, verts[u], verts[v])))
        params = ShapeParams(**data["params"]) if data.get("params") else None
        return cls(verts, edges, params, data.get("name", ""))

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2))

    @classmethod
    def load(cls, path) -> "EmbeddedGraph":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _pad_map(src: int, dst: int) -> np.ndarray:
    m = np.zeros((dst, src))
    m[:src, :src] = np.eye(src)
    return m


def estimate_global_reach(graph: EmbeddedGraph, m: float, step: float | None = None) -> float:
    """Lower bound on ``inf |x - x'|`` over pairs with graph distance ``>= m``.

    Every such pair has discretisation nodes within ``step / 2`` of arc length
    of each end; those nodes are at graph distance ``>= m - step`` and
    Euclidean distance at most ``step`` larger. Minimising over the relaxed
    node pairs and subtracting ``step`` therefore never overshoots.
    """
    if step is None:
        step = m / 100
    pts, gd = graph.discretize(step)
    ed = cdist(pts, pts)
    far = gd >= (m - step) * (1 - 1e-12)
    np.fill_diagonal(far, False)
    if not far.any():
        return math.inf
    return max(float(ed[far].min()) - step, 0.0)
