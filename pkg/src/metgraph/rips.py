"""Connected components of the Rips-Vietoris graph at scale ``delta``.

Two points are adjacent iff their Euclidean distance is ``<= delta``.
Component ids are numbered by first appearance in input order, so the
labeling is a deterministic function of the point sequence.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from . import _grid
from .geometry import PointCloud, euclidean_dist

# below this size the tree path is cheaper than JIT dispatch + grid setup
_GRID_MIN = 256


@dataclass(frozen=True)
class ComponentLabeling:
    labels: np.ndarray
    count: int

    def members(self, k: int) -> np.ndarray:
        return np.flatnonzero(self.labels == k)

    def groups(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        cuts = np.searchsorted(self.labels[order], np.arange(1, self.count))
        return np.split(order, cuts) if self.count else []


def _renumber(raw: np.ndarray) -> ComponentLabeling:
    _, first, inv = np.unique(raw, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return ComponentLabeling(labels=rank[inv.ravel()], count=len(first))


def _tree_roots(pts: np.ndarray, delta: float) -> np.ndarray:
    n = len(pts)
    pairs = cKDTree(pts).query_pairs(delta * (1 + 1e-9), output_type="ndarray")
    if len(pairs):
        keep = euclidean_dist(pts[pairs[:, 0]], pts[pairs[:, 1]]) <= delta
        pairs = pairs[keep]
    adj = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    return connected_components(adj, directed=False)[1]


def rips_components(points, delta: float) -> ComponentLabeling:
    """Partition ``points`` (a :class:`PointCloud` or ``(n, D)`` array) into
    Rips components at scale ``delta``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    pts = points.points if isinstance(points, PointCloud) else np.asarray(points, dtype=float)
    n = len(pts)
    if n == 0:
        return ComponentLabeling(labels=np.zeros(0, dtype=np.int64), count=0)
    pts = pts.reshape(n, -1)
    raw = None
    if n >= _GRID_MIN:
        try:
            raw = _grid.rips_labels_grid(pts, delta)
        except OverflowError:
            raw = None
    if raw is None:
        raw = _tree_roots(pts, delta)
    return _renumber(raw)


def count_components(points, delta: float) -> int:
    return rips_components(points, delta).count
