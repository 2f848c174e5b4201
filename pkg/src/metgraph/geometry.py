"""Points, Euclidean distance and exact ball / annulus range queries.

A :class:`PointCloud` wraps an ``(n, D)`` float array and a lazily built
``cKDTree``. The tree is only used to shortlist candidates; every predicate
is then re-evaluated with :func:`euclidean_dist` so the results match a
linear scan exactly.
"""
from __future__ import annotations

from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree

# relative inflation of the tree radius when shortlisting candidates
_SLACK = 1e-9


def _as_points(coords) -> np.ndarray:
    arr = np.array(coords, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array of points, got shape {arr.shape}")
    if arr.shape[0] and arr.shape[1] < 2:
        raise ValueError(f"points must live in R^D with D >= 2, got D={arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("point coordinates must be finite")
    return arr


def euclidean_dist(p, q) -> float | np.ndarray:
    """Euclidean distance between ``p`` and ``q``.

    Broadcasts over leading axes, so ``euclidean_dist(points, c)`` returns one
    distance per row.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape[-1] != q.shape[-1]:
        raise ValueError(f"dimension mismatch: {p.shape[-1]} vs {q.shape[-1]}")
    d = np.sqrt(np.sum((p - q) ** 2, axis=-1))
    return float(d) if d.ndim == 0 else d


class PointCloud:
    """Immutable sample of ``n`` points in ``R^D``."""

    def __init__(self, coords, dim: int | None = None):
        raw = np.asarray(coords, dtype=float)
        if raw.size == 0:
            width = dim if dim is not None else (raw.shape[1] if raw.ndim == 2 else 2)
            pts = np.empty((0, width))
        else:
            pts = _as_points(raw)
        if dim is not None and pts.shape[1] != dim:
            raise ValueError(f"expected dimension {dim}, got {pts.shape[1]}")
        pts.setflags(write=False)
        self._points = pts

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self) -> int:
        return self._points.shape[0]

    def __getitem__(self, i) -> np.ndarray:
        return self._points[i]

    def __repr__(self) -> str:
        return f"PointCloud(n={len(self)}, dim={self.dim})"

    def subset(self, indices) -> "PointCloud":
        return PointCloud(self._points[np.asarray(indices, dtype=int)], dim=self.dim)

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self._points)

    def _check(self, c) -> np.ndarray:
        c = np.asarray(c, dtype=float)
        if c.shape != (self.dim,):
            raise ValueError(f"dimension mismatch: query has shape {c.shape}, cloud dim {self.dim}")
        return c

    def _candidates(self, c: np.ndarray, rad: float) -> np.ndarray:
        if len(self) == 0:
            return np.empty(0, dtype=int)
        idx = self.tree.query_ball_point(c, rad * (1 + _SLACK) + 1e-300)
        return np.sort(np.asarray(idx, dtype=int))

    def ball_query(self, c, rad: float) -> np.ndarray:
        """Sorted indices ``i`` with ``|p_i - c| <= rad`` (closed ball)."""
        if rad < 0:
            raise ValueError("radius must be non-negative")
        c = self._check(c)
        idx = self._candidates(c, rad)
        return idx[euclidean_dist(self._points[idx], c) <= rad] if idx.size else idx

    def annulus_query(self, c, r: float, delta: float) -> np.ndarray:
        """Sorted indices with ``r < |p_i - c| <= r + delta``.

        The inner sphere is excluded and the outer one included, so the shell
        equals ``ball_query(c, r + delta)`` minus ``ball_query(c, r)``.
        """
        if r < 0 or delta <= 0:
            raise ValueError("need r >= 0 and delta > 0")
        c = self._check(c)
        outer = r + delta
        idx = self._candidates(c, outer)
        if not idx.size:
            return idx
        d = euclidean_dist(self._points[idx], c)
        return idx[(d > r) & (d <= outer)]


def ball_query(cloud: PointCloud, c, rad: float) -> np.ndarray:
    return cloud.ball_query(c, rad)


def annulus_query(cloud: PointCloud, c, r: float, delta: float) -> np.ndarray:
    return cloud.annulus_query(c, r, delta)


def near_mask(points: np.ndarray, targets: np.ndarray, radius: float, strict: bool = False) -> np.ndarray:
    """Boolean mask: does each row of ``points`` have a target within ``radius``?

    ``strict`` switches the predicate from ``<=`` to ``<``.
    """
    points = np.asarray(points, dtype=float)
    out = np.zeros(len(points), dtype=bool)
    if len(points) == 0 or len(targets) == 0:
        return out
    tree = cKDTree(targets)
    hi = radius * (1 + _SLACK) + 1e-300
    dist, _ = tree.query(points, k=1, distance_upper_bound=hi)
    lo = radius * (1 - _SLACK)
    sure = dist < lo
    out[sure] = True
    for i in np.flatnonzero(~sure & np.isfinite(dist)):
        cand = tree.query_ball_point(points[i], hi)
        d = euclidean_dist(targets[cand], points[i])
        out[i] = bool(np.any(d < radius) if strict else np.any(d <= radius))
    return out
