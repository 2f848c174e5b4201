"""Samplers on a graph or its sigma-tube, and the density check."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..geometry import PointCloud
from ..params import InfeasibleParameters
from .graph import EmbeddedGraph

_BATCH = 65536


@dataclass(frozen=True)
class TubeModel:
    graph: EmbeddedGraph
    sigma: float = 0.0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        p = self.graph.params
        if p is not None and self.sigma > 0 and self.sigma > p.sigma_max:
            raise InfeasibleParameters(f"sigma={self.sigma} exceeds tau(1 - cos(alpha/2))={p.sigma_max}")


def dist_to_graph(graph: EmbeddedGraph, p) -> float | np.ndarray:
    d = graph.dist(p)
    return float(d[0]) if np.ndim(p) == 1 else d


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def sample_noiseless(graph: EmbeddedGraph, n: int, seed=None) -> PointCloud:
    """``n`` i.i.d. points uniform with respect to arc length."""
    if n <= 0:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    lengths = graph.edge_lengths
    counts = rng.multinomial(n, lengths / lengths.sum())
    chunks = []
    for e, k in zip(graph.edges, counts):
        if k:
            chunks.append(e.curve.point_at(rng.uniform(0.0, e.length, size=k)).reshape(k, -1))
    pts = np.concatenate(chunks)
    return PointCloud(pts[rng.permutation(n)])


def sample_tube(model: TubeModel, n: int, seed=None) -> PointCloud:
    """``n`` i.i.d. points uniform on the sigma-tube, by rejection from its box."""
    if model.sigma == 0:
        return sample_noiseless(model.graph, n, seed)
    if n <= 0:
        raise ValueError("n must be positive")
    rng = _rng(seed)
    lo, hi = model.graph.bbox()
    lo, hi = lo - model.sigma, hi + model.sigma
    got: list[np.ndarray] = []
    have = 0
    while have < n:
        cand = rng.uniform(lo, hi, size=(_BATCH, len(lo)))
        keep = cand[model.graph.dist(cand) <= model.sigma]
        got.append(keep)
        have += len(keep)
    return PointCloud(np.concatenate(got)[:n])


def _stations(graph: EmbeddedGraph, step: float) -> np.ndarray:
    """Vertices plus points along each edge at arc-length spacing ``<= step``."""
    pts = [graph.vertices]
    for e in graph.edges:
        k = max(1, math.ceil(e.length / step - 1e-9))
        s = np.linspace(0.0, e.length, k + 1)[1:-1]
        if len(s):
            pts.append(e.curve.point_at(s).reshape(len(s), -1))
    return np.concatenate(pts)


def _tube_cover(model: TubeModel, resolution: float) -> np.ndarray:
    """Points of the tube such that every tube point is within ``resolution`` of one.

    Lattice points of step ``resolution / sqrt(D)`` near the graph are kept,
    those outside the tube are pulled back onto its boundary; a tube point is
    within half a lattice diagonal of a lattice point, and the pull-back at
    most doubles that.
    """
    g, sigma = model.graph, model.sigma
    if sigma == 0:
        return _stations(g, resolution)
    dim = g.dim
    h = resolution / math.sqrt(dim)
    eps = h * math.sqrt(dim) / 2
    stations = _stations(g, h)
    reach = sigma + eps + 2 * h
    span = np.arange(-math.ceil(reach / h), math.ceil(reach / h) + 1)
    offsets = np.stack(np.meshgrid(*([span] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    base = np.unique(np.round(stations / h).astype(np.int64), axis=0)
    cells = np.unique((base[:, None, :] + offsets[None, :, :]).reshape(-1, dim), axis=0)
    lattice = cells.astype(float) * h
    d, foot = g.closest(lattice)
    keep = d <= sigma + eps
    lattice, d, foot = lattice[keep], d[keep], foot[keep]
    out = d > sigma
    lattice[out] = foot[out] + (lattice[out] - foot[out]) * (sigma / d[out])[:, None]
    return lattice


def grid_sample_dense(model: TubeModel, spacing: float) -> PointCloud:
    """Deterministic sample with every tube point within ``spacing / 2`` of it.

    Noiseless: vertices plus stations every ``<= spacing`` of arc length.
    Noisy: the lattice-and-pull-back cover at resolution ``spacing / 2``.
    """
    if spacing <= 0:
        raise ValueError("spacing must be positive")
    if model.sigma == 0:
        return PointCloud(_stations(model.graph, spacing))
    return PointCloud(_tube_cover(model, spacing / 2))


def is_dense(cloud: PointCloud, model: TubeModel, delta: float) -> bool:
    """Conservative test that ``cloud`` is ``delta/2``-dense in the tube.

    A cover of the tube at resolution ``h = delta/10`` is built; each cover point
    must have a sample within ``delta/2 - h``. Never accepts a non-dense cloud.
    """
    if len(cloud) == 0:
        return False
    h = delta / 10
    cover = _tube_cover(model, h)
    d, _ = cKDTree(cloud.points).query(cover, k=1)
    return bool(np.all(d < delta / 2 - h))
