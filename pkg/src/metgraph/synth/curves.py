"""Parametric edge curves: segments, polylines and circular arcs in R^D.

Every curve is parametrised by arc length ``s`` in ``[0, length]`` and
answers exact closest-point queries for batches of points.
"""
from __future__ import annotations

import math

import numpy as np


def _rows(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q[None, :] if q.ndim == 1 else q


class Segment:
    kind = "segment"

    def __init__(self, a, b):
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.length = float(np.linalg.norm(self.b - self.a))
        if self.length == 0:
            raise ValueError("degenerate segment")

    @property
    def start(self) -> np.ndarray:
        return self.a

    @property
    def end(self) -> np.ndarray:
        return self.b

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def point_at(self, s) -> np.ndarray:
        t = np.asarray(s, dtype=float)[..., None] / self.length
        return self.a + t * (self.b - self.a)

    def closest(self, q) -> tuple[np.ndarray, np.ndarray]:
        q = _rows(q)
        d = self.b - self.a
        t = np.clip((q - self.a) @ d / (d @ d), 0.0, 1.0)
        foot = self.a + t[:, None] * d
        return np.linalg.norm(q - foot, axis=1), foot

    def start_tangent(self) -> np.ndarray:
        return (self.b - self.a) / self.length

    def end_tangent(self) -> np.ndarray:
        # direction leaving the end vertex along the curve
        return -self.start_tangent()

    def min_radius(self) -> float:
        return math.inf

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return np.minimum(self.a, self.b), np.maximum(self.a, self.b)

    def transformed(self, rot: np.ndarray, shift: np.ndarray) -> "Segment":
        return Segment(rot @ self.a + shift, rot @ self.b + shift)

    def to_dict(self) -> dict:
        return {"type": "segment"}


class Polyline:
    kind = "polyline"

    def __init__(self, points):
        self.points = np.asarray(points, dtype=float)
        if len(self.points) < 2:
            raise ValueError("polyline needs at least two points")
        self.pieces = [Segment(p, q) for p, q in zip(self.points[:-1], self.points[1:])]
        self.cum = np.concatenate([[0.0], np.cumsum([s.length for s in self.pieces])])
        self.length = float(self.cum[-1])

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def point_at(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        k = np.clip(np.searchsorted(self.cum, s, side="right") - 1, 0, len(self.pieces) - 1)
        a, b = self.points[k], self.points[k + 1]
        t = ((s - self.cum[k]) / (self.cum[k + 1] - self.cum[k]))[:, None]
        return a + t * (b - a)

    def closest(self, q) -> tuple[np.ndarray, np.ndarray]:
        q = _rows(q)
        best = np.full(len(q), np.inf)
        foot = np.zeros_like(q)
        for seg in self.pieces:
            d, f = seg.closest(q)
            better = d < best
            best[better] = d[better]
            foot[better] = f[better]
        return best, foot

    def start_tangent(self) -> np.ndarray:
        return self.pieces[0].start_tangent()

    def end_tangent(self) -> np.ndarray:
        return self.pieces[-1].end_tangent()

    def min_radius(self) -> float:
        return math.inf

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points.min(axis=0), self.points.max(axis=0)

    def transformed(self, rot: np.ndarray, shift: np.ndarray) -> "Polyline":
        return Polyline(self.points @ rot.T + shift)

    def to_dict(self) -> dict:
        return {"type": "polyline", "points": self.points[1:-1].tolist()}


class Arc:
    """Circular arc ``c + R (cos t e1 + sin t e2)`` for ``t`` in ``[theta0, theta0 + sweep]``.

    ``e1, e2`` is an orthonormal basis of the arc's plane; ``sweep`` is in
    ``(0, 2 pi]`` (a full turn makes a loop).
    """

    kind = "arc"

    def __init__(self, center, radius: float, theta0: float, sweep: float, basis=None):
        self.center = np.asarray(center, dtype=float)
        dim = self.center.shape[0]
        if basis is None:
            basis = np.eye(dim)[:2]
        self.basis = np.asarray(basis, dtype=float)
        if self.basis.shape != (2, dim):
            raise ValueError("arc basis must be two vectors in the ambient space")
        if not np.allclose(self.basis @ self.basis.T, np.eye(2), atol=1e-9):
            raise ValueError("arc basis must be orthonormal")
        if radius <= 0 or not 0 < sweep <= 2 * math.pi + 1e-12:
            raise ValueError("need radius > 0 and sweep in (0, 2 pi]")
        self.radius = float(radius)
        self.theta0 = float(theta0)
        self.sweep = float(sweep)
        self.length = self.radius * self.sweep

    @property
    def dim(self) -> int:
        return self.center.shape[0]

    def _at_angle(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.center + self.radius * (np.cos(t)[..., None] * self.basis[0]
                                            + np.sin(t)[..., None] * self.basis[1])

    @property
    def start(self) -> np.ndarray:
        return self._at_angle(self.theta0)

    @property
    def end(self) -> np.ndarray:
        return self._at_angle(self.theta0 + self.sweep)

    def point_at(self, s) -> np.ndarray:
        return self._at_angle(self.theta0 + np.asarray(s, dtype=float) / self.radius)

    def closest(self, q) -> tuple[np.ndarray, np.ndarray]:
        q = _rows(q)
        rel = q - self.center
        u = rel @ self.basis[0]
        v = rel @ self.basis[1]
        rho = np.hypot(u, v)
        off = rel - np.outer(u, self.basis[0]) - np.outer(v, self.basis[1])
        normal2 = np.sum(off * off, axis=1)  # out-of-plane part, no cancellation
        psi = np.arctan2(v, u)
        inside = (np.mod(psi - self.theta0, 2 * math.pi) <= self.sweep) & (rho > 0)
        d_in = np.sqrt(normal2 + (rho - self.radius) ** 2)
        foot = self._at_angle(psi)
        p0, p1 = self.start, self.end
        d0 = np.linalg.norm(q - p0, axis=1)
        d1 = np.linalg.norm(q - p1, axis=1)
        end_foot = np.where((d0 <= d1)[:, None], p0, p1)
        dist = np.where(inside, d_in, np.minimum(d0, d1))
        foot = np.where(inside[:, None], foot, end_foot)
        return dist, foot

    def _tangent(self, t: float) -> np.ndarray:
        return -math.sin(t) * self.basis[0] + math.cos(t) * self.basis[1]

    def start_tangent(self) -> np.ndarray:
        return self._tangent(self.theta0)

    def end_tangent(self) -> np.ndarray:
        return -self._tangent(self.theta0 + self.sweep)

    def min_radius(self) -> float:
        return self.radius

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        # padded by the full circle in-plane extent: cheap and always valid
        ext = self.radius * np.sqrt(self.basis[0] ** 2 + self.basis[1] ** 2)
        return self.center - ext, self.center + ext

    def transformed(self, rot: np.ndarray, shift: np.ndarray) -> "Arc":
        return Arc(rot @ self.center + shift, self.radius, self.theta0, self.sweep,
                   self.basis @ rot.T)

    def to_dict(self) -> dict:
        return {
            "type": "arc",
            "center": self.center.tolist(),
            "radius": self.radius,
            "theta0": self.theta0,
            "sweep": self.sweep,
            "basis": self.basis.tolist(),
        }


def curve_from_dict(data: dict, start, end):
    kind = data.get("type")
    if kind == "segment":
        return Segment(start, end)
    if kind == "polyline":
        return Polyline([start, *data.get("points", []), end])
    if kind == "arc":
        return Arc(data["center"], data["radius"], data["theta0"], data["sweep"], data.get("basis"))
    raise ValueError(f"unknown curve type {kind!r}")
