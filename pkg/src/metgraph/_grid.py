"""Numba kernels over a uniform cell grid.

Cells have side ``delta / sqrt(D)`` (shrunk by ``_SHRINK``) so any two points
sharing a cell are strictly closer than ``delta``: each non-empty cell is a
clique of the Rips graph at scale ``delta``. Connectivity then only needs one
witnessing pair per neighbouring cell pair.

Cell keys are linearised integers; callers fall back to the tree-based path
when the grid would overflow int64 or the local window gets too large.
"""
from __future__ import annotations

import math

import numba as nb
import numpy as np

# keeps same-cell pairs strictly inside delta despite float rounding in floor()
_SHRINK = 1e-7
_MAX_KEY = 2**62
_MAX_WINDOW = 4_000_000


class Grid:
    """Points bucketed into cells of side ``cell``; arrays feed the kernels."""

    def __init__(self, points: np.ndarray, cell: float):
        self.points = np.ascontiguousarray(points, dtype=np.float64)
        n, dim = self.points.shape
        self.cell = float(cell)
        self.origin = self.points.min(axis=0) if n else np.zeros(dim)
        coords = np.floor((self.points - self.origin) / self.cell).astype(np.int64)
        self.shape = coords.max(axis=0) + 1 if n else np.ones(dim, dtype=np.int64)
        total = 1
        for s in self.shape:
            total *= int(s)
        if total >= _MAX_KEY:
            raise OverflowError("grid too fine for int64 cell keys")
        strides = np.ones(dim, dtype=np.int64)
        for d in range(dim - 2, -1, -1):
            strides[d] = strides[d + 1] * self.shape[d + 1]
        self.strides = strides
        keys = coords @ strides
        self.order = np.argsort(keys, kind="stable").astype(np.int64)
        skeys = keys[self.order]
        self.keys, first = np.unique(skeys, return_index=True)
        self.starts = np.append(first, n).astype(np.int64)
        self.cell_coords = coords[self.order][first]
        self.sorted_points = self.points[self.order]
        self.point_coords = coords


def rips_cell(delta: float, dim: int) -> float:
    return delta / math.sqrt(dim) * (1.0 - _SHRINK)


def _offsets(reach: int, dim: int) -> np.ndarray:
    rng = np.arange(-reach, reach + 1)
    mesh = np.stack(np.meshgrid(*([rng] * dim), indexing="ij"), axis=-1).reshape(-1, dim)
    return mesh[np.any(mesh != 0, axis=1)].astype(np.int64)


@nb.njit(cache=True)
def _find(parent, a):
    root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


@nb.njit(cache=True)
def _dist(pts, i, q):
    s = 0.0
    for d in range(pts.shape[1]):
        t = pts[i, d] - q[d]
        s += t * t
    return math.sqrt(s)


@nb.njit(cache=True)
def _cell_lookup(keys, key):
    j = np.searchsorted(keys, key)
    if j < keys.shape[0] and keys[j] == key:
        return j
    return -1


@nb.njit(cache=True)
def _any_pair_within(spts, a0, a1, b0, b1, delta):
    for p in range(a0, a1):
        for q in range(b0, b1):
            s = 0.0
            for d in range(spts.shape[1]):
                t = spts[p, d] - spts[q, d]
                s += t * t
            if math.sqrt(s) <= delta:
                return True
    return False


@nb.njit(cache=True)
def _rips_cells(spts, keys, starts, cell_coords, shape, strides, offsets, delta):
    ncell = keys.shape[0]
    dim = shape.shape[0]
    parent = np.arange(ncell)
    nb_coord = np.empty(dim, dtype=np.int64)
    for u in range(ncell):
        for o in range(offsets.shape[0]):
            key = 0
            ok = True
            for d in range(dim):
                c = cell_coords[u, d] + offsets[o, d]
                if c < 0 or c >= shape[d]:
                    ok = False
                    break
                nb_coord[d] = c
                key += c * strides[d]
            if not ok:
                continue
            v = _cell_lookup(keys, key)
            if v <= u:
                continue
            ru = _find(parent, u)
            rv = _find(parent, v)
            if ru == rv:
                continue
            if _any_pair_within(spts, starts[u], starts[u + 1], starts[v], starts[v + 1], delta):
                parent[rv] = ru
    roots = np.empty(ncell, dtype=np.int64)
    for u in range(ncell):
        roots[u] = _find(parent, u)
    return roots


def rips_labels_grid(points: np.ndarray, delta: float) -> np.ndarray:
    """Per-point Rips component root ids (arbitrary ints; caller renumbers)."""
    n, dim = points.shape
    grid = Grid(points, rips_cell(delta, dim))
    reach = int(math.ceil(delta / grid.cell))
    offsets = _offsets(reach, dim)
    roots = _rips_cells(
        grid.sorted_points, grid.keys, grid.starts, grid.cell_coords,
        grid.shape.astype(np.int64), grid.strides, offsets, float(delta),
    )
    cell_of_sorted = np.repeat(np.arange(len(grid.keys)), np.diff(grid.starts))
    out = np.empty(n, dtype=np.int64)
    out[grid.order] = roots[cell_of_sorted]
    return out


@nb.njit(cache=True)
def _shell_degrees(spts, keys, starts, cell_coords, shape, strides, point_coords,
                   pts, targets, offsets, r, delta, window):
    n_t = targets.shape[0]
    dim = shape.shape[0]
    outer = r + delta
    side = 2 * window + 1
    wsize = 1
    for d in range(dim):
        wsize *= side
    local = np.full(wsize, -1, dtype=np.int64)
    buf = np.empty(spts.shape[0], dtype=np.int64)
    frag_start = np.empty(spts.shape[0] + 1, dtype=np.int64)
    frag_local = np.empty((spts.shape[0], dim), dtype=np.int64)
    frag_slot = np.empty(spts.shape[0], dtype=np.int64)
    parent = np.empty(spts.shape[0], dtype=np.int64)
    lo = np.empty(dim, dtype=np.int64)
    hi = np.empty(dim, dtype=np.int64)
    odo = np.empty(dim, dtype=np.int64)
    out = np.empty(n_t, dtype=np.int64)
    for t in range(n_t):
        i = targets[t]
        q = pts[i]
        empty = False
        for d in range(dim):
            lo[d] = max(point_coords[i, d] - window, 0)
            hi[d] = min(point_coords[i, d] + window, shape[d] - 1)
            if lo[d] > hi[d]:
                empty = True
        nfrag = 0
        nbuf = 0
        if not empty:
            # odometer over all axes but the last; last axis is a contiguous key range
            for d in range(dim - 1):
                odo[d] = lo[d]
            while True:
                base = 0
                for d in range(dim - 1):
                    base += odo[d] * strides[d]
                j0 = np.searchsorted(keys, base + lo[dim - 1])
                j1 = np.searchsorted(keys, base + hi[dim - 1], side="right")
                for u in range(j0, j1):
                    begin = nbuf
                    for p in range(starts[u], starts[u + 1]):
                        dd = _dist(spts, p, q)
                        if dd > r and dd <= outer:
                            buf[nbuf] = p
                            nbuf += 1
                    if nbuf > begin:
                        frag_start[nfrag] = begin
                        slot = 0
                        for d in range(dim):
                            lc = cell_coords[u, d] - point_coords[i, d] + window
                            frag_local[nfrag, d] = lc
                            slot = slot * side + lc
                        frag_slot[nfrag] = slot
                        local[slot] = nfrag
                        parent[nfrag] = nfrag
                        nfrag += 1
                # advance odometer
                d = dim - 2
                while d >= 0:
                    odo[d] += 1
                    if odo[d] <= hi[d]:
                        break
                    odo[d] = lo[d]
                    d -= 1
                if d < 0:
                    break
        frag_start[nfrag] = nbuf
        for a in range(nfrag):
            for o in range(offsets.shape[0]):
                slot = 0
                ok = True
                for d in range(dim):
                    c = frag_local[a, d] + offsets[o, d]
                    if c < 0 or c >= side:
                        ok = False
                        break
                    slot = slot * side + c
                if not ok:
                    continue
                b = local[slot]
                if b <= a:
                    continue
                ra = _find(parent, a)
                rb = _find(parent, b)
                if ra == rb:
                    continue
                hit = False
                for x in range(frag_start[a], frag_start[a + 1]):
                    px = buf[x]
                    for y in range(frag_start[b], frag_start[b + 1]):
                        if _dist(spts, buf[y], spts[px]) <= delta:
                            hit = True
                            break
                    if hit:
                        break
                if hit:
                    parent[rb] = ra
        count = 0
        for a in range(nfrag):
            if _find(parent, a) == a:
                count += 1
            local[frag_slot[a]] = -1
        out[t] = count
    return out


def shell_degrees_grid(points: np.ndarray, r: float, delta: float, targets=None) -> np.ndarray:
    """Rips component counts of every shell ``r < |p - y| <= r + delta``."""
    n, dim = points.shape
    if targets is None:
        targets = np.arange(n, dtype=np.int64)
    targets = np.asarray(targets, dtype=np.int64)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    grid = Grid(points, rips_cell(delta, dim))
    window = int(math.ceil((r + delta) / grid.cell)) + 1
    if (2 * window + 1) ** dim > _MAX_WINDOW:
        raise OverflowError("shell window too large for the grid kernel")
    offsets = _offsets(int(math.ceil(delta / grid.cell)), dim)
    return _shell_degrees(
        grid.sorted_points, grid.keys, grid.starts, grid.cell_coords,
        grid.shape.astype(np.int64), grid.strides, grid.point_coords,
        grid.points, targets, offsets, float(r), float(delta), window,
    )
