"""Independent reference implementations used to check the package.

Parameter formulas are evaluated with mpmath at 50 digits, directly in their
published arccos form (the package uses an algebraically rearranged one).
Graph oracles are deliberately naive: adjacency-matrix BFS and brute force
over vertex permutations.
"""
from __future__ import annotations

import itertools
from collections import deque

import mpmath as mp
import numpy as np

mp.mp.dps = 50


def alpha_prime(alpha, tau, sigma):
    a, t, s = mp.mpf(alpha), mp.mpf(tau), mp.mpf(sigma)
    arg = (2 * (t - s) ** 2 - 4 * t**2 * mp.cos(a / 2) ** 2) / (2 * (t - s) ** 2)
    return mp.pi - mp.acos(max(min(arg, 1), -1))


def _common(b, alpha, tau, sigma):
    a, t, s = mp.mpf(alpha), mp.mpf(tau), mp.mpf(sigma)
    ap = alpha_prime(alpha, tau, sigma)
    off = t * mp.sin(a / 2) - (t - s) * mp.sin(ap / 2)
    return a, t, s, ap, off


def r(delta, b, alpha, tau, xi, sigma):
    a, t, s, ap, off = _common(b, alpha, tau, sigma)
    d = mp.mpf(delta)
    return d / 2 + s + off + d / (2 * mp.sin(ap / 4))


def p11(delta, b, alpha, tau, xi, sigma):
    a, t, s, ap, off = _common(b, alpha, tau, sigma)
    d = mp.mpf(delta)
    return d / 2 + off + (r(delta, b, alpha, tau, xi, sigma) + d) / mp.sin(ap / 2)


def f(b, alpha, tau, xi, sigma, edge=None):
    a, t, s, ap, off = _common(b, alpha, tau, sigma)
    m = min(mp.mpf(b), a * t) if edge is None else mp.mpf(edge)
    s2, s4 = mp.sin(ap / 2), mp.sin(ap / 4)
    num = (t - s) * mp.sin((m - (a - ap) * t) / (2 * t)) - off * (1 + 2 / s2) - 2 * s / s2
    return num / (1 + 3 / s2 + 1 / (s2 * s4))


def max_delta(b, alpha, tau, xi, sigma, edge=None):
    """Sup of delta with r + delta < xi - 2 sigma and delta < f.

    r + delta is affine in delta, so condition (9) is solved in closed form.
    """
    a, t, s, ap, off = _common(b, alpha, tau, sigma)
    slope = mp.mpf(3) / 2 + 1 / (2 * mp.sin(ap / 4))
    d9 = (mp.mpf(xi) - 3 * s - off) / slope
    return min(d9, f(b, alpha, tau, xi, sigma, edge))


def delta_noiseless(b, alpha, tau, xi):
    a, t = mp.mpf(alpha), mp.mpf(tau)
    s2, s4 = mp.sin(a / 2), mp.sin(a / 4)
    one = mp.mpf(xi) * 2 * s4 / (3 * s4 + 1)
    two = t * s2 * s4 / (s2 * s4 + 3 * s4 + 1) * mp.sin(min(mp.mpf(b), a * t) / (2 * t))
    return min(one, two) / 2, one, two


def n_noiseless(length, a, delta, lam):
    L, d = mp.mpf(length), mp.mpf(delta)
    return int(mp.ceil(4 * L / (mp.mpf(a) * d) * (mp.log(8 * L / d) + mp.log(1 / mp.mpf(lam)))))


def n_tubular(length, tau, sigma, delta, lam, c):
    L, t, s, d = (mp.mpf(v) for v in (length, tau, sigma, delta))
    val = t * L / (mp.mpf(c) * d * (t - 8 * s)) * (mp.log(16 * L / d) + mp.log(1 / mp.mpf(lam)))
    return val, int(mp.ceil(val))


# -- graph oracles ------------------------------------------------------------

def bfs_components(points: np.ndarray, delta: float) -> np.ndarray:
    n = len(points)
    diff = points[:, None, :] - points[None, :, :]
    adj = np.sqrt(np.sum(diff * diff, axis=-1)) <= delta
    lab = -np.ones(n, dtype=int)
    c = 0
    for s in range(n):
        if lab[s] >= 0:
            continue
        lab[s] = c
        q = deque([s])
        while q:
            u = q.popleft()
            for v in np.flatnonzero(adj[u]):
                if lab[v] < 0:
                    lab[v] = c
                    q.append(v)
        c += 1
    return lab


def same_partition(a, b) -> bool:
    a, b = np.asarray(a), np.asarray(b)
    return len(set(zip(a, b))) == len(set(a)) == len(set(b))


def multiplicity_matrix(n, edges) -> np.ndarray:
    m = np.zeros((n, n), dtype=int)
    for u, v in edges:
        m[u, v] += 1
        if u != v:
            m[v, u] += 1
    return m


def brute_isomorphic(n1, e1, n2, e2) -> bool:
    if n1 != n2 or len(e1) != len(e2):
        return False
    m1, m2 = multiplicity_matrix(n1, e1), multiplicity_matrix(n2, e2)
    return any(np.array_equal(m1[np.ix_(p, p)], m2) for p in map(list, itertools.permutations(range(n1))))


def census(max_vertices=5, max_edges=6):
    """Every pseudograph with ``n <= max_vertices`` vertices and at most
    ``max_edges`` edges, with a brute-force canonical form.

    Yields ``(n, edges_array, canon)`` per vertex count, where ``canon[i]`` is
    the minimum over all vertex permutations of the base-(max_edges+1) code
    of graph ``i``'s upper-triangular multiplicity matrix.
    """
    for n in range(1, max_vertices + 1):
        slots = [(u, v) for u in range(n) for v in range(u, n)]
        graphs = [c for k in range(max_edges + 1)
                  for c in itertools.combinations_with_replacement(range(len(slots)), k)]
        counts = np.zeros((len(graphs), len(slots)), dtype=np.int64)
        for i, g in enumerate(graphs):
            for s in g:
                counts[i, s] += 1
        index = {uv: k for k, uv in enumerate(slots)}
        weights = (max_edges + 1) ** np.arange(len(slots), dtype=np.int64)
        canon = None
        for perm in itertools.permutations(range(n)):
            cols = [index[tuple(sorted((perm[u], perm[v])))] for u, v in slots]
            code = counts[:, np.argsort(cols)] @ weights
            canon = code if canon is None else np.minimum(canon, code)
        edge_lists = [[slots[s] for s in g] for g in graphs]
        yield n, edge_lists, canon
