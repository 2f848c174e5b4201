"""Undirected pseudographs (loops and parallel edges) and exact isomorphism."""
from __future__ import annotations

import json
from collections import Counter

import numpy as np


class Pseudograph:
    """Vertex count plus a multiset of unordered vertex pairs.

    Edges are stored normalised as ``(min(u, v), max(u, v))`` and kept sorted,
    so two pseudographs compare equal iff they have identical labelled edge
    multisets.
    """

    def __init__(self, n_vertices: int, edges=()):
        if n_vertices < 0:
            raise ValueError("n_vertices must be non-negative")
        norm = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n_vertices and 0 <= v < n_vertices):
                raise ValueError(f"edge ({u}, {v}) out of range for {n_vertices} vertices")
            norm.append((u, v) if u <= v else (v, u))
        self.n_vertices = int(n_vertices)
        self.edges: list[tuple[int, int]] = sorted(norm)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Pseudograph) and self.n_vertices == other.n_vertices
                and self.edges == other.edges)

    def __repr__(self) -> str:
        return f"Pseudograph(n_vertices={self.n_vertices}, edges={self.edges})"

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def multiplicity(self) -> Counter:
        return Counter(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * self.n_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def loop_counts(self) -> list[int]:
        loops = [0] * self.n_vertices
        for u, v in self.edges:
            if u == v:
                loops[u] += 1
        return loops

    def relabel(self, perm) -> "Pseudograph":
        """Apply the vertex map ``u -> perm[u]``."""
        return Pseudograph(self.n_vertices, [(perm[u], perm[v]) for u, v in self.edges])

    def to_dict(self) -> dict:
        return {"n_vertices": self.n_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Pseudograph":
        return cls(data["n_vertices"], [tuple(e) for e in data["edges"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f"  {u};" for u in range(self.n_vertices)]
        lines += [f"  {u} -- {v};" for u, v in self.edges]
        lines.append("}")
        return "\n".join(lines) + "\n"


def degree_multiset(g: Pseudograph) -> list[int]:
    """Sorted degree sequence; a loop adds 2 to its vertex."""
    return sorted(g.degrees())


def _adjacency(g: Pseudograph) -> np.ndarray:
    m = np.zeros((g.n_vertices, g.n_vertices), dtype=np.int64)
    for u, v in g.edges:
        m[u, v] += 1
        if u != v:
            m[v, u] += 1
    return m


def _signatures(adj: np.ndarray) -> list[tuple]:
    # (degree, loops, sorted off-diagonal multiplicities): invariant under relabeling
    n = adj.shape[0]
    sigs = []
    for u in range(n):
        row = adj[u]
        off = sorted((int(row[w]) for w in range(n) if w != u and row[w]), reverse=True)
        deg = int(row.sum() + row[u])
        sigs.append((deg, int(row[u]), tuple(off)))
    return sigs


def isomorphism(g1: Pseudograph, g2: Pseudograph) -> list[int] | None:
    """A vertex map ``g1 -> g2`` preserving every multiplicity, or ``None``."""
    n = g1.n_vertices
    if n != g2.n_vertices or g1.n_edges != g2.n_edges:
        return None
    a1, a2 = _adjacency(g1), _adjacency(g2)
    s1, s2 = _signatures(a1), _signatures(a2)
    if sorted(s1) != sorted(s2):
        return None
    candidates = [[w for w in range(n) if s2[w] == s1[u]] for u in range(n)]
    # most constrained first, then prefer vertices adjacent to already placed ones
    order: list[int] = []
    left = set(range(n))
    while left:
        placed = set(order)
        u = min(left, key=lambda x: (len(candidates[x]),
                                     -sum(1 for y in placed if a1[x, y]), x))
        order.append(u)
        left.remove(u)

    mapping = [-1] * n
    used = [False] * n

    def extend(k: int) -> bool:
        if k == n:
            return True
        u = order[k]
        for w in candidates[u]:
            if used[w]:
                continue
            if any(a1[u, order[j]] != a2[w, mapping[order[j]]] for j in range(k)):
                continue
            mapping[u] = w
            used[w] = True
            if extend(k + 1):
                return True
            used[w] = False
            mapping[u] = -1
        return False

    return mapping if extend(0) else None


def is_isomorphic(g1: Pseudograph, g2: Pseudograph) -> bool:
    return isomorphism(g1, g2) is not None
