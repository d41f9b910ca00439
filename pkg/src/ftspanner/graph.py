"""Compact immutable graphs, fault sets and exact hop distances.

Every distance in the package is an exact BFS hop count.  Unreachable pairs
carry the :data:`UNREACHABLE` sentinel, which compares above every finite
distance, so ``d_{G-F}(s, t) >= d_G(s, t)`` holds literally on the arrays.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra, shortest_path

UNREACHABLE = np.iinfo(np.int64).max // 4

EDGE = "edge"
VERTEX = "vertex"
FAULT_KINDS = (EDGE, VERTEX)


class GraphError(ValueError):
    """Malformed graph input or an operation applied outside its domain."""


class Graph:
    """Undirected simple graph on vertices ``0..n-1`` with dense edge ids.

    Edges are stored as ``(u, v)`` with ``u < v`` in lexicographic order; the
    position in that order is the edge id.  This makes "canonical edge order"
    and "edge id order" the same thing everywhere.
    """

    __slots__ = ("n", "edges", "adj", "_index", "eu", "ev", "_arcs", "_csr")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        norm = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in norm:
                raise GraphError(f"duplicate edge {e}")
            norm.add(e)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))
        self._index = {e: i for i, e in enumerate(self.edges)}
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in nbrs)
        self.eu = np.fromiter((e[0] for e in self.edges), dtype=np.int64, count=len(self.edges))
        self.ev = np.fromiter((e[1] for e in self.edges), dtype=np.int64, count=len(self.edges))
        self._arcs = None
        self._csr = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def edge_id(self, u: int, v: int) -> int:
        try:
            return self._index[(u, v) if u < v else (v, u)]
        except KeyError:
            raise GraphError(f"({u}, {v}) is not an edge") from None

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._index

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_subgraph(self, edge_ids: Iterable[int]) -> "Graph":
        """Spanning subgraph on the same vertex set keeping ``edge_ids``."""
        return Graph(self.n, (self.edges[i] for i in edge_ids))

    def digest(self) -> str:
        """SHA-256 of the normalized edge-list text; identifies a host graph."""
        return hashlib.sha256(write_edge_list(self).encode()).hexdigest()

    def arcs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Directed arc arrays ``(tail, head, edge_id)`` sorted by (tail, head)."""
        if self._arcs is None:
            ids = np.arange(self.m, dtype=np.int64)
            tail = np.concatenate([self.eu, self.ev])
            head = np.concatenate([self.ev, self.eu])
            eid = np.concatenate([ids, ids])
            order = np.lexsort((head, tail))
            self._arcs = (tail[order], head[order], eid[order])
        return self._arcs

    def csr(self, faults: "FaultSet | None" = None, edge_mask: np.ndarray | None = None) -> csr_matrix:
        """Adjacency matrix of ``g - faults`` with unit weights.

        ``edge_mask`` (one bool per edge id) restricts to a spanning subgraph
        before faults are applied.
        """
        if not faults and edge_mask is None:
            if self._csr is None:
                self._csr = _build_csr(self.n, *self.arcs()[:2], None)
            return self._csr
        tail, head, eid = self.arcs()
        return _build_csr(self.n, tail, head, self.arc_mask(faults, edge_mask))

    def arc_mask(self, faults: "FaultSet | None" = None, edge_mask: np.ndarray | None = None) -> np.ndarray:
        tail, head, eid = self.arcs()
        keep = np.ones(self.m, dtype=bool) if edge_mask is None else np.array(edge_mask, dtype=bool)
        if faults and faults.kind == EDGE:
            keep[list(faults.items)] = False
        mask = keep[eid]
        if faults and faults.kind == VERTEX:
            dead = np.zeros(self.n, dtype=bool)
            dead[list(faults.items)] = True
            mask &= ~(dead[tail] | dead[head])
        return mask


def _build_csr(n, tail, head, mask):
    if mask is not None:
        tail, head = tail[mask], head[mask]
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(tail, minlength=n), out=indptr[1:])
    data = np.ones(len(head), dtype=np.float64)
    return csr_matrix((data, head.astype(np.int32), indptr), shape=(n, n))


@dataclass(frozen=True)
class FaultSet:
    """A set of failed edges (by host edge id) or failed vertices."""

    kind: str
    items: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in FAULT_KINDS:
            raise GraphError(f"unknown fault kind {self.kind!r}")
        items = tuple(sorted(int(x) for x in self.items))
        if len(set(items)) != len(items):
            raise GraphError(f"repeated fault items {items}")
        object.__setattr__(self, "items", items)

    def __len__(self) -> int:
        return len(self.items)

    def __bool__(self) -> bool:
        return bool(self.items)

    @classmethod
    def of_edges(cls, g: Graph, pairs: Iterable[tuple[int, int]]) -> "FaultSet":
        return cls(EDGE, tuple(g.edge_id(u, v) for u, v in pairs))

    @classmethod
    def of_vertices(cls, vertices: Iterable[int]) -> "FaultSet":
        return cls(VERTEX, tuple(vertices))

    def validate(self, g: Graph, f: int | None = None) -> None:
        bound = g.m if self.kind == EDGE else g.n
        for x in self.items:
            if not 0 <= x < bound:
                raise GraphError(f"fault {self.kind} id {x} out of range [0, {bound})")
        if f is not None and len(self.items) > f:
            raise GraphError(f"{len(self.items)} faults exceed budget f={f}")

    def edge_pairs(self, g: Graph) -> list[tuple[int, int]]:
        if self.kind != EDGE:
            return []
        return [g.edges[i] for i in self.items]

    def project(self, host: Graph, sub: Graph) -> "FaultSet":
        """Re-express host-graph faults on a spanning subgraph ``sub``."""
        if self.kind == VERTEX:
            return self
        ids = [sub.edge_id(*host.edges[i]) for i in self.items if sub.has_edge(*host.edges[i])]
        return FaultSet(EDGE, tuple(ids))


def _check_faults(g: Graph, faults: FaultSet | None) -> FaultSet | None:
    if faults:
        faults.validate(g)
        return faults
    return None


def _to_int(d: np.ndarray) -> np.ndarray:
    out = np.full(d.shape, UNREACHABLE, dtype=np.int64)
    finite = np.isfinite(d)
    out[finite] = d[finite].astype(np.int64)
    return out


def bfs_distances(
    g: Graph, src: int, faults: FaultSet | None = None, edge_mask: np.ndarray | None = None
) -> np.ndarray:
    """Hop distances from ``src`` in ``g - faults`` (sentinel for unreachable)."""
    if not 0 <= src < g.n:
        raise GraphError(f"source {src} not in graph")
    faults = _check_faults(g, faults)
    if faults is not None and faults.kind == VERTEX and src in faults.items:
        raise GraphError(f"source {src} is a failed vertex")
    d = shortest_path(g.csr(faults, edge_mask), method="D", unweighted=True, indices=src)
    return _to_int(d)


def multi_source_distances(
    g: Graph, sources: Sequence[int], faults: FaultSet | None = None, edge_mask: np.ndarray | None = None
) -> np.ndarray:
    """Distance from the nearest of ``sources`` to every vertex."""
    if len(sources) == 0:
        return np.full(g.n, UNREACHABLE, dtype=np.int64)
    faults = _check_faults(g, faults)
    d = dijkstra(g.csr(faults, edge_mask), unweighted=True, indices=list(sources), min_only=True)
    return _to_int(d)


def canonical_parents(
    g: Graph, dist: np.ndarray, faults: FaultSet | None = None, edge_mask: np.ndarray | None = None
) -> np.ndarray:
    """Lowest-id neighbour one BFS level closer to the root, or -1.

    ``dist`` must be a BFS distance vector of the same masked/faulted graph.
    """
    tail, head, _ = g.arcs()
    parent = np.full(g.n, -1, dtype=np.int64)
    finite = dist < UNREACHABLE
    ok = finite[tail] & finite[head] & (dist[head] == dist[tail] - 1)
    if faults or edge_mask is not None:
        ok &= g.arc_mask(faults, edge_mask)
    t, h = tail[ok], head[ok]
    # arcs are sorted by (tail, head): the first arc per tail has the smallest head
    first_t, first_idx = np.unique(t, return_index=True)
    parent[first_t] = h[first_idx]
    return parent


def bfs_tree(
    g: Graph, src: int, faults: FaultSet | None = None, edge_mask: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Distances and canonical (lowest-id) parents of the BFS tree at ``src``."""
    dist = bfs_distances(g, src, faults, edge_mask)
    return dist, canonical_parents(g, dist, faults, edge_mask)


def tree_edge_ids(g: Graph, parent: np.ndarray) -> list[int]:
    return [g.edge_id(v, int(p)) for v, p in enumerate(parent) if p >= 0]


@dataclass(frozen=True)
class DistanceMatrix:
    """All-pairs hop distances of ``g - faults``.

    Rows and columns of failed vertices are marked invalid and hold the
    sentinel.
    """

    dist: np.ndarray
    valid: np.ndarray

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    def __getitem__(self, key):
        return self.dist[key]

    def reachable(self, s: int, t: int) -> bool:
        return bool(self.valid[s] and self.valid[t] and self.dist[s, t] < UNREACHABLE)


def all_pairs_distances(
    g: Graph, faults: FaultSet | None = None, edge_mask: np.ndarray | None = None
) -> DistanceMatrix:
    """Hop distances between all pairs of ``g - faults`` (optionally edge-masked)."""
    faults = _check_faults(g, faults)
    if g.n == 0:
        return DistanceMatrix(np.zeros((0, 0), dtype=np.int64), np.zeros(0, dtype=bool))
    d = _to_int(shortest_path(g.csr(faults, edge_mask), method="D", unweighted=True))
    valid = np.ones(g.n, dtype=bool)
    if faults is not None and faults.kind == VERTEX:
        dead = list(faults.items)
        valid[dead] = False
        d[dead, :] = UNREACHABLE
        d[:, dead] = UNREACHABLE
    return DistanceMatrix(d, valid)


def rows_distances(
    g: Graph, sources: Sequence[int], faults: FaultSet | None = None, edge_mask: np.ndarray | None = None
) -> np.ndarray:
    """``len(sources) x n`` distance rows; failed vertices read as unreachable."""
    faults = _check_faults(g, faults)
    if len(sources) == 0:
        return np.zeros((0, g.n), dtype=np.int64)
    d = _to_int(shortest_path(g.csr(faults, edge_mask), method="D", unweighted=True, indices=list(sources)))
    if faults is not None and faults.kind == VERTEX:
        d[:, list(faults.items)] = UNREACHABLE
        for i, s in enumerate(sources):
            if s in faults.items:
                d[i, :] = UNREACHABLE
    return d


def path_from_parents(parent: np.ndarray, src: int, v: int) -> list[int]:
    path = [v]
    while path[-1] != src:
        p = int(parent[path[-1]])
        if p < 0:
            raise GraphError(f"{v} not reachable from {src}")
        path.append(p)
    path.reverse()
    return path


def canonical_shortest_path(g: Graph, u: int, v: int, faults: FaultSet | None = None) -> list[int]:
    """The shortest ``u``-``v`` path fixed by the lowest-id-parent BFS rule."""
    dist, parent = bfs_tree(g, u, faults)
    if dist[v] >= UNREACHABLE:
        raise GraphError(f"{u} and {v} are disconnected")
    return path_from_parents(parent, u, v)


def path_edge_ids(g: Graph, path: Sequence[int]) -> list[int]:
    return [g.edge_id(a, b) for a, b in zip(path, path[1:])]


def read_edge_list(text: str) -> Graph:
    """Parse ``"n m"`` followed by ``m`` lines ``"u v"``; ``#`` starts a comment line."""
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1]), lineno))
        except ValueError:
            raise GraphError(f"line {lineno}: expected two integers, got {raw!r}") from None
    if not rows:
        raise GraphError("missing header line 'n m'")
    (n, m, _), body = rows[0], rows[1:]
    if n < 0 or m < 0:
        raise GraphError("header values must be non-negative")
    if len(body) != m:
        raise GraphError(f"header declares {m} edges, found {len(body)}")
    for u, v, lineno in body:
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"line {lineno}: vertex id out of range for n={n}")
    return Graph(n, ((u, v) for u, v, _ in body))


def write_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"
