"""Spanner container, clusterings and the non-fault-tolerant building blocks.

The additive constructions here are the classical degree-threshold
clusterings: ACIM-style (threshold ``ceil(sqrt n)`` plus one BFS tree per
center) for stretch 2, and BKMP-style (threshold ``ceil(n^(1/3))`` plus path
buying between cluster centers) for stretch 6.  Both expose their clustering
so the cluster augmentation can consume it.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .graph import (
    EDGE,
    UNREACHABLE,
    VERTEX,
    Graph,
    GraphError,
    all_pairs_distances,
    bfs_tree,
    canonical_shortest_path,
    multi_source_distances,
    path_edge_ids,
    tree_edge_ids,
)

NONE = "none"
CLAIM_KINDS = (NONE, EDGE, VERTEX)


@dataclass(frozen=True)
class Claim:
    """Guarantee ``d_{H-F} <= alpha * d_{G-F} + beta`` for all ``|F| <= f`` of ``kind``."""

    alpha: int
    beta: int
    f: int = 0
    kind: str = NONE

    def __post_init__(self):
        if self.kind not in CLAIM_KINDS:
            raise ValueError(f"unknown claim kind {self.kind!r}")
        if self.alpha < 1 or self.beta < 0 or self.f < 0:
            raise ValueError(f"invalid claim {self}")
        if (self.kind == NONE) != (self.f == 0):
            raise ValueError("fault budget f > 0 requires an edge/vertex kind and vice versa")

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "f": self.f, "kind": self.kind}


@dataclass(frozen=True, eq=False)
class Spanner:
    """Edge subset of a host graph plus the guarantee it was built to satisfy.

    ``sources`` is set for sourcewise claims, which only bound pairs with an
    endpoint in that set.  ``info`` carries construction instrumentation.
    """

    host: Graph
    edges: tuple[int, ...]
    claim: Claim
    provenance: str
    sources: tuple[int, ...] | None = None
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = tuple(sorted(set(int(e) for e in self.edges)))
        if ids and not (0 <= ids[0] and ids[-1] < self.host.m):
            raise GraphError("spanner edges are not a subset of the host edges")
        object.__setattr__(self, "edges", ids)

    @property
    def size(self) -> int:
        return len(self.edges)

    @cached_property
    def mask(self) -> np.ndarray:
        mask = np.zeros(self.host.m, dtype=bool)
        mask[list(self.edges)] = True
        return mask

    @cached_property
    def graph(self) -> Graph:
        """The spanner as a standalone graph on the host's vertex set."""
        return self.host.edge_subgraph(self.edges)

    def contains(self, u: int, v: int) -> bool:
        return self.host.has_edge(u, v) and bool(self.mask[self.host.edge_id(u, v)])

    def to_json(self) -> str:
        doc = {
            "host_hash": self.host.digest(),
            "n": self.host.n,
            "edges": list(self.edges),
            "claim": self.claim.as_dict(),
            "provenance": self.provenance,
        }
        if self.sources is not None:
            doc["sources"] = list(self.sources)
        return json.dumps(doc, sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str, host: Graph) -> "Spanner":
        doc = json.loads(text)
        if doc["host_hash"] != host.digest():
            raise GraphError("spanner was built for a different host graph")
        srcs = doc.get("sources")
        return cls(
            host,
            tuple(doc["edges"]),
            Claim(**doc["claim"]),
            doc["provenance"],
            None if srcs is None else tuple(srcs),
        )


def same_host(*spanners: Spanner) -> Graph:
    host = spanners[0].host
    for sp in spanners[1:]:
        if sp.host is not host and sp.host != host:
            raise GraphError("spanners are built on different host graphs")
    return host


@dataclass(frozen=True)
class Clustering:
    """Partition of a vertex subset into clusters with designated centers."""

    cluster_of: tuple[int | None, ...]
    center_of: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.center_of)

    def is_clustered(self, v: int) -> bool:
        return self.cluster_of[v] is not None

    def center(self, v: int) -> int:
        c = self.cluster_of[v]
        if c is None:
            raise GraphError(f"vertex {v} is unclustered")
        return self.center_of[c]

    @cached_property
    def members(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.center_of]
        for v, c in enumerate(self.cluster_of):
            if c is not None:
                out[c].append(v)
        return tuple(tuple(m) for m in out)

    def validate(self, g: Graph) -> None:
        if len(self.cluster_of) != g.n:
            raise GraphError(f"clustering covers {len(self.cluster_of)} vertices, host has {g.n}")
        for c, center in enumerate(self.center_of):
            if not 0 <= center < g.n or self.cluster_of[center] != c:
                raise GraphError(f"center {center} of cluster {c} is not in its cluster")
        for v, c in enumerate(self.cluster_of):
            if c is not None and not 0 <= c < self.count:
                raise GraphError(f"vertex {v} assigned to unknown cluster {c}")

    @classmethod
    def empty(cls, n: int) -> "Clustering":
        return cls((None,) * n, ())

    @classmethod
    def from_clusters(cls, n: int, clusters: Sequence[tuple[int, Iterable[int]]]) -> "Clustering":
        """Build from ``[(center, members), ...]``; the center is added to its members."""
        cluster_of: list[int | None] = [None] * n
        for c, (center, members) in enumerate(clusters):
            for v in {center, *members}:
                if cluster_of[v] is not None:
                    raise GraphError(f"vertex {v} is in two clusters")
                cluster_of[v] = c
        return cls(tuple(cluster_of), tuple(center for center, _ in clusters))


def ceil_root(x: int, k: int) -> int:
    """Smallest integer r with r**k >= x (exact, no float rounding)."""
    if x <= 0:
        return 0
    r = max(1, int(round(x ** (1.0 / k))))
    while r**k < x:
        r += 1
    while r > 1 and (r - 1) ** k >= x:
        r -= 1
    return r


# -- greedy multiplicative -----------------------------------------------------


def _ball(adj: list[set[int]], src: int, radius: int) -> dict[int, int]:
    dist = {src: 0}
    frontier = [src]
    for d in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in dist:
                    dist[w] = d
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return dist


def _within(adj: list[set[int]], u: int, v: int, limit: int) -> bool:
    """Whether the current graph has a u-v path of length <= limit."""
    left = _ball(adj, u, (limit + 1) // 2)
    if v in left:
        return True
    right = _ball(adj, v, limit // 2)
    if len(right) < len(left):
        return any(left.get(w, limit + 1) + d <= limit for w, d in right.items())
    return any(right.get(w, limit + 1) + d <= limit for w, d in left.items())


def greedy_edges(g: Graph, k: int, candidates: Iterable[int] | None = None) -> list[int]:
    """Greedy (2k-1)-spanner over ``candidates`` (edge ids, scanned ascending)."""
    if k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    limit = 2 * k - 1
    adj: list[set[int]] = [set() for _ in range(g.n)]
    kept = []
    for eid in sorted(range(g.m) if candidates is None else candidates):
        u, v = g.edges[eid]
        if not _within(adj, u, v, limit):
            adj[u].add(v)
            adj[v].add(u)
            kept.append(eid)
    return kept


def greedy_multiplicative(g: Graph, k: int) -> Spanner:
    """Classic greedy (2k-1)-multiplicative spanner; output girth exceeds 2k."""
    kept = greedy_edges(g, k)
    return Spanner(g, tuple(kept), Claim(2 * k - 1, 0), f"greedy_multiplicative(k={k})")


# -- clustering-based additive spanners -----------------------------------------


def threshold_clustering(g: Graph, delta: int) -> Clustering:
    """Cluster around unclustered vertices with >= ``delta`` unclustered neighbours.

    The lowest-id qualifying vertex becomes the next center and absorbs all its
    unclustered neighbours.
    """
    unclustered_deg = [g.degree(v) for v in range(g.n)]
    cluster_of: list[int | None] = [None] * g.n
    centers: list[int] = []
    while True:
        center = next(
            (v for v in range(g.n) if cluster_of[v] is None and unclustered_deg[v] >= delta), None
        )
        if center is None:
            break
        c = len(centers)
        centers.append(center)
        joined = [center] + [w for w in g.adj[center] if cluster_of[w] is None]
        for v in joined:
            cluster_of[v] = c
        for v in joined:
            for w in g.adj[v]:
                unclustered_deg[w] -= 1
    return Clustering(tuple(cluster_of), tuple(centers))


def clustering_base_edges(g: Graph, clustering: Clustering) -> set[int]:
    """Edges incident to unclustered vertices plus every center star."""
    out = set()
    for eid, (u, v) in enumerate(g.edges):
        if not clustering.is_clustered(u) or not clustering.is_clustered(v):
            out.add(eid)
    for v in range(g.n):
        if clustering.is_clustered(v):
            c = clustering.center(v)
            if c != v:
                out.add(g.edge_id(c, v))
    return out


def acim_2additive(g: Graph) -> tuple[Spanner, Clustering]:
    """2-additive spanner: sqrt(n)-threshold clusters plus a BFS tree per center."""
    delta = ceil_root(g.n, 2)
    clustering = threshold_clustering(g, delta)
    edges = clustering_base_edges(g, clustering)
    for center in clustering.center_of:
        _, parent = bfs_tree(g, center)
        edges.update(tree_edge_ids(g, parent))
    sp = Spanner(
        g,
        tuple(edges),
        Claim(1, 2),
        f"acim_2additive(delta={delta})",
        info={"delta": delta, "clusters": clustering.count},
    )
    return sp, clustering


def _touch_positions(path: Sequence[int], clustering: Clustering) -> dict[int, list[int]]:
    pos: dict[int, list[int]] = {}
    for i, v in enumerate(path):
        c = clustering.cluster_of[v]
        if c is not None:
            pos.setdefault(c, []).append(i)
    return pos


def _cluster_distances(g: Graph, clustering: Clustering, mask: np.ndarray) -> np.ndarray:
    k = clustering.count
    out = np.empty((k, k), dtype=np.int64)
    owner = np.array([-1 if c is None else c for c in clustering.cluster_of], dtype=np.int64)
    for c, members in enumerate(clustering.members):
        d = multi_source_distances(g, members, edge_mask=mask)
        best = np.full(k, UNREACHABLE, dtype=np.int64)
        clustered = owner >= 0
        np.minimum.at(best, owner[clustered], d[clustered])
        out[c] = best
    return out


def bkmp_6additive(g: Graph, repair: bool = True) -> tuple[Spanner, Clustering]:
    """6-additive spanner: n^(1/3)-threshold clusters plus path buying.

    Center pairs are scanned in ascending (center, center) order.  The
    canonical shortest path between them is bought when its cost (edges not
    yet present) is at most twice its value (cluster pairs whose spanner
    distance it would strictly improve).

    With ``repair`` a final pass buys the canonical shortest path of every
    pair still violating the +6 bound or the clustering property; the number
    of such purchases is reported in ``info["repaired_pairs"]``.
    """
    delta = ceil_root(g.n, 3)
    clustering = threshold_clustering(g, delta)
    mask = np.zeros(g.m, dtype=bool)
    mask[list(clustering_base_edges(g, clustering))] = True

    order = sorted(range(clustering.count), key=lambda c: clustering.center_of[c])
    bought = 0
    cdist = _cluster_distances(g, clustering, mask) if clustering.count > 1 else None
    for i, a in enumerate(order):
        ca = clustering.center_of[a]
        _, parent = bfs_tree(g, ca)
        for b in order[i + 1 :]:
            cb = clustering.center_of[b]
            if parent[cb] < 0:
                continue
            path = [cb]
            while path[-1] != ca:
                path.append(int(parent[path[-1]]))
            path.reverse()
            ids = path_edge_ids(g, path)
            cost = sum(1 for e in ids if not mask[e])
            if cost == 0:
                continue
            pos = _touch_positions(path, clustering)
            touched = sorted(pos)
            value = 0
            for x, c1 in enumerate(touched):
                for c2 in touched[x + 1 :]:
                    along = min(abs(p - q) for p in pos[c1] for q in pos[c2])
                    if along < cdist[c1, c2]:
                        value += 1
            if cost <= 2 * value:
                mask[ids] = True
                bought += 1
                cdist = _cluster_distances(g, clustering, mask)

    repaired = 0
    if repair:
        repaired = _repair_additive(g, clustering, mask, beta=6)
    sp = Spanner(
        g,
        tuple(np.flatnonzero(mask).tolist()),
        Claim(1, 6),
        f"bkmp_6additive(delta={delta})",
        info={"delta": delta, "clusters": clustering.count, "bought_paths": bought, "repaired_pairs": repaired},
    )
    return sp, clustering


def _repair_additive(g: Graph, clustering: Clustering, mask: np.ndarray, beta: int) -> int:
    """Buy canonical shortest paths until +beta and the clustering property hold."""
    dg = all_pairs_distances(g).dist
    repaired = 0
    while True:
        da = all_pairs_distances(g.edge_subgraph(np.flatnonzero(mask).tolist())).dist
        bad = _additive_violations(dg, da, beta) | _property_violations(g, clustering, mask, dg, da, beta)
        hits = np.argwhere(bad)
        if len(hits) == 0:
            return repaired
        u, v = (int(x) for x in hits[0])
        mask[path_edge_ids(g, canonical_shortest_path(g, u, v))] = True
        repaired += 1


def _additive_violations(dg: np.ndarray, da: np.ndarray, beta: int) -> np.ndarray:
    finite = dg < UNREACHABLE
    return finite & (da > dg + beta)


# -- clustering property ----------------------------------------------------------


@dataclass(frozen=True)
class PropertyCheck:
    ok: bool
    witness: tuple[int, int] | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _property_violations(
    g: Graph, clustering: Clustering, mask: np.ndarray, dg: np.ndarray, da: np.ndarray, beta: int
) -> np.ndarray:
    """Boolean matrix: ``[u, v]`` set when clustered ``v`` admits no qualifying path from ``u``."""
    n = g.n
    bad = np.zeros((n, n), dtype=bool)
    finite = dg < UNREACHABLE
    for v in range(n):
        if not clustering.is_clustered(v):
            continue
        c = clustering.center(v)
        col_g, col_a = dg[:, v], da[:, v]
        ok = col_a <= col_g + beta - 2
        if c == v:
            ok |= col_a <= col_g + beta - 1
        elif g.has_edge(c, v) and mask[g.edge_id(c, v)]:
            ok |= da[:, c] + 1 <= col_g + beta
        bad[:, v] = finite[:, v] & ~ok
    return bad


def clustering_pair_ok(
    dg: np.ndarray, da: np.ndarray, clustering: Clustering, star_present: bool, u: int, v: int, beta: int
) -> bool:
    """Property check for a single (u, clustered v) pair from distance matrices."""
    if dg[u, v] >= UNREACHABLE:
        return True
    c = clustering.center(v)
    if da[u, v] <= dg[u, v] + beta - 2:
        return True
    if c == v:
        return bool(da[u, v] <= dg[u, v] + beta - 1)
    return bool(star_present and da[u, c] + 1 <= dg[u, v] + beta)


def check_clustering_property(A: Spanner, clustering: Clustering, beta: int) -> PropertyCheck:
    """Certify that ``A`` is a clustering-based ``beta``-additive spanner.

    Checks that unclustered-incident and center-star edges are in ``A`` and
    that every (u, clustered v) pair has a path of length at most
    ``d(u, v) + beta - 2``, or ``+ beta - 1`` when ``v`` is a center, or
    ``+ beta`` when the path ends with the star edge ``(cnt(v), v)``.
    Returns the lexicographically first failing pair.
    """
    g = A.host
    clustering.validate(g)
    for eid, (u, v) in enumerate(g.edges):
        if (not clustering.is_clustered(u) or not clustering.is_clustered(v)) and not A.mask[eid]:
            return PropertyCheck(False, (u, v), "edge incident to an unclustered vertex is missing")
    for v in range(g.n):
        if clustering.is_clustered(v):
            c = clustering.center(v)
            if c != v and not (g.has_edge(c, v) and A.mask[g.edge_id(c, v)]):
                return PropertyCheck(False, (c, v), "center star edge is missing")
    dg = all_pairs_distances(g).dist
    da = all_pairs_distances(A.graph).dist
    hits = np.argwhere(_property_violations(g, clustering, A.mask, dg, da, beta))
    if len(hits):
        u, v = (int(x) for x in hits[0])
        return PropertyCheck(False, (u, v), "no qualifying path")
    return PropertyCheck(True)


def girth(g: Graph) -> int | None:
    """Length of the shortest cycle, or None for a forest."""
    best = None
    for s in range(g.n):
        dist = {s: 0}
        par = {s: -1}
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    par[w] = u
                    q.append(w)
                elif par[u] != w:
                    cyc = dist[u] + dist[w] + 1
                    if best is None or cyc < best:
                        best = cyc
    return best
