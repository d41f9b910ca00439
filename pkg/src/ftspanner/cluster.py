"""Cluster augmentation of a clustering-based additive spanner.

``H = A + M + E'`` where ``A`` is clustering-based with stretch ``beta``, ``M``
is an alpha-multiplicative EFT spanner and ``E'`` adds, per clustered vertex,
one edge to a cluster-mate other than its center, and per pair of distinct
clusters up to two crossing edges (vertex-disjoint when possible).  The result
tolerates one edge fault with additive stretch ``2*beta + max(2, alpha - 3)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import EDGE, UNREACHABLE, FaultSet, Graph, GraphError, all_pairs_distances, canonical_shortest_path
from .spanners import Claim, Clustering, Spanner, check_clustering_property, same_host


@dataclass(frozen=True)
class ClusterAugmentEdges:
    """Chosen intra-cluster edges (per vertex) and inter-cluster edges (per cluster pair)."""

    intra: dict[int, tuple[int, int]]
    inter: dict[tuple[int, int], tuple[tuple[int, int], ...]]

    def edge_set(self) -> set[tuple[int, int]]:
        out = set(self.intra.values())
        for chosen in self.inter.values():
            out.update(chosen)
        return out


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _pick_inter(crossing: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Lexicographically first vertex-disjoint pair, else the two smallest edges, else the edge."""
    for i, e in enumerate(crossing):
        for e2 in crossing[i + 1 :]:
            if not set(e) & set(e2):
                return (e, e2)
    return tuple(crossing[:2])


def augment_clusters(g: Graph, clustering: Clustering) -> ClusterAugmentEdges:
    clustering.validate(g)
    intra: dict[int, tuple[int, int]] = {}
    for members in clustering.members:
        for v in members:
            center = clustering.center(v)
            c = clustering.cluster_of[v]
            x = next((w for w in g.adj[v] if w != center and clustering.cluster_of[w] == c), None)
            if x is not None:
                intra[v] = _norm(v, x)
    crossing: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u, v in g.edges:
        cu, cv = clustering.cluster_of[u], clustering.cluster_of[v]
        if cu is None or cv is None or cu == cv:
            continue
        crossing.setdefault((min(cu, cv), max(cu, cv)), []).append((u, v))
    inter = {pair: _pick_inter(edges) for pair, edges in sorted(crossing.items())}
    return ClusterAugmentEdges(intra, inter)


def alg2_beta(alpha: int, beta: int) -> int:
    return 2 * beta + max(2, alpha - 3)


def build_alg2_spanner(g: Graph, A: Spanner, clustering: Clustering, M: Spanner) -> Spanner:
    """Union of ``A``, ``M`` and the cluster augmentation; refuses an uncertified ``A``."""
    same_host(A, M)
    if A.host != g:
        raise GraphError("spanners are not built on this graph")
    if M.claim.kind != EDGE or M.claim.f < 1 or M.claim.beta != 0:
        raise ValueError(f"M must be a multiplicative edge-fault-tolerant spanner, got {M.claim}")
    if A.claim.alpha != 1:
        raise ValueError("A must be purely additive")
    beta = A.claim.beta
    check = check_clustering_property(A, clustering, beta)
    if not check:
        raise ValueError(f"A is not clustering-based with beta={beta}: {check.reason} at {check.witness}")
    aug = augment_clusters(g, clustering)
    extra = {g.edge_id(u, v) for u, v in aug.edge_set()}
    edges = set(A.edges) | set(M.edges) | extra
    return Spanner(
        g,
        tuple(edges),
        Claim(1, alg2_beta(M.claim.alpha, beta), 1, EDGE),
        f"alg2({A.provenance} + {M.provenance})",
        info={
            "augment_edges": len(extra),
            "intra": len(aug.intra),
            "inter_pairs": len(aug.inter),
            "clusters": clustering.count,
        },
    )


def uses_edge(d: np.ndarray, a: int, b: int, x: int, y: int) -> bool:
    """Whether some shortest a-b path in the graph with distances ``d`` crosses edge (x, y)."""
    if d[a, b] >= UNREACHABLE:
        return False
    return bool(d[a, b] == min(d[a, x] + 1 + d[y, b], d[a, y] + 1 + d[x, b]))


def find_block_split(A: Spanner, e: tuple[int, int], s: int, t: int) -> tuple[int, int]:
    """Split the replacement path so both halves have only fault-free shortest paths in ``A``.

    Walks the canonical shortest ``s``-``t`` path of ``G - e`` and returns the
    last vertex ``z`` that still has a shortest path to ``t`` in ``A`` through
    ``e``, together with its successor ``z'``.
    """
    g = A.host
    x, y = e
    fault = FaultSet.of_edges(g, [e])
    da = all_pairs_distances(A.graph).dist
    da_e = all_pairs_distances(A.graph, fault.project(g, A.graph)).dist
    if not (da[s, t] < da_e[s, t] < UNREACHABLE):
        raise ValueError(f"need d_A({s},{t}) < d_(A-e)({s},{t}) < inf")
    path = canonical_shortest_path(g, s, t, fault)
    z_idx = max(i for i, v in enumerate(path) if uses_edge(da, v, t, x, y))
    return path[z_idx], path[z_idx + 1]
