"""Fault-tolerant building blocks.

* :func:`eft_multiplicative` -- f+1 edge-disjoint greedy rounds, a
  (2k-1)-multiplicative f-EFT spanner.
* :func:`sourcewise_ft_preserver` -- exact single-fault distances from a
  source set (BFS tree plus replacement-tree edges).
* :func:`sourcewise_ft_augment` -- repair an (alpha, beta) spanner until it
  keeps its stretch from every source under any single fault.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graph import (
    EDGE,
    FAULT_KINDS,
    UNREACHABLE,
    VERTEX,
    FaultSet,
    Graph,
    GraphError,
    all_pairs_distances,
    bfs_distances,
    bfs_tree,
    path_edge_ids,
    path_from_parents,
)
from .spanners import Claim, Spanner, acim_2additive, greedy_edges

PRESERVER = "preserver"
AUGMENTED = "augmented-2additive"
FACTORY_KINDS = (PRESERVER, AUGMENTED)


def eft_multiplicative(g: Graph, k: int, f: int) -> Spanner:
    """(2k-1)-multiplicative f-EFT spanner as the union of f+1 greedy rounds.

    Each round runs the greedy spanner on the edges no earlier round kept.
    An unkept edge then has a <= 2k-1 detour in each of f+1 edge-disjoint
    rounds, so at most f failures cannot break all of them.
    """
    if k < 1 or f < 1:
        raise ValueError(f"need k >= 1 and f >= 1, got k={k}, f={f}")
    remaining = set(range(g.m))
    rounds = []
    for _ in range(f + 1):
        kept = greedy_edges(g, k, remaining)
        rounds.append(len(kept))
        remaining.difference_update(kept)
        if not kept:
            break
    chosen = set(range(g.m)) - remaining
    return Spanner(
        g,
        tuple(chosen),
        Claim(2 * k - 1, 0, f, EDGE),
        f"eft_multiplicative(k={k}, f={f})",
        info={"round_sizes": rounds},
    )


def _check_sources(g: Graph, sources: Iterable[int]) -> tuple[int, ...]:
    srcs = tuple(sorted(set(int(s) for s in sources)))
    for s in srcs:
        if not 0 <= s < g.n:
            raise GraphError(f"source {s} not in graph")
    return srcs


def _candidate_faults(g: Graph, src: int, parent: np.ndarray, fault_kind: str) -> list[FaultSet]:
    """Single faults that can change distances from ``src``.

    For edge faults only tree edges matter once the BFS tree is present; for
    vertex faults every reachable non-source vertex is tried.
    """
    if fault_kind == EDGE:
        return [FaultSet(EDGE, (g.edge_id(v, int(p)),)) for v, p in enumerate(parent) if p >= 0]
    return [FaultSet(VERTEX, (v,)) for v, p in enumerate(parent) if p >= 0]


def sourcewise_ft_preserver(g: Graph, sources: Iterable[int], fault_kind: str = EDGE) -> Spanner:
    """Single-fault sourcewise preserver: ``d_{H-x}(s, t) = d_{G-x}(s, t)`` for s in S.

    For each source: its canonical BFS tree, and for every fault ``x`` on the
    tree the replacement-tree edge ``(v, parent')`` of each vertex whose
    distance or canonical parent changes in ``g - x``.  Following canonical
    parents in ``g - x`` then only ever uses edges kept here.
    """
    if fault_kind not in FAULT_KINDS:
        raise ValueError(f"unknown fault kind {fault_kind!r}")
    srcs = _check_sources(g, sources)
    chosen: set[int] = set()
    per_source = []
    for s in srcs:
        before = len(chosen)
        dist, parent = bfs_tree(g, s)
        chosen.update(g.edge_id(v, int(p)) for v, p in enumerate(parent) if p >= 0)
        for x in _candidate_faults(g, s, parent, fault_kind):
            d2, p2 = bfs_tree(g, s, x)
            changed = np.flatnonzero((p2 >= 0) & ((p2 != parent) | (d2 != dist)))
            for v in changed.tolist():
                chosen.add(g.edge_id(v, int(p2[v])))
        per_source.append(len(chosen) - before)
    return Spanner(
        g,
        tuple(chosen),
        Claim(1, 0, 1, fault_kind),
        f"sourcewise_ft_preserver(|S|={len(srcs)}, kind={fault_kind})",
        sources=srcs,
        info={"added_per_source": per_source},
    )


def sourcewise_ft_augment(A: Spanner, sources: Iterable[int], fault_kind: str = EDGE) -> Spanner:
    """Add edges to ``A`` so its (alpha, beta) claim survives one fault from every source.

    Per source: add the canonical BFS tree, then for every candidate fault
    ``x`` buy the canonical path of ``g - x`` to each target that violates
    ``d_{H-x}(s, t) <= alpha * d_{g-x}(s, t) + beta``.  A bought path makes
    its target exact and edges only accumulate, so one sweep over (s, x)
    followed by a confirming sweep reaches a fixed point.
    """
    if fault_kind not in FAULT_KINDS:
        raise ValueError(f"unknown fault kind {fault_kind!r}")
    g = A.host
    srcs = _check_sources(g, sources)
    alpha, beta = A.claim.alpha, A.claim.beta
    dg_all = all_pairs_distances(g).dist
    da_all = all_pairs_distances(A.graph).dist
    finite = dg_all < UNREACHABLE
    if np.any(finite & (da_all > alpha * np.where(finite, dg_all, 0) + beta)):
        raise GraphError(f"{A.provenance} does not satisfy its own ({alpha}, {beta}) claim")
    mask = A.mask.copy()
    trees = {s: bfs_tree(g, s) for s in srcs}
    per_source = [0] * len(srcs)
    sweeps = 0
    while True:
        sweeps += 1
        grown = 0
        for idx, s in enumerate(srcs):
            before = int(mask.sum())
            _, parent = trees[s]
            mask[[g.edge_id(v, int(p)) for v, p in enumerate(parent) if p >= 0]] = True
            for x in _candidate_faults(g, s, parent, fault_kind):
                dg, pg = bfs_tree(g, s, x)
                dh = bfs_distances(g, s, x, edge_mask=mask)
                reach = dg < UNREACHABLE
                bad = reach & (dh > alpha * np.where(reach, dg, 0) + beta)
                for t in np.flatnonzero(bad).tolist():
                    mask[path_edge_ids(g, path_from_parents(pg, s, t))] = True
            gained = int(mask.sum()) - before
            per_source[idx] += gained
            grown += gained
        if grown == 0:
            break
    return Spanner(
        g,
        tuple(np.flatnonzero(mask).tolist()),
        Claim(alpha, beta, 1, fault_kind),
        f"sourcewise_ft_augment({A.provenance}, |S|={len(srcs)}, kind={fault_kind})",
        sources=srcs,
        info={"added_per_source": per_source, "sweeps": sweeps},
    )


@dataclass
class SourcewiseFactory:
    """Builds the single-fault sourcewise structure handed to the source-selection construction.

    ``size_gamma`` records ``(n, |S|, edges)`` for every structure produced,
    the empirical counterpart of the size function gamma(n, l).
    """

    kind: str
    fault_kind: str = EDGE
    size_gamma: list[tuple[int, int, int]] = field(default_factory=list)

    def __post_init__(self):
        if self.kind not in FACTORY_KINDS:
            raise ValueError(f"unknown factory kind {self.kind!r}")
        if self.fault_kind not in FAULT_KINDS:
            raise ValueError(f"unknown fault kind {self.fault_kind!r}")

    @property
    def beta(self) -> int:
        return 0 if self.kind == PRESERVER else 2

    @property
    def max_faults(self) -> int:
        return 1

    def __call__(self, g: Graph, sources: Iterable[int]) -> Spanner:
        if self.kind == PRESERVER:
            sp = sourcewise_ft_preserver(g, sources, self.fault_kind)
        else:
            base, _ = acim_2additive(g)
            sp = sourcewise_ft_augment(base, sources, self.fault_kind)
        self.size_gamma.append((g.n, len(sp.sources or ()), sp.size))
        return sp
