"""Fault-enumeration oracle for spanner claims.

For every fault set ``F`` of the claim's kind with ``|F| <= f`` (``F = {}``
included) the oracle compares exact distances in ``G - F`` and ``H - F``
and records the worst residue ``d_{H-F}(s, t) - alpha * d_{G-F}(s, t)``.
Pairs disconnected in ``G - F`` are skipped; pairs touching a failed vertex
do not exist in ``G - F`` and are not counted at all.

Enumeration order is fixed (by size, then lexicographic), pairs are scanned
as ``s < t`` in lexicographic order and the witness is the first pair that
attains the running maximum, so two correct implementations produce
identical reports.  :func:`naive_verify` is such a second implementation.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass
from math import comb
from typing import Iterable, Iterator, Sequence

import numpy as np

from .graph import EDGE, UNREACHABLE, VERTEX, FaultSet, Graph, all_pairs_distances, rows_distances
from .spanners import NONE, Claim, Spanner

DEFAULT_BUDGET = 5 * 10**9


class VerificationError(RuntimeError):
    """Verification cannot run as requested (missing claim, budget exceeded)."""


@dataclass(frozen=True)
class Mode:
    """``exhaustive``, or ``sampled`` with ``count`` random fault sets drawn from ``seed``."""

    kind: str = "exhaustive"
    count: int = 0
    seed: int = 0

    def as_dict(self) -> dict:
        if self.kind == "exhaustive":
            return {"kind": "exhaustive"}
        return {"kind": "sampled", "count": self.count, "seed": self.seed}


EXHAUSTIVE = Mode()


def sampled(count: int, seed: int = 0) -> Mode:
    return Mode("sampled", count, seed)


@dataclass(frozen=True)
class StretchReport:
    claim: Claim
    mode: Mode
    max_additive: int | None
    witness: tuple[int, int, FaultSet] | None
    pairs_checked: int
    pairs_skipped_disconnected: int
    fault_sets_checked: int
    sources: tuple[int, ...] | None = None

    @property
    def passed(self) -> bool:
        return self.max_additive is None or self.max_additive <= self.claim.beta

    def as_dict(self) -> dict:
        witness = None
        if self.witness is not None:
            s, t, F = self.witness
            witness = {"s": s, "t": t, "faults": {"kind": F.kind, "items": list(F.items)}}
        return {
            "claim": self.claim.as_dict(),
            "mode": self.mode.as_dict(),
            "max_additive": self.max_additive,
            "witness": witness,
            "counts": {
                "pairs_checked": self.pairs_checked,
                "pairs_skipped_disconnected": self.pairs_skipped_disconnected,
                "fault_sets": self.fault_sets_checked,
            },
            "sources": None if self.sources is None else list(self.sources),
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def fault_universe(g: Graph, kind: str) -> int:
    return g.m if kind == EDGE else g.n


def count_fault_sets(g: Graph, claim: Claim) -> int:
    if claim.kind == NONE:
        return 1
    u = fault_universe(g, claim.kind)
    return sum(comb(u, r) for r in range(min(claim.f, u) + 1))


def enumerate_fault_sets(g: Graph, claim: Claim, mode: Mode = EXHAUSTIVE) -> Iterator[FaultSet]:
    """Fault sets to check, in the canonical order shared by both verifiers."""
    kind = EDGE if claim.kind == NONE else claim.kind
    if claim.kind == NONE:
        yield FaultSet(kind)
        return
    universe = fault_universe(g, kind)
    if mode.kind == "exhaustive":
        for r in range(min(claim.f, universe) + 1):
            for combo in itertools.combinations(range(universe), r):
                yield FaultSet(kind, combo)
        return
    yield FaultSet(kind)
    rng = np.random.Generator(np.random.PCG64(mode.seed))
    size = min(claim.f, universe)
    for _ in range(mode.count):
        yield FaultSet(kind, tuple(rng.choice(universe, size=size, replace=False).tolist()))


def _resolve(H: Spanner, claim: Claim | None) -> Claim:
    claim = claim or H.claim
    if claim is None:
        raise VerificationError("spanner carries no claim to verify")
    return claim


def _check_budget(g: Graph, claim: Claim, mode: Mode, budget: float) -> None:
    if mode.kind != "exhaustive":
        return
    work = count_fault_sets(g, claim) * g.n * max(g.m, 1)
    if work > budget:
        raise VerificationError(
            f"exhaustive verification needs ~{work:.3g} relaxations, budget is {budget:.3g}; use sampling"
        )


def _pair_mask(n: int, sources: Sequence[int] | None) -> np.ndarray:
    mask = np.triu(np.ones((n, n), dtype=bool), k=1)
    if sources is not None:
        in_s = np.zeros(n, dtype=bool)
        in_s[list(sources)] = True
        mask &= in_s[:, None] | in_s[None, :]
    return mask


def _distances(g: Graph, F: FaultSet, sources: Sequence[int] | None, mask: np.ndarray | None = None) -> np.ndarray:
    if sources is None:
        return all_pairs_distances(g, F or None, mask).dist
    rows = rows_distances(g, sources, F or None, mask)
    d = np.full((g.n, g.n), UNREACHABLE, dtype=np.int64)
    idx = list(sources)
    d[idx, :] = rows
    d[:, idx] = rows.T
    return d


def _verify(
    g: Graph, H: Spanner, claim: Claim, mode: Mode, sources: Sequence[int] | None, budget: float
) -> StretchReport:
    if H.host is not g and H.host != g:
        raise VerificationError("spanner is not built on this graph")
    _check_budget(g, claim, mode, budget)
    base_pairs = _pair_mask(g.n, sources)
    # edge faults that miss H leave its distances unchanged
    dh_intact = _distances(g, FaultSet(EDGE), sources, H.mask)
    best: int | None = None
    witness = None
    checked = skipped = sets = 0
    for F in enumerate_fault_sets(g, claim, mode):
        sets += 1
        pairs = base_pairs
        if F.kind == VERTEX and F:
            alive = np.ones(g.n, dtype=bool)
            alive[list(F.items)] = False
            pairs = pairs & alive[:, None] & alive[None, :]
        dg = _distances(g, F, sources)
        if F.kind == EDGE and not H.mask[list(F.items)].any():
            dh = dh_intact
        else:
            dh = _distances(g, F, sources, H.mask)
        connected = dg < UNREACHABLE
        ok = pairs & connected
        checked += int(ok.sum())
        skipped += int((pairs & ~connected).sum())
        if not ok.any():
            continue
        excess = np.where(dh >= UNREACHABLE, UNREACHABLE, dh - claim.alpha * np.where(connected, dg, 0))
        local = int(excess[ok].max())
        if best is None or local > best:
            s, t = np.argwhere(ok & (excess == local))[0]
            best, witness = local, (int(s), int(t), F)
    return StretchReport(claim, mode, best, witness, checked, skipped, sets, None if sources is None else tuple(sources))


def verify_claim(
    g: Graph, H: Spanner, mode: Mode = EXHAUSTIVE, claim: Claim | None = None, budget: float = DEFAULT_BUDGET
) -> StretchReport:
    """Check ``H``'s (alpha, beta, f, kind) claim against ``g`` over all pairs."""
    return _verify(g, H, _resolve(H, claim), mode, None, budget)


def verify_sourcewise(
    g: Graph,
    H: Spanner,
    sources: Iterable[int],
    mode: Mode = EXHAUSTIVE,
    claim: Claim | None = None,
    budget: float = DEFAULT_BUDGET,
) -> StretchReport:
    """As :func:`verify_claim`, restricted to pairs with an endpoint in ``sources``."""
    srcs = tuple(sorted(set(int(s) for s in sources)))
    return _verify(g, H, _resolve(H, claim), mode, srcs, budget)


# -- naive cross-oracle ------------------------------------------------------------


def _naive_bfs(adj: list[list[int]], src: int) -> list[int]:
    dist = [UNREACHABLE] * len(adj)
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def _naive_adj(n: int, edges: Iterable[tuple[int, int]], F: FaultSet, host_edges) -> list[list[int]]:
    dead_edges = {host_edges[i] for i in F.items} if F.kind == EDGE else set()
    dead_vertices = set(F.items) if F.kind == VERTEX else set()
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if (u, v) in dead_edges or u in dead_vertices or v in dead_vertices:
            continue
        adj[u].append(v)
        adj[v].append(u)
    return adj


def naive_verify(
    g: Graph, H: Spanner, mode: Mode = EXHAUSTIVE, sources: Iterable[int] | None = None, claim: Claim | None = None
) -> StretchReport:
    """Reference verifier: rebuild both graphs and rerun every BFS per fault set."""
    claim = _resolve(H, claim)
    src_set = None if sources is None else set(int(s) for s in sources)
    h_edges = [g.edges[i] for i in H.edges]
    best = None
    witness = None
    checked = skipped = sets = 0
    for F in enumerate_fault_sets(g, claim, mode):
        sets += 1
        adj_g = _naive_adj(g.n, g.edges, F, g.edges)
        adj_h = _naive_adj(g.n, h_edges, F, g.edges)
        dead = set(F.items) if F.kind == VERTEX else set()
        for s in range(g.n):
            if s in dead:
                continue
            dg = _naive_bfs(adj_g, s)
            dh = _naive_bfs(adj_h, s)
            for t in range(s + 1, g.n):
                if t in dead:
                    continue
                if src_set is not None and s not in src_set and t not in src_set:
                    continue
                if dg[t] == UNREACHABLE:
                    skipped += 1
                    continue
                checked += 1
                excess = UNREACHABLE if dh[t] == UNREACHABLE else dh[t] - claim.alpha * dg[t]
                if best is None or excess > best:
                    best, witness = excess, (s, t, F)
    srcs = None if src_set is None else tuple(sorted(src_set))
    return StretchReport(claim, mode, best, witness, checked, skipped, sets, srcs)
