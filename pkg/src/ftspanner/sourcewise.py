"""All-pairs fault-tolerant additive spanners from sourcewise ones.

Vertices start white with counter ``f + 1``.  While some non-source vertex
has at least ``p`` white neighbours, the lowest-id such vertex becomes a red
source; each of its white neighbours loses one counter unit, gets the edge to
the source, and turns black when the counter reaches zero.  The spanner is
the source edges, every edge with a white endpoint, and a sourcewise
structure over the red vertices.  A black vertex keeps a red neighbour after
any ``f`` faults, which costs at most +2 over the sourcewise stretch.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .ftblocks import AUGMENTED, PRESERVER, SourcewiseFactory
from .graph import EDGE, FAULT_KINDS, VERTEX, Graph
from .spanners import Claim, Spanner, ceil_root

WHITE, BLACK, RED = "white", "black", "red"


@dataclass(frozen=True)
class Alg1Params:
    p: int
    f: int = 1
    fault_kind: str = EDGE

    def validate(self, n: int) -> None:
        if not 1 <= self.p <= max(n, 1):
            raise ValueError(f"degree threshold p={self.p} outside [1, {n}]")
        if self.f < 1:
            raise ValueError(f"fault budget must be positive, got {self.f}")
        if self.fault_kind not in FAULT_KINDS:
            raise ValueError(f"unknown fault kind {self.fault_kind!r}")


@dataclass
class ColorState:
    color: list[str]
    counter: list[int]

    @classmethod
    def initial(cls, n: int, f: int) -> "ColorState":
        return cls([WHITE] * n, [f + 1] * n)

    def check(self, sources: set[int], f: int, previous: "ColorState | None" = None) -> None:
        """Assert the colouring invariants (and monotonicity against ``previous``)."""
        for v, (c, k) in enumerate(zip(self.color, self.counter)):
            assert 0 <= k <= f + 1, f"counter of {v} out of range: {k}"
            assert c != BLACK or k == 0, f"black vertex {v} has counter {k}"
            assert (c == RED) == (v in sources), f"vertex {v} red/source mismatch"
            if previous is not None:
                assert k <= previous.counter[v], f"counter of {v} increased"
                assert previous.color[v] == WHITE or c != WHITE, f"vertex {v} turned white again"

    def snapshot(self) -> "ColorState":
        return ColorState(list(self.color), list(self.counter))


@dataclass
class SelectionResult:
    sources: list[int]
    e1: list[tuple[int, int]]
    state: ColorState
    counter_drops: list[int] = field(default_factory=list)


def select_sources(g: Graph, params: Alg1Params, check: bool = False) -> SelectionResult:
    """Run the colouring loop; ``check=True`` asserts every invariant per iteration."""
    params.validate(g.n)
    n, p, f = g.n, params.p, params.f
    state = ColorState.initial(n, f)
    white_deg = [g.degree(v) for v in range(n)]
    in_s = [False] * n
    sources: list[int] = []
    e1: list[tuple[int, int]] = []
    drops: list[int] = []

    def leave_white(v: int) -> None:
        for w in g.adj[v]:
            white_deg[w] -= 1

    while True:
        s = next((v for v in range(n) if not in_s[v] and white_deg[v] >= p), None)
        if s is None:
            break
        prev = state.snapshot() if check else None
        before = sum(state.counter)
        sources.append(s)
        in_s[s] = True
        if state.color[s] == WHITE:
            leave_white(s)
        state.color[s] = RED
        for u in [w for w in g.adj[s] if state.color[w] == WHITE]:
            state.counter[u] -= 1
            e1.append((s, u) if s < u else (u, s))
            if state.counter[u] == 0:
                state.color[u] = BLACK
                leave_white(u)
        drop = before - sum(state.counter)
        drops.append(drop)
        if check:
            assert drop >= p, f"counter sum dropped by {drop} < p={p}"
            state.check(set(sources), f, prev)
    result = SelectionResult(sources, e1, state, drops)
    if check:
        check_selection(g, params, result)
    return result


def check_selection(g: Graph, params: Alg1Params, result: SelectionResult) -> None:
    """Post-conditions of the loop: thresholds, size accounting, black-vertex cover."""
    n, p, f = g.n, params.p, params.f
    s_set = set(result.sources)
    for v in range(n):
        if v not in s_set:
            wd = sum(1 for w in g.adj[v] if result.state.color[w] == WHITE)
            assert wd < p, f"vertex {v} still has {wd} >= p white neighbours"
    assert len(result.sources) <= (f + 1) * n // p, "too many sources"
    assert len(result.e1) <= (f + 1) * n, "too many source edges"
    assert all(d >= p for d in result.counter_drops), "counter sum dropped by less than p"
    e1 = set(result.e1)
    for v in range(n):
        if result.state.color[v] == BLACK:
            red = sum(1 for w in g.adj[v] if w in s_set and ((v, w) if v < w else (w, v)) in e1)
            assert red >= f + 1, f"black vertex {v} has only {red} red neighbours in H"


def recommended_p(n: int, factory_kind: str, fault_kind: str = EDGE) -> int:
    """Degree threshold balancing the three size terms for each factory."""
    if n < 1:
        raise ValueError("n must be positive")
    if factory_kind == PRESERVER:
        return min(n, ceil_root(n * n, 3))
    if factory_kind == AUGMENTED:
        if fault_kind == VERTEX:
            return min(n, max(1, math.ceil(math.sqrt(n * math.log(n)))))
        return min(n, ceil_root(n, 2))
    raise ValueError(f"unknown factory kind {factory_kind!r}")


def build_alg1_spanner(g: Graph, params: Alg1Params, factory: SourcewiseFactory, check: bool = True) -> Spanner:
    """Source edges + white edges + sourcewise structure; claim (1, beta + 2, f, kind)."""
    if factory.max_faults < params.f:
        raise ValueError(f"factory handles {factory.max_faults} fault(s), need {params.f}")
    if factory.fault_kind != params.fault_kind:
        raise ValueError("factory and parameters disagree on the fault kind")
    sel = select_sources(g, params, check=check)
    chosen = {g.edge_id(u, v) for u, v in sel.e1}
    e1_count = len(chosen)
    white = {eid for eid, (u, v) in enumerate(g.edges) if sel.state.color[u] == WHITE or sel.state.color[v] == WHITE}
    chosen |= white
    a_s = factory(g, sel.sources)
    if a_s.host != g:
        raise ValueError("sourcewise structure was built on a different graph")
    chosen.update(a_s.edges)
    info = {
        "sources": len(sel.sources),
        "e1": e1_count,
        "white_edges": len(white),
        "gamma": a_s.size,
        "p": params.p,
        "black": sum(1 for c in sel.state.color if c == BLACK),
    }
    return Spanner(
        g,
        tuple(chosen),
        Claim(1, factory.beta + 2, params.f, params.fault_kind),
        f"alg1({factory.kind}, p={params.p}, f={params.f}, kind={params.fault_kind})",
        info=info,
    )


def instrumentation_json(sp: Spanner) -> str:
    keys = ("sources", "e1", "white_edges", "gamma", "p", "black")
    return json.dumps({k: sp.info[k] for k in keys if k in sp.info}, sort_keys=True)
