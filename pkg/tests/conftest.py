from __future__ import annotations

from collections import deque
from functools import lru_cache

import pytest
from hypothesis import settings

from ftspanner.generators import gnp

settings.register_profile("ci", max_examples=40, deadline=None)
settings.load_profile("ci")


def naive_bfs(n, edges, src, dead_edges=(), dead_vertices=()):
    """Plain adjacency-list BFS used as an independent reference; None means unreachable."""
    dead_edges = {tuple(sorted(e)) for e in dead_edges}
    adj = [[] for _ in range(n)]
    for u, v in edges:
        if (min(u, v), max(u, v)) in dead_edges or u in dead_vertices or v in dead_vertices:
            continue
        adj[u].append(v)
        adj[v].append(u)
    dist = [None] * n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for w in adj[u]:
            if dist[w] is None:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


@lru_cache(maxsize=None)
def suite_graph(n: int, prob: float, seed: int):
    return gnp(n, prob, seed, connected=True)


@pytest.fixture
def small_random_graphs():
    return [suite_graph(30, 0.2, seed) for seed in range(4)]


ACCEPTANCE: dict[int, str] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = f"criterion {criterion:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
