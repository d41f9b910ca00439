"""Seeded graph generators.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``; the
algorithm name and numpy version are recorded by :func:`prng_metadata` so a
reimplementation can reproduce a graph from its seed.
"""

from __future__ import annotations

import numpy as np

from .graph import Graph, GraphError

PRNG = "numpy.random.PCG64"
KINDS = ("gnp", "random_regular", "grid", "path", "cycle", "complete", "petersen")


def prng_metadata() -> dict:
    return {"prng": PRNG, "numpy": np.__version__}


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def path(n: int) -> Graph:
    return Graph(n, ((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return Graph(n, ((i, (i + 1) % n) for i in range(n)))


def complete(n: int) -> Graph:
    return Graph(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def star(leaves: int) -> Graph:
    return Graph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def grid(rows: int, cols: int) -> Graph:
    if rows < 1 or cols < 1:
        raise GraphError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph(rows * cols, edges)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def largest_component(g: Graph) -> Graph:
    """Largest connected component, relabelled in increasing original id order.

    Ties between equally large components go to the one with the smallest
    vertex id.
    """
    comp = [-1] * g.n
    best: list[int] = []
    for s in range(g.n):
        if comp[s] >= 0:
            continue
        members = [s]
        comp[s] = s
        for u in members:
            for w in g.adj[u]:
                if comp[w] < 0:
                    comp[w] = s
                    members.append(w)
        if len(members) > len(best):
            best = members
    keep = sorted(best)
    relabel = {v: i for i, v in enumerate(keep)}
    return Graph(len(keep), ((relabel[u], relabel[v]) for u, v in g.edges if u in relabel and v in relabel))


def gnp(n: int, prob: float, seed: int, connected: bool = False) -> Graph:
    """Erdos-Renyi G(n, p): one uniform draw per pair (i < j) in lexicographic order."""
    if n < 1 or not 0.0 <= prob <= 1.0:
        raise GraphError(f"invalid gnp parameters n={n}, prob={prob}")
    iu, ju = np.triu_indices(n, k=1)
    keep = _rng(seed).random(len(iu)) < prob
    g = Graph(n, zip(iu[keep].tolist(), ju[keep].tolist()))
    return largest_component(g) if connected else g


def random_regular(n: int, d: int, seed: int, max_tries: int = 100) -> Graph:
    """Random d-regular simple graph by incremental stub pairing (Steger-Wormald).

    Stubs are matched one pair at a time, drawing uniformly among pairs that
    keep the graph simple; a dead end restarts the attempt.
    """
    if n < 1 or d < 0 or d >= n or (n * d) % 2:
        raise GraphError(f"no {d}-regular graph on {n} vertices")
    rng = _rng(seed)
    for _ in range(max_tries):
        edges: set[tuple[int, int]] = set()
        stubs = list(np.repeat(np.arange(n), d).tolist())
        while stubs:
            for _ in range(100):
                i, j = rng.choice(len(stubs), size=2, replace=False).tolist()
                u, v = stubs[i], stubs[j]
                if u != v and (min(u, v), max(u, v)) not in edges:
                    break
            else:
                break
            edges.add((min(u, v), max(u, v)))
            for k in sorted((i, j), reverse=True):
                stubs[k] = stubs[-1]
                stubs.pop()
        if not stubs:
            return Graph(n, edges)
    raise GraphError(f"stub pairing failed after {max_tries} tries")


def generate(kind: str, seed: int = 0, **params) -> Graph:
    """Dispatch by generator name; ``params`` are the generator's keyword arguments."""
    if kind == "gnp":
        return gnp(params["n"], params["prob"], seed, params.get("connected", False))
    if kind == "random_regular":
        return random_regular(params["n"], params["d"], seed)
    if kind == "grid":
        return grid(params["rows"], params["cols"])
    if kind == "path":
        return path(params["n"])
    if kind == "cycle":
        return cycle(params["n"])
    if kind == "complete":
        return complete(params["n"])
    if kind == "petersen":
        return petersen()
    raise GraphError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
