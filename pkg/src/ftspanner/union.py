"""Union of an additive spanner and a multiplicative f-EFT spanner.

``H = A + M`` with ``A`` a (1, beta) spanner and ``M`` an (alpha, 0) f-EFT
spanner tolerates ``f`` edge faults with additive stretch
``2f(beta + alpha - 1) + beta``, tightened to ``2*beta + alpha - 1`` for a
single fault.  :func:`decompose_blocks` rebuilds the block structure behind
that bound for one (s, t, F) so its invariants can be inspected.

Ordering along the replacement path is by position: "first", "last" and
"u before v" all refer to indices on the canonical ``pi_{G-F}(s, t)``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graph import EDGE, UNREACHABLE, FaultSet, Graph, GraphError, bfs_tree, canonical_shortest_path
from .spanners import NONE, Claim, Spanner, same_host

Directed = tuple[int, int]


def _check_params(alpha: int, beta: int, f: int) -> None:
    if alpha < 1 or beta < 0 or f < 1:
        raise ValueError(f"need alpha >= 1, beta >= 0, f >= 1; got ({alpha}, {beta}, {f})")


def union_beta(alpha: int, beta: int, f: int) -> int:
    _check_params(alpha, beta, f)
    if f == 1:
        return 2 * beta + alpha - 1
    return 2 * f * (beta + alpha - 1) + beta


def stretch_claim(alpha: int, beta: int, f: int) -> tuple[int, int]:
    """(improved bound, earlier bound ``2f(2*beta + alpha - 1) + beta``)."""
    _check_params(alpha, beta, f)
    return union_beta(alpha, beta, f), 2 * f * (2 * beta + alpha - 1) + beta


def union_spanner(A: Spanner, M: Spanner) -> Spanner:
    same_host(A, M)
    if A.claim.alpha != 1 or A.claim.kind != NONE:
        raise ValueError(f"A must be a plain additive spanner, got {A.claim}")
    if M.claim.beta != 0 or M.claim.kind != EDGE:
        raise ValueError(f"M must be a multiplicative edge-fault-tolerant spanner, got {M.claim}")
    alpha, beta, f = M.claim.alpha, A.claim.beta, M.claim.f
    return Spanner(
        A.host,
        tuple(set(A.edges) | set(M.edges)),
        Claim(1, union_beta(alpha, beta, f), f, EDGE),
        f"union({A.provenance} + {M.provenance})",
    )


class ClassOracle:
    """``C(u, v)``: first failed edge, directed, on the canonical ``pi_A(u, v)``; None is the empty class."""

    def __init__(self, A: Spanner, F: FaultSet):
        if F.kind != EDGE:
            raise ValueError("classes are defined for edge faults only")
        self.g = A.host
        self.A = A
        self.failed = set(F.edge_pairs(self.g))
        self._trees: dict[int, np.ndarray] = {}

    def _parent(self, u: int) -> np.ndarray:
        if u not in self._trees:
            self._trees[u] = bfs_tree(self.g, u, edge_mask=self.A.mask)[1]
        return self._trees[u]

    def __call__(self, u: int, v: int) -> Directed | None:
        if u == v:
            return None
        parent = self._parent(u)
        if parent[v] < 0:
            raise GraphError(f"{u} and {v} are disconnected in A")
        path = [v]
        while path[-1] != u:
            path.append(int(parent[path[-1]]))
        path.reverse()
        for a, b in zip(path, path[1:]):
            if (min(a, b), max(a, b)) in self.failed:
                return (a, b)
        return None


@dataclass
class Block:
    """One block of the replacement path; indices are positions on it."""

    x1: int
    y_bot: int
    x2: int | None = None
    y1: int | None = None
    y2: int | None = None
    defining_class: Directed | None = None
    block_class: Directed | None = None

    @property
    def final(self) -> bool:
        return self.x2 is None


@dataclass
class BlockDecomposition:
    s: int
    t: int
    faults: FaultSet
    path: list[int]
    blocks: list[Block] = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.blocks) - 1

    def vertex(self, pos: int | None) -> int | None:
        return None if pos is None else self.path[pos]

    def as_dict(self) -> dict:
        def cls(c):
            return None if c is None else list(c)

        blocks = []
        for b in self.blocks:
            entry = {"x1": self.vertex(b.x1), "y_bot": self.vertex(b.y_bot), "final": b.final}
            if not b.final:
                entry.update(
                    x2=self.vertex(b.x2),
                    y1=self.vertex(b.y1),
                    y2=self.vertex(b.y2),
                    defining_class=cls(b.defining_class),
                    block_class=cls(b.block_class),
                )
            blocks.append(entry)
        return {
            "s": self.s,
            "t": self.t,
            "faults": list(self.faults.items),
            "path": self.path,
            "k": self.k,
            "blocks": blocks,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def decompose_blocks(A: Spanner, F: FaultSet, s: int, t: int, classes: ClassOracle | None = None) -> BlockDecomposition:
    """Split ``pi_{G-F}(s, t)`` into blocks ``B_1 .. B_k`` followed by the fault-free tail ``B*``.

    From the current start ``x1``: ``x2`` is the first later vertex with a
    non-empty class from ``x1``; ``(y1, y2)`` is the last pair (``y1`` before
    ``y2``) on the remaining path sharing that class; the block ends at the
    successor of ``y1``.  Blocks are cut while ``C(x1, t)`` is non-empty.
    """
    g = A.host
    if F.kind != EDGE:
        raise ValueError("block decomposition needs edge faults")
    F.validate(g)
    path = canonical_shortest_path(g, s, t, F or None)
    C = classes or ClassOracle(A, F)
    dec = BlockDecomposition(s, t, F, path)
    last = len(path) - 1
    x1 = 0
    while C(path[x1], t) is not None:
        x2 = next(j for j in range(x1 + 1, last + 1) if C(path[x1], path[j]) is not None)
        fc = C(path[x1], path[x2])
        y1, y2 = max(
            (i, j) for i in range(x1, last) for j in range(i + 1, last + 1) if C(path[i], path[j]) == fc
        )
        y_bot = y1 + 1
        dec.blocks.append(Block(x1, y_bot, x2, y1, y2, fc, C(path[x1], path[y_bot])))
        x1 = y_bot
    dec.blocks.append(Block(x1, last))
    return dec


@dataclass(frozen=True)
class InvariantReport:
    ok: bool
    failures: tuple[str, ...]
    notes: tuple[str, ...] = ()


def check_decomposition(
    dec: BlockDecomposition,
    A: Spanner,
    H: Spanner,
    alpha: int,
    beta: int,
    f: int,
    classes: ClassOracle | None = None,
) -> InvariantReport:
    """Assert the structural invariants and the per-block detour bound of ``H = A + M``.

    Checked: ``k <= 2f``; blocks chain (each ends where the next starts, the
    first starts at ``s``, the tail ends at ``t``); the tail has empty class
    to ``t``; a block's defining class never recurs between vertices at or
    after its end; ``d_{H-F}(x1, y_bot) <= d_{G-F}(x1, y_bot) + 2*beta + alpha - 1``.
    Blocks whose class ``C(x1, y_bot)`` reappears later are logged as notes.
    """
    g = A.host
    C = classes or ClassOracle(A, dec.faults)
    path = dec.path
    last = len(path) - 1
    fails: list[str] = []
    notes: list[str] = []
    if dec.k > 2 * f:
        fails.append(f"k={dec.k} > 2f={2 * f}")
    if dec.blocks[0].x1 != 0 or dec.blocks[-1].y_bot != last:
        fails.append("blocks do not cover the path end to end")
    for a, b in zip(dec.blocks, dec.blocks[1:]):
        if a.y_bot != b.x1:
            fails.append(f"blocks not chained at positions {a.y_bot} / {b.x1}")
    tail = dec.blocks[-1]
    if not tail.final or C(path[tail.x1], dec.t) is not None:
        fails.append("tail block has a non-empty class")
    for idx, b in enumerate(dec.blocks[:-1]):
        for i in range(b.y_bot, last + 1):
            for j in range(i, last + 1):
                cij = C(path[i], path[j])
                if cij is not None and cij == b.defining_class:
                    fails.append(f"class {b.defining_class} of block {idx} recurs at ({path[i]}, {path[j]})")
                elif cij is not None and cij == b.block_class:
                    notes.append(f"C(x1, y_bot)={b.block_class} of block {idx} recurs at ({path[i]}, {path[j]})")
    F = dec.faults or None
    bound = 2 * beta + alpha - 1
    for b in dec.blocks:
        u, v = path[b.x1], path[b.y_bot]
        dg = canonical_distance(g, u, v, F)
        dh = canonical_distance(g, u, v, F, H.mask)
        if dh > dg + bound:
            fails.append(f"detour {u}->{v}: d_H-F={dh} > d_G-F={dg} + {bound}")
    return InvariantReport(not fails, tuple(fails), tuple(notes))


def canonical_distance(g: Graph, u: int, v: int, F: FaultSet | None, mask=None) -> int:
    d = bfs_tree(g, u, F, mask)[0][v]
    return int(d) if d < UNREACHABLE else UNREACHABLE

