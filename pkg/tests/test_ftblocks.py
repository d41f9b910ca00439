import pytest

from ftspanner.ftblocks import (
    AUGMENTED,
    PRESERVER,
    SourcewiseFactory,
    eft_multiplicative,
    sourcewise_ft_augment,
    sourcewise_ft_preserver,
)
from ftspanner.generators import cycle, gnp, path
from ftspanner.graph import EDGE, VERTEX, Graph, GraphError
from ftspanner.spanners import Claim, Spanner, acim_2additive, greedy_edges
from ftspanner.verify import verify_claim, verify_sourcewise

from .conftest import suite_graph

TREE = Graph(8, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6), (5, 7)])


def test_eft_on_tree_is_the_tree():
    sp = eft_multiplicative(TREE, 2, 2)
    assert sp.size == TREE.m and sp.info["round_sizes"] == [TREE.m, 0]
    assert verify_claim(TREE, sp).passed


def test_eft_on_c4_keeps_everything_and_is_exact():
    g = cycle(4)
    sp = eft_multiplicative(g, 1, 1)
    assert sp.size == 4 and sp.claim == Claim(1, 0, 1, EDGE)
    assert verify_claim(g, sp).max_additive == 0


def test_eft_rejects_bad_parameters():
    with pytest.raises(ValueError):
        eft_multiplicative(path(3), 0, 1)
    with pytest.raises(ValueError):
        eft_multiplicative(path(3), 2, 0)


@pytest.mark.parametrize("seed", range(3))
def test_eft_gate_multiplicative_five(seed):
    g = suite_graph(60, 0.2, seed)
    sp = eft_multiplicative(g, 3, 1)
    rep = verify_claim(g, sp)
    assert rep.passed and rep.max_additive <= 0


def test_eft_rounds_are_disjoint_and_bounded():
    g = suite_graph(50, 0.3, 1)
    sp = eft_multiplicative(g, 2, 2)
    first = len(greedy_edges(g, 2))
    assert sum(sp.info["round_sizes"]) == sp.size
    assert sp.size <= 3 * first


def test_preserver_on_c4_keeps_all_edges():
    g = cycle(4)
    sp = sourcewise_ft_preserver(g, [0])
    assert sp.size == 4 and sp.sources == (0,)


def test_preserver_on_tree_is_the_tree():
    for kind in (EDGE, VERTEX):
        assert sourcewise_ft_preserver(TREE, [0, 6], kind).size == TREE.m


@pytest.mark.parametrize("kind", [EDGE, VERTEX])
@pytest.mark.parametrize("seed", range(2))
def test_preserver_gate_exact_from_sources(kind, seed):
    g = suite_graph(60, 0.2, seed)
    srcs = [0, 11, 23, 42]
    sp = sourcewise_ft_preserver(g, srcs, kind)
    rep = verify_sourcewise(g, sp, srcs)
    assert rep.max_additive == 0 and rep.sources == tuple(srcs)
    assert sp.size < g.m


def test_preserver_rejects_unknown_source():
    with pytest.raises(GraphError):
        sourcewise_ft_preserver(path(3), [5])


def test_augment_of_whole_graph_adds_nothing():
    g = suite_graph(30, 0.2, 0)
    A = Spanner(g, range(g.m), Claim(1, 0), "whole graph")
    out = sourcewise_ft_augment(A, [0, 5])
    assert out.edges == A.edges and out.info["added_per_source"] == [0, 0]


def test_augment_acim_on_c6():
    g = cycle(6)
    A, _ = acim_2additive(g)
    out = sourcewise_ft_augment(A, [0])
    assert out.claim == Claim(1, 2, 1, EDGE)
    assert verify_sourcewise(g, out, [0]).passed


def test_augment_needs_a_valid_base():
    g = cycle(8)
    bad = Spanner(g, [e for e in range(g.m) if e != 0], Claim(1, 2), "cut")
    with pytest.raises(GraphError):
        sourcewise_ft_augment(bad, [0])


@pytest.mark.parametrize("seed", range(4))
def test_augment_suite_gate_and_per_source_cost(seed):
    g = suite_graph(100, 0.1, seed)
    A, _ = acim_2additive(g)
    srcs = [0, 17, 50, 99 if g.n > 99 else g.n - 1]
    for kind in (EDGE, VERTEX):
        out = sourcewise_ft_augment(A, srcs, kind)
        assert set(A.edges) <= set(out.edges)
        assert verify_sourcewise(g, out, srcs).passed
        assert max(out.info["added_per_source"]) <= 8 * g.n


def test_factory_records_gamma_samples():
    g = suite_graph(40, 0.2, 2)
    fac = SourcewiseFactory(PRESERVER)
    sp = fac(g, [1, 2])
    aug = SourcewiseFactory(AUGMENTED, VERTEX)
    sp2 = aug(g, [3])
    assert fac.size_gamma == [(g.n, 2, sp.size)] and aug.size_gamma == [(g.n, 1, sp2.size)]
    assert fac.beta == 0 and aug.beta == 2 and fac.max_faults == 1
    with pytest.raises(ValueError):
        SourcewiseFactory("other")
