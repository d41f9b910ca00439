import random

import pytest

from ftspanner.cluster import alg2_beta, augment_clusters, build_alg2_spanner, find_block_split, uses_edge
from ftspanner.ftblocks import eft_multiplicative
from ftspanner.generators import complete, cycle
from ftspanner.graph import EDGE, VERTEX, FaultSet, Graph, all_pairs_distances, canonical_shortest_path
from ftspanner.spanners import Claim, Clustering, Spanner, acim_2additive, bkmp_6additive, threshold_clustering
from ftspanner.verify import verify_claim

from .conftest import suite_graph


def whole(g, claim=Claim(1, 0)):
    return Spanner(g, range(g.m), claim, "whole graph")


def test_triangle_intra_edges():
    g = complete(3)
    aug = augment_clusters(g, Clustering.from_clusters(3, [(0, [0, 1, 2])]))
    assert aug.intra[1] == (1, 2) and aug.intra[2] == (1, 2)
    # the center's only candidates are its star edges; the first one is taken
    assert aug.intra[0] == (0, 1)
    assert aug.inter == {}


def test_single_crossing_edge():
    g = Graph(4, [(0, 1), (1, 2), (2, 3)])
    aug = augment_clusters(g, Clustering.from_clusters(4, [(0, [0, 1]), (3, [2, 3])]))
    assert aug.inter == {(0, 1): ((1, 2),)}


def test_vertex_disjoint_pair_preferred():
    # clusters {0,1,2} (center 0) and {3,4,5} (center 3); crossings (1,4), (1,5), (2,4)
    g = Graph(6, [(0, 1), (0, 2), (3, 4), (3, 5), (1, 4), (1, 5), (2, 4)])
    cl = Clustering.from_clusters(6, [(0, [0, 1, 2]), (3, [3, 4, 5])])
    assert augment_clusters(g, cl).inter == {(0, 1): ((1, 5), (2, 4))}


def test_two_edges_sharing_a_vertex_when_no_disjoint_pair():
    g = Graph(5, [(0, 1), (2, 3), (2, 4), (1, 3), (1, 4)])
    cl = Clustering.from_clusters(5, [(0, [0, 1]), (2, [2, 3, 4])])
    assert augment_clusters(g, cl).inter == {(0, 1): ((1, 3), (1, 4))}


@pytest.mark.parametrize("seed", range(5))
def test_augmentation_counts_and_intra_rule(seed):
    g = suite_graph(60, 0.2, seed)
    cl = threshold_clustering(g, 4)
    aug = augment_clusters(g, cl)
    assert len(aug.edge_set()) <= g.n + 2 * cl.count**2
    for chosen in aug.inter.values():
        assert 1 <= len(chosen) <= 2
    for v in range(g.n):
        if not cl.is_clustered(v):
            assert v not in aug.intra
            continue
        mates = [w for w in g.adj[v] if w != cl.center(v) and cl.cluster_of[w] == cl.cluster_of[v]]
        assert (v in aug.intra) == bool(mates)
        if mates:
            assert aug.intra[v] == tuple(sorted((v, mates[0])))


def test_stretch_formula():
    assert alg2_beta(5, 6) == 14
    assert alg2_beta(5, 4) == 10
    assert alg2_beta(3, 2) == 6


def test_whole_graph_inputs_give_whole_graph():
    g = suite_graph(30, 0.2, 0)
    H = build_alg2_spanner(g, whole(g, Claim(1, 2)), Clustering.empty(g.n), whole(g, Claim(1, 0, 1, EDGE)))
    assert H.size == g.m and H.claim == Claim(1, 6, 1, EDGE)
    assert verify_claim(g, H).max_additive == 0


def test_refuses_uncertified_base():
    g = cycle(8)
    A = Spanner(g, [e for e in range(g.m) if g.edges[e] != (1, 2)], Claim(1, 2), "cut")
    cl = Clustering.from_clusters(8, [(0, [7, 0, 1]), (3, [2, 3, 4]), (5, [5, 6])])
    with pytest.raises(ValueError, match="clustering-based"):
        build_alg2_spanner(g, A, cl, eft_multiplicative(g, 2, 1))


def test_refuses_vertex_fault_multiplicative_spanner():
    g = suite_graph(30, 0.2, 0)
    A, cl = acim_2additive(g)
    with pytest.raises(ValueError):
        build_alg2_spanner(g, A, cl, whole(g, Claim(1, 0, 1, VERTEX)))


@pytest.mark.parametrize("seed", range(3))
def test_alg2_on_bkmp6_passes(seed):
    g = suite_graph(60, 0.15, seed)
    A, cl = bkmp_6additive(g)
    H = build_alg2_spanner(g, A, cl, eft_multiplicative(g, 3, 1))
    assert H.claim.beta == 14
    assert set(A.edges) <= set(H.edges)
    assert verify_claim(g, H).passed


def test_alg2_on_acim2_passes():
    g = suite_graph(60, 0.2, 1)
    A, cl = acim_2additive(g)
    H = build_alg2_spanner(g, A, cl, eft_multiplicative(g, 2, 1))
    assert H.claim.beta == 6 and verify_claim(g, H).passed


def test_block_split_examples():
    c6 = cycle(6)
    assert find_block_split(whole(c6), (1, 2), 0, 2) == (5, 4)
    # every vertex of pi_{G-e}(0, 1) = 0-3-2-1 except 2 has a shortest path to 1 through (0, 1)
    c4 = cycle(4)
    assert find_block_split(whole(c4), (0, 1), 0, 1) == (3, 2)
    tri = Graph(4, [(0, 1), (0, 3), (1, 3), (2, 3)])
    assert find_block_split(whole(tri), (0, 1), 0, 1) == (0, 3)


def test_block_split_precondition():
    c6 = cycle(6)
    with pytest.raises(ValueError):
        find_block_split(whole(c6), (3, 4), 0, 2)
    tree = Graph(3, [(0, 1), (1, 2)])
    with pytest.raises(ValueError):
        find_block_split(whole(tree), (0, 1), 0, 2)


def block_split_holds(A, e, s, t):
    g = A.host
    z, zp = find_block_split(A, e, s, t)
    path = canonical_shortest_path(g, s, t, FaultSet.of_edges(g, [e]))
    i = path.index(z)
    da = all_pairs_distances(A.graph).dist
    x, y = e
    return path[i + 1] == zp and not uses_edge(da, s, z, x, y) and not uses_edge(da, zp, t, x, y)


def test_block_split_random_instances():
    rng = random.Random(7)
    done = 0
    while done < 60:
        g = suite_graph(25, 0.2, rng.randrange(40))
        A, _ = acim_2additive(g)
        e = A.host.edges[rng.choice(A.edges)]
        s, t = rng.sample(range(g.n), 2)
        da = all_pairs_distances(A.graph).dist
        dae = all_pairs_distances(A.graph, FaultSet.of_edges(g, [e]).project(g, A.graph)).dist
        if not da[s, t] < dae[s, t] < 10**9:
            continue
        assert block_split_holds(A, e, s, t)
        done += 1
