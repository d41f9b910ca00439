"""End-to-end acceptance gates; each test records one PASS/FAIL line for the terminal summary."""

import math
import random
import time
import warnings

import pytest

from ftspanner.cluster import build_alg2_spanner, find_block_split, uses_edge
from ftspanner.experiment import fit_exponent, Row, build_pipeline
from ftspanner.ftblocks import AUGMENTED, PRESERVER, SourcewiseFactory, eft_multiplicative
from ftspanner.generators import gnp
from ftspanner.graph import EDGE, UNREACHABLE, VERTEX, FaultSet, all_pairs_distances, canonical_shortest_path
from ftspanner.sourcewise import Alg1Params, build_alg1_spanner, check_selection, recommended_p, select_sources
from ftspanner.spanners import Claim, Spanner, acim_2additive, bkmp_6additive, check_clustering_property, greedy_multiplicative
from ftspanner.union import ClassOracle, check_decomposition, decompose_blocks, union_spanner
from ftspanner.verify import naive_verify, sampled, verify_claim, verify_sourcewise

from .conftest import record, suite_graph

SUITE_80 = [(80, 0.15, seed) for seed in range(20)]
SUITE_60 = [(60, 0.15, seed) for seed in range(20)]
SUITE_40 = [(40, 0.12, seed) for seed in range(10)]

def alg1(g, kind, fault_kind):
    p = recommended_p(g.n, kind, fault_kind)
    return build_alg1_spanner(g, Alg1Params(p, 1, fault_kind), SourcewiseFactory(kind, fault_kind), check=True)


def gate(criterion, results, bound, elapsed, limit, what):
    worst = max(r.max_additive for r in results)
    ok = all(r.passed for r in results) and worst <= bound and elapsed < limit
    record(criterion, ok, f"{what}: worst additive {worst} <= {bound} over {len(results)} runs, {elapsed:.1f}s (< {limit}s)")
    assert all(r.passed for r in results)
    assert worst <= bound
    assert elapsed < limit


def test_criterion_01_alg1_preserver():
    start = time.perf_counter()
    reports = []
    for params in SUITE_80:
        g = suite_graph(*params)
        for fk in (EDGE, VERTEX):
            sp = alg1(g, PRESERVER, fk)
            assert sp.claim == Claim(1, 2, 1, fk)
            reports.append(verify_claim(g, sp))
    gate(1, reports, 2, time.perf_counter() - start, 60, "alg1-preserver EFT+VFT on G(80,0.15) x20")


def test_criterion_02_alg1_augmented():
    start = time.perf_counter()
    reports = []
    for params in SUITE_80:
        g = suite_graph(*params)
        for fk in (EDGE, VERTEX):
            sp = alg1(g, AUGMENTED, fk)
            expected_p = math.ceil(math.sqrt(g.n)) if fk == EDGE else math.ceil(math.sqrt(g.n * math.log(g.n)))
            assert sp.info["p"] == expected_p and sp.claim == Claim(1, 4, 1, fk)
            reports.append(verify_claim(g, sp))
    gate(2, reports, 4, time.perf_counter() - start, 120, "alg1-2additive EFT (p=ceil sqrt n) + VFT (p=ceil sqrt(n ln n))")


def test_criterion_03_alg2_bkmp6():
    start = time.perf_counter()
    reports = []
    for params in SUITE_60:
        g = suite_graph(*params)
        A, cl = bkmp_6additive(g)
        M = eft_multiplicative(g, 3, 1)
        assert (A.claim.beta, M.claim.alpha) == (6, 5)
        H = build_alg2_spanner(g, A, cl, M)
        assert H.claim == Claim(1, 14, 1, EDGE)
        reports.append(verify_claim(g, H))
    gate(3, reports, 14, time.perf_counter() - start, 60, "alg2 (bkmp6 + eft k=3) on G(60,0.15) x20")


def test_criterion_04_union_single_fault():
    start = time.perf_counter()
    reports = []
    for params in SUITE_80:
        g = suite_graph(*params)
        A, _ = acim_2additive(g)
        H = union_spanner(A, eft_multiplicative(g, 2, 1))
        assert H.claim == Claim(1, 6, 1, EDGE)
        reports.append(verify_claim(g, H))
    gate(4, reports, 6, time.perf_counter() - start, 60, "union acim2 + eft(k=2,f=1) on G(80,0.15) x20")


@pytest.mark.slow
def test_criterion_05_union_two_faults():
    start = time.perf_counter()
    reports = []
    for params in SUITE_40:
        g = suite_graph(*params)
        A, _ = acim_2additive(g)
        H = union_spanner(A, eft_multiplicative(g, 2, 2))
        assert H.claim == Claim(1, 18, 2, EDGE)
        rep = verify_claim(g, H)
        assert rep.fault_sets_checked == 1 + g.m + g.m * (g.m - 1) // 2
        reports.append(rep)
    gate(5, reports, 18, time.perf_counter() - start, 600, "union acim2 + eft(k=2,f=2), all fault pairs, G(40,0.12) x10")


def test_criterion_06_selection_accounting():
    configs = [(params, kind, fk) for params in SUITE_80 for kind in (PRESERVER, AUGMENTED) for fk in (EDGE, VERTEX)]
    checked = 0
    for params, kind, fk in configs:
        g = suite_graph(*params)
        p = recommended_p(g.n, kind, fk)
        sel = select_sources(g, Alg1Params(p, 1, fk), check=True)
        check_selection(g, Alg1Params(p, 1, fk), sel)
        assert len(sel.sources) <= (1 + 1) * g.n // p
        assert len(sel.e1) <= (1 + 1) * g.n
        assert all(drop >= p for drop in sel.counter_drops)
        checked += 1
    # the generic loop also at f = 2, 3 on the same graphs
    for params in SUITE_80[:5]:
        g = suite_graph(*params)
        for f in (2, 3):
            p = recommended_p(g.n, AUGMENTED)
            check_selection(g, Alg1Params(p, f), select_sources(g, Alg1Params(p, f), check=True))
            checked += 1
    record(6, True, f"|S| <= (f+1)n/p, |E1| <= (f+1)n, per-iteration drop >= p on {checked} selection runs")


def _spanner_pool():
    pool = []
    for seed in range(12):
        g = suite_graph(30, 0.15 + 0.01 * (seed % 4), 100 + seed)
        pool.append(acim_2additive(g)[0])
        pool.append(bkmp_6additive(g)[0])
        pool.append(greedy_multiplicative(g, 2))
    return pool


def test_criterion_07_block_split():
    rng = random.Random(2024)
    pool = _spanner_pool()
    dist_cache = {}
    done = 0
    while done < 1000:
        A = rng.choice(pool)
        g = A.host
        s, t = rng.sample(range(g.n), 2)
        walk = canonical_shortest_path(A.graph, s, t)
        x, y = rng.choice(list(zip(walk, walk[1:])))
        key = (id(A), x, y)
        if key not in dist_cache:
            F = FaultSet.of_edges(g, [(x, y)])
            dist_cache[key] = all_pairs_distances(A.graph, F.project(g, A.graph)).dist
        if id(A) not in dist_cache:
            dist_cache[id(A)] = all_pairs_distances(A.graph).dist
        da, dae = dist_cache[id(A)], dist_cache[key]
        if not da[s, t] < dae[s, t] < UNREACHABLE:
            continue
        z, zp = find_block_split(A, (x, y), s, t)
        path = canonical_shortest_path(g, s, t, FaultSet.of_edges(g, [(x, y)]))
        i = path.index(z)
        assert path[i + 1] == zp
        assert not uses_edge(da, s, z, x, y), (s, t, (x, y), z)
        assert not uses_edge(da, zp, t, x, y), (s, t, (x, y), zp)
        done += 1
    record(7, True, f"{done} block splits: no shortest A-path s-z or z'-t uses the failed edge")


def test_criterion_08_block_decompositions():
    rng = random.Random(99)
    hosts = {}
    ks = {}
    notes = 0
    done = 0
    while done < 500:
        seed = rng.randrange(40)
        g = suite_graph(30, 0.15, 200 + seed)
        f = rng.choice([1, 2])
        if (seed, f) not in hosts:
            A, _ = acim_2additive(g)
            hosts[seed, f] = (A, union_spanner(A, eft_multiplicative(g, 2, f)))
        A, H = hosts[seed, f]
        s, t = rng.sample(range(g.n), 2)
        walk = canonical_shortest_path(A.graph, s, t)
        ids = {g.edge_id(*rng.choice(list(zip(walk, walk[1:]))))}
        while len(ids) < f:
            ids.add(rng.choice(A.edges))
        F = FaultSet(EDGE, tuple(ids))
        try:
            canonical_shortest_path(g, s, t, F)
        except ValueError:
            continue
        C = ClassOracle(A, F)
        dec = decompose_blocks(A, F, s, t, C)
        rep = check_decomposition(dec, A, H, 3, 2, f, C)
        assert rep.ok, (rep.failures, dec.to_json())
        ks[dec.k] = ks.get(dec.k, 0) + 1
        notes += bool(rep.notes)
        done += 1
    spread = ", ".join(f"k={k}: {c}" for k, c in sorted(ks.items()))
    record(8, True, f"{done} decompositions ({spread}); k <= 2f, chaining, tail class empty, non-recurrence, detour <= 2b+a-1")


def test_criterion_09_property_gate():
    graphs = {params: suite_graph(*params) for params in SUITE_80 + SUITE_60 + SUITE_40}
    graphs.update({(60, 0.15, seed): suite_graph(60, 0.15, seed) for seed in range(50)})
    for g in graphs.values():
        A6, c6 = bkmp_6additive(g)
        res6 = check_clustering_property(A6, c6, 6)
        assert res6, (res6.witness, res6.reason)
        A2, c2 = acim_2additive(g)
        res2 = check_clustering_property(A2, c2, 2)
        assert res2, (res2.witness, res2.reason)
    record(9, True, f"bkmp6 (beta=6) and acim2 (beta=2) clustering property on {len(graphs)} graphs")


def _cross_instances():
    rng = random.Random(5)
    out = []
    for i in range(50):
        g = gnp(rng.randrange(10, 19), rng.choice([0.25, 0.35, 0.5]), 300 + i, connected=True)
        which = i % 5
        if which == 0:
            sp, _ = acim_2additive(g)
            out.append((g, sp, None, Claim(1, 2, 1, EDGE), None))
        elif which == 1:
            sp = build_alg1_spanner(g, Alg1Params(3, 1, VERTEX), SourcewiseFactory(PRESERVER, VERTEX))
            out.append((g, sp, None, None, None))
        elif which == 2:
            A, _ = acim_2additive(g)
            out.append((g, union_spanner(A, eft_multiplicative(g, 2, 2)), None, None, None))
        elif which == 3:
            srcs = sorted(rng.sample(range(g.n), 3))
            out.append((g, build_pipeline("greedy", g), srcs, Claim(3, 0, 1, EDGE), None))
        else:
            keep = [e for e in range(g.m) if rng.random() < 0.6]
            out.append((g, Spanner(g, keep, Claim(1, 2, 2, VERTEX), "random subset"), None, None, sampled(25, i)))
    return out


def test_criterion_10_cross_oracle():
    count = 0
    for g, sp, srcs, claim, mode in _cross_instances():
        kwargs = {"claim": claim}
        if mode is not None:
            kwargs["mode"] = mode
        fast = verify_claim(g, sp, **kwargs) if srcs is None else verify_sourcewise(g, sp, srcs, **kwargs)
        slow = naive_verify(g, sp, sources=srcs, **kwargs)
        assert fast == slow and fast.to_json() == slow.to_json()
        count += 1
    record(10, True, f"optimized and naive verifiers bit-identical on {count} mixed instances")


SCALING = {"alg1-preserver": 1.8, "alg1-2additive": 1.65, "alg2-bkmp6": 1.5}


@pytest.mark.slow
def test_criterion_11_size_scaling():
    start = time.perf_counter()
    rows = []
    for n in (64, 128, 256, 512):
        for seed in (0, 1):
            g = gnp(n, 0.3, seed, connected=True)
            for name in SCALING:
                sp = build_pipeline(name, g)
                rows.append(Row(g.n, g.m, name, f"seed={seed}", sp.size, sp.claim.beta, None, True, 0.0))
    fits = {name: fit_exponent(rows, name) for name in SCALING}
    elapsed = time.perf_counter() - start
    over = [name for name, slope in fits.items() if slope > SCALING[name]]
    for name in over:
        warnings.warn(f"{name}: fitted size exponent {fits[name]:.3f} exceeds {SCALING[name]}")
    detail = ", ".join(f"{name} {fits[name]:.3f} (<= {SCALING[name]})" for name in SCALING)
    record(11, not over and elapsed < 900, f"size exponents on G(n,0.3), n=64..512: {detail}; {elapsed:.0f}s (soft)")
    assert elapsed < 900
