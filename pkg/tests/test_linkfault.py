import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asnoc.errors import Infeasible
from asnoc.linkfault import (DIRECTED, FTTG, build_link_model, energy_fttg, initial_switches,
                             synth_link_fault, synth_link_fault_grow)
from asnoc.model import CommGraph, Core, Flow, RoutingSet, Switch, Topology, path_links

from .instances import INT_T_SW, exact_config
from .oracles import brute_link_fault_k1


def tsw(q):
    return 0.0 if q == 0 else INT_T_SW[q]


def small_instance(rng, n_core=3, n_flows=3):
    cores = [Core(i, f"c{i}", (float(rng.randrange(0, 6)), float(rng.randrange(0, 6)))) for i in range(n_core)]
    pairs = [(a, b) for a in range(n_core) for b in range(n_core) if a != b]
    flows = [Flow(a, b, float(rng.randrange(10, 60, 10)), rng.randint(2, 4))
             for a, b in sorted(rng.sample(pairs, n_flows))]
    return CommGraph(cores, flows)


def check_structure(ccg, res, K):
    topo, routing = res.topology, res.routing
    for c in range(ccg.n_core):
        assert len(topo.src_switches(c)) == 1
        assert len(topo.sink_switches(c)) == 1
        assert topo.src_switches(c) == topo.sink_switches(c)
    for f, paths in zip(routing.flows, routing.paths):
        assert len(paths) == K + 1
        assert len(paths[0]) <= f.latency_limit
        for p in paths:
            assert p[0] == topo.src_switches(f.src)[0]
            assert p[-1] == topo.sink_switches(f.dst)[0]
            assert set(path_links(p)) <= topo.ss_links
        seen = set()
        for p in paths:
            links = set(path_links(p))
            assert seen.isdisjoint(links)
            seen |= links


def test_initial_switches():
    assert initial_switches(12, 5) == 3
    assert initial_switches(13, 5) == 4
    assert initial_switches(1, 10) == 1
    with pytest.raises(ValueError):
        initial_switches(4, 1)


def test_k0_single_switch():
    ccg = CommGraph([Core(0, "a", (0.0, 0.0)), Core(1, "b", (2.0, 0.0))], [Flow(0, 1, 10.0, 2)])
    res = synth_link_fault(ccg, [Switch(0, (1.0, 0.0))], exact_config(0))
    assert res.routing.paths == (((0,),),)
    assert res.topology.ss_links == frozenset()
    check_structure(ccg, res, 0)


def test_k1_distinct_switches_two_disjoint_paths():
    # a four-core ring with at most three cores per switch: some flow crosses
    cores = [Core(i, f"c{i}", (float(3 * i), 0.0)) for i in range(4)]
    flows = [Flow(i, (i + 1) % 4, 10.0, 4) for i in range(4)]
    ccg = CommGraph(cores, flows)
    sw = [Switch(i, (float(4 * i), 0.0)) for i in range(3)]
    cfg = exact_config(1, max_size=4)
    res = synth_link_fault(ccg, sw, cfg)
    check_structure(ccg, res, 1)
    topo = res.topology
    crossing = [f for f in flows if topo.src_switches(f.src) != topo.sink_switches(f.dst)]
    assert crossing
    for i, f in enumerate(flows):
        if f in crossing:
            assert all(len(p) >= 2 for p in res.routing.paths[i])
    assert res.objective == brute_link_fault_k1(ccg, sw, cfg, tsw)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([0, 1]), st.sampled_from([2, 3]))
def test_matches_brute_force(seed, K, n_sw):
    rng = random.Random(seed)
    n_core = rng.randint(2, 3)
    ccg = small_instance(rng, n_core=n_core, n_flows=rng.randint(1, 2 * n_core - 3))
    sw = [Switch(i, (float(rng.randrange(0, 6)), float(rng.randrange(0, 6)))) for i in range(n_sw)]
    cfg = exact_config(K, max_size=rng.choice([3, 4]))
    expected = brute_link_fault_k1(ccg, sw, cfg, tsw)
    if expected is None:
        with pytest.raises(Infeasible):
            synth_link_fault(ccg, sw, cfg)
        return
    res = synth_link_fault(ccg, sw, cfg)
    assert res.objective == pytest.approx(expected, abs=1e-6)
    check_structure(ccg, res, K)


def test_model_disjointness_rows():
    ccg = CommGraph([Core(0, "a", (0.0, 0.0)), Core(1, "b", (1.0, 0.0))], [Flow(0, 1, 5.0, 3)])
    m, a, b, d, x = build_link_model(ccg, [Switch(0, (0.0, 0.0)), Switch(1, (1.0, 0.0))], exact_config(1))
    names = {r[3] for r in m.rows}
    assert {"disj_0_(0, 1)", "disj_0_(1, 0)", "same_0_0", "attach_in_1", "lat_0"} <= names
    assert len(x) == 2 * 2
    assert len(d) == 2


def test_fttg_links_symmetric():
    rng = random.Random(5)
    ccg = small_instance(rng, n_core=4, n_flows=4)
    cfg = exact_config(1, max_size=3)
    res = synth_link_fault_grow(ccg, cfg, FTTG)
    assert res.mode == FTTG
    for u, v in res.topology.ss_links:
        assert (v, u) in res.topology.ss_links
    check_structure(ccg, res, 1)
    e = energy_fttg(res.topology, res.routing, 1.0, cfg.e_bit)
    assert res.objective == pytest.approx(e)


def test_energy_fttg_formula():
    # one switch: two core links, one router
    routing = RoutingSet((Flow(0, 1, 4.0, 3),), (((0,),),))
    assert energy_fttg(Topology(()), routing, 2.0, 0.5) == (1 * 2.0 + 2 * 0.5) * 4.0
    assert energy_fttg(Topology(()), RoutingSet((), ()), 2.0, 0.5) == 0.0


def test_energy_fttg_three_flows_by_hand():
    flows = (Flow(0, 1, 10.0, 3), Flow(1, 2, 20.0, 3), Flow(2, 0, 30.0, 3))
    paths = (((0,),), ((0, 1),), ((1, 2, 0),))
    # 1, 2 and 3 routers; links add the two core wires to the switch hops
    expected = 10 * (1 * 1.5 + 2 * 0.25) + 20 * (2 * 1.5 + 3 * 0.25) + 30 * (3 * 1.5 + 4 * 0.25)
    assert energy_fttg(Topology(()), RoutingSet(flows, paths), 1.5, 0.25) == expected


def test_grow_from_initial_count(mp3):
    cfg = mp3.cfg.with_(K=0, max_size=10)
    res = synth_link_fault_grow(mp3.ccg, cfg)
    assert res.topology.n_sw >= initial_switches(mp3.ccg.n_core, 10)
    check_structure(mp3.ccg, res, 0)


def test_one_fault_needs_more_links():
    rng = random.Random(11)
    ccg = small_instance(rng, n_core=4, n_flows=4)
    sw = [Switch(0, (0.0, 0.0)), Switch(1, (4.0, 0.0)), Switch(2, (2.0, 3.0))]
    nft = synth_link_fault(ccg, sw, exact_config(0, max_size=5))
    ft = synth_link_fault(ccg, sw, exact_config(1, max_size=5))
    assert ft.objective >= nft.objective
    assert len(ft.topology.ss_links) >= len(nft.topology.ss_links)


def test_unknown_mode():
    ccg = CommGraph([Core(0, "a", (0.0, 0.0))], [])
    with pytest.raises(ValueError):
        synth_link_fault(ccg, [Switch(0, (0.0, 0.0))], exact_config(0), mode="ring")
    assert DIRECTED != FTTG
