import random
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asnoc.errors import Unroutable
from asnoc.model import Flow, RoutingSet, SharingPlan
from asnoc.optim import max_independent_set
from asnoc.portshare import (IN, OUT, build_conflict_graph, can_share, intersection_matching, no_sharing,
                             partition_switch_ports, resolve_multi_switch_conflicts, select_paths,
                             share_ports, sharing_graph)
from asnoc.power import port_counts
from asnoc.verify import FaultSet

from .instances import random_routing, two_flow_sharing_instance


def three_flow_conflict():
    """Three flows on switches 0, 1, 2. Inports of cores 0 and 2 merge on s0,
    cores 2 and 4 on s1; the second paths of f0 and f2 both use s2."""
    flows = (Flow(0, 1, 10.0, 3), Flow(2, 3, 10.0, 3), Flow(4, 5, 10.0, 3))
    paths = (((0,), (2,)), ((0,), (1,)), ((1,), (2,)))
    routing = RoutingSet(flows, paths)
    plan = SharingPlan({0: [(0, 2)], 1: [(2, 4)], 2: [(0,), (4,)]}, {})
    return routing, plan


# intersection matching

def test_ig_disjoint_alternatives():
    assert intersection_matching([(0,), (1,)], [(0,), (2,)], 0, 0) == 0


def test_ig_shared_switch():
    assert intersection_matching([(0,), (1, 2)], [(0,), (2,)], 0, 0) == 1


def test_ig_k2_perfect_matching():
    f1 = [(0,), (1,), (2,)]
    f2 = [(0,), (2, 3), (1, 4)]
    assert intersection_matching(f1, f2, 0, 0) == 2


def test_ig_ignores_port_paths():
    # the port paths themselves meet on s0 but are not IG vertices
    assert intersection_matching([(0, 1), (2,)], [(0, 1), (3,)], 0, 0) == 0


# can_share

def test_can_share_single_flows():
    routing, _ = three_flow_conflict()
    assert can_share((IN, 0, 0), (IN, 0, 2), routing, 1)


def test_can_share_any_breach_blocks():
    flows = (Flow(0, 1, 1.0, 3), Flow(0, 5, 1.0, 3), Flow(2, 3, 1.0, 3))
    # f1's alternative meets f2's alternative, f0's does not
    paths = (((0,), (1,)), ((0,), (2,)), ((0,), (2, 3)))
    routing = RoutingSet(flows, paths)
    assert not can_share((IN, 0, 0), (IN, 0, 2), routing, 1)
    # dropping the breaching pair makes the ports sharable
    ok = RoutingSet(flows[::2], paths[::2])
    assert can_share((IN, 0, 0), (IN, 0, 2), ok, 1)


def test_can_share_rejects_bad_ports():
    routing, _ = three_flow_conflict()
    with pytest.raises(ValueError):
        can_share((IN, 0, 0), (OUT, 0, 1), routing, 1)
    with pytest.raises(ValueError):
        can_share((IN, 0, 0), (IN, 0, 0), routing, 1)


def test_can_share_mp3_s1_by_hand(mp3_table):
    _, _, routing = mp3_table
    # c9->c8 goes s1 with alternative s0-s2, c11->c8 goes s1 with alternative s2:
    # both alternatives hold s2, so C = 1 = K
    assert routing.paths[7] == ((1,), (0, 2))
    assert routing.paths[9] == ((1,), (2,))
    assert not can_share((IN, 1, 9), (IN, 1, 11), routing, 1)
    # c11->c8 and c10->c9 share an alternative too, s2
    assert not can_share((IN, 1, 10), (IN, 1, 11), routing, 1)
    # c7's alternatives start at s0 and end on s1 or s3; c8's alternative is s2-s3
    assert can_share((IN, 1, 7), (IN, 1, 8), routing, 1) is (
        intersection_matching(routing.paths[4], routing.paths[6], 1, 0) < 1
        and intersection_matching(routing.paths[5], routing.paths[6], 1, 0) < 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2]), st.sampled_from([IN, OUT]))
def test_can_share_symmetric(seed, K, kind):
    rng = random.Random(seed)
    topo, routing = random_routing(rng, K)
    for s in range(topo.n_sw):
        cores = topo.core_inports(s) if kind == IN else topo.core_outports(s)
        for a, b in combinations(cores, 2):
            assert can_share((kind, s, a), (kind, s, b), routing, K) == \
                can_share((kind, s, b), (kind, s, a), routing, K)


# partition

def test_partition_clique_then_pair():
    # a 3-clique and a 2-clique, plus a cross edge
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (2, 3)]
    groups = partition_switch_ports(range(5), edges)
    assert groups == [(0, 1, 2), (3, 4)]


def test_partition_edgeless():
    assert partition_switch_ports([3, 1, 2], []) == [(1,), (2,), (3,)]


def test_partition_matching_only_baseline():
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (2, 3)]
    groups = partition_switch_ports(range(5), edges, clique_phase=False)
    assert len(groups) == 3
    assert sorted(len(g) for g in groups) == [1, 2, 2]


@settings(max_examples=80, deadline=None)
@given(st.data())
def test_partition_groups_are_cliques(data):
    n = data.draw(st.integers(0, 9))
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if data.draw(st.booleans())]
    es = {frozenset(e) for e in edges}
    for phase in (True, False):
        groups = partition_switch_ports(range(n), edges, phase)
        assert sorted(v for g in groups for v in g) == list(range(n))
        for g in groups:
            assert all(frozenset(p) in es for p in combinations(g, 2))
        if not phase:
            assert all(len(g) <= 2 for g in groups)


# conflict graph

def test_gpc_no_sharing(mp3_table):
    _, topo, routing = mp3_table
    gpc = build_conflict_graph(routing, no_sharing(topo))
    assert set(gpc.kinds.values()) == {"A"}
    assert len(max_independent_set(gpc.vertices, list(gpc.edges))) == len(routing.flows)


def test_gpc_three_flow_structure():
    routing, plan = three_flow_conflict()
    gpc = build_conflict_graph(routing, plan)
    assert len(gpc.vertices) == 6
    a = [e for e in gpc.edges if gpc.kinds[e] == "A"]
    b = [e for e in gpc.edges if gpc.kinds[e] == "B"]
    assert a == [((0, 0), (0, 1)), ((1, 0), (1, 1)), ((2, 0), (2, 1))]
    assert b == [((0, 0), (1, 0)), ((1, 1), (2, 0))]


def test_gpc_type_b_only_within_groups(mp3_table):
    _, topo, routing = mp3_table
    plan = share_ports(topo, routing, 1)
    gpc = build_conflict_graph(routing, plan)
    groups = {(k, s): plan.groups(k).get(s, ()) for k in (IN, OUT) for s in range(topo.n_sw)}
    for e in gpc.edges:
        if gpc.kinds[e] != "B":
            continue
        (fa, ka), (fb, kb) = e
        pa, pb = routing.paths[fa][ka], routing.paths[fb][kb]
        fla, flb = routing.flows[fa], routing.flows[fb]
        hits = []
        if pa[0] == pb[0]:
            hits += [g for g in groups[IN, pa[0]] if {fla.src, flb.src} <= set(g) and fla.src != flb.src]
        if pa[-1] == pb[-1]:
            hits += [g for g in groups[OUT, pa[-1]] if {fla.dst, flb.dst} <= set(g) and fla.dst != flb.dst]
        assert hits
    assert plan.gpc_edges == tuple(e for e in gpc.edges if gpc.kinds[e] == "B")


# path selection

def test_select_defaults_without_faults(mp3_table):
    _, topo, routing = mp3_table
    gpc = build_conflict_graph(routing, no_sharing(topo))
    assert select_paths(gpc) == {i: 0 for i in range(len(routing.flows))}


def test_select_mp3_s0_failed(mp3_table):
    _, _, routing = mp3_table
    # merge c4 with c7 on s1 and c12 with c2 on s3: the alternatives of
    # c4->c3, c12->c4 and c12->c11 then clash with forced alternatives
    plan = SharingPlan({1: [(4, 7)], 3: [(2, 12)]}, {})
    gpc = build_conflict_graph(routing, plan)
    chosen = select_paths(gpc, FaultSet({0}))
    forced = {0: 1, 1: 1, 2: 0, 3: 0, 4: 1, 5: 1, 6: 1, 7: 0, 10: 0, 11: 0, 12: 0}
    assert {f: chosen[f] for f in forced} == forced
    assert chosen[8] in (0, 1) and chosen[9] in (0, 1)
    for f, k in chosen.items():
        assert 0 not in routing.paths[f][k]


def test_select_unroutable_names_flow():
    routing, _ = three_flow_conflict()
    gpc = build_conflict_graph(routing, None)
    with pytest.raises(Unroutable) as exc:
        select_paths(gpc, FaultSet({0, 2}))
    assert exc.value.flows == [0]


def test_select_link_fault():
    routing = RoutingSet((Flow(0, 1, 1.0, 3),), (((0, 1), (2,)),))
    gpc = build_conflict_graph(routing, None)
    assert select_paths(gpc, FaultSet((), {(0, 1)})) == {0: 1}


# cross-switch resolution

def test_resolve_three_flow_instance():
    routing, plan = three_flow_conflict()
    gpc = build_conflict_graph(routing, plan)
    with pytest.raises(Unroutable):
        select_paths(gpc, FaultSet({2}))
    fixed = resolve_multi_switch_conflicts(routing, plan, 1, 3)
    assert len(fixed.removed_sharing_edges) == 1
    rec = fixed.removed_sharing_edges[0]
    assert rec["fault_set"] == [2] and rec["kind"] == IN
    assert len(select_paths(build_conflict_graph(routing, fixed), FaultSet({2}))) == 3


def test_resolve_single_switch_sharing_untouched():
    routing = RoutingSet((Flow(0, 1, 1.0, 3), Flow(2, 3, 1.0, 3)), (((0,), (1,)), ((0,), (2,))))
    plan = SharingPlan({0: [(0, 2)]}, {})
    fixed = resolve_multi_switch_conflicts(routing, plan, 1, 3)
    assert fixed.removed_sharing_edges == ()
    assert fixed.inport_groups == plan.inport_groups


def test_resolve_k0_is_identity():
    routing, plan = three_flow_conflict()
    assert resolve_multi_switch_conflicts(routing, plan, 0, 3) is plan


def test_share_ports_mp3_audit(mp3_table):
    _, topo, routing = mp3_table
    plan = share_ports(topo, routing, 1)
    for rec in plan.removed_sharing_edges:
        assert set(rec) == {"kind", "switch", "ports", "fault_set", "flow"}
        assert len(rec["fault_set"]) == 1
    before_in, before_out = port_counts(topo)
    after_in, after_out = port_counts(topo, plan)
    assert sum(after_in) < sum(before_in)
    assert all(a <= b for a, b in zip(after_in, before_in))
    assert all(a <= b for a, b in zip(after_out, before_out))


def _all_faults(n_sw, K):
    for r in range(K + 1):
        for vf in combinations(range(n_sw), r):
            yield FaultSet(set(vf))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2]))
def test_share_ports_invariants(seed, K):
    rng = random.Random(seed)
    topo, routing = random_routing(rng, K)
    plan = share_ports(topo, routing, K)
    gpc = build_conflict_graph(routing, plan)
    # every fault of at most K switches, smaller ones included
    for fs in _all_faults(topo.n_sw, K):
        assert len(select_paths(gpc, fs)) == len(routing.flows)
    for kind in (IN, OUT):
        for s, groups in plan.groups(kind).items():
            cores, edges = sharing_graph(topo, routing, K, kind, s)
            es = {frozenset(e) for e in edges}
            assert sorted(c for g in groups for c in g) == cores
            for g in groups:
                assert all(frozenset(p) in es for p in combinations(g, 2))
    b_in, b_out = port_counts(topo)
    a_in, a_out = port_counts(topo, plan)
    assert all(a <= b for a, b in zip(a_in + a_out, b_in + b_out))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2]))
def test_single_pair_merge_survives_faults(seed, K):
    # any one sharable pair, merged alone, tolerates every fault of <= K switches
    rng = random.Random(seed)
    topo, routing = random_routing(rng, K)
    for kind in (IN, OUT):
        for s in range(topo.n_sw):
            cores, edges = sharing_graph(topo, routing, K, kind, s)
            for a, b in edges:
                groups = {s: [(a, b)]}
                plan = SharingPlan(groups, {}) if kind == IN else SharingPlan({}, groups)
                gpc = build_conflict_graph(routing, plan)
                for fs in _all_faults(topo.n_sw, K):
                    assert len(select_paths(gpc, fs)) == len(routing.flows)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([1, 2]), st.sampled_from([IN, OUT]))
def test_two_flow_merge_iff_matching_below_k(seed, K, kind):
    # sharable exactly when the merged pair survives every K-switch fault
    routing, p1, p2 = two_flow_sharing_instance(random.Random(seed), K, kind)
    n_sw = 1 + max(s for ps in routing.paths for p in ps for s in p)
    groups = {0: [(p1[2], p2[2])]}
    plan = SharingPlan(groups, {}) if kind == IN else SharingPlan({}, groups)
    gpc = build_conflict_graph(routing, plan)
    survives = all(len(gpc.vertices) and _routable(gpc, fs) for fs in _all_faults(n_sw, K))
    assert can_share(p1, p2, routing, K) == survives


def _routable(gpc, fs):
    try:
        select_paths(gpc, fs)
    except Unroutable:
        return False
    return True
