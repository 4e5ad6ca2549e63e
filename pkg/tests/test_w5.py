from __future__ import annotations

import itertools
import random

import pytest

from wheelhom.graph import (
    Pattern,
    build_graph,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    enumerate_connected_graphs,
    is_free_of,
    path_graph,
    wheel_graph,
)
from wheelhom.hom import cycle, solve_extension, verify_map, wheel
from wheelhom.itte import solve_itte_oracle, verify_itte
from wheelhom.w5 import (
    StructureKind,
    TrivialNo,
    classify_structure,
    conflicted_pairs,
    extend_c5,
    lift_solution,
    reduce_w5ext_to_itte,
    solve_w5ext,
)

from _helpers import structure_class_ok


def test_classify_examples():
    assert classify_structure(path_graph(4)).kind is StructureKind.PATH
    sc = classify_structure(cycle_graph(7))
    assert sc.kind is StructureKind.LONG_CYCLE and sc.length == 7
    k23 = complete_bipartite(2, 3)
    assert is_free_of(k23, Pattern.S211, Pattern.K3)
    sc = classify_structure(k23)
    assert sc.kind is StructureKind.ALMOST_COMPLETE_BIPARTITE and sc.missing == ()
    assert structure_class_ok(k23, sc)


def test_classify_guard():
    sc = classify_structure(complete_graph(3))
    assert sc.kind is StructureKind.NOT_APPLICABLE and len(sc.witness) == 3
    with pytest.raises(ValueError):
        classify_structure(build_graph(2, []))


def test_classify_all_small_graphs():
    for n in range(1, 8):
        for g in enumerate_connected_graphs(n, lambda h: is_free_of(h, Pattern.S211, Pattern.K3), hereditary=True):
            sc = classify_structure(g)
            assert structure_class_ok(g, sc), (g, sc)


def test_conflict_examples():
    p3 = path_graph(3)
    wits = conflicted_pairs(p3, {0: 1, 2: 2})
    assert len(wits) == 1 and wits[0].path == (0, 1, 2)
    assert conflicted_pairs(path_graph(2), {0: 1, 1: 2}) == []
    wits = conflicted_pairs(path_graph(4), {0: 3, 3: 3})
    assert len(wits) == 1 and wits[0].interior == (1, 2)
    wits = conflicted_pairs(path_graph(2), {0: 1, 1: 3})
    assert len(wits) == 1 and wits[0].pair == (0, 1)


def test_extend_examples():
    c5 = cycle_graph(5)
    col = extend_c5(c5)
    assert verify_map(c5, cycle(5), col)
    c4 = cycle_graph(4)
    # opposite corners with equal colours; exhaustive check of the two interiors
    assert any(
        verify_map(c4, cycle(5), {0: 1, 1: a, 2: 1, 3: b}) for a, b in itertools.product(range(1, 6), repeat=2)
    )
    col = extend_c5(c4, {0: 1, 2: 1})
    assert col is not None and verify_map(c4, cycle(5), col, {0: 1, 2: 1})
    assert extend_c5(path_graph(2), {0: 1, 1: 3}) is None
    with pytest.raises(ValueError):
        extend_c5(complete_graph(3))


def test_extend_agrees_with_oracle_small():
    rng = random.Random(2)
    for n in range(1, 7):
        for g in enumerate_connected_graphs(n, lambda h: is_free_of(h, Pattern.S211, Pattern.K3), hereditary=True):
            for _ in range(30):
                pre = {v: rng.randint(1, 5) for v in rng.sample(range(n), min(n, rng.randint(0, 3)))}
                ext = extend_c5(g, pre)
                ref = solve_extension(g, cycle(5), pre)
                assert (ext is None) == (ref is None) == bool(conflicted_pairs(g, pre))


def test_reduction_examples():
    g = cycle_graph(5)
    pre = {0: 1, 1: 2, 2: 3, 3: 4, 4: 5}
    inst = reduce_w5ext_to_itte(g, pre)
    assert inst.x | inst.y == set(range(5))
    assert reduce_w5ext_to_itte(path_graph(2), {0: 1, 1: 3}) is TrivialNo
    inst = reduce_w5ext_to_itte(complete_graph(4), {})
    assert inst is not TrivialNo and inst.g.n == 4 and solve_itte_oracle(inst) is None


def test_reduction_uses_every_witness():
    # two conflicting partners for the same pair: both interiors must be constrained
    g = build_graph(4, [(0, 1), (1, 3), (0, 2), (2, 3)])
    inst = reduce_w5ext_to_itte(g, {0: 1, 3: 2})
    assert inst.x == {1, 2}


def test_lift_examples():
    k3 = complete_graph(3)
    col = lift_solution(k3, {}, {0})
    assert col[0] == 0 and verify_map(k3, wheel(5), col)
    w = wheel_graph(5)
    col = lift_solution(w, {}, {0})
    assert col[0] == 0 and verify_map(w, wheel(5), col)
    col = lift_solution(cycle_graph(5), {}, set())
    assert 0 not in col.values()


def test_solve_w5ext_matches_oracle():
    rng = random.Random(4)
    graphs = [g for n in range(2, 7) for g in enumerate_connected_graphs(n, lambda h: is_free_of(h, Pattern.S211), hereditary=True)]
    for g in rng.sample(graphs, min(120, len(graphs))):
        pre = {v: rng.randint(0, 5) for v in range(g.n) if rng.random() < 0.3}
        inst = reduce_w5ext_to_itte(g, pre)
        ref = solve_extension(g, wheel(5), pre)
        if inst is TrivialNo:
            assert ref is None
            continue
        sol = solve_itte_oracle(inst)
        assert (sol is None) == (ref is None)
        if sol is not None:
            assert verify_itte(inst, sol)
            assert verify_map(g, wheel(5), lift_solution(g, pre, sol), pre)
        col = solve_w5ext(g, pre)
        assert (col is None) == (ref is None)
