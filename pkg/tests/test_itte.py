from __future__ import annotations

import random

from wheelhom.graph import build_graph, complete_graph, cycle_graph, wheel_graph
from wheelhom.itte import (
    ITTEInstance,
    NoInstance,
    eliminate_forced_out,
    lift,
    solve_itte_bruteforce,
    solve_itte_oracle,
    verify_itte,
)

from _helpers import naive_itte, naive_itte_ok, random_constraints, random_graph

K3 = complete_graph(3)


def test_verify_examples():
    assert verify_itte(ITTEInstance(K3), {0})
    assert not verify_itte(ITTEInstance(K3), set())
    k4 = ITTEInstance(complete_graph(4))
    assert not any(verify_itte(k4, {v}) for v in range(4))
    assert not verify_itte(k4, set())


def test_verify_side_constraints():
    g = cycle_graph(5)
    assert not verify_itte(ITTEInstance(g, x={0}), set())
    assert not verify_itte(ITTEInstance(g, y={0}), {0})
    assert not verify_itte(ITTEInstance(g, e={(1, 2)}), {0})
    assert verify_itte(ITTEInstance(g, e={(1, 2)}), {1, 3})
    assert not verify_itte(ITTEInstance(g), {0, 1})


def test_oracle_examples():
    assert solve_itte_oracle(ITTEInstance(complete_graph(4))) is None
    assert solve_itte_oracle(ITTEInstance(cycle_graph(5))) == frozenset()
    w5 = ITTEInstance(wheel_graph(5), x={0})
    assert naive_itte(w5) == frozenset({0})
    assert solve_itte_oracle(w5) == frozenset({0})
    assert solve_itte_oracle(ITTEInstance(K3, x={0}, y={0})) is None


def test_oracle_against_subset_enumeration():
    rng = random.Random(5)
    for _ in range(400):
        n = rng.randint(1, 12)
        g = random_graph(n, rng.choice([0.2, 0.35, 0.5]), rng)
        inst = random_constraints(g, rng)
        got = solve_itte_oracle(inst)
        ref = naive_itte(inst) if n <= 9 else solve_itte_bruteforce(inst)
        assert (got is None) == (ref is None)
        if got is not None:
            assert verify_itte(inst, got) and naive_itte_ok(inst, got)


def test_elimination_examples():
    path = build_graph(3, [(0, 1), (1, 2)])
    assert eliminate_forced_out(ITTEInstance(path, y={0, 1}, e={(0, 1)})) is NoInstance
    # triangle with two forced-out vertices pushes the third into X'
    g = build_graph(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    red = eliminate_forced_out(ITTEInstance(g, y={0, 1}))
    assert red.origin == (2, 3) and red.x == {0} and red.y == frozenset()
    # one forced-out vertex turns the triangle into a must-hit edge
    red = eliminate_forced_out(ITTEInstance(g, y={0}))
    assert red.origin == (1, 2, 3) and red.e == {(0, 1)}
    inst = ITTEInstance(g, x={3}, e={(0, 1)})
    same = eliminate_forced_out(inst)
    assert same == inst and same.origin is None
    assert eliminate_forced_out(ITTEInstance(K3, y={0, 1, 2})) is NoInstance


def test_elimination_preserves_answers():
    rng = random.Random(9)
    for _ in range(600):
        g = random_graph(rng.randint(1, 9), rng.choice([0.3, 0.5]), rng)
        inst = random_constraints(g, rng, py=0.3)
        red = eliminate_forced_out(inst)
        ref = solve_itte_oracle(inst)
        if red is NoInstance:
            assert ref is None
            continue
        assert not red.y
        sol = solve_itte_oracle(red)
        assert (sol is None) == (ref is None)
        if sol is not None:
            assert verify_itte(inst, lift(sol, red))
