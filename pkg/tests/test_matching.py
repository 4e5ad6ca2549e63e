from __future__ import annotations

import random

from wheelhom.graph import build_graph, complete_graph, cycle_graph, path_graph
from wheelhom.matching import (
    MWMStarInstance,
    doubled_graph,
    is_matching,
    matching_weight,
    max_weight_matching,
    max_weight_matching_dp,
    shifted_weights,
    solve_mwm_star,
    solve_mwm_star_bruteforce,
)

from _helpers import all_matchings, random_graph


def _random_weights(g, rng, top=5):
    return {e: rng.randint(0, top) for e in g.edges()}


def test_max_weight_matching_examples():
    p3 = path_graph(3)
    m = max_weight_matching(p3, {(0, 1): 2, (1, 2): 3})
    assert matching_weight({(0, 1): 2, (1, 2): 3}, m) == 3
    c4 = cycle_graph(4)
    w = {e: 1 for e in c4.edges()}
    assert matching_weight(w, max_weight_matching(c4, w)) == 2


def test_max_weight_matching_against_dp():
    rng = random.Random(8)
    for _ in range(150):
        g = random_graph(rng.randint(1, 12), rng.choice([0.2, 0.4, 0.7]), rng)
        w = _random_weights(g, rng)
        m = max_weight_matching(g, w)
        assert is_matching(g, m)
        assert matching_weight(w, m) == max_weight_matching_dp(g, w)


def test_mwm_star_examples():
    edge = build_graph(2, [(0, 1)])
    assert solve_mwm_star(MWMStarInstance(edge, {0, 1}, {(0, 1): 1}, 1))[0]
    tri = complete_graph(3)
    assert not solve_mwm_star(MWMStarInstance(tri, {0, 1, 2}, {e: 1 for e in tri.edges()}, 0))[0]


def test_twins_only_outside_the_cover_set():
    tri = complete_graph(3)
    inst = MWMStarInstance(tri, {0, 1, 2}, {e: 1 for e in tri.edges()}, 0)
    assert doubled_graph(inst).twins == ()
    # twins on U itself would let every vertex pair with its copy
    literal = build_graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 3), (1, 4), (2, 5)])
    assert max(len(m) for m in all_matchings(literal)) == 3
    assert not solve_mwm_star_bruteforce(inst)[0]


def test_mwm_star_claims_on_random_instances():
    rng = random.Random(12)
    for _ in range(150):
        n = rng.randint(1, 7)
        g = random_graph(n, rng.choice([0.3, 0.5, 0.8]), rng)
        w = _random_weights(g, rng, 3)
        cover = {v for v in range(n) if rng.random() < 0.4}
        k = rng.randint(0, 6)
        inst = MWMStarInstance(g, cover, w, k)
        ans, m = solve_mwm_star(inst)
        assert ans == solve_mwm_star_bruteforce(inst)[0]
        dg = doubled_graph(inst)
        w2, _, target = shifted_weights(dg, k)
        perfect = [mm for mm in all_matchings(dg.g) if 2 * len(mm) == dg.g.n]
        assert ans == any(matching_weight(dg.w, mm) >= 2 * k for mm in perfect)
        for mm in all_matchings(dg.g):
            if matching_weight(w2, mm) >= target:
                assert 2 * len(mm) == dg.g.n
