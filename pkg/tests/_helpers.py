"""Independent brute-force references and random instance builders for the tests."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Mapping, Optional

import networkx as nx

from wheelhom.graph import Graph, build_graph
from wheelhom.itte import ITTEInstance


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    return build_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def random_cubic(n: int, rng: random.Random) -> Graph:
    d = nx.random_regular_graph(3, n, seed=rng.randrange(1 << 30))
    return build_graph(n, d.edges())


def random_connected_cubic(n: int, rng: random.Random) -> Graph:
    while True:
        d = random_cubic(n, rng)
        if d.is_connected():
            return d


def random_constraints(g: Graph, rng: random.Random, px: float = 0.1, py: float = 0.15, pe: float = 0.1, no_y: bool = False) -> ITTEInstance:
    x = {v for v in range(g.n) if rng.random() < px}
    y = set() if no_y else {v for v in range(g.n) if v not in x and rng.random() < py}
    e = {uv for uv in g.edges() if rng.random() < pe}
    return ITTEInstance(g, frozenset(x), frozenset(y), frozenset(e))


def naive_triangles(g: Graph) -> list[tuple[int, int, int]]:
    return [t for t in itertools.combinations(range(g.n), 3)
            if g.has_edge(t[0], t[1]) and g.has_edge(t[0], t[2]) and g.has_edge(t[1], t[2])]


def naive_itte_ok(inst: ITTEInstance, xs: Iterable[int]) -> bool:
    """Direct restatement of the ITTE conditions, no bitmasks."""
    g = inst.g
    x = set(xs)
    if any(g.has_edge(u, v) for u, v in itertools.combinations(sorted(x), 2)):
        return False
    if not inst.x <= x or inst.y & x:
        return False
    if any(u not in x and v not in x for u, v in inst.e):
        return False
    return all(x & set(t) for t in naive_triangles(g))


def naive_itte(inst: ITTEInstance) -> Optional[frozenset]:
    n = inst.g.n
    for size in range(n + 1):
        for xs in itertools.combinations(range(n), size):
            if naive_itte_ok(inst, xs):
                return frozenset(xs)
    return None


def naive_hom(g: Graph, tgraph: Graph, colors: tuple[int, ...], pre: Optional[Mapping[int, int]] = None) -> Optional[dict[int, int]]:
    """Exhaustive search over all colour tuples; ``tgraph`` vertex i carries label colors[i]."""
    pre = pre or {}
    idx = {c: i for i, c in enumerate(colors)}
    for cols in itertools.product(colors, repeat=g.n):
        if any(cols[v] != c for v, c in pre.items()):
            continue
        if all(tgraph.has_edge(idx[cols[u]], idx[cols[v]]) for u, v in g.edges()):
            return dict(enumerate(cols))
    return None


def naive_hom_count(g: Graph, tgraph: Graph) -> int:
    return sum(
        all(tgraph.has_edge(c[u], c[v]) for u, v in g.edges())
        for c in itertools.product(range(tgraph.n), repeat=g.n)
    )


def naive_contains(g: Graph, p: Graph) -> bool:
    """Induced copy of ``p`` by trying every injective placement."""
    for vs in itertools.permutations(range(g.n), p.n):
        if all(g.has_edge(vs[a], vs[b]) == p.has_edge(a, b) for a in range(p.n) for b in range(a + 1, p.n)):
            return True
    return False


def all_matchings(g: Graph):
    edges = list(g.edges())

    def rec(i, used, chosen):
        if i == len(edges):
            yield tuple(chosen)
            return
        yield from rec(i + 1, used, chosen)
        u, v = edges[i]
        if not (used >> u) & 1 and not (used >> v) & 1:
            chosen.append((u, v))
            yield from rec(i + 1, used | (1 << u) | (1 << v), chosen)
            chosen.pop()

    yield from rec(0, 0, [])


def structure_class_ok(g: Graph, sc) -> bool:
    """Check the invariants of a classifier answer directly on ``g``."""
    from wheelhom.w5 import StructureKind

    if sc.kind is StructureKind.PATH:
        order = sc.order
        return (sorted(order) == list(range(g.n)) and g.m == g.n - 1
                and all(g.has_edge(a, b) for a, b in zip(order, order[1:])))
    if sc.kind is StructureKind.LONG_CYCLE:
        order = sc.order
        return (g.n >= 5 and sorted(order) == list(range(g.n)) and g.m == g.n
                and all(g.has_edge(order[i - 1], order[i]) for i in range(g.n)))
    if sc.kind is StructureKind.ALMOST_COMPLETE_BIPARTITE:
        a, b = sc.classes
        if sorted(a + b) != list(range(g.n)) or set(a) & set(b):
            return False
        if not (g.is_independent(a) and g.is_independent(b)):
            return False
        missing = {(min(u, v), max(u, v)) for u in a for v in b if not g.has_edge(u, v)}
        ends = [x for e in missing for x in e]
        return missing == set(sc.missing) and len(ends) == len(set(ends))
    return False


def chain_endpoint_pairs(l: int, k: int) -> set[tuple[int, int]]:
    """Endpoint colour pairs of an l-chain into W_k, by composing the one-diamond relation.

    The diamond relation comes from enumerating all maps of K4 minus an edge;
    a chain is l diamonds glued at joints, so its relation is the l-fold
    relational composition.
    """
    colors = range(k + 1)

    def adj(a, b):
        if a == b:
            return False
        if a == 0 or b == 0:
            return True
        return (a - b) % k in (1, k - 1)

    one = set()
    for p, a, b, q in itertools.product(colors, repeat=4):
        if adj(p, a) and adj(p, b) and adj(a, b) and adj(a, q) and adj(b, q):
            one.add((p, q))
    rel = set(one)
    for _ in range(l - 1):
        rel = {(p, r) for p, q in rel for q2, r in one if q == q2}
    return rel


def random_claw_free_small(rng: random.Random, max_n: int = 12) -> Graph:
    """Claw-free graph with maximum degree at most 4: a line graph of a subcubic graph,
    sometimes with extra triangles glued on, filtered by a direct claw check."""
    from wheelhom.graph import Pattern, is_free_of, line_graph

    while True:
        n = rng.randint(3, 8)
        edges = []
        deg = [0] * n
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        rng.shuffle(pairs)
        for u, v in pairs:
            if deg[u] < 3 and deg[v] < 3 and rng.random() < 0.6:
                edges.append((u, v))
                deg[u] += 1
                deg[v] += 1
        d = build_graph(n, edges)
        g, _ = line_graph(d)
        if 1 <= g.n <= max_n and g.max_degree() <= 4 and is_free_of(g, Pattern.CLAW):
            return g


def three_colourable_naive(g: Graph) -> bool:
    """Plain backtracking 3-colouring in vertex order."""
    col = [-1] * g.n

    def rec(v):
        if v == g.n:
            return True
        for c in range(3):
            if all(col[u] != c for u in g.neighbors(v)):
                col[v] = c
                if rec(v + 1):
                    return True
        col[v] = -1
        return False

    return rec(0)


def random_bounded_cnf(rng: random.Random, num_vars: int, num_clauses: int, cap: int, positive: bool):
    """Random 3-clauses where no variable occurs more than ``cap`` times."""
    from wheelhom.generators import CnfInstance

    left = [cap] * num_vars
    clauses = []
    for _ in range(num_clauses):
        clause = []
        for _ in range(3):
            pool = [v for v in range(num_vars) if left[v] > 0]
            if not pool:
                break
            v = rng.choice(pool)
            left[v] -= 1
            clause.append((v, positive or rng.random() < 0.5))
        if len(clause) < 3:
            break
        clauses.append(tuple(clause))
    return CnfInstance(num_vars, tuple(clauses))


def matching_weights_by_size(g: Graph, w) -> dict[int, int]:
    """Best total weight of a matching with exactly j edges, for every j."""
    from functools import lru_cache

    def wt(u, v):
        return w.get((min(u, v), max(u, v)), 0)

    @lru_cache(maxsize=None)
    def best(mask: int):
        if not mask:
            return {0: 0}
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        out = dict(best(rest))
        for u in g.neighbors(v):
            if (rest >> u) & 1:
                for j, val in best(rest & ~(1 << u)).items():
                    cand = val + wt(u, v)
                    if out.get(j + 1, -1) < cand:
                        out[j + 1] = cand
        return out

    return best((1 << g.n) - 1)


def planted_positive_cnf(rng: random.Random, num_vars: int, num_clauses: int, cap: int):
    """Positive 3-clauses with exactly one true literal under a hidden assignment."""
    from wheelhom.generators import CnfInstance

    sigma = [rng.random() < 0.4 for _ in range(num_vars)]
    if all(sigma) or not any(sigma):
        sigma[0] = not sigma[0]
    if num_vars == 1:
        return CnfInstance(1, ())
    left = [cap] * num_vars
    clauses = []
    for _ in range(num_clauses):
        trues = [v for v in range(num_vars) if sigma[v] and left[v] > 0]
        falses = [v for v in range(num_vars) if not sigma[v] and left[v] > 0]
        if not trues or sum(left[v] for v in falses) < 2:
            break
        clause = [rng.choice(trues)]
        left[clause[0]] -= 1
        for _ in range(2):
            v = rng.choice([u for u in falses if left[u] > 0])
            left[v] -= 1
            clause.append(v)
        rng.shuffle(clause)
        clauses.append(tuple((v, True) for v in clause))
    return CnfInstance(num_vars, tuple(clauses))
