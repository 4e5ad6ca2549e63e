"""Weighted matchings, including the cover-constrained variant MWM*.

MWM* asks for a matching of weight at least ``k`` that covers every vertex of
a set ``U``.  It is decided by doubling the graph (so that uncovered vertices
can be paired with their twin at weight 0) and shifting all weights so that
only perfect matchings can reach the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Optional

import networkx as nx

from .graph import Graph, build_graph, iter_bits

Edge = tuple[int, int]
Weights = Mapping[Edge, int]


def _key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _weight(w: Weights, u: int, v: int) -> int:
    return w.get(_key(u, v), 0)


def is_matching(g: Graph, m) -> bool:
    seen: set[int] = set()
    for u, v in m:
        if not g.has_edge(u, v) or u in seen or v in seen:
            return False
        seen.update((u, v))
    return True


def matching_weight(w: Weights, m) -> int:
    return sum(_weight(w, u, v) for u, v in m)


def max_weight_matching(g: Graph, w: Weights) -> frozenset:
    """Maximum-weight matching (Edmonds' blossom algorithm via networkx)."""
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    for u, v in g.edges():
        wt = _weight(w, u, v)
        if wt < 0:
            raise ValueError("weights must be non-negative")
        h.add_edge(u, v, weight=wt)
    return frozenset(_key(u, v) for u, v in nx.max_weight_matching(h))


def max_weight_matching_dp(g: Graph, w: Weights) -> int:
    """Optimum weight by dynamic programming over vertex subsets (small graphs)."""
    if g.n > 20:
        raise ValueError("subset DP is limited to 20 vertices")

    @lru_cache(maxsize=None)
    def best(mask: int) -> int:
        if not mask:
            return 0
        v = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << v)
        value = best(rest)
        for u in iter_bits(g.masks[v] & rest):
            value = max(value, _weight(w, u, v) + best(rest & ~(1 << u)))
        return value

    return best((1 << g.n) - 1)


def iter_matchings(g: Graph) -> Iterator[tuple[Edge, ...]]:
    """Every matching of ``g`` (including the empty one), each exactly once."""
    edges = g.edges()

    def rec(i: int, used: int, chosen: list[Edge]) -> Iterator[tuple[Edge, ...]]:
        if i == len(edges):
            yield tuple(chosen)
            return
        yield from rec(i + 1, used, chosen)
        u, v = edges[i]
        if not (used >> u & 1 or used >> v & 1):
            chosen.append((u, v))
            yield from rec(i + 1, used | (1 << u) | (1 << v), chosen)
            chosen.pop()

    yield from rec(0, 0, [])


# MWM* ----------------------------------------------------------------------

@dataclass(frozen=True)
class MWMStarInstance:
    g: Graph
    cover: frozenset
    w: Mapping[Edge, int] = field(default_factory=dict)
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "cover", frozenset(self.cover))
        weights = {}
        for (u, v), wt in dict(self.w).items():
            if not self.g.has_edge(u, v):
                raise ValueError(f"weight given for non-edge ({u}, {v})")
            if wt < 0 or int(wt) != wt:
                raise ValueError("weights must be non-negative integers")
            weights[_key(u, v)] = int(wt)
        object.__setattr__(self, "w", weights)
        if any(not 0 <= u < self.g.n for u in self.cover):
            raise ValueError("cover vertex out of range")

    def weight(self, u: int, v: int) -> int:
        return _weight(self.w, u, v)


def mwm_star_certificate_ok(inst: MWMStarInstance, m) -> bool:
    covered = {v for e in m for v in e}
    return is_matching(inst.g, m) and inst.cover <= covered and matching_weight(inst.w, m) >= inst.k


@dataclass(frozen=True)
class DoubledGraph:
    """The two-copy graph: vertex ``u`` has twins ``u`` and ``u + n``.

    Twins are joined (at weight 0) exactly for the vertices outside the cover
    set, since those are the ones a solution may leave unmatched.
    """

    g: Graph
    w: dict[Edge, int]
    twins: tuple[Edge, ...]


def doubled_graph(inst: MWMStarInstance) -> DoubledGraph:
    n = inst.g.n
    edges = []
    w: dict[Edge, int] = {}
    for u, v in inst.g.edges():
        wt = inst.weight(u, v)
        for shift in (0, n):
            e = (u + shift, v + shift)
            edges.append(e)
            w[e] = wt
    twins = tuple((u, u + n) for u in range(n) if u not in inst.cover)
    for e in twins:
        edges.append(e)
        w[e] = 0
    return DoubledGraph(build_graph(2 * n, edges), w, twins)


def shifted_weights(dg: DoubledGraph, k: int) -> tuple[dict[Edge, int], int, int]:
    """Weights ``w + m`` with ``m = p * |E| + 1`` and the target ``n * m + 2k``."""
    p = max(dg.w.values(), default=0)
    m = p * len(dg.w) + 1
    half = dg.g.n // 2
    return {e: wt + m for e, wt in dg.w.items()}, m, half * m + 2 * k


def solve_mwm_star(inst: MWMStarInstance) -> tuple[bool, Optional[frozenset]]:
    """Decide MWM*; on success also return a witnessing matching."""
    n = inst.g.n
    dg = doubled_graph(inst)
    w2, m, target = shifted_weights(dg, inst.k)
    best = max_weight_matching(dg.g, w2)
    if matching_weight(w2, best) < target:
        return False, None
    # a matching reaching the shifted target is perfect and has weight >= 2k
    if 2 * len(best) != dg.g.n:
        raise AssertionError("shifted-weight matching reached the target without being perfect")
    if matching_weight(dg.w, best) < 2 * inst.k:
        raise AssertionError("perfect matching reached the shifted target with low weight")
    copies = [[(u, v) for u, v in best if u < n and v < n], [(u - n, v - n) for u, v in best if u >= n]]
    chosen = max(copies, key=lambda c: matching_weight(inst.w, c))
    result = frozenset(_key(u, v) for u, v in chosen)
    if not mwm_star_certificate_ok(inst, result):
        raise AssertionError("matching recovered from the doubled graph is not a certificate")
    return True, result


def solve_mwm_star_bruteforce(inst: MWMStarInstance) -> tuple[bool, Optional[frozenset]]:
    for m in iter_matchings(inst.g):
        if mwm_star_certificate_ok(inst, m):
            return True, frozenset(m)
    return False, None
