"""Constructive graph families and hardness reductions.

Diamond chains carry "mapped to the hub" from one endpoint to the other, which
is what every gadget below is built on: the obstruction graphs ``Q_l`` and
``Z_l``, the pendant-path transform for S_{3,3,3}-free graphs and the
gadget reduction from positive exactly-one 3-SAT.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from .graph import (
    Graph,
    Pattern,
    build_graph,
    complete_graph,
    find_induced,
    find_k4,
    is_free_of,
    longest_induced_cycle,
)
from .hom import Target, has_hom, minimize_obstruction_vertices, wheel
from .matching import max_weight_matching

log = logging.getLogger(__name__)


# diamond chains ------------------------------------------------------------

@dataclass(frozen=True)
class DiamondChain:
    """``l`` diamonds glued in a row; joints are ``3i``, middles ``3i+1, 3i+2``."""

    graph: Graph
    x1: int
    x2: int

    @property
    def length(self) -> int:
        return self.x2 // 3


def _chain_edges(l: int) -> list[tuple[int, int]]:
    edges = []
    for i in range(l):
        p, a, b, q = 3 * i, 3 * i + 1, 3 * i + 2, 3 * i + 3
        edges += [(p, a), (p, b), (a, b), (a, q), (b, q)]
    return edges


def diamond_chain(l: int) -> DiamondChain:
    if l < 1:
        raise ValueError("a chain of diamonds needs at least one diamond")
    g = build_graph(3 * l + 1, _chain_edges(l))
    return DiamondChain(g, 0, 3 * l)


# obstruction graphs ----------------------------------------------------------

def _check_cubic(q: Graph) -> None:
    if q.n == 0 or any(q.degree(v) != 3 for v in range(q.n)):
        raise ValueError("pattern graph must be 3-regular")
    if not q.is_connected():
        raise ValueError("pattern graph must be connected")


def build_Q_ell(q: Graph, l: int) -> Graph:
    """Vertex triangles ``3v, 3v+1, 3v+2`` joined along the edges of ``q`` by chains.

    The ``j``-th edge at ``v`` (in sorted neighbour order) uses triangle
    vertex ``3v + j``.  Chain interiors follow in edge order.
    """
    _check_cubic(q)
    if l < 1:
        raise ValueError("chain length must be at least 1")
    edges = []
    for v in range(q.n):
        edges += [(3 * v, 3 * v + 1), (3 * v, 3 * v + 2), (3 * v + 1, 3 * v + 2)]
    port = {(v, u): 3 * v + j for v in range(q.n) for j, u in enumerate(q.adj[v])}
    nxt = 3 * q.n
    for u, v in q.edges():
        local = {0: port[(u, v)], 3 * l: port[(v, u)]}
        for j in range(1, 3 * l):
            local[j] = nxt
            nxt += 1
        edges += [(local[a], local[b]) for a, b in _chain_edges(l)]
    g = build_graph(nxt, edges)
    if not is_free_of(g, Pattern.CLAW) or find_k4(g) is not None:
        raise AssertionError("Q_l must be claw-free and K4-free")
    return g


def cubic_no_pm_graph() -> Graph:
    """A connected 3-regular graph on 16 vertices without a perfect matching.

    Vertex 0 is joined to three blocks, each a K4 with one edge subdivided by
    the vertex that connects to 0.
    """
    edges = []
    for i in range(3):
        a, b, c, d, s = (1 + 5 * i + j for j in range(5))
        edges += [(a, c), (a, d), (b, c), (b, d), (c, d), (s, a), (s, b), (0, s)]
    g = build_graph(16, edges)
    if any(g.degree(v) != 3 for v in range(g.n)) or not g.is_connected():
        raise AssertionError("construction is not connected and 3-regular")
    m = max_weight_matching(g, {e: 1 for e in g.edges()})
    if 2 * len(m) == g.n:
        raise AssertionError("construction has a perfect matching")
    return g


class ResourceCapExceeded(RuntimeError):
    pass


def _itt_colorable(k: int, l: int) -> Optional[Callable[[Graph], bool]]:
    """W_k-colourability test for induced subgraphs of ``Q_l`` via ITTE.

    In a claw-free graph, removing an independent triangle transversal leaves
    a claw-free triangle-free graph, i.e. disjoint paths and cycles.  Every
    induced cycle of ``Q_l`` other than a triangle runs along a cycle of the
    pattern graph and so has at least ``3 * (2l + 1)`` vertices; when that is
    at least ``k`` all those cycles map to ``C_k`` and colourability is
    exactly the existence of such a transversal.
    """
    from .clawfree import solve_itte_clawfree
    from .itte import ITTEInstance

    if 3 * (2 * l + 1) < k:
        return None
    return lambda h: solve_itte_clawfree(ITTEInstance(h)) is not None


def minimal_obstruction_family(
    count: int,
    k: int = 5,
    q: Optional[Graph] = None,
    vertex_cap: int = 20_000,
) -> list[Graph]:
    """Pairwise non-isomorphic claw-free minimal ``W_k``-obstructions.

    The first graph is a minimal obstruction inside ``Q_4``; each next one is
    taken inside ``Q_l`` with ``l`` the longest induced cycle seen so far, so
    it has a strictly longer induced cycle than all previous ones.
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    t = wheel(k)
    q = q if q is not None else cubic_no_pm_graph()
    _check_cubic(q)
    out: list[Graph] = []
    l = 4
    while len(out) < count:
        size = 3 * q.n + q.m * (3 * l - 1)
        if size > vertex_cap:
            raise ResourceCapExceeded(f"Q_{l} would have {size} vertices (cap {vertex_cap})")
        big = build_Q_ell(q, l)
        keep = minimize_obstruction_vertices(big, t, _itt_colorable(k, l))
        z = big.induced(keep)[0]
        log.info("obstruction %d: %d of %d vertices of Q_%d", len(out) + 1, z.n, big.n, l)
        out.append(z)
        l = max(longest_induced_cycle(h) for h in out)
    return out


# S_{3,3,3}-free hardness -----------------------------------------------------

@dataclass(frozen=True)
class PrecoloredInstance:
    """A W5 extension instance; ``kept[i]`` is the input vertex behind vertex ``i``."""

    g: Graph
    pre: dict[int, int]
    kept: tuple[int, ...]


def peel_low_degree(g: Graph, bound: int = 2) -> list[int]:
    """Vertices left after repeatedly deleting vertices of degree at most ``bound``."""
    alive = set(range(g.n))
    deg = {v: g.degree(v) for v in alive}
    queue = [v for v in alive if deg[v] <= bound]
    while queue:
        v = queue.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in g.adj[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] == bound:
                    queue.append(u)
    return sorted(alive)


def s333_hardness_instance(g: Graph, peel: bool = True) -> PrecoloredInstance:
    """W5 extension instance equivalent to 3-colourability of ``g``.

    ``g`` must be claw-free with maximum degree at most 4.  Vertices of degree
    at most 2 are peeled first; with ``peel=False`` every vertex must already
    lie in a triangle, which is what the equivalence relies on.  Each
    remaining vertex ``v`` gets a pendant path ``x_v y_v z_v`` with ``y_v``
    adjacent to ``v`` and ``x_v``, ``z_v`` precoloured 0 and 4.
    """
    if g.max_degree() > 4:
        raise ValueError("input must have maximum degree at most 4")
    if not is_free_of(g, Pattern.CLAW):
        raise ValueError("input must be claw-free")
    kept = peel_low_degree(g) if peel else list(range(g.n))
    core, _ = g.induced(kept)
    if not is_free_of(core, Pattern.CLAW):
        raise AssertionError("peeling produced a claw")
    for v in range(core.n):
        if not any(core.has_edge(a, b) for a, b in itertools.combinations(core.adj[v], 2)):
            raise ValueError(f"vertex {kept[v]} lies in no triangle")
    n = core.n
    edges = list(core.edges())
    pre = {}
    for v in range(n):
        x, y, z = n + 3 * v, n + 3 * v + 1, n + 3 * v + 2
        edges += [(x, y), (y, z), (y, v)]
        pre[x] = 0
        pre[z] = 4
    out = build_graph(4 * n, edges)
    if out.max_degree() > 5 or not is_free_of(out, Pattern.S333):
        raise AssertionError("output must be S_{3,3,3}-free with maximum degree at most 5")
    return PrecoloredInstance(out, pre, tuple(kept))


def three_colorable(g: Graph) -> bool:
    from .hom import make_target

    return has_hom(g, make_target("arbitrary", graph=complete_graph(3)))


# exactly-one SAT ------------------------------------------------------------

Literal = tuple[int, bool]


@dataclass(frozen=True)
class CnfInstance:
    """Variables ``0..num_vars-1``; a literal is ``(variable, positive)``."""

    num_vars: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        clauses = tuple(tuple((int(v), bool(p)) for v, p in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise ValueError("every clause must have exactly three literals")
            for v, _ in c:
                if not 0 <= v < self.num_vars:
                    raise ValueError(f"variable {v} out of range")
        object.__setattr__(self, "clauses", clauses)

    @property
    def positive(self) -> bool:
        return all(p for c in self.clauses for _, p in c)

    def occurrences(self) -> list[int]:
        occ = [0] * self.num_vars
        for c in self.clauses:
            for v, _ in c:
                occ[v] += 1
        return occ

    def satisfied_by(self, sigma: Sequence[bool]) -> bool:
        return all(sum(sigma[v] == p for v, p in c) == 1 for c in self.clauses)


def exactly_one_bruteforce(f: CnfInstance) -> Optional[tuple[bool, ...]]:
    if f.num_vars > 22:
        raise ValueError("brute force is limited to 22 variables")
    for bits in itertools.product((False, True), repeat=f.num_vars):
        if f.satisfied_by(bits):
            return bits
    return None


def solve_exactly_one(f: CnfInstance) -> Optional[tuple[bool, ...]]:
    """Exactly-one satisfying assignment by branching with clause propagation."""
    watch: list[list[int]] = [[] for _ in range(f.num_vars)]
    for i, c in enumerate(f.clauses):
        for v, _ in c:
            watch[v].append(i)

    def propagate(sigma: dict[int, bool], todo: list[int]) -> bool:
        while todo:
            for i in watch[todo.pop()]:
                lits = f.clauses[i]
                true = sum(1 for v, p in lits if v in sigma and sigma[v] == p)
                free = [(v, p) for v, p in lits if v not in sigma]
                if true > 1 or (true == 0 and not free):
                    return False
                if true == 1:
                    # every remaining literal must be false
                    for v, p in free:
                        if v in sigma:
                            if sigma[v] == p:
                                return False
                            continue
                        sigma[v] = not p
                        todo.append(v)
                elif len({v for v, _ in free}) == 1:
                    # a single free variable (possibly repeated) must make exactly one literal true
                    v = free[0][0]
                    hits = {val: sum(1 for _, p in free if p == val) for val in (False, True)}
                    options = [val for val in (False, True) if hits[val] == 1]
                    if not options:
                        return False
                    if len(options) == 1:
                        sigma[v] = options[0]
                        todo.append(v)
        return True

    def search(sigma: dict[int, bool]) -> Optional[dict[int, bool]]:
        free = [v for v in range(f.num_vars) if v not in sigma]
        if not free:
            return sigma
        v = max(free, key=lambda u: len(watch[u]))
        for val in (True, False):
            trial = dict(sigma)
            trial[v] = val
            if propagate(trial, [v]):
                found = search(trial)
                if found is not None:
                    return found
        return None

    start: dict[int, bool] = {}
    if not propagate(start, list(range(f.num_vars))):
        return None
    found = search(start)
    if found is None:
        return None
    sigma = tuple(found[v] for v in range(f.num_vars))
    if not f.satisfied_by(sigma):
        raise AssertionError("exactly-one search returned a non-satisfying assignment")
    return sigma


def pos_1in3_transform(f: CnfInstance) -> CnfInstance:
    """All-positive exactly-one formula equisatisfiable with ``f``.

    Variable ``x`` becomes ``5x`` (stands for "x is false"), ``5x+1`` (for
    "x is true") and three helpers ``a, b, c`` at ``5x+2..5x+4``, tied by the
    clauses ``(x0, x1, a)``, ``(x0, x1, b)``, ``(a, b, c)``.  Original clauses
    come first, then the three helper clauses of each variable in order.
    """
    clauses = [tuple((5 * v + (1 if p else 0), True) for v, p in c) for c in f.clauses]
    for v in range(f.num_vars):
        x0, x1, a, b, c = (5 * v + i for i in range(5))
        clauses += [((x0, True), (x1, True), (a, True)), ((x0, True), (x1, True), (b, True)),
                    ((a, True), (b, True), (c, True))]
    out = CnfInstance(5 * f.num_vars, tuple(clauses))
    if max(f.occurrences(), default=0) <= 4 and max(out.occurrences(), default=0) > 6:
        raise AssertionError("transform must keep occurrences at most 6")
    return out


# the class X_g and the gadget reduction ------------------------------------

def _independent_neighbours(g: Graph, v: int, size: int) -> bool:
    return any(g.is_independent(c) for c in itertools.combinations(g.adj[v], size))


def xg_violation(g: Graph, girth: int) -> Optional[str]:
    """Why ``g`` is outside X_g, or None if it belongs to it.

    Members have maximum degree at most 4, no induced K_{1,4}, and any two
    vertices with three pairwise non-adjacent neighbours either have the same
    closed neighbourhood or are at distance at least ``girth``.
    """
    if g.max_degree() > 4:
        return "maximum degree exceeds 4"
    if any(_independent_neighbours(g, v, 4) for v in range(g.n) if g.degree(v) >= 4):
        return "contains an induced K_{1,4}"
    centres = [v for v in range(g.n) if g.degree(v) >= 3 and _independent_neighbours(g, v, 3)]
    for i, u in enumerate(centres):
        dist = {u: 0}
        frontier = [u]
        for d in range(1, girth):
            nxt = []
            for a in frontier:
                for b in g.adj[a]:
                    if b not in dist:
                        dist[b] = d
                        nxt.append(b)
            frontier = nxt
        for v in centres[i + 1:]:
            if v in dist and g.closed_mask(u) != g.closed_mask(v):
                return f"vertices {u} and {v} are too close"
    return None


@dataclass(frozen=True)
class Crown:
    """Variable-gadget building block with colour classes ``f0, f1, f2``.

    ``ports`` lists the vertices of ``f0`` that chains are attached to: the
    occurrence vertex first, then the links to the previous and next block.
    """

    graph: Graph
    f0: tuple[int, ...]
    f1: tuple[int, ...]
    f2: tuple[int, ...]

    @property
    def ports(self) -> tuple[int, int, int]:
        return self.f0[0], self.f0[1], self.f0[2]


def _all_homs(g: Graph, t: Target) -> Iterable[tuple[int, ...]]:
    edges = g.edges()
    for m in itertools.product(t.colors, repeat=g.n):
        if all(t.adjacent(m[u], m[v]) for u, v in edges):
            yield m


def crown_violation(c: Crown, k: int) -> Optional[str]:
    """Check the contract a crown has to satisfy for ``W_k``."""
    g = c.graph
    classes = (c.f0, c.f1, c.f2)
    if sorted(itertools.chain(*classes)) != list(range(g.n)):
        return "classes do not partition the vertices"
    if any(not g.is_independent(cl) for cl in classes):
        return "a class is not independent"
    if len(c.f0) < 3:
        return "fewer than three ports"
    for p in c.ports:
        # a port gains two adjacent chain neighbours
        if g.degree(p) > 2 or not g.is_clique(g.adj[p]):
            return f"port {p} cannot take a chain"
    if xg_violation(g, 1) is not None:
        return "crown itself violates the degree or K_{1,4} bounds"
    centres = [v for v in range(g.n) if g.degree(v) >= 3 and _independent_neighbours(g, v, 3)]
    if len({g.closed_mask(v) for v in centres}) > 1:
        return "claw centres with different closed neighbourhoods"
    t = wheel(k)
    for true_val in (True, False):
        col = {v: (0 if true_val else 1) for v in c.f0}
        col.update({v: (1 if true_val else 0) for v in c.f1})
        col.update({v: 2 for v in c.f2})
        if any(not t.adjacent(col[u], col[v]) for u, v in g.edges()):
            return "intended colouring is not a homomorphism"
    for m in _all_homs(g, t):
        zeros = [m[v] == 0 for v in c.f0]
        if any(zeros) and not all(zeros):
            return "a homomorphism maps only part of f0 to the hub"
    return None


def synthesize_crown(k: int = 5, max_n: int = 6) -> Optional[Crown]:
    """Smallest crown found by exhaustive search (graphs in enumeration order)."""
    from .graph import enumerate_connected_graphs

    for n in range(3, max_n + 1):
        for g in enumerate_connected_graphs(n, lambda h: h.max_degree() <= 4):
            for cols in itertools.product(range(3), repeat=n):
                if any(cols[u] == cols[v] for u, v in g.edges()):
                    continue
                cl = [tuple(v for v in range(n) if cols[v] == i) for i in range(3)]
                c = Crown(g, *cl)
                if crown_violation(c, k) is None:
                    return c
    return None


def crown() -> Crown:
    """K_{1,1,3}: an edge ``0 1`` joined to three independent ports ``2, 3, 4``.

    This is what :func:`synthesize_crown` returns for W5 and W7; a port at
    hub colour forces the edge onto two adjacent rim colours, whose only
    common neighbour is the hub, so the other ports follow.
    """
    g = build_graph(5, [(0, 1)] + [(a, p) for a in (0, 1) for p in (2, 3, 4)])
    return Crown(g, (2, 3, 4), (0,), (1,))


class _Builder:
    def __init__(self):
        self.n = 0
        self.edges: list[tuple[int, int]] = []

    def fresh(self, count: int) -> list[int]:
        out = list(range(self.n, self.n + count))
        self.n += count
        return out

    def add_copy(self, g: Graph) -> list[int]:
        vs = self.fresh(g.n)
        self.edges += [(vs[a], vs[b]) for a, b in g.edges()]
        return vs

    def add_chain(self, a: int, b: int, l: int) -> None:
        local = {0: a, 3 * l: b}
        for j, v in zip(range(1, 3 * l), self.fresh(3 * l - 1)):
            local[j] = v
        self.edges += [(local[x], local[y]) for x, y in _chain_edges(l)]

    def graph(self) -> Graph:
        return build_graph(self.n, self.edges)


def xg_hardness_instance(f: CnfInstance, k: int = 5, girth: int = 3) -> Graph:
    """Graph in X_girth that is W_k-colourable iff ``f`` has an exactly-one assignment.

    ``f`` must be all-positive with every variable occurring at most 6 times.
    Each variable gets one crown per occurrence, consecutive crowns linked by
    chains of diamonds; each clause is a triangle whose vertices are joined by
    chains to the occurrence ports of its literals.  Chains have length
    ``max(girth, (k + 1) / 2)``.
    """
    if not f.positive:
        raise ValueError("formula must be all-positive")
    if max(f.occurrences(), default=0) > 6:
        raise ValueError("every variable may occur at most 6 times")
    if k < 5 or k % 2 == 0:
        raise ValueError("k must be odd and at least 5")
    if girth < 1:
        raise ValueError("girth parameter must be positive")
    l = max(girth, (k + 1) // 2)
    cr = crown()
    if crown_violation(cr, k) is not None:
        raise AssertionError(f"crown gadget is broken: {crown_violation(cr, k)}")
    occ_w, prev_link, next_link = cr.ports
    b = _Builder()
    ports: dict[int, list[int]] = {}
    for x, p in enumerate(f.occurrences()):
        blocks = [b.add_copy(cr.graph) for _ in range(p)]
        for left, right in zip(blocks, blocks[1:]):
            b.add_chain(left[next_link], right[prev_link], l)
        ports[x] = [blk[occ_w] for blk in blocks]
    used = {x: 0 for x in ports}
    for clause in f.clauses:
        tri = b.add_copy(complete_graph(3))
        for c, (x, _) in zip(tri, clause):
            b.add_chain(ports[x][used[x]], c, l)
            used[x] += 1
    g = b.graph()
    why = xg_violation(g, girth)
    if why is not None:
        raise AssertionError(f"gadget graph is not in X_g: {why}")
    return g


# random instances ------------------------------------------------------------

def random_s211_free_graph(
    n: int,
    rng: random.Random,
    k4_free: bool = True,
    copy_bias: float = 0.4,
    densities: Sequence[float] = (0.05, 0.1, 0.2),
) -> Graph:
    """Grow an S211-free graph one vertex at a time.

    Each new vertex proposes a neighbourhood, either a sparse random set or a
    perturbed copy of an existing closed or open neighbourhood (which keeps
    modules and twins common), and keeps it only if the graph stays S211-free
    and, by default, K4-free.  Rejected proposals are retried a bounded number
    of times before the vertex is added isolated.
    """
    edges: list[tuple[int, int]] = []
    adj: list[set[int]] = []
    for v in range(n):
        chosen: set[int] = set()
        for _ in range(60):
            if v and rng.random() < copy_bias:
                w = rng.randrange(v)
                nb = set(adj[w]) | ({w} if rng.random() < 0.5 else set())
                nb = {u for u in nb if rng.random() < 0.9}
            else:
                p = rng.choice(densities)
                nb = {u for u in range(v) if rng.random() < p}
            h = build_graph(v + 1, edges + [(u, v) for u in nb])
            if find_induced(h, Pattern.S211) is None and not (k4_free and find_k4(h) is not None):
                chosen = nb
                break
        edges += [(u, v) for u in sorted(chosen)]
        adj.append(set(chosen))
        for u in chosen:
            adj[u].add(v)
    return build_graph(n, edges)


def random_cnf(num_vars: int, num_clauses: int, rng: random.Random, positive: bool = False) -> CnfInstance:
    clauses = []
    for _ in range(num_clauses):
        clauses.append(tuple((rng.randrange(num_vars), positive or rng.random() < 0.5) for _ in range(3)))
    return CnfInstance(num_vars, tuple(clauses))
