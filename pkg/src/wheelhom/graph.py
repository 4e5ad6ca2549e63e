"""Simple undirected graphs on dense integer vertices.

Adjacency is stored twice: as sorted neighbour tuples and as Python integer
bitmasks.  The bitmasks make subset tests, common-neighbourhood queries and
induced-pattern search cheap, which matters because almost every solver in the
package leans on them.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import deque
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


class Graph:
    """Immutable simple graph with vertices ``0..n-1``.

    Build instances with :func:`build_graph`; the constructor trusts its input.
    """

    __slots__ = ("n", "adj", "masks", "_edges")

    def __init__(self, n: int, masks: Sequence[int]):
        self.n = n
        self.masks = tuple(masks)
        self.adj = tuple(tuple(iter_bits(m)) for m in self.masks)
        self._edges: Optional[tuple[tuple[int, int], ...]] = None

    # basic queries -----------------------------------------------------
    @property
    def m(self) -> int:
        return len(self.edges())

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    def edges(self) -> tuple[tuple[int, int], ...]:
        if self._edges is None:
            self._edges = tuple(
                (u, v) for u in range(self.n) for v in self.adj[u] if u < v
            )
        return self._edges

    def closed_mask(self, v: int) -> int:
        return self.masks[v] | (1 << v)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        mask = to_mask(vertices)
        return all(not (self.masks[v] & mask) for v in iter_bits(mask))

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        mask = to_mask(vs)
        return all((self.masks[v] | (1 << v)) & mask == mask for v in vs)

    # derived graphs ----------------------------------------------------
    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Return ``(G[S], old)`` where ``old[i]`` is the original label of ``i``."""
        old = sorted(set(vertices))
        index = {v: i for i, v in enumerate(old)}
        masks = []
        for v in old:
            mask = 0
            for u in self.adj[v]:
                j = index.get(u)
                if j is not None:
                    mask |= 1 << j
            masks.append(mask)
        return Graph(len(old), masks), old

    def remove(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, [full & ~m & ~(1 << v) for v, m in enumerate(self.masks)])

    # connectivity ------------------------------------------------------
    def components(self, within: Optional[int] = None) -> list[list[int]]:
        """Connected components (sorted lists), optionally of the subgraph on mask ``within``."""
        remaining = ((1 << self.n) - 1) if within is None else within
        comps = []
        while remaining:
            start = remaining & -remaining
            comp = start
            frontier = start
            while frontier:
                nxt = 0
                for v in iter_bits(frontier):
                    nxt |= self.masks[v]
                nxt &= remaining & ~comp
                comp |= nxt
                frontier = nxt
            remaining &= ~comp
            comps.append(bits_to_list(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    # dunder ------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.masks == other.masks

    def __hash__(self) -> int:
        return hash((self.n, self.masks))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph, collapsing duplicate edges.

    Raises ``ValueError`` on loops or endpoints outside ``0..n-1``.
    """
    if n < 0:
        raise ValueError("vertex count must be non-negative")
    masks = [0] * n
    for e in edges:
        u, v = int(e[0]), int(e[1])
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) has an endpoint out of range 0..{n - 1}")
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return Graph(n, masks)


def disjoint_union(*graphs: Graph) -> Graph:
    edges = []
    offset = 0
    for g in graphs:
        edges.extend((u + offset, v + offset) for u, v in g.edges())
        offset += g.n
    return build_graph(offset, edges)


# named graphs ----------------------------------------------------------

def path_graph(n: int) -> Graph:
    return build_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return build_graph(n, itertools.combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    return build_graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def wheel_graph(k: int) -> Graph:
    """Hub 0 joined to the cycle 1..k."""
    spokes = [(0, i) for i in range(1, k + 1)]
    rim = [(i, i % k + 1) for i in range(1, k + 1)]
    return build_graph(k + 1, spokes + rim)


def subdivided_claw(a: int, b: int, c: int) -> Graph:
    """S_{a,b,c}: three paths of the given lengths glued at vertex 0."""
    edges = []
    nxt = 1
    for length in (a, b, c):
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return build_graph(nxt, edges)


class Pattern(enum.Enum):
    K3 = "K3"
    K4 = "K4"
    K14 = "K1,4"
    CLAW = "claw"
    S211 = "S211"
    S333 = "S333"

    def graph(self) -> Graph:
        return _PATTERN_GRAPHS[self]


_PATTERN_GRAPHS = {
    Pattern.K3: complete_graph(3),
    Pattern.K4: complete_graph(4),
    Pattern.K14: complete_bipartite(1, 4),
    Pattern.CLAW: subdivided_claw(1, 1, 1),
    Pattern.S211: subdivided_claw(2, 1, 1),
    Pattern.S333: subdivided_claw(3, 3, 3),
}

PatternLike = Union[Pattern, Graph]


# induced subgraphs -----------------------------------------------------

def _pattern_order(p: Graph) -> list[int]:
    # BFS from a max-degree vertex keeps later vertices attached to earlier ones.
    order: list[int] = []
    seen = 0
    for comp in sorted(p.components(), key=len, reverse=True):
        root = max(comp, key=p.degree)
        queue = deque([root])
        seen |= 1 << root
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in sorted(p.adj[v], key=lambda x: -p.degree(x)):
                if not seen >> u & 1:
                    seen |= 1 << u
                    queue.append(u)
    return order


def find_induced(g: Graph, p: PatternLike) -> Optional[tuple[int, ...]]:
    """Return vertices of ``g`` inducing a copy of ``p`` (in pattern order), or None."""
    pg = p.graph() if isinstance(p, Pattern) else p
    if pg.n > 12:
        raise ValueError("patterns are limited to 12 vertices")
    if pg.n == 0:
        return ()
    if pg.n > g.n:
        return None
    order = _pattern_order(pg)
    pos = {v: i for i, v in enumerate(order)}
    k = len(order)
    need_deg = [pg.degree(v) for v in order]
    earlier_adj = [[pos[u] < i and pg.has_edge(order[i], u) for u in order[:i]] for i in range(k)]
    candidates_by_deg = {}
    all_mask = (1 << g.n) - 1
    for d in set(need_deg):
        candidates_by_deg[d] = to_mask(v for v in range(g.n) if g.degree(v) >= d)
    image = [0] * k

    def extend(i: int, used: int) -> bool:
        if i == k:
            return True
        cand = candidates_by_deg[need_deg[i]] & ~used
        adj_flags = earlier_adj[i]
        for j in range(i):
            if adj_flags[j]:
                cand &= g.masks[image[j]]
            else:
                cand &= all_mask & ~g.masks[image[j]]
            if not cand:
                return False
        for v in iter_bits(cand):
            image[i] = v
            if extend(i + 1, used | (1 << v)):
                return True
        return False

    if not extend(0, 0):
        return None
    witness = [0] * k
    for i, pv in enumerate(order):
        witness[pv] = image[i]
    return tuple(witness)


def contains_induced(g: Graph, p: PatternLike) -> tuple[bool, Optional[tuple[int, ...]]]:
    """``(True, witness)`` if ``g`` has an induced copy of ``p``, else ``(False, None)``.

    The witness lists the image of pattern vertex ``i`` at position ``i``.
    """
    w = find_induced(g, p)
    return (w is not None, w)


def is_free_of(g: Graph, *patterns: PatternLike) -> bool:
    return all(find_induced(g, p) is None for p in patterns)


# triangles, girth, line graphs ----------------------------------------

def triangles(g: Graph) -> list[tuple[int, int, int]]:
    out = []
    for u in range(g.n):
        higher = g.masks[u] >> (u + 1) << (u + 1)
        for v in iter_bits(higher):
            for w in iter_bits(g.masks[v] & higher & ~((1 << (v + 1)) - 1)):
                out.append((u, v, w))
    return out


def has_triangle(g: Graph) -> bool:
    return any(g.masks[u] & g.masks[v] for u, v in g.edges())


def find_k4(g: Graph) -> Optional[tuple[int, int, int, int]]:
    for u, v, w in triangles(g):
        common = g.masks[u] & g.masks[v] & g.masks[w]
        if common:
            x = (common & -common).bit_length() - 1
            return tuple(sorted((u, v, w, x)))  # type: ignore[return-value]
    return None


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    for s in range(g.n):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            if 2 * dist[v] + 1 >= best:
                break
            for u in g.adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    parent[u] = v
                    queue.append(u)
                elif parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def _drop_true_twins(g: Graph) -> Graph:
    seen: set[int] = set()
    keep = []
    for v in range(g.n):
        closed = g.closed_mask(v)
        if closed not in seen:
            seen.add(closed)
            keep.append(v)
    return g.induced(keep)[0]


def longest_induced_cycle(g: Graph) -> int:
    """Length of a longest induced cycle (0 for forests).

    Two true twins never lie together on an induced cycle of length at least
    four and can replace each other on one, so one vertex per twin class is
    kept before the search.  The search grows induced paths from their
    smallest vertex.
    """
    best = 3 if has_triangle(g) else 0
    h = _drop_true_twins(g)
    masks = h.masks
    for s in range(h.n):
        above = ~((1 << (s + 1)) - 1)
        # stack entries: (last vertex, path mask, vertices adjacent to the path interior, length)
        stack = [(v, (1 << s) | (1 << v), 0, 2) for v in iter_bits(masks[s] & above)]
        while stack:
            last, path, blocked, length = stack.pop()
            for w in iter_bits(masks[last] & above & ~path & ~blocked):
                if masks[w] >> s & 1:
                    # closing the cycle; the second vertex must not see w
                    if length >= 3:
                        best = max(best, length + 1)
                    continue
                stack.append((w, path | (1 << w), blocked | masks[last], length + 1))
    return best


def line_graph(d: Graph) -> tuple[Graph, dict[tuple[int, int], int]]:
    """Line graph of ``d`` and the map from (sorted) edges of ``d`` to its vertices."""
    edges = d.edges()
    index = {e: i for i, e in enumerate(edges)}
    incident: list[list[int]] = [[] for _ in range(d.n)]
    for i, (u, v) in enumerate(edges):
        incident[u].append(i)
        incident[v].append(i)
    out = []
    for inc in incident:
        out.extend(itertools.combinations(inc, 2))
    return build_graph(len(edges), out), index


def bipartition(g: Graph, vertices: Optional[Iterable[int]] = None) -> Optional[dict[int, int]]:
    """2-colouring of the subgraph induced by ``vertices`` (default: all), or None."""
    vs = list(range(g.n)) if vertices is None else list(vertices)
    allowed = to_mask(vs)
    side: dict[int, int] = {}
    for s in vs:
        if s in side:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in iter_bits(g.masks[v] & allowed):
                if u not in side:
                    side[u] = 1 - side[v]
                    queue.append(u)
                elif side[u] == side[v]:
                    return None
    return side


# isomorphism-free enumeration -----------------------------------------

def _refined_cells(g: Graph) -> list[list[int]]:
    colour = [g.degree(v) for v in range(g.n)]
    while True:
        sig = [(colour[v], tuple(sorted(colour[u] for u in g.adj[v]))) for v in range(g.n)]
        ranks = {s: i for i, s in enumerate(sorted(set(sig)))}
        new = [ranks[s] for s in sig]
        if len(set(new)) == len(set(colour)):
            colour = new
            break
        colour = new
    cells: dict[int, list[int]] = {}
    for v in range(g.n):
        cells.setdefault(colour[v], []).append(v)
    return [cells[c] for c in sorted(cells)]


def canonical_form(g: Graph) -> tuple[int, int]:
    """Isomorphism invariant ``(n, code)`` that separates non-isomorphic graphs.

    ``code`` is the minimum upper-triangle adjacency bitstring over all vertex
    orderings that respect the (isomorphism-invariant) colour-refinement cells.
    """
    cells = _refined_cells(g)
    best = None
    n = g.n
    for parts in itertools.product(*(itertools.permutations(c) for c in cells)):
        order = [v for part in parts for v in part]
        code = 0
        for i in range(n):
            mi = g.masks[order[i]]
            for j in range(i + 1, n):
                code = (code << 1) | (mi >> order[j] & 1)
        if best is None or code < best:
            best = code
    return (n, best or 0)


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    if sorted(map(len, g.adj)) != sorted(map(len, h.adj)):
        return False
    return canonical_form(g) == canonical_form(h)


def enumerate_connected_graphs(
    n: int,
    filter: Optional[Callable[[Graph], bool]] = None,
    hereditary: bool = False,
) -> Iterator[Graph]:
    """One representative per isomorphism class of connected graphs on ``n`` vertices.

    Graphs are grown one vertex at a time (every connected graph has a vertex
    whose removal keeps it connected).  With ``hereditary=True`` the filter is
    also applied to the smaller graphs, which is only sound for filters closed
    under taking connected induced subgraphs, such as forbidden-pattern tests.
    """
    if n > 9:
        raise ValueError("enumeration is limited to n <= 9")
    if n <= 0:
        return
    level = {canonical_form(build_graph(1, [])): build_graph(1, [])}
    for size in range(2, n + 1):
        nxt: dict[tuple[int, int], Graph] = {}
        for h in level.values():
            base = list(h.edges())
            for nbrs in range(1, 1 << (size - 1)):
                g = build_graph(size, base + [(size - 1, u) for u in iter_bits(nbrs)])
                if hereditary and filter is not None and not filter(g):
                    continue
                key = canonical_form(g)
                if key not in nxt:
                    nxt[key] = g
        level = nxt
    for key in sorted(level):
        g = level[key]
        if filter is None or filter(g):
            yield g
