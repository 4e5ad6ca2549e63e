"""Exact homomorphism search into small targets.

Wheels ``W_k`` use colours ``0..k`` with hub ``0``; cycles ``C_k`` use colours
``1..k`` so that a cycle colouring is literally the rim part of a wheel
colouring.  Internally every target vertex gets a dense index and lists are
bitmasks over those indices.
"""

from __future__ import annotations

import enum
import functools
import itertools
import sys
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .graph import Graph, bits_to_list, cycle_graph, iter_bits, to_mask, wheel_graph

PartialMap = dict[int, int]


class TargetKind(enum.Enum):
    WHEEL = "wheel"
    CYCLE = "cycle"
    ARBITRARY = "arbitrary"


@dataclass(frozen=True)
class Target:
    graph: Graph
    kind: TargetKind
    k: int
    colors: tuple[int, ...]
    index: Mapping[int, int] = field(compare=False, repr=False)

    def __str__(self) -> str:
        if self.kind is TargetKind.WHEEL:
            return f"W{self.k}"
        if self.kind is TargetKind.CYCLE:
            return f"C{self.k}"
        return f"H(n={self.graph.n})"

    def adjacent(self, a: int, b: int) -> bool:
        ia, ib = self.index.get(a), self.index.get(b)
        if ia is None or ib is None:
            return False
        return self.graph.has_edge(ia, ib)


def make_target(kind: str | TargetKind, k: int = 0, graph: Optional[Graph] = None) -> Target:
    """Construct ``Wheel(k)``, ``Cycle(k)`` or an arbitrary target graph."""
    kind = TargetKind(kind) if isinstance(kind, str) else kind
    if kind is TargetKind.WHEEL:
        if k < 5 or k % 2 == 0:
            raise ValueError(f"wheel targets need odd k >= 5, got {k}")
        g = wheel_graph(k)
        colors = tuple(range(k + 1))
    elif kind is TargetKind.CYCLE:
        if k < 3:
            raise ValueError(f"cycle targets need k >= 3, got {k}")
        g = cycle_graph(k)
        colors = tuple(range(1, k + 1))
    else:
        if graph is None:
            raise ValueError("arbitrary targets need a graph")
        g = graph
        k = graph.n
        colors = tuple(range(graph.n))
    return Target(g, kind, k, colors, {c: i for i, c in enumerate(colors)})


def wheel(k: int = 5) -> Target:
    return make_target(TargetKind.WHEEL, k)


def cycle(k: int = 5) -> Target:
    return make_target(TargetKind.CYCLE, k)


def _initial_domains(g: Graph, t: Target, pre: Mapping[int, int]) -> Optional[list[int]]:
    full = (1 << t.graph.n) - 1
    doms = [full] * g.n
    for v, c in pre.items():
        if not 0 <= v < g.n:
            raise ValueError(f"precoloured vertex {v} out of range")
        i = t.index.get(c)
        if i is None:
            return None
        doms[v] = 1 << i
    return doms


def _propagate_initial(g: Graph, t: Target, doms: list[int], fixed: Iterable[int]) -> bool:
    tm = t.graph.masks
    for v in fixed:
        (c,) = iter_bits(doms[v])
        for u in g.adj[v]:
            doms[u] &= tm[c]
            if not doms[u]:
                return False
    return True


_MISSING = object()


def _run_deep(fn: Callable, *args):
    """Run a deeply recursive ``fn`` on a thread with a large stack."""
    box: dict = {}

    def work():
        try:
            box["value"] = fn(*args)
        except BaseException as exc:  # re-raised on the calling thread
            box["error"] = exc

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, 200_000))
    threading.stack_size(512 * 1024 * 1024)
    try:
        worker = threading.Thread(target=work)
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if "error" in box:
        raise box["error"]
    return box["value"]


@functools.lru_cache(maxsize=32)
def _automorphisms(t_graph: Graph) -> tuple[tuple[int, ...], ...]:
    """All automorphisms of a small target, identity first."""
    n = t_graph.n
    if n > 9:
        return (tuple(range(n)),)
    edges = t_graph.edges()
    out = [
        p for p in itertools.permutations(range(n))
        if all(t_graph.has_edge(p[u], p[v]) for u, v in edges)
    ]
    return tuple(out)


class _Support(dict):
    def __init__(self, masks):
        super().__init__()
        self.masks = masks

    def __missing__(self, d: int) -> int:
        out = 0
        for c in iter_bits(d):
            out |= self.masks[c]
        self[d] = out
        return out


class _Search:
    """Backtracking with smallest-list-first and forward checking on edges.

    Once a vertex is assigned, the unassigned vertices of its component may
    fall apart; the pieces are solved independently.  A piece is determined by
    its vertex set and the lists of its vertices that assigned neighbours have
    touched, so results are memoised on exactly that key, taken up to
    automorphisms of the target.  Without this, a failure far away from the
    current chain of choices is rediscovered once per combination of
    irrelevant earlier choices.
    """

    def __init__(
        self,
        g: Graph,
        t: Target,
        doms: list[int],
        limit: Optional[int] = None,
        hint: Optional[list[int]] = None,
    ):
        self.g = g
        self.hint = hint
        self.tm = t.graph.masks
        self.full = (1 << t.graph.n) - 1
        # support[d]: colours adjacent to at least one colour of list d
        self.support = _Support(self.tm)
        if t.graph.n <= 12:
            self.support = [self.support[d] for d in range(self.full + 1)]
        self.doms = doms
        self.nodes = 0
        self.limit = limit
        self.cache: dict = {}
        autos = _automorphisms(t.graph)
        size = 1 << t.graph.n
        self.tables = [
            [sum(1 << p[i] for i in iter_bits(m)) for m in range(size)] for p in autos
        ]
        inverse = [tuple(sorted(range(len(p)), key=p.__getitem__)) for p in autos]
        # convert[a][b] maps colours of a piece solved under symmetry b to symmetry a
        self.convert = [[tuple(inv_a[p_b[c]] for c in range(len(p_b))) for p_b in autos] for inv_a in inverse]

    def solve(self, vertices: list[int]) -> Optional[dict[int, int]]:
        touched = 0
        for v in vertices:
            if self.doms[v] != self.full:
                touched |= 1 << v
        tree = _run_deep(self._solve, to_mask(vertices), list(self.doms), touched)
        if tree is None:
            return None
        assignment: dict[int, int] = {}
        stack: list = [(tree, None)]
        while stack:
            node, perm = stack.pop()
            if len(node) == 2:
                p, sub = node
                stack.append((sub, p if perm is None else tuple(perm[c] for c in p)))
                continue
            v, c, children = node
            assignment[v] = c if perm is None else perm[c]
            stack.extend((ch, perm) for ch in children)
        return assignment

    def _pieces(self, rest: int, v: int) -> list[int]:
        nb = self.g.masks[v] & rest
        if not rest:
            return []
        if nb & (nb - 1) == 0 or _connected_within(self.g, nb):
            return [rest]
        return _split(self.g, rest, nb)

    def _solve(self, s: int, doms: list[int], touched: int):
        front = bits_to_list(touched & s)
        lists = [doms[u] for u in front]
        if len(self.tables) > 1:
            images = [tuple([tab[d] for d in lists]) for tab in self.tables]
            canon = min(images)
            sym = images.index(canon)
        else:
            canon, sym = tuple(lists), 0
        key = (s, canon)
        hit = self.cache.get(key, _MISSING)
        if hit is not _MISSING:
            if hit is None:
                return None
            tree, sym_first = hit
            return tree if sym_first == sym else (self.convert[sym][sym_first], tree)
        self.nodes += 1
        if self.limit is not None and self.nodes > self.limit:
            raise TimeoutError("search node limit exceeded")
        if front:
            # smallest list first; among those, the one with fewest unassigned neighbours
            masks = self.g.masks
            v = front[min(range(len(front)), key=lambda i: (lists[i].bit_count(), (masks[front[i]] & s).bit_count()))]
        else:
            v = (s & -s).bit_length() - 1
        rest = s & ~(1 << v)
        nmask = self.g.masks[v] & rest
        pieces = sorted(self._pieces(rest, v), key=int.bit_count)
        found = None
        saved = doms[v]
        order = list(iter_bits(saved))
        if self.hint is not None and self.hint[v] in order:
            order.remove(self.hint[v])
            order.insert(0, self.hint[v])
        for c in order:
            doms[v] = 1 << c
            trail: list[tuple[int, int]] = []
            changed = self._propagate(v, rest, doms, trail)
            if changed is not None:
                inner = touched | nmask | changed
                children = []
                for piece in pieces:
                    sub = self._solve(piece, doms, inner)
                    if sub is None:
                        break
                    children.append(sub)
                else:
                    found = (v, c, children)
            for u, d in reversed(trail):
                doms[u] = d
            if found is not None:
                break
        doms[v] = saved
        self.cache[key] = None if found is None else (found, sym)
        return found

    def _propagate(self, v: int, within: int, doms: list[int], trail: list) -> Optional[int]:
        """Arc consistency inside ``within`` after ``v`` changed; None on a wipe-out.

        Returns the vertices whose lists shrank; old lists go on ``trail``.
        """
        masks = self.g.masks
        support = self.support
        changed = 0
        queue = [v]
        while queue:
            x = queue.pop()
            allowed = support[doms[x]]
            for u in iter_bits(masks[x] & within):
                d = doms[u]
                nd = d & allowed
                if nd != d:
                    trail.append((u, d))
                    doms[u] = nd
                    if not nd:
                        return None
                    changed |= 1 << u
                    queue.append(u)
        return changed

    def count(self, vertices: list[int]) -> int:
        return self._count(list(self.doms), set(vertices))

    def _count(self, doms: list[int], unassigned: set[int]) -> int:
        if not unassigned:
            return 1
        v = min(unassigned, key=lambda u: (doms[u].bit_count(), u))
        unassigned.discard(v)
        nbrs = [u for u in self.g.adj[v] if u in unassigned]
        total = 0
        if not nbrs:
            total = doms[v].bit_count() * self._count(doms, unassigned)
        else:
            for c in iter_bits(doms[v]):
                tmc = self.tm[c]
                new = list(doms)
                new[v] = 1 << c
                ok = True
                for u in nbrs:
                    new[u] &= tmc
                    if not new[u]:
                        ok = False
                        break
                if ok:
                    total += self._count(new, unassigned)
        unassigned.add(v)
        return total


def _split(g: Graph, rest: int, seeds: int) -> list[int]:
    """Components of ``rest`` that meet ``seeds``, plus the part reached by none.

    One breadth-first search per seed runs in lock step; searches merge when
    they meet, and the last one still growing is never expanded to the end.
    This keeps the cost near the size of the small pieces.
    """
    groups = [[1 << u, 1 << u] for u in iter_bits(seeds)]  # [seen, frontier]
    done: list[int] = []
    masks = g.masks
    while len(groups) > 1:
        for grp in groups:
            nxt = 0
            for u in iter_bits(grp[1]):
                nxt |= masks[u]
            grp[1] = nxt & rest & ~grp[0]
            grp[0] |= grp[1]
        merged: list[list[int]] = []
        for grp in groups:
            for other in merged:
                if other[0] & grp[0]:
                    other[0] |= grp[0]
                    other[1] |= grp[1]
                    break
            else:
                merged.append(grp)
        groups = []
        for grp in merged:
            (groups if grp[1] else done).append(grp)
        if not groups:
            break
    pieces = [grp[0] for grp in done]
    remaining = rest
    for p in pieces:
        remaining &= ~p
    if remaining:
        if groups:
            pieces.append(remaining)
        else:
            pieces.extend(to_mask(c) for c in g.components(remaining))
    return pieces


def _connected_within(g: Graph, mask: int) -> bool:
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        for u in iter_bits(frontier):
            nxt |= g.masks[u]
        frontier = nxt & mask & ~seen
        seen |= frontier
    return seen == mask


def solve_extension(
    g: Graph,
    t: Target,
    pre: Optional[Mapping[int, int]] = None,
    node_limit: Optional[int] = None,
    hint: Optional[Mapping[int, int]] = None,
) -> Optional[PartialMap]:
    """A homomorphism ``g -> t`` extending ``pre`` (colours as labels), or None.

    ``hint`` only changes the order in which colours are tried: a vertex
    tries its hinted colour first.  A colouring of a similar graph makes a
    good hint.
    """
    pre = dict(pre or {})
    doms = _initial_domains(g, t, pre)
    if doms is None:
        return None
    for u, v in g.edges():
        if u in pre and v in pre and not t.adjacent(pre[u], pre[v]):
            return None
    if not _propagate_initial(g, t, doms, pre):
        return None
    order = None
    if hint:
        order = [t.index.get(hint[v], -1) if v in hint else -1 for v in range(g.n)]
    search = _Search(g, t, doms, node_limit, order)
    result: dict[int, int] = {}
    for comp in g.components():
        part = search.solve(comp)
        if part is None:
            return None
        result.update(part)
    out = {v: t.colors[result[v]] for v in range(g.n)}
    if not verify_map(g, t, out, pre):
        raise AssertionError("search returned a map that is not a homomorphism")
    return out


def count_homs(g: Graph, t: Target) -> int:
    doms = [(1 << t.graph.n) - 1] * g.n
    search = _Search(g, t, doms)
    total = 1
    for comp in g.components():
        total *= search.count(comp)
        if total == 0:
            break
    return total


def verify_map(
    g: Graph,
    t: Target,
    m: Mapping[int, int],
    pre: Optional[Mapping[int, int]] = None,
) -> bool:
    """True iff ``m`` is total on ``g``, maps edges to edges and extends ``pre``."""
    if any(v not in m for v in range(g.n)):
        return False
    if any(m[v] not in t.index for v in range(g.n)):
        return False
    if pre and any(m.get(v) != c for v, c in pre.items()):
        return False
    return all(t.adjacent(m[u], m[v]) for u, v in g.edges())


def has_hom(g: Graph, t: Target) -> bool:
    return solve_extension(g, t) is not None


def minimize_obstruction_vertices(
    g: Graph,
    t: Target,
    colorable: Optional[Callable[[Graph], bool]] = None,
) -> list[int]:
    """Vertices of ``g`` kept by ascending-index deletion.

    The rule "delete the lowest-indexed vertex whose removal keeps the graph
    non-colourable, then restart" gives the same result as a single ascending
    pass: a vertex that was not deletable stays non-deletable after later
    deletions, because colourability is inherited by induced subgraphs.
    Components are cached, so a deletion inside a colourable component is
    accepted as soon as some other component is known to be an obstruction.
    """
    colorable = colorable or (lambda h: has_hom(h, t))
    cache: dict[tuple[int, ...], bool] = {}

    def comp_ok(vs: tuple[int, ...]) -> bool:
        if vs not in cache:
            cache[vs] = colorable(g.induced(vs)[0])
        return cache[vs]

    keep = set(range(g.n))
    comps = [tuple(c) for c in g.components()]
    if all(comp_ok(c) for c in comps):
        raise ValueError(f"input graph admits a homomorphism to {t}")
    for v in range(g.n):
        owner = next(c for c in comps if v in c)
        others_bad = any(not comp_ok(c) for c in comps if c is not owner)
        sub, old = g.induced(w for w in owner if w != v)
        pieces = [tuple(old[i] for i in comp) for comp in sub.components()]
        if others_bad or any(not comp_ok(p) for p in pieces):
            keep.discard(v)
            comps = [c for c in comps if c is not owner] + pieces
    return sorted(keep)


def minimize_obstruction(
    g: Graph,
    t: Target,
    colorable: Optional[Callable[[Graph], bool]] = None,
) -> Graph:
    """A minimal induced subgraph of ``g`` with no homomorphism to ``t``."""
    return g.induced(minimize_obstruction_vertices(g, t, colorable))[0]


def is_minimal_obstruction(g: Graph, t: Target) -> bool:
    """``g`` has no homomorphism to ``t`` but every one-vertex deletion has one.

    Each deletion is a full search; the colouring found for the previous
    deletion is passed on as a hint, which makes the searches nearly linear.
    """
    if has_hom(g, t):
        return False
    previous: dict[int, int] = {}
    for v in range(g.n):
        sub, old = g.remove([v])
        hint = {i: previous[w] for i, w in enumerate(old) if w in previous}
        found = solve_extension(sub, t, hint=hint)
        if found is None:
            return False
        previous = {old[i]: c for i, c in found.items()}
    return True
