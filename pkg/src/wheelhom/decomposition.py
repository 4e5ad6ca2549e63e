"""Structural reductions for ITTE and the solver for S_{2,1,1}-free graphs.

Three tools are combined here:

* modular decomposition, which replaces a graph by its quotient over the
  maximal modules, carrying the side constraints along;
* clique cutsets, which split an instance into atoms glued along cliques of
  size at most three;
* tree decompositions, used by an exact dynamic programme whose state is the
  subset of a bag placed in the transversal.

:func:`solve_itte_s211` ties them together: modular reduction to prime or
complete graphs, branching on one vertex forced into the transversal, and a
second modular reduction whose prime pieces are claw-free.
"""

from __future__ import annotations

import enum
import heapq
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterator, Optional

from .graph import Graph, Pattern, bipartition, find_induced, find_k4, iter_bits, to_mask, triangles
from .itte import ITTEInstance, NoInstance, ITTEResult, eliminate_forced_out, lift, norm_edge

log = logging.getLogger(__name__)

Solution = Optional[frozenset]
AtomSolver = Callable[[ITTEInstance], Solution]


# modular decomposition ---------------------------------------------------

class ModuleType(enum.Enum):
    INDEPENDENT = "1"
    BIPARTITE_A = "2a"
    BIPARTITE_B = "2b"
    NON_BIPARTITE = "3"


@dataclass(frozen=True)
class ModulePartition:
    """Partition of ``V(G)`` into modules together with the quotient graph.

    ``blocks[i]`` is represented by vertex ``i`` of ``quotient``.  ``tags`` is
    filled in by :func:`type_modules` because the 2a/2b split depends on the
    constraints of an ITTE instance.
    """

    blocks: tuple[tuple[int, ...], ...]
    quotient: Graph
    tags: Optional[tuple[ModuleType, ...]] = None

    def block_of(self) -> dict[int, int]:
        return {v: i for i, blk in enumerate(self.blocks) for v in blk}


def _minimal_module(g: Graph, u: int, v: int, full: int) -> int:
    """Smallest module containing ``u`` and ``v``, as a bitmask."""
    nu = g.masks[u]
    inside = (1 << u) | (1 << v)
    todo = [v]
    while todo:
        w = todo.pop()
        # outside vertices that see exactly one of u, w split the set
        split = (g.masks[w] ^ nu) & ~inside & full
        split &= ~(1 << u) & ~(1 << w)
        if split:
            inside |= split
            if inside == full:
                return full
            todo.extend(iter_bits(split))
    return inside


def modular_partition(g: Graph) -> ModulePartition:
    """Maximal modules of a connected graph with at least two vertices.

    If the complement is disconnected the blocks are its components and the
    quotient is complete; otherwise the blocks are the maximal proper modules
    and the quotient is prime.
    """
    if g.n < 2:
        raise ValueError("modular partition needs at least two vertices")
    if not g.is_connected():
        raise ValueError("graph is disconnected; split it into components first")
    co = g.complement()
    co_comps = co.components()
    if len(co_comps) > 1:
        blocks = sorted(co_comps)
    else:
        full = (1 << g.n) - 1
        parent = list(range(g.n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u in range(g.n):
            for v in range(u + 1, g.n):
                if find(u) == find(v):
                    continue
                module = _minimal_module(g, u, v, full)
                if module != full:
                    for w in iter_bits(module):
                        parent[find(w)] = find(u)
        groups: dict[int, list[int]] = {}
        for v in range(g.n):
            groups.setdefault(find(v), []).append(v)
        blocks = sorted(groups.values())
    # blocks are sorted by their first vertex, so the representatives keep their order
    quotient = g.induced(b[0] for b in blocks)[0]
    return ModulePartition(tuple(tuple(b) for b in blocks), quotient)


def is_module(g: Graph, vertices) -> bool:
    mask = to_mask(vertices)
    for w in range(g.n):
        if mask >> w & 1:
            continue
        seen = g.masks[w] & mask
        if seen and seen != mask:
            return False
    return True


@dataclass(frozen=True)
class _Typing:
    tags: tuple[ModuleType, ...]
    # for type 2b blocks: the chosen side (one class per component of G[M])
    sides: dict[int, frozenset]
    conflict: bool


def type_modules(inst: ITTEInstance, mp: ModulePartition) -> _Typing:
    g = inst.g
    owner = mp.block_of()
    tags = []
    sides: dict[int, frozenset] = {}
    conflict = False
    for i, blk in enumerate(mp.blocks):
        mask = to_mask(blk)
        if all(not (g.masks[v] & mask) for v in blk):
            tags.append(ModuleType.INDEPENDENT)
            continue
        colouring = bipartition(g, blk)
        if colouring is None:
            tags.append(ModuleType.NON_BIPARTITE)
            if inst.x & set(blk):
                conflict = True
            continue
        # vertices that the chosen class must contain, per component
        required = set(inst.x & set(blk))
        for u, v in inst.e:
            if owner[u] == i and owner[v] != i:
                required.add(u)
            elif owner[v] == i and owner[u] != i:
                required.add(v)
        chosen: set[int] = set()
        is_b = True
        for comp in g.components(mask):
            need = {colouring[v] for v in comp if v in required}
            forced = {colouring[v] for v in comp if v in inst.x}
            if len(forced) > 1:
                conflict = True
            if len(need) > 1:
                is_b = False
            side = need.pop() if need else 0
            chosen.update(v for v in comp if colouring[v] == side)
        if is_b:
            tags.append(ModuleType.BIPARTITE_B)
            sides[i] = frozenset(chosen)
        else:
            tags.append(ModuleType.BIPARTITE_A)
    return _Typing(tuple(tags), sides, conflict)


def quotient_itte(inst: ITTEInstance, mp: ModulePartition) -> ITTEResult:
    """Equivalent instance on the quotient graph, or ``NoInstance``.

    ``inst`` must have an empty forced-out set.  A graph containing ``K4`` is
    rejected immediately since no transversal can be independent there.
    """
    if inst.y:
        raise ValueError("eliminate forced-out vertices before taking the quotient")
    if find_k4(inst.g) is not None:
        return NoInstance
    typing = type_modules(inst, mp)
    if typing.conflict:
        return NoInstance
    tags = typing.tags
    q = mp.quotient
    owner = mp.block_of()
    bad = {i for i, t in enumerate(tags) if t in (ModuleType.NON_BIPARTITE, ModuleType.BIPARTITE_A)}
    xq = set()
    for i, blk in enumerate(mp.blocks):
        if inst.x & set(blk) or any(j in bad for j in q.adj[i]):
            xq.add(i)
    eq = set()
    for u, v in inst.e:
        a, b = owner[u], owner[v]
        if a == b:
            xq.add(a)
        elif tags[a] is ModuleType.INDEPENDENT and tags[b] is ModuleType.INDEPENDENT:
            eq.add(norm_edge(a, b))
    for i, t in enumerate(tags):
        if t is ModuleType.BIPARTITE_B:
            for j in q.adj[i]:
                eq.add(norm_edge(i, j))
    return ITTEInstance(q, frozenset(xq), frozenset(), frozenset(eq))


def lift_quotient_solution(inst: ITTEInstance, mp: ModulePartition, qsol: Solution) -> Solution:
    """Expand a quotient solution into a solution of ``inst``."""
    if qsol is None:
        return None
    typing = type_modules(inst, mp)
    out: set[int] = set()
    for i in qsol:
        t = typing.tags[i]
        if t is ModuleType.INDEPENDENT:
            out.update(mp.blocks[i])
        elif t is ModuleType.BIPARTITE_B:
            out.update(typing.sides[i])
        else:
            raise AssertionError(f"quotient solution uses a module of type {t.value}")
    return frozenset(out)


# clique cutsets ----------------------------------------------------------

@dataclass(frozen=True)
class CliqueCutsetPartition:
    a: frozenset
    c: frozenset
    b: frozenset


def iter_cliques(g: Graph) -> Iterator[int]:
    """All non-empty cliques as bitmasks, each once."""

    def grow(clique: int, cand: int) -> Iterator[int]:
        for v in iter_bits(cand):
            new = clique | (1 << v)
            yield new
            yield from grow(new, cand & g.masks[v] & ~((2 << v) - 1))

    yield from grow(0, (1 << g.n) - 1)


def _component_masks(g: Graph, rest: int) -> Iterator[int]:
    while rest:
        comp = frontier = rest & -rest
        while frontier:
            nb = 0
            for v in iter_bits(frontier):
                nb |= g.masks[v]
            frontier = nb & rest & ~comp
            comp |= frontier
        rest &= ~comp
        yield comp


def _cutset_candidates(g: Graph) -> list[tuple[int, int]]:
    """Pairs ``(A, N(A))`` with ``A`` a component of ``G - C`` for a clique ``C``
    and something left outside ``A + N(A)``; masks, without duplicates."""
    full = (1 << g.n) - 1
    seen: set[tuple[int, int]] = set()
    for clique in iter_cliques(g):
        rest = full & ~clique
        if not rest:
            continue
        for a in _component_masks(g, rest):
            if a == rest:
                break
            nb = 0
            for v in iter_bits(a):
                nb |= g.masks[v]
            nb &= ~a
            if full & ~a & ~nb:
                seen.add((a, nb))
    return list(seen)


def _is_atom(g: Graph, mask: int) -> bool:
    sub, _ = g.induced(iter_bits(mask))
    return not _cutset_candidates(sub)


def clique_cutset_partition(g: Graph) -> Optional[CliqueCutsetPartition]:
    """A clique cutset partition ``(A, C, B)`` of a connected graph, or None for atoms.

    Candidates are components ``A`` of ``G - C`` over all cliques ``C``, with
    ``C`` shrunk to ``N(A)``.  The smallest cutset is preferred, then the
    smallest ``A``, subject to ``G[A + C]`` being an atom.  The candidate with
    the smallest ``A`` overall always qualifies (a clique cutset of
    ``G[A + C]`` would give a smaller candidate inside ``A``), so one is found
    whenever ``G`` is not an atom.
    """
    if g.n == 0:
        return None
    full = (1 << g.n) - 1
    cands = _cutset_candidates(g)
    if not cands:
        return None
    fallback = min(cands, key=lambda ac: (ac[0].bit_count(), ac[0], ac[1]))
    chosen = fallback
    for a, c in sorted(cands, key=lambda ac: (ac[1].bit_count(), ac[0].bit_count(), ac[0], ac[1])):
        if (a, c) == fallback or _is_atom(g, a | c):
            chosen = (a, c)
            break
    a, c = chosen
    return CliqueCutsetPartition(
        frozenset(iter_bits(a)), frozenset(iter_bits(c)), frozenset(iter_bits(full & ~a & ~c))
    )


def solve_itte_atoms(inst: ITTEInstance, atom_solver: AtomSolver) -> Solution:
    """Solve ``inst`` by clique-cutset recursion, calling ``atom_solver`` on atoms.

    The sub-instance for a candidate ``C'`` (empty or a single vertex of ``C``)
    forces ``C'`` in and the rest of ``C`` out, so that its answer is exactly
    "the A-side admits a solution meeting ``C`` in ``C'``".  Atoms handed to
    ``atom_solver`` carry in ``origin`` the labels of their vertices in
    ``inst``.
    """
    if inst.x & inst.y:
        return None
    comps = inst.g.components()
    if len(comps) == 1:
        return _atoms_connected(inst, atom_solver, tuple(range(inst.g.n)))
    out: set[int] = set()
    for comp in comps:
        sub = inst.restrict(comp)
        sol = lift(_atoms_connected(sub, atom_solver, sub.origin), sub)
        if sol is None:
            return None
        out |= sol
    return frozenset(out)


def _atoms_connected(inst: ITTEInstance, atom_solver: AtomSolver, labels: tuple[int, ...]) -> Solution:
    def call(sub: ITTEInstance, parent_labels: tuple[int, ...]) -> Solution:
        own = sub.origin if sub.origin is not None else tuple(range(sub.g.n))
        return atom_solver(sub.with_(origin=tuple(parent_labels[v] for v in own)))

    frames = []
    cur = inst
    while True:
        if cur.x & cur.y:
            sol = None
            break
        part = clique_cutset_partition(cur.g)
        if part is None:
            sol = call(cur.with_(origin=None), labels)
            break
        a, c, b = part.a, part.c, part.b
        if len(c) > 3 or len(cur.x & c) >= 2:
            sol = None
            break
        side: dict[frozenset, frozenset] = {}
        for pick in [frozenset()] + [frozenset([v]) for v in sorted(c - cur.y)]:
            sub = ITTEInstance(cur.g, (cur.x - c) | pick, cur.y | (c - pick), cur.e).restrict(a | c)
            found = lift(call(sub, labels), sub)
            if found is not None:
                side[pick] = found
        if not side:
            sol = None
            break
        x, e = set(cur.x), set(cur.e)
        if frozenset() not in side:
            if len(c) == 2:
                e.add(norm_edge(*c))
            elif len(c) == 1:
                x |= c
        c_out = {v for v in c if frozenset([v]) not in side}
        nxt = ITTEInstance(cur.g, frozenset(x), cur.y | c_out, frozenset(e)).restrict(b | c)
        frames.append((c, side, nxt))
        labels = tuple(labels[v] for v in nxt.origin)
        cur = nxt
    for c, side, nxt in reversed(frames):
        if sol is None:
            return None
        sol = lift(sol, nxt)
        sol = sol | side[sol & c]
    return sol


# tree decompositions -------------------------------------------------------

@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1


def _elimination_order(g: Graph) -> list[int]:
    adj = [set(a) for a in g.adj]
    alive = set(range(g.n))
    order = []
    if g.n <= 200:
        while alive:
            best = None
            for v in alive:
                nb = list(adj[v])
                fill = sum(
                    1 for i in range(len(nb)) for j in range(i + 1, len(nb)) if nb[j] not in adj[nb[i]]
                )
                key = (fill, len(nb), v)
                if best is None or key < best:
                    best = key
            v = best[2]
            _eliminate(adj, v)
            alive.discard(v)
            order.append(v)
        return order
    heap = [(len(adj[v]), v) for v in range(g.n)]
    heapq.heapify(heap)
    while heap:
        d, v = heapq.heappop(heap)
        if v not in alive or d != len(adj[v]):
            continue
        nb = list(adj[v])
        _eliminate(adj, v)
        alive.discard(v)
        order.append(v)
        for u in nb:
            heapq.heappush(heap, (len(adj[u]), u))
    return order


def _eliminate(adj: list[set[int]], v: int) -> None:
    nb = adj[v]
    for u in nb:
        adj[u].discard(v)
        adj[u] |= nb - {u}
    adj[v] = set()


def tree_decomposition(g: Graph, width_budget: Optional[int] = None) -> Optional[TreeDecomposition]:
    """Tree decomposition from a greedy elimination order.

    Min-fill is used up to 200 vertices, min-degree beyond.  Returns None when
    the decomposition found is wider than ``width_budget``.
    """
    if g.n == 0:
        return TreeDecomposition((), ())
    order = _elimination_order(g)
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in g.adj]
    bags = []
    parent = []
    for v in order:
        nb = adj[v]
        bags.append(frozenset(nb | {v}))
        parent.append(min((pos[u] for u in nb), default=-1))
        _eliminate(adj, v)
    width = max(len(b) for b in bags) - 1
    if width_budget is not None and width > width_budget:
        return None
    # drop bags contained in their parent
    n = len(bags)
    gone = [parent[i] >= 0 and bags[i] <= bags[parent[i]] for i in range(n)]

    def up(i: int) -> int:
        while i >= 0 and gone[i]:
            i = parent[i]
        return i

    kept = [i for i in range(n) if not gone[i]]
    index = {i: j for j, i in enumerate(kept)}
    edges = []
    roots = []
    for i in kept:
        p = up(parent[i])
        if p < 0:
            roots.append(index[i])
        else:
            edges.append((index[p], index[i]))
    for r1, r2 in zip(roots, roots[1:]):
        edges.append((r1, r2))
    return TreeDecomposition(tuple(bags[i] for i in kept), tuple(sorted(edges)))


def validate_tree_decomposition(g: Graph, td: TreeDecomposition) -> bool:
    nb = len(td.bags)
    if g.n == 0:
        return True
    if nb == 0 or len(td.edges) != nb - 1:
        return False
    tadj: list[list[int]] = [[] for _ in range(nb)]
    for a, b in td.edges:
        if not (0 <= a < nb and 0 <= b < nb) or a == b:
            return False
        tadj[a].append(b)
        tadj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        for j in tadj[stack.pop()]:
            if j not in seen:
                seen.add(j)
                stack.append(j)
    if len(seen) != nb:
        return False
    holders: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            if not 0 <= v < g.n:
                return False
            holders[v].append(i)
    for v in range(g.n):
        if not holders[v]:
            return False
        inside = set(holders[v])
        seen = {holders[v][0]}
        stack = [holders[v][0]]
        while stack:
            for j in tadj[stack.pop()]:
                if j in inside and j not in seen:
                    seen.add(j)
                    stack.append(j)
        if seen != inside:
            return False
    for u, v in g.edges():
        if not any(v in td.bags[i] for i in holders[u]):
            return False
    return True


def _independent_subsets(g: Graph, cand: list[int], base: int) -> Iterator[int]:
    """Independent sets ``base | S`` with ``S`` a subset of ``cand``."""

    def rec(i: int, chosen: int, blocked: int) -> Iterator[int]:
        if i == len(cand):
            yield chosen
            return
        yield from rec(i + 1, chosen, blocked)
        v = cand[i]
        if not blocked >> v & 1:
            yield from rec(i + 1, chosen | (1 << v), blocked | g.masks[v])

    blocked = 0
    for v in iter_bits(base):
        blocked |= g.masks[v]
    yield from rec(0, base, blocked)


def solve_itte_treewidth(inst: ITTEInstance, td: TreeDecomposition) -> Solution:
    """Exact dynamic programme over a tree decomposition.

    The state of a bag is the set of its vertices placed in the transversal.
    Each triangle and each required edge is checked at one bag containing it;
    neighbouring bags must agree on shared vertices.
    """
    g = inst.g
    if not validate_tree_decomposition(g, td):
        raise ValueError("invalid tree decomposition")
    if inst.x & inst.y or not g.is_independent(inst.x):
        return None
    if g.n == 0:
        return frozenset()
    bags = [to_mask(b) for b in td.bags]
    holders: list[list[int]] = [[] for _ in range(g.n)]
    for i, bag in enumerate(td.bags):
        for v in bag:
            holders[v].append(i)
    checks: list[list[int]] = [[] for _ in bags]
    constraints = [to_mask(t) for t in triangles(g)] + [to_mask(e) for e in inst.e]
    for c in constraints:
        v = (c & -c).bit_length() - 1
        node = next((i for i in holders[v] if bags[i] & c == c), None)
        if node is None:
            raise ValueError("a triangle is not contained in any bag")
        checks[node].append(c)

    tadj: list[list[int]] = [[] for _ in bags]
    for a, b in td.edges:
        tadj[a].append(b)
        tadj[b].append(a)
    order = [0]
    par = {0: -1}
    for i in order:
        for j in tadj[i]:
            if j not in par:
                par[j] = i
                order.append(j)
    kids: list[list[int]] = [[] for _ in bags]
    for i in order[1:]:
        kids[par[i]].append(i)

    xin, xout = to_mask(inst.x), to_mask(inst.y)
    # proj[i] maps the restriction to the parent's bag to one valid state of i
    proj: list[dict[int, int]] = [dict() for _ in bags]
    root_state = None
    for i in reversed(order):
        bag = bags[i]
        base = bag & xin
        cand = list(iter_bits(bag & ~xin & ~xout))
        shared = [(j, bag & bags[j]) for j in kids[i]]
        up = bags[par[i]] & bag if par[i] >= 0 else 0
        table = proj[i]
        for state in _independent_subsets(g, cand, base):
            if any(not state & c for c in checks[i]):
                continue
            if any((state & s) not in proj[j] for j, s in shared):
                continue
            if par[i] < 0:
                root_state = state
                break
            table.setdefault(state & up, state)
        if par[i] >= 0 and not table:
            return None
    if root_state is None:
        return None
    chosen = {0: root_state}
    result = root_state
    for i in order[1:]:
        state = proj[i][chosen[par[i]] & bags[i]]
        chosen[i] = state
        result |= state
    return frozenset(iter_bits(result))


# S_{2,1,1}-free graphs -----------------------------------------------------

def _branch_instance(inst: ITTEInstance, v: int) -> ITTEResult:
    """Instance on ``G - N[v]`` equivalent to forcing ``v`` into the transversal."""
    g = inst.g
    nbr = set(g.adj[v])
    if inst.x & nbr or v in inst.y:
        return NoInstance
    closed = nbr | {v}
    x = set(inst.x) - {v}
    e = set()
    for a, b in inst.e:
        if v in (a, b):
            continue
        ina, inb = a in nbr, b in nbr
        if ina and inb:
            return NoInstance
        if ina:
            x.add(b)
        elif inb:
            x.add(a)
        else:
            e.add((a, b))
    for tri in triangles(g):
        if v in tri:
            continue
        near = [w for w in tri if w in nbr]
        far = [w for w in tri if w not in nbr]
        if len(near) == 3:
            return NoInstance
        if len(near) == 2:
            x.add(far[0])
        elif len(near) == 1:
            e.add(norm_edge(*far))
    keep = [w for w in range(g.n) if w not in closed]
    return ITTEInstance(g, frozenset(x), inst.y - closed, frozenset(e)).restrict(keep)


def solve_itte_s211(
    inst: ITTEInstance,
    stats: Optional[Counter] = None,
    always_branch: bool = False,
) -> Solution:
    """Exact ITTE solver for S_{2,1,1}-free graphs.

    Prime quotients that happen to be claw-free go straight to the claw-free
    solver; the others are split by forcing one vertex into the transversal.
    ``always_branch`` disables the shortcut, which is useful for testing.
    """
    stats = stats if stats is not None else Counter()
    if inst.x & inst.y:
        return None
    if find_k4(inst.g) is not None:
        return None
    reduced = eliminate_forced_out(inst)
    if reduced is NoInstance:
        return None
    return lift(_solve_modular(reduced, True, always_branch, stats), reduced)


def _solve_modular(inst: ITTEInstance, branch: bool, always_branch: bool, stats: Counter) -> Solution:
    """``inst`` has no forced-out vertices; solve component by component."""
    out: set[int] = set()
    for comp in inst.g.components():
        sub = inst.restrict(comp)
        if sub.g.n == 1:
            # a lone vertex lies in no triangle and no edge
            sol: Solution = sub.x
        else:
            stats["modular"] += 1
            mp = modular_partition(sub.g)
            q = quotient_itte(sub, mp)
            if q is NoInstance:
                return None
            qsol = _solve_prime(q, branch, always_branch, stats)
            sol = lift_quotient_solution(sub, mp, qsol)
        sol = lift(sol, sub)
        if sol is None:
            return None
        out |= sol
    return frozenset(out)


def _solve_prime(inst: ITTEInstance, branch: bool, always_branch: bool, stats: Counter) -> Solution:
    from .clawfree import solve_itte_clawfree

    claw = find_induced(inst.g, Pattern.CLAW)
    if not branch:
        if claw is not None:
            raise AssertionError(f"prime graph met after branching contains a claw at {claw}")
        stats["clawfree"] += 1
        return solve_itte_clawfree(inst, stats=stats)
    if claw is None and not always_branch:
        stats["clawfree"] += 1
        return solve_itte_clawfree(inst, stats=stats)
    g = inst.g
    for v in sorted(range(g.n), key=lambda w: (g.degree(w), w)):
        stats["branch"] += 1
        sub = _branch_instance(inst, v)
        if sub is NoInstance:
            continue
        red = eliminate_forced_out(sub)
        if red is NoInstance:
            continue
        sol = lift(lift(_solve_modular(red, False, always_branch, stats), red), sub)
        if sol is not None:
            return sol | {v}
    return None
