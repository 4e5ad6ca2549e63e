"""Independent triangle transversals with side constraints (ITTE).

An instance is ``(G, X', Y', E')``.  A solution is an independent set ``X``
with ``X' <= X``, ``X`` disjoint from ``Y'``, every edge of ``E'`` meeting
``X`` and ``G - X`` triangle-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .graph import Graph, iter_bits, to_mask, triangles

Edge = tuple[int, int]
Solution = frozenset


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class _NoInstance:
    """Marker returned by reductions that have certified a no-instance."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NoInstance"


NoInstance = _NoInstance()


@dataclass(frozen=True)
class ITTEInstance:
    g: Graph
    x: frozenset = frozenset()
    y: frozenset = frozenset()
    e: frozenset = frozenset()
    # origin[i] is the label of vertex i in the instance this one was derived from
    origin: Optional[tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "x", frozenset(self.x))
        object.__setattr__(self, "y", frozenset(self.y))
        edges = frozenset(norm_edge(u, v) for u, v in self.e)
        object.__setattr__(self, "e", edges)
        n = self.g.n
        for v in self.x | self.y:
            if not 0 <= v < n:
                raise ValueError(f"constraint vertex {v} out of range")
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n) or not self.g.has_edge(u, v):
                raise ValueError(f"E' edge ({u}, {v}) is not an edge of the graph")

    def with_(self, **kw) -> "ITTEInstance":
        data = dict(g=self.g, x=self.x, y=self.y, e=self.e, origin=self.origin)
        data.update(kw)
        return ITTEInstance(**data)

    def restrict(self, vertices: Iterable[int], extra_y: Iterable[int] = ()) -> "ITTEInstance":
        """Induced sub-instance; constraints are intersected, labels recorded in ``origin``."""
        sub, old = self.g.induced(vertices)
        idx = {v: i for i, v in enumerate(old)}
        y = set(self.y) | set(extra_y)
        return ITTEInstance(
            sub,
            frozenset(idx[v] for v in self.x if v in idx),
            frozenset(idx[v] for v in y if v in idx),
            frozenset((idx[u], idx[v]) for u, v in self.e if u in idx and v in idx),
            tuple(old),
        )


ITTEResult = Union[ITTEInstance, _NoInstance]


def lift(sol: Optional[Iterable[int]], inst: ITTEInstance) -> Optional[frozenset]:
    """Translate a solution of ``inst`` to the labels of its parent instance."""
    if sol is None:
        return None
    if inst.origin is None:
        return frozenset(sol)
    return frozenset(inst.origin[v] for v in sol)


def verify_itte(inst: ITTEInstance, sol: Iterable[int]) -> bool:
    g = inst.g
    x = set(sol)
    if any(not 0 <= v < g.n for v in x):
        return False
    if not g.is_independent(x):
        return False
    if not inst.x <= x or inst.y & x:
        return False
    if any(u not in x and v not in x for u, v in inst.e):
        return False
    keep = ((1 << g.n) - 1) & ~to_mask(x)
    for u in iter_bits(keep):
        for v in iter_bits(g.masks[u] & keep):
            if v > u and g.masks[u] & g.masks[v] & keep:
                return False
    return True


# exact oracle ------------------------------------------------------------

class _Oracle:
    def __init__(self, inst: ITTEInstance):
        g = inst.g
        self.g = g
        self.tris = triangles(g)
        self.tri_of: list[list[int]] = [[] for _ in range(g.n)]
        for i, (a, b, c) in enumerate(self.tris):
            for v in (a, b, c):
                self.tri_of[v].append(i)
        self.edges = sorted(inst.e)
        self.e_of: list[list[int]] = [[] for _ in range(g.n)]
        for u, v in self.edges:
            self.e_of[u].append(v)
            self.e_of[v].append(u)
        self.nodes = 0

    def propagate(self, xin: int, xout: int, todo_in: list[int], todo_out: list[int]):
        g = self.g
        while todo_in or todo_out:
            if todo_in:
                v = todo_in.pop()
                bit = 1 << v
                if xin & bit:
                    continue
                if xout & bit or g.masks[v] & xin:
                    return None
                xin |= bit
                todo_out.extend(iter_bits(g.masks[v] & ~xout))
            else:
                v = todo_out.pop()
                bit = 1 << v
                if xout & bit:
                    continue
                if xin & bit:
                    return None
                xout |= bit
                for u in self.e_of[v]:
                    if xout >> u & 1:
                        return None
                    todo_in.append(u)
                for t in self.tri_of[v]:
                    a, b, c = self.tris[t]
                    others = [w for w in (a, b, c) if w != v]
                    o0 = xout >> others[0] & 1
                    o1 = xout >> others[1] & 1
                    if o0 and o1:
                        return None
                    if o0:
                        todo_in.append(others[1])
                    elif o1:
                        todo_in.append(others[0])
        return xin, xout

    def pick(self, xin: int, xout: int) -> Optional[list[int]]:
        best = None
        for a, b, c in self.tris:
            if (xin >> a | xin >> b | xin >> c) & 1:
                continue
            free = [w for w in (a, b, c) if not xout >> w & 1]
            if best is None or len(free) < len(best):
                best = free
                if len(best) <= 1:
                    return best
        for u, v in self.edges:
            if (xin >> u | xin >> v) & 1:
                continue
            free = [w for w in (u, v) if not xout >> w & 1]
            if best is None or len(free) < len(best):
                best = free
        return best

    def search(self, xin: int, xout: int) -> Optional[int]:
        self.nodes += 1
        choice = self.pick(xin, xout)
        if choice is None:
            return xin
        for i, v in enumerate(choice):
            state = self.propagate(xin, xout, [v], list(choice[:i]))
            if state is not None:
                found = self.search(*state)
                if found is not None:
                    return found
        return None


def solve_itte_oracle(inst: ITTEInstance) -> Optional[frozenset]:
    """Exact solver by branching on unhit triangles and E' edges."""
    if inst.x & inst.y:
        return None
    oracle = _Oracle(inst)
    state = oracle.propagate(0, 0, list(inst.x), list(inst.y))
    if state is None:
        return None
    found = oracle.search(*state)
    return None if found is None else frozenset(iter_bits(found))


def solve_itte_bruteforce(inst: ITTEInstance) -> Optional[frozenset]:
    """Subset enumeration; only for small graphs."""
    n = inst.g.n
    if n > 20:
        raise ValueError("brute force is limited to 20 vertices")
    for mask in range(1 << n):
        x = frozenset(iter_bits(mask))
        if verify_itte(inst, x):
            return x
    return None


# forced-out elimination ----------------------------------------------------

def eliminate_forced_out(inst: ITTEInstance) -> ITTEResult:
    """Equivalent instance on ``G - Y'`` with empty ``Y'``, or ``NoInstance``.

    The result records in ``origin`` which vertex of ``inst`` each new vertex
    is (``None`` when nothing was removed).
    """
    if not inst.y:
        return inst.with_(origin=None)
    if inst.x & inst.y:
        return NoInstance
    y = inst.y
    x = set(inst.x)
    e = set()
    for u, v in inst.e:
        if u in y and v in y:
            return NoInstance
        if u in y:
            x.add(v)
        elif v in y:
            x.add(u)
        else:
            e.add((u, v))
    for tri in triangles(inst.g):
        inside = [w for w in tri if w in y]
        rest = [w for w in tri if w not in y]
        if len(inside) == 3:
            return NoInstance
        if len(inside) == 2:
            x.add(rest[0])
        elif len(inside) == 1:
            e.add(norm_edge(*rest))
    keep = [v for v in range(inst.g.n) if v not in y]
    tmp = ITTEInstance(inst.g, frozenset(x), frozenset(), frozenset(e))
    return tmp.restrict(keep)
