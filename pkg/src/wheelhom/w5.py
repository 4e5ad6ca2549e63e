"""From W5-colouring extension to ITTE, and back.

Colours of ``C5`` are ``1..5``; the wheel ``W5`` adds the hub ``0``.  The
pieces here are the structure of connected {S211, K3}-free graphs, the
conflicted-pair test for partial ``C5`` colourings, a constructive extension
for conflict-free ones, and the reduction that turns a precoloured ``W5``
instance into an ITTE instance.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Union

from .graph import Graph, Pattern, bipartition, find_induced
from .hom import cycle, verify_map, wheel
from .itte import ITTEInstance, norm_edge

C5_COLORS = (1, 2, 3, 4, 5)


def c5_adjacent(a: int, b: int) -> bool:
    return (a - b) % 5 in (1, 4)


def w5_adjacent(a: int, b: int) -> bool:
    if a == 0 or b == 0:
        return a != b
    return c5_adjacent(a, b)


def _c5_automorphisms() -> list[dict[int, int]]:
    out = []
    for shift in range(5):
        for sign in (1, -1):
            out.append({c: (sign * (c - 1) + shift) % 5 + 1 for c in C5_COLORS})
    return out


C5_AUTOMORPHISMS = _c5_automorphisms()


# structure classification ------------------------------------------------

class StructureKind(enum.Enum):
    PATH = "path"
    LONG_CYCLE = "long-cycle"
    ALMOST_COMPLETE_BIPARTITE = "almost-complete-bipartite"
    NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class StructureClass:
    kind: StructureKind
    order: tuple[int, ...] = ()          # path or cycle vertex order
    classes: tuple[tuple[int, ...], tuple[int, ...]] = ((), ())
    missing: tuple[tuple[int, int], ...] = ()
    reason: str = ""
    witness: tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return len(self.order)


def _walk(g: Graph, start: int, nxt_limit: int) -> list[int]:
    order = [start]
    prev = -1
    cur = start
    while len(order) < nxt_limit:
        step = [u for u in g.adj[cur] if u != prev]
        if not step or step[0] == start:
            break
        prev, cur = cur, step[0]
        order.append(cur)
    return order


def classify_structure(g: Graph) -> StructureClass:
    """Classify a connected graph as a path, a cycle of length >= 5 or an
    almost complete bipartite graph; anything else is NOT_APPLICABLE."""
    if g.n == 0 or not g.is_connected():
        raise ValueError("classify_structure needs a connected non-empty graph")
    for pat, name in ((Pattern.K3, "contains K3"), (Pattern.S211, "contains S211")):
        w = find_induced(g, pat)
        if w is not None:
            return StructureClass(StructureKind.NOT_APPLICABLE, reason=name, witness=w)
    degs = [g.degree(v) for v in range(g.n)]
    if max(degs) <= 2 and g.m == g.n - 1:
        start = next(v for v in range(g.n) if degs[v] <= 1)
        return StructureClass(StructureKind.PATH, order=tuple(_walk(g, start, g.n)))
    if all(d == 2 for d in degs) and g.n >= 5:
        return StructureClass(StructureKind.LONG_CYCLE, order=tuple(_walk(g, 0, g.n)))
    side = bipartition(g)
    if side is not None:
        a = tuple(v for v in range(g.n) if side[v] == 0)
        b = tuple(v for v in range(g.n) if side[v] == 1)
        missing = tuple(norm_edge(u, v) for u in a for v in b if not g.has_edge(u, v))
        ends = [x for e in missing for x in e]
        if len(ends) == len(set(ends)):
            if len(a) > len(b) or (len(a) == len(b) and a > b):
                a, b = b, a
            return StructureClass(
                StructureKind.ALMOST_COMPLETE_BIPARTITE, classes=(a, b), missing=missing
            )
    return StructureClass(StructureKind.NOT_APPLICABLE, reason="unrecognised structure")


# conflicted pairs -------------------------------------------------------

@dataclass(frozen=True)
class ConflictWitness:
    pair: tuple[int, int]
    path: tuple[int, ...]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.path[1:-1]


def _pair_conflicts(a: int, b: int, length: int) -> bool:
    if length == 1:
        return not c5_adjacent(a, b)
    if length == 2:
        return c5_adjacent(a, b)
    return a == b


def conflicted_pairs(g: Graph, pre: Mapping[int, int]) -> list[ConflictWitness]:
    """Every conflict witness of a partial ``C5`` colouring, sorted."""
    out = []
    for u, v in g.edges():
        if u in pre and v in pre and _pair_conflicts(pre[u], pre[v], 1):
            out.append(ConflictWitness((u, v), (u, v)))
    for w in range(g.n):
        if w in pre:
            continue
        coloured = [u for u in g.adj[w] if u in pre]
        for u, v in itertools.combinations(coloured, 2):
            if _pair_conflicts(pre[u], pre[v], 2):
                out.append(ConflictWitness((u, v), (u, w, v)))
    for w1, w2 in g.edges():
        if w1 in pre or w2 in pre:
            continue
        for u in g.adj[w1]:
            if u not in pre or u == w2:
                continue
            for v in g.adj[w2]:
                if v not in pre or v == w1 or v == u:
                    continue
                if _pair_conflicts(pre[u], pre[v], 3):
                    path = (u, w1, w2, v) if u < v else (v, w2, w1, u)
                    out.append(ConflictWitness((path[0], path[-1]), path))
    return sorted(set(out), key=lambda c: (c.pair, len(c.path), c.path))


def is_conflict_free(g: Graph, pre: Mapping[int, int]) -> bool:
    return not conflicted_pairs(g, pre)


# constructive extension -----------------------------------------------------

def _extend_linear(order: list[int], closed: bool, col: dict[int, int]) -> None:
    """Extend a conflict-free colouring along a path or cycle in place."""
    n = len(order)
    if not any(v in col for v in order):
        col[order[0]] = 1
    if not closed:
        for end, step in ((0, 1), (n - 1, -1)):
            if order[end] in col:
                continue
            i = end
            while order[i] not in col:
                i += step
            d = abs(i - end)
            alpha = col[order[i]]
            col[order[end]] = min(
                c for c in C5_COLORS if d >= 4 or not _pair_conflicts(c, alpha, d)
            )
    while True:
        pos = [i for i in range(n) if order[i] in col]
        runs = []
        for j, i in enumerate(pos):
            if j + 1 < len(pos):
                nxt = pos[j + 1]
            elif closed:
                nxt = pos[0] + n
            else:
                break
            if nxt - i > 1:
                runs.append((i, nxt))
        if not runs:
            return
        i, j = max(runs, key=lambda r: r[1] - r[0])
        u, v = order[i % n], order[j % n]
        interior = [order[t % n] for t in range(i + 1, j)]
        alpha, beta = col[u], col[v]
        if len(interior) > 2:
            w = interior[-1]
            col[w] = min(c for c in C5_COLORS if c5_adjacent(c, beta) and c != alpha)
            continue
        for combo in itertools.product(C5_COLORS, repeat=len(interior)):
            seq = [alpha, *combo, beta]
            if all(c5_adjacent(seq[t], seq[t + 1]) for t in range(len(seq) - 1)):
                col.update(zip(interior, combo))
                break
        else:
            raise RuntimeError("conflict-free colouring did not extend along a path")


def _normaliser(a_cols: set[int], b_cols: set[int]) -> Optional[dict[int, int]]:
    for sigma in C5_AUTOMORPHISMS:
        if {sigma[c] for c in a_cols} <= {1, 3} and {sigma[c] for c in b_cols} <= {2, 4}:
            return sigma
    return None


def _extend_bipartite(g: Graph, sc: StructureClass, col: dict[int, int]) -> None:
    big_v, big_u = sc.classes
    # Subcase with two degree-1 vertices of U coloured by neighbouring colours.
    if len(big_v) == 2 and len(big_u) >= 3 and len(sc.missing) == 2:
        low = [x for x in big_u if g.degree(x) == 1]
        if len(low) == 2 and all(x in col for x in low) and c5_adjacent(col[low[0]], col[low[1]]):
            u, v = low
            a, b = col[u], col[v]
            forbid = {a, b} | {c for c in C5_COLORS if c5_adjacent(c, a) or c5_adjacent(c, b)}
            (x,) = [c for c in C5_COLORS if c not in forbid]
            (u_nb,) = g.adj[u]
            (v_nb,) = g.adj[v]
            for w in big_u:
                col.setdefault(w, x)
            col.setdefault(u_nb, next(c for c in C5_COLORS if c5_adjacent(c, a) and c5_adjacent(c, x)))
            col.setdefault(v_nb, next(c for c in C5_COLORS if c5_adjacent(c, b) and c5_adjacent(c, x)))
            return
    sigma = _normaliser({col[v] for v in big_v if v in col}, {col[u] for u in big_u if u in col})
    if sigma is None:
        raise RuntimeError("conflict-free colouring of a bipartite component could not be normalised")
    inverse = {b: a for a, b in sigma.items()}
    for v in big_v:
        col.setdefault(v, inverse[3])
    for u in big_u:
        col.setdefault(u, inverse[2])


def extend_c5(g: Graph, pre: Optional[Mapping[int, int]] = None) -> Optional[dict[int, int]]:
    """Extend a partial ``C5`` colouring of an {S211, K3}-free graph.

    Returns None exactly when some pair is conflicted.  Raises ``ValueError``
    if a component is not {S211, K3}-free.
    """
    pre = dict(pre or {})
    if any(c not in C5_COLORS for c in pre.values()):
        return None
    if conflicted_pairs(g, pre):
        return None
    col = dict(pre)
    for comp in g.components():
        sub, old = g.induced(comp)
        local = {i: col[v] for i, v in enumerate(old) if v in col}
        sc = classify_structure(sub)
        if sc.kind is StructureKind.NOT_APPLICABLE:
            raise ValueError(
                f"component is not {{S211,K3}}-free ({sc.reason}); witness {[old[i] for i in sc.witness]}"
            )
        if sc.kind is StructureKind.PATH:
            _extend_linear(list(sc.order), False, local)
        elif sc.kind is StructureKind.LONG_CYCLE:
            _extend_linear(list(sc.order), True, local)
        else:
            _extend_bipartite(sub, sc, local)
        for i, c in local.items():
            col[old[i]] = c
    if not verify_map(g, cycle(5), col, pre):
        raise RuntimeError("constructed C5 colouring failed verification")
    return col


# the reduction ---------------------------------------------------------

class _TrivialNo:
    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "TrivialNo"


TrivialNo = _TrivialNo()


def reduce_w5ext_to_itte(
    g: Graph, pre: Mapping[int, int], check: bool = False
) -> Union[ITTEInstance, _TrivialNo]:
    """ITTE instance equivalent to extending ``pre`` to a ``W5`` colouring."""
    if check and find_induced(g, Pattern.S211) is not None:
        raise ValueError("reduction needs an S211-free graph")
    if any(c not in range(6) for c in pre.values()):
        raise ValueError("W5 colours are 0..5")
    for u, v in g.edges():
        if u in pre and v in pre and not w5_adjacent(pre[u], pre[v]):
            return TrivialNo
    x = {v for v, c in pre.items() if c == 0}
    y = {v for v, c in pre.items() if c != 0}
    rim = {v: pre[v] for v in y}
    e = set()
    for wit in conflicted_pairs(g, rim):
        inner = wit.interior
        if len(inner) == 1:
            x.add(inner[0])
        elif len(inner) == 2:
            e.add(norm_edge(*inner))
    return ITTEInstance(g, frozenset(x), frozenset(y), frozenset(e))


def lift_solution(g: Graph, pre: Mapping[int, int], sol) -> dict[int, int]:
    """``W5`` colouring: the solution set goes to the hub, the rest via :func:`extend_c5`."""
    xs = set(sol)
    rest, old = g.remove(xs)
    idx = {v: i for i, v in enumerate(old)}
    local_pre = {idx[v]: c for v, c in pre.items() if v in idx and c != 0}
    ext = extend_c5(rest, local_pre)
    if ext is None:
        raise RuntimeError("lifted solution left a conflicted pair")
    col = {v: 0 for v in xs}
    col.update({old[i]: c for i, c in ext.items()})
    if not verify_map(g, wheel(5), col, pre):
        raise RuntimeError("lifted W5 colouring failed verification")
    return col


def solve_w5ext(
    g: Graph,
    pre: Optional[Mapping[int, int]] = None,
    itte_solver: Optional[Callable[[ITTEInstance], Optional[frozenset]]] = None,
) -> Optional[dict[int, int]]:
    """Decide ``W5`` colouring extension on an S211-free graph via ITTE."""
    if itte_solver is None:
        from .decomposition import solve_itte_s211 as itte_solver
    pre = dict(pre or {})
    inst = reduce_w5ext_to_itte(g, pre)
    if inst is TrivialNo:
        return None
    sol = itte_solver(inst)
    if sol is None:
        return None
    return lift_solution(g, pre, sol)
