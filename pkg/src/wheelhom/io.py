"""Plain-text instance formats.

Every format starts from the graph block (``n m`` then ``m`` lines ``u v``)
where it needs a graph.  Sections are introduced by a header line ending in
``:``.  Writers emit sorted, canonical text, so ``write(read(text)) == text``
for anything a writer produced.  Blank lines and lines starting with ``#``
are ignored by the readers (``c`` lines in CNF files).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .clawfree import StripStructure
from .decomposition import TreeDecomposition
from .generators import CnfInstance
from .graph import Graph, build_graph
from .itte import ITTEInstance, norm_edge
from .matching import MWMStarInstance


class FormatError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class _Lines:
    """Meaningful lines with their 1-based line numbers."""

    items: list[tuple[int, str]]
    pos: int = 0

    @classmethod
    def of(cls, text: str, comment: str = "#") -> "_Lines":
        items = []
        for i, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if line and not line.startswith(comment):
                items.append((i, line))
        return cls(items)

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self) -> tuple[int, str]:
        return self.items[self.pos]

    def next(self, what: str) -> tuple[int, str]:
        if self.done():
            last = self.items[-1][0] if self.items else 0
            raise FormatError(last + 1, f"unexpected end of input, expected {what}")
        self.pos += 1
        return self.items[self.pos - 1]

    def expect_end(self) -> None:
        if not self.done():
            no, line = self.peek()
            raise FormatError(no, f"unexpected content {line!r}")


def _ints(no: int, text: str, count: Optional[int] = None) -> list[int]:
    parts = text.split()
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise FormatError(no, f"expected integers, got {text!r}") from None
    if count is not None and len(values) != count:
        raise FormatError(no, f"expected {count} integers, got {len(values)}")
    return values


# graphs ---------------------------------------------------------------------

def _read_graph_block(lines: _Lines) -> Graph:
    no, head = lines.next("the header 'n m'")
    n, m = _ints(no, head, 2)
    if n < 0 or m < 0:
        raise FormatError(no, "vertex and edge counts must be non-negative")
    edges = []
    seen = set()
    for _ in range(m):
        no, line = lines.next("an edge line 'u v'")
        u, v = _ints(no, line, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(no, f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if u == v:
            raise FormatError(no, f"loop at vertex {u}")
        e = norm_edge(u, v)
        if e in seen:
            raise FormatError(no, f"duplicate edge ({u}, {v})")
        seen.add(e)
        edges.append(e)
    return build_graph(n, edges)


def _graph_lines(g: Graph) -> list[str]:
    return [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges()]


def read_graph(text: str) -> Graph:
    lines = _Lines.of(text)
    g = _read_graph_block(lines)
    lines.expect_end()
    return g


def write_graph(g: Graph) -> str:
    return "\n".join(_graph_lines(g)) + "\n"


# partial maps ---------------------------------------------------------------

def _parse_map_line(no: int, line: str) -> tuple[int, int]:
    if "->" not in line:
        raise FormatError(no, f"expected 'v -> c', got {line!r}")
    left, right = line.split("->", 1)
    (v,) = _ints(no, left, 1)
    (c,) = _ints(no, right, 1)
    return v, c


def _read_map_lines(lines: _Lines, stop_at_section: bool) -> dict[int, int]:
    out: dict[int, int] = {}
    while not lines.done():
        no, line = lines.peek()
        if stop_at_section and line.endswith(":"):
            break
        lines.next("a map line")
        v, c = _parse_map_line(no, line)
        if v in out:
            raise FormatError(no, f"vertex {v} assigned twice")
        out[v] = c
    return out


def read_partial_map(text: str) -> dict[int, int]:
    lines = _Lines.of(text)
    out = _read_map_lines(lines, False)
    return out


def _map_lines(m: Mapping[int, int]) -> list[str]:
    return [f"{v} -> {m[v]}" for v in sorted(m)]


def write_partial_map(m: Mapping[int, int]) -> str:
    return "".join(line + "\n" for line in _map_lines(m))


# precoloured instances -------------------------------------------------------

def read_precolored(text: str) -> tuple[Graph, dict[int, int]]:
    """Graph block, then an optional ``pre:`` section of ``v -> c`` lines."""
    lines = _Lines.of(text)
    g = _read_graph_block(lines)
    pre: dict[int, int] = {}
    if not lines.done():
        no, line = lines.next("'pre:'")
        if line != "pre:":
            raise FormatError(no, f"expected 'pre:', got {line!r}")
        pre = _read_map_lines(lines, False)
    for v in pre:
        if not 0 <= v < g.n:
            raise FormatError(0, f"precoloured vertex {v} out of range")
    return g, pre


def write_precolored(g: Graph, pre: Mapping[int, int]) -> str:
    return "\n".join(_graph_lines(g) + ["pre:"] + _map_lines(pre)) + "\n"


# ITTE ----------------------------------------------------------------------

_SECTIONS = ("X':", "Y':", "E':")


def read_itte(text: str) -> ITTEInstance:
    lines = _Lines.of(text)
    g = _read_graph_block(lines)
    parts: dict[str, list[tuple[int, list[int]]]] = {}
    current = None
    while not lines.done():
        no, line = lines.next("a section")
        if line in _SECTIONS:
            if line in parts:
                raise FormatError(no, f"section {line} given twice")
            current = line
            parts[current] = []
            continue
        if current is None:
            raise FormatError(no, f"expected one of {', '.join(_SECTIONS)}, got {line!r}")
        values = _ints(no, line, 2 if current == "E':" else 1)
        for v in values:
            if not 0 <= v < g.n:
                raise FormatError(no, f"vertex {v} out of range")
        if current == "E':" and not g.has_edge(*values):
            raise FormatError(no, f"E' pair ({values[0]}, {values[1]}) is not an edge")
        parts[current].append((no, values))
    x = frozenset(v[0] for _, v in parts.get("X':", []))
    y = frozenset(v[0] for _, v in parts.get("Y':", []))
    e = frozenset(norm_edge(*v) for _, v in parts.get("E':", []))
    return ITTEInstance(g, x, y, e)


def write_itte(inst: ITTEInstance) -> str:
    out = _graph_lines(inst.g)
    out.append("X':")
    out += [str(v) for v in sorted(inst.x)]
    out.append("Y':")
    out += [str(v) for v in sorted(inst.y)]
    out.append("E':")
    out += [f"{u} {v}" for u, v in sorted(inst.e)]
    return "\n".join(out) + "\n"


def read_vertex_set(text: str) -> frozenset:
    """A solution file: one line ``X: v1 v2 ...``."""
    lines = _Lines.of(text)
    no, line = lines.next("'X: ...'")
    if not line.startswith("X:"):
        raise FormatError(no, f"expected 'X: ...', got {line!r}")
    values = _ints(no, line[2:])
    lines.expect_end()
    return frozenset(values)


def write_vertex_set(xs: Iterable[int]) -> str:
    return " ".join(["X:"] + [str(v) for v in sorted(xs)]) + "\n"


# tree decompositions ---------------------------------------------------------

def read_tree_decomposition(text: str) -> TreeDecomposition:
    lines = _Lines.of(text)
    bags: list[frozenset] = []
    edges: list[tuple[int, int]] = []
    while not lines.done():
        no, line = lines.next("a bag or tree line")
        if line.startswith("b:"):
            if edges:
                raise FormatError(no, "bags must come before tree edges")
            bags.append(frozenset(_ints(no, line[2:])))
        elif line.startswith("t:"):
            a, b = _ints(no, line[2:], 2)
            if not (0 <= a < len(bags) and 0 <= b < len(bags)):
                raise FormatError(no, f"tree edge ({a}, {b}) refers to a missing bag")
            edges.append(norm_edge(a, b))
        else:
            raise FormatError(no, f"expected 'b:' or 't:', got {line!r}")
    return TreeDecomposition(tuple(bags), tuple(edges))


def write_tree_decomposition(td: TreeDecomposition) -> str:
    out = [" ".join(["b:"] + [str(v) for v in sorted(b)]) for b in td.bags]
    out += [f"t: {a} {b}" for a, b in sorted(norm_edge(*e) for e in td.edges)]
    return "".join(line + "\n" for line in out)


# strip structures ------------------------------------------------------------

def _parse_edge_token(no: int, token: str) -> tuple[int, int]:
    parts = token.split("-")
    if len(parts) != 2:
        raise FormatError(no, f"expected an edge 'x-y', got {token!r}")
    x, y = _ints(no, " ".join(parts), 2)
    return norm_edge(x, y)


def read_strip(text: str) -> StripStructure:
    """Pattern graph ``D``, then ``eta x-y: v ...`` and ``end x-y x: v ...`` lines."""
    lines = _Lines.of(text)
    d = _read_graph_block(lines)
    eta: dict[tuple[int, int], frozenset] = {}
    ends: dict[tuple[tuple[int, int], int], frozenset] = {}
    while not lines.done():
        no, line = lines.next("an 'eta' or 'end' line")
        if ":" not in line:
            raise FormatError(no, f"expected ':' in {line!r}")
        head, body = line.split(":", 1)
        words = head.split()
        vertices = frozenset(_ints(no, body))
        if words and words[0] == "eta" and len(words) == 2:
            e = _parse_edge_token(no, words[1])
            if not d.has_edge(*e):
                raise FormatError(no, f"{e} is not an edge of the pattern graph")
            if e in eta:
                raise FormatError(no, f"eta{e} given twice")
            eta[e] = vertices
        elif words and words[0] == "end" and len(words) == 3:
            e = _parse_edge_token(no, words[1])
            (x,) = _ints(no, words[2], 1)
            if x not in e:
                raise FormatError(no, f"{x} is not an end of {e}")
            ends[(e, x)] = vertices
        else:
            raise FormatError(no, f"expected 'eta x-y:' or 'end x-y x:', got {head!r}")
    return StripStructure(d, eta, ends)


def write_strip(s: StripStructure) -> str:
    out = _graph_lines(s.d)
    for e in sorted(s.eta):
        out.append(" ".join([f"eta {e[0]}-{e[1]}:"] + [str(v) for v in sorted(s.eta[e])]))
    for e, x in sorted(s.ends):
        out.append(" ".join([f"end {e[0]}-{e[1]} {x}:"] + [str(v) for v in sorted(s.ends[(e, x)])]))
    return "\n".join(out) + "\n"


# MWM* ------------------------------------------------------------------------

def read_mwm_star(text: str) -> MWMStarInstance:
    lines = _Lines.of(text)
    g = _read_graph_block(lines)
    no, line = lines.next("'U: ...'")
    if not line.startswith("U:"):
        raise FormatError(no, f"expected 'U: ...', got {line!r}")
    cover = _ints(no, line[2:])
    no, line = lines.next("'w:'")
    if line != "w:":
        raise FormatError(no, f"expected 'w:', got {line!r}")
    w: dict[tuple[int, int], int] = {}
    while True:
        no, line = lines.next("a weight line or 'k: ...'")
        if line.startswith("k:"):
            (k,) = _ints(no, line[2:], 1)
            break
        u, v, wt = _ints(no, line, 3)
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise FormatError(no, f"weight given for non-edge ({u}, {v})")
        if wt < 0:
            raise FormatError(no, "weights must be non-negative")
        w[norm_edge(u, v)] = wt
    lines.expect_end()
    try:
        return MWMStarInstance(g, frozenset(cover), w, k)
    except ValueError as exc:
        raise FormatError(no, str(exc)) from None


def write_mwm_star(inst: MWMStarInstance) -> str:
    out = _graph_lines(inst.g)
    out.append(" ".join(["U:"] + [str(v) for v in sorted(inst.cover)]))
    out.append("w:")
    out += [f"{u} {v} {inst.weight(u, v)}" for u, v in inst.g.edges()]
    out.append(f"k: {inst.k}")
    return "\n".join(out) + "\n"


# CNF -----------------------------------------------------------------------

CNF_KINDS = ("1in3", "pos1in3")


def read_cnf(text: str) -> tuple[CnfInstance, str]:
    """``p 1in3 V C`` (or ``pos1in3``), then clauses of three signed 1-based literals and 0."""
    lines = _Lines.of(text, comment="c")
    no, head = lines.next("the header 'p 1in3 V C'")
    words = head.split()
    if len(words) != 4 or words[0] != "p" or words[1] not in CNF_KINDS:
        raise FormatError(no, f"expected 'p 1in3 V C' or 'p pos1in3 V C', got {head!r}")
    kind = words[1]
    nv, nc = _ints(no, " ".join(words[2:]), 2)
    clauses = []
    for _ in range(nc):
        no, line = lines.next("a clause line")
        lits = _ints(no, line)
        if len(lits) != 4 or lits[-1] != 0:
            raise FormatError(no, "a clause is three non-zero literals followed by 0")
        clause = []
        for lit in lits[:3]:
            if lit == 0 or abs(lit) > nv:
                raise FormatError(no, f"literal {lit} out of range")
            if kind == "pos1in3" and lit < 0:
                raise FormatError(no, "negative literal in a pos1in3 file")
            clause.append((abs(lit) - 1, lit > 0))
        clauses.append(tuple(clause))
    lines.expect_end()
    return CnfInstance(nv, tuple(clauses)), kind


def write_cnf(f: CnfInstance, kind: Optional[str] = None) -> str:
    kind = kind or ("pos1in3" if f.positive else "1in3")
    if kind not in CNF_KINDS:
        raise ValueError(f"unknown CNF kind {kind!r}")
    out = [f"p {kind} {f.num_vars} {len(f.clauses)}"]
    for c in f.clauses:
        out.append(" ".join(str(v + 1 if p else -(v + 1)) for v, p in c) + " 0")
    return "\n".join(out) + "\n"
