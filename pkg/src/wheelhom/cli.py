"""Command-line front end.

Exit codes: 0 for a yes answer (or a successful generate/enumerate), 1 for
no, 2 for errors.  Reports are ``key: value`` lines, or a single JSON object
with ``--json``.  Commands that emit an instance write it to standard output
(or ``-o``) and then send the report to standard error.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

from . import io
from .clawfree import solve_itte_clawfree, validate_strip_structure
from .decomposition import (
    solve_itte_s211,
    solve_itte_treewidth,
    tree_decomposition,
    validate_tree_decomposition,
)
from .generators import (
    cubic_no_pm_graph,
    diamond_chain,
    build_Q_ell,
    minimal_obstruction_family,
    pos_1in3_transform,
    random_s211_free_graph,
    s333_hardness_instance,
    xg_hardness_instance,
)
from .graph import Pattern, complete_graph, enumerate_connected_graphs, find_induced, is_free_of
from .hom import cycle, solve_extension, verify_map, wheel
from .itte import solve_itte_oracle, verify_itte
from .w5 import TrivialNo, lift_solution, reduce_w5ext_to_itte

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

PATTERNS = {
    "k3": Pattern.K3,
    "k4": Pattern.K4,
    "claw": Pattern.CLAW,
    "k14": Pattern.K14,
    "s211": Pattern.S211,
    "s333": Pattern.S333,
}


class CliError(Exception):
    pass


@dataclass
class RunReport:
    answer: str
    witness: Optional[str] = None
    stats: dict[str, Any] = field(default_factory=dict)

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps({"answer": self.answer, "witness": self.witness, "stats": self.stats}, sort_keys=True) + "\n"
        out = [f"answer: {self.answer}"]
        for key in sorted(self.stats):
            out.append(f"{key}: {self.stats[key]}")
        if self.witness is not None:
            out.append("witness:")
            out.append(self.witness.rstrip("\n"))
        return "\n".join(out) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _target(name: str, k: int):
    if name == "wheel":
        return wheel(k)
    if name == "cycle":
        return cycle(k)
    raise CliError(f"unknown target {name!r}")


def _yes_no(found: bool) -> str:
    return "yes" if found else "no"


# solve ---------------------------------------------------------------------

def cmd_solve_w5ext(args) -> tuple[RunReport, Optional[str]]:
    g, pre = io.read_precolored(_read(args.file))
    stats: dict[str, Any] = {}
    if args.solver == "oracle":
        stats["path"] = "oracle"
        col = solve_extension(g, wheel(5), pre)
    else:
        witness = find_induced(g, Pattern.S211)
        if witness is not None:
            raise CliError(f"graph contains an induced S211 on {list(witness)}; use --solver oracle")
        inst = reduce_w5ext_to_itte(g, pre)
        counter: Counter = Counter()
        col = None
        if inst is TrivialNo:
            stats["path"] = "trivial-no"
        else:
            sol = solve_itte_s211(inst, counter)
            if sol is not None:
                col = lift_solution(g, pre, sol)
        stats.setdefault("path", ",".join(sorted(counter)) or "precheck")
        stats.update({f"calls_{k}": v for k, v in sorted(counter.items())})
    if col is not None and not verify_map(g, wheel(5), col, pre):
        raise AssertionError("refusing to emit an unverified colouring")
    witness = io.write_partial_map(col) if col is not None else None
    return RunReport(_yes_no(col is not None), witness, stats), None


def cmd_solve_itte(args) -> tuple[RunReport, Optional[str]]:
    inst = io.read_itte(_read(args.file))
    stats: dict[str, Any] = {"class": args.cls}
    counter: Counter = Counter()
    if args.cls == "oracle":
        sol = solve_itte_oracle(inst)
        counter["oracle"] += 1
    elif args.cls == "treewidth":
        if args.td:
            td = io.read_tree_decomposition(_read(args.td))
            if not validate_tree_decomposition(inst.g, td):
                raise CliError("tree decomposition is not valid for this graph")
        else:
            td = tree_decomposition(inst.g)
        stats["width"] = td.width
        counter["treewidth"] += 1
        sol = solve_itte_treewidth(inst, td)
    elif args.cls == "clawfree":
        claw = find_induced(inst.g, Pattern.CLAW)
        if claw is not None:
            raise CliError(f"graph contains an induced claw on {list(claw)}")
        strip = None
        if args.strip:
            strip = io.read_strip(_read(args.strip))
            ok, axiom = validate_strip_structure(inst.g, strip)
            if not ok:
                raise CliError(f"strip structure violates axiom {axiom}")
        sol = solve_itte_clawfree(inst, strip, counter)
    else:
        witness = find_induced(inst.g, Pattern.S211)
        if witness is not None:
            raise CliError(f"graph contains an induced S211 on {list(witness)}")
        sol = solve_itte_s211(inst, counter)
    stats["path"] = ",".join(sorted(counter)) or "precheck"
    stats.update({f"calls_{k}": v for k, v in sorted(counter.items())})
    if sol is not None and not verify_itte(inst, sol):
        raise AssertionError("refusing to emit an unverified transversal")
    witness = io.write_vertex_set(sol) if sol is not None else None
    return RunReport(_yes_no(sol is not None), witness, stats), None


# reduce ----------------------------------------------------------------------

def cmd_reduce(args) -> tuple[RunReport, Optional[str]]:
    g, pre = io.read_precolored(_read(args.file))
    inst = reduce_w5ext_to_itte(g, pre, check=True)
    if inst is TrivialNo:
        return RunReport("no", None, {"reason": "adjacent precoloured vertices with non-adjacent colours"}), None
    stats = {"x": len(inst.x), "y": len(inst.y), "e": len(inst.e)}
    return RunReport("ok", None, stats), io.write_itte(inst)


# generate ------------------------------------------------------------------

def cmd_generate(args) -> tuple[RunReport, Optional[str]]:
    kind = args.kind
    if kind in ("s333", "pos1in3", "xg") and not args.file:
        raise CliError(f"generate {kind} needs an input file")
    stats: dict[str, Any] = {"kind": kind}
    if kind == "chain":
        c = diamond_chain(args.l)
        stats.update(endpoints=f"{c.x1} {c.x2}")
        text = io.write_graph(c.graph)
    elif kind == "q-ell":
        q = io.read_graph(_read(args.file)) if args.file else complete_graph(4)
        text = io.write_graph(build_Q_ell(q, args.l))
    elif kind == "no-pm-cubic":
        text = io.write_graph(cubic_no_pm_graph())
    elif kind == "obstruction":
        family = minimal_obstruction_family(args.count, args.k)
        stats["sizes"] = " ".join(str(z.n) for z in family)
        text = "\n".join(io.write_graph(z) for z in family)
    elif kind == "s333":
        inst = s333_hardness_instance(io.read_graph(_read(args.file)), peel=not args.no_peel)
        stats["kept"] = len(inst.kept)
        text = io.write_precolored(inst.g, inst.pre)
    elif kind == "pos1in3":
        f, _ = io.read_cnf(_read(args.file))
        text = io.write_cnf(pos_1in3_transform(f), "pos1in3")
    elif kind == "xg":
        f, _ = io.read_cnf(_read(args.file))
        text = io.write_graph(xg_hardness_instance(f, args.k, args.girth))
    elif kind == "random-s211":
        rng = random.Random(args.seed)
        text = io.write_graph(random_s211_free_graph(args.n, rng))
        stats["seed"] = args.seed
    else:
        raise CliError(f"unknown generator {kind!r}")
    return RunReport("ok", None, stats), text


# verify ----------------------------------------------------------------------

def cmd_verify(args) -> tuple[RunReport, Optional[str]]:
    what = args.what
    if what == "hom":
        g = io.read_graph(_read(args.graph))
        m = io.read_partial_map(_read(args.witness))
        pre = io.read_partial_map(_read(args.pre)) if args.pre else {}
        ok = verify_map(g, _target(args.target, args.k), m, pre)
    elif what == "itte":
        inst = io.read_itte(_read(args.graph))
        ok = verify_itte(inst, io.read_vertex_set(_read(args.witness)))
    else:
        g = io.read_graph(_read(args.graph))
        ok, axiom = validate_strip_structure(g, io.read_strip(_read(args.witness)))
        if not ok:
            return RunReport("no", None, {"violated": axiom}), None
    return RunReport(_yes_no(ok)), None


# enumerate -----------------------------------------------------------------

def cmd_enumerate(args) -> tuple[RunReport, Optional[str]]:
    pats = []
    for name in args.free or []:
        if name not in PATTERNS:
            raise CliError(f"unknown pattern {name!r}; choose from {', '.join(PATTERNS)}")
        pats.append(PATTERNS[name])

    def keep(g):
        return is_free_of(g, *pats)

    graphs = list(enumerate_connected_graphs(args.n, keep if pats else None, hereditary=bool(pats)))
    return RunReport("ok", None, {"count": len(graphs)}), "\n".join(io.write_graph(g) for g in graphs)


# wiring ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wheelhom", description="Homomorphisms to odd wheels.")
    p.add_argument("--seed", type=int, default=0, help="seed for randomised instance generation")
    p.add_argument("--threads", type=int, default=1, help="upper bound on solver threads (solvers run single-threaded)")
    p.add_argument("--json", action="store_true", help="emit the report as one JSON object")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve").add_subparsers(dest="problem", required=True)
    s = solve.add_parser("w5ext", help="W5 colouring extension")
    s.add_argument("file")
    s.add_argument("--solver", choices=("s211", "oracle"), default="s211")
    s.set_defaults(func=cmd_solve_w5ext)
    s = solve.add_parser("itte", help="independent triangle transversal with side constraints")
    s.add_argument("file")
    s.add_argument("--class", dest="cls", choices=("s211", "clawfree", "oracle", "treewidth"), default="s211")
    s.add_argument("--strip", help="strip structure file (clawfree class)")
    s.add_argument("--td", help="tree decomposition file (treewidth class)")
    s.set_defaults(func=cmd_solve_itte)

    reduce = sub.add_parser("reduce").add_subparsers(dest="reduction", required=True)
    r = reduce.add_parser("w5-to-itte")
    r.add_argument("file")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_reduce)

    gen = sub.add_parser("generate")
    gen.add_argument(
        "kind",
        choices=("chain", "q-ell", "obstruction", "s333", "xg", "pos1in3", "no-pm-cubic", "random-s211"),
    )
    gen.add_argument("file", nargs="?", help="input graph (q-ell, s333) or CNF file (xg, pos1in3)")
    gen.add_argument("--l", type=int, default=1, help="chain length")
    gen.add_argument("--k", type=int, default=5, help="wheel size")
    gen.add_argument("--girth", type=int, default=3)
    gen.add_argument("--count", type=int, default=1)
    gen.add_argument("--n", type=int, default=20)
    gen.add_argument("--no-peel", action="store_true", help="s333: keep vertices of degree at most 2")
    gen.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_generate)

    ver = sub.add_parser("verify")
    ver.add_argument("what", choices=("hom", "itte", "strip"))
    ver.add_argument("graph", help="graph file (hom, strip) or ITTE instance (itte)")
    ver.add_argument("witness", help="map (hom), solution (itte) or strip structure (strip)")
    ver.add_argument("--target", choices=("wheel", "cycle"), default="wheel")
    ver.add_argument("--k", type=int, default=5)
    ver.add_argument("--pre", help="precolouring the map must extend")
    ver.set_defaults(func=cmd_verify)

    en = sub.add_parser("enumerate", help="connected graphs up to isomorphism")
    en.add_argument("--n", type=int, required=True)
    en.add_argument("--free", nargs="*", help=f"forbidden induced patterns: {', '.join(PATTERNS)}")
    en.add_argument("-o", "--output")
    en.set_defaults(func=cmd_enumerate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    start = time.perf_counter()
    try:
        report, instance = args.func(args)
    except (CliError, ValueError) as exc:
        report = RunReport("error", None, {"message": str(exc)})
        sys.stdout.write(report.render(args.json))
        return EXIT_ERROR
    report.stats["time_s"] = round(time.perf_counter() - start, 4)
    rendered = report.render(args.json)
    if instance is not None:
        out = getattr(args, "output", None)
        if out:
            Path(out).write_text(instance)
            sys.stdout.write(rendered)
        else:
            sys.stdout.write(instance)
            sys.stderr.write(rendered)
    else:
        sys.stdout.write(rendered)
    return EXIT_NO if report.answer == "no" else EXIT_YES


if __name__ == "__main__":
    sys.exit(main())
