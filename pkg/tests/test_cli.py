from __future__ import annotations

import json

import pytest

from wheelhom import io
from wheelhom.cli import main
from wheelhom.graph import complete_graph, cycle_graph
from wheelhom.hom import verify_map, wheel
from wheelhom.itte import ITTEInstance, verify_itte


@pytest.fixture
def files(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def test_solve_itte_oracle_on_k4(files, capsys):
    path = files("k4.itte", io.write_itte(ITTEInstance(complete_graph(4))))
    assert main(["solve", "itte", "--class", "oracle", path]) == 1
    assert "answer: no" in capsys.readouterr().out


@pytest.mark.parametrize("cls", ["s211", "clawfree", "oracle", "treewidth"])
def test_solve_itte_witness_verifies(files, capsys, cls):
    inst = ITTEInstance(cycle_graph(5), x={0})
    path = files("c5.itte", io.write_itte(inst))
    assert main(["--json", "solve", "itte", "--class", cls, path]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["answer"] == "yes"
    assert verify_itte(inst, io.read_vertex_set(report["witness"]))


def test_solve_w5ext_and_verify_hom(files, capsys):
    g = cycle_graph(5)
    inst = files("c5.pre", io.write_precolored(g, {0: 1}))
    assert main(["--json", "solve", "w5ext", inst]) == 0
    report = json.loads(capsys.readouterr().out)
    col = io.read_partial_map(report["witness"])
    assert verify_map(g, wheel(5), col, {0: 1})
    graph = files("c5.txt", io.write_graph(g))
    m = files("c5.map", report["witness"])
    assert main(["verify", "hom", graph, m]) == 0
    bad = files("bad.map", io.write_partial_map({v: 1 for v in range(5)}))
    assert main(["verify", "hom", graph, bad]) == 1


def test_solve_w5ext_rejects_s211(files, capsys):
    from wheelhom.graph import subdivided_claw
    path = files("s.pre", io.write_precolored(subdivided_claw(2, 1, 1), {}))
    assert main(["solve", "w5ext", path]) == 2
    assert main(["solve", "w5ext", "--solver", "oracle", path]) == 0


def test_generate_chain(files, capsys, tmp_path):
    assert main(["generate", "chain", "--l", "3"]) == 0
    out = capsys.readouterr()
    g = io.read_graph(out.out)
    assert g.n == 10 and "answer: ok" in out.err
    target = tmp_path / "chain.txt"
    assert main(["generate", "chain", "--l", "3", "-o", str(target)]) == 0
    assert io.read_graph(target.read_text()).n == 10


def test_generate_other_kinds(files, capsys):
    assert main(["generate", "no-pm-cubic"]) == 0
    assert io.read_graph(capsys.readouterr().out).n == 16
    assert main(["generate", "q-ell", "--l", "1"]) == 0
    assert io.read_graph(capsys.readouterr().out).n == 24
    k4 = files("k4.txt", io.write_graph(complete_graph(4)))
    assert main(["generate", "s333", k4]) == 0
    g, pre = io.read_precolored(capsys.readouterr().out)
    assert g.n == 16 and len(pre) == 8
    cnf = files("f.cnf", "p 1in3 3 1\n1 -2 3 0\n")
    assert main(["generate", "pos1in3", cnf]) == 0
    pos_text = capsys.readouterr().out
    assert pos_text.startswith("p pos1in3 15 10")
    pos = files("g.cnf", pos_text)
    assert main(["generate", "xg", pos]) == 0
    assert io.read_graph(capsys.readouterr().out).max_degree() <= 4
    assert main(["--seed", "4", "generate", "random-s211", "--n", "12"]) == 0
    first = capsys.readouterr().out
    assert main(["--seed", "4", "generate", "random-s211", "--n", "12"]) == 0
    assert capsys.readouterr().out == first


def test_reduce_and_verify_itte(files, capsys):
    g = cycle_graph(5)
    path = files("c5.pre", io.write_precolored(g, {0: 1, 2: 2}))
    assert main(["reduce", "w5-to-itte", path]) == 0
    text = capsys.readouterr().out
    inst = io.read_itte(text)
    assert inst.y == {0, 2} and inst.x == {1}
    ipath = files("r.itte", text)
    sol = files("r.sol", io.write_vertex_set({1}))
    assert main(["verify", "itte", ipath, sol]) == 0
    assert main(["verify", "itte", ipath, files("bad.sol", "X: 0\n")]) == 1
    trivial = files("t.pre", io.write_precolored(g, {0: 1, 1: 3}))
    assert main(["reduce", "w5-to-itte", trivial]) == 1


def test_verify_strip(files, capsys):
    from wheelhom.clawfree import strip_of_line_graph
    g, s = strip_of_line_graph(complete_graph(4))
    gp = files("g.txt", io.write_graph(g))
    sp = files("s.txt", io.write_strip(s))
    assert main(["verify", "strip", gp, sp]) == 0
    assert main(["--json", "solve", "itte", "--class", "clawfree", "--strip", sp,
                 files("g.itte", io.write_itte(ITTEInstance(g)))]) == 0


def test_enumerate(capsys):
    assert main(["enumerate", "--n", "4", "--free", "k3"]) == 0
    out = capsys.readouterr()
    blocks = [io.read_graph(b) for b in out.out.split("\n\n")]
    assert len(blocks) == 3 and all(g.n == 4 for g in blocks) and "count: 3" in out.err


def test_errors_exit_2(files, capsys):
    assert main(["solve", "itte", "missing-file"]) == 2
    assert main(["solve", "itte", files("bad.itte", "3 1\n0 7\n")]) == 2
    assert "line 2" in capsys.readouterr().out
    assert main(["bogus"]) == 2
    assert main(["--threads", "0", "enumerate", "--n", "3"]) == 2
