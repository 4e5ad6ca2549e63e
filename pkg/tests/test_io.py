from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from wheelhom import io
from wheelhom.clawfree import strip_of_line_graph
from wheelhom.decomposition import tree_decomposition
from wheelhom.generators import CnfInstance, cubic_no_pm_graph, pos_1in3_transform, random_cnf
from wheelhom.graph import complete_graph, cycle_graph
from wheelhom.matching import MWMStarInstance

from _helpers import random_constraints, random_graph


@st.composite
def itte_instances(draw):
    rng = random.Random(draw(st.integers(0, 10**6)))
    g = random_graph(draw(st.integers(0, 10)), rng.random(), rng)
    return random_constraints(g, rng, px=0.2, py=0.2, pe=0.3)


def _round_trip(read, write, text):
    assert write(read(text)) == text


@settings(max_examples=80, deadline=None)
@given(itte_instances())
def test_graph_and_itte_round_trip(inst):
    _round_trip(io.read_graph, io.write_graph, io.write_graph(inst.g))
    text = io.write_itte(inst)
    _round_trip(io.read_itte, io.write_itte, text)
    assert io.read_itte(text) == inst


def test_graph_format():
    assert io.write_graph(complete_graph(3)) == "3 3\n0 1\n0 2\n1 2\n"
    g = io.read_graph("# comment\n3 2\n2 1\n\n0 1\n")
    assert g.edges() == ((0, 1), (1, 2))


@pytest.mark.parametrize("text,line", [
    ("3 2\n0 1\n", 3),
    ("3 1\n0 3\n", 2),
    ("3 1\n1 1\n", 2),
    ("3 2\n0 1\n1 0\n", 3),
    ("3 x\n", 1),
    ("2 1\n0 1\n0 1\n", 3),
])
def test_graph_errors_carry_line_numbers(text, line):
    with pytest.raises(io.FormatError) as err:
        io.read_graph(text)
    assert err.value.line == line


def test_partial_map_and_precoloured_round_trip():
    m = {3: 0, 0: 2, 1: 5}
    text = io.write_partial_map(m)
    assert text == "0 -> 2\n1 -> 5\n3 -> 0\n"
    assert io.read_partial_map(text) == m
    text = io.write_precolored(cycle_graph(4), {0: 1})
    _round_trip(lambda t: io.read_precolored(t), lambda gp: io.write_precolored(*gp), text)
    with pytest.raises(io.FormatError):
        io.read_partial_map("0 -> 1\n0 -> 2\n")
    with pytest.raises(io.FormatError):
        io.read_partial_map("0 = 1\n")


def test_itte_errors():
    with pytest.raises(io.FormatError) as err:
        io.read_itte("2 1\n0 1\nX':\n5\n")
    assert err.value.line == 4
    with pytest.raises(io.FormatError):
        io.read_itte("3 1\n0 1\nE':\n1 2\n")
    with pytest.raises(io.FormatError):
        io.read_itte("2 1\n0 1\n0\n")


def test_solution_round_trip():
    text = io.write_vertex_set({4, 1})
    assert text == "X: 1 4\n" and io.read_vertex_set(text) == {1, 4}
    assert io.read_vertex_set("X:\n") == frozenset()


def test_tree_decomposition_round_trip():
    td = tree_decomposition(cubic_no_pm_graph())
    text = io.write_tree_decomposition(td)
    _round_trip(io.read_tree_decomposition, io.write_tree_decomposition, text)
    back = io.read_tree_decomposition(text)
    assert back.width == td.width
    with pytest.raises(io.FormatError):
        io.read_tree_decomposition("b: 0 1\nt: 0 3\n")


def test_strip_round_trip():
    _, s = strip_of_line_graph(complete_graph(4))
    text = io.write_strip(s)
    _round_trip(io.read_strip, io.write_strip, text)
    assert "eta 0-1: 0" in text and "end 0-1 1: 0" in text
    with pytest.raises(io.FormatError):
        io.read_strip(io.write_graph(complete_graph(4)) + "eta 0-9: 1\n")


def test_mwm_round_trip():
    g = complete_graph(4)
    inst = MWMStarInstance(g, {0, 2}, {(0, 1): 3, (2, 3): 1}, 4)
    text = io.write_mwm_star(inst)
    _round_trip(io.read_mwm_star, io.write_mwm_star, text)
    back = io.read_mwm_star(text)
    assert back.cover == inst.cover and back.k == 4 and back.weight(1, 0) == 3
    with pytest.raises(io.FormatError):
        io.read_mwm_star(io.write_graph(g) + "U: 0\nw:\n0 1 -2\nk: 1\n")


def test_cnf_round_trip():
    rng = random.Random(1)
    for _ in range(30):
        f = random_cnf(rng.randint(1, 6), rng.randint(0, 6), rng)
        text = io.write_cnf(f)
        _round_trip(lambda t: io.read_cnf(t)[0], io.write_cnf, text)
    pos = pos_1in3_transform(CnfInstance(1, (((0, True),) * 3,)))
    text = io.write_cnf(pos)
    assert text.startswith("p pos1in3 5 4\n")
    assert io.read_cnf("c hello\n" + text) == (pos, "pos1in3")


@pytest.mark.parametrize("text", [
    "p 1in3 2 1\n1 2 0\n",
    "p 1in3 2 1\n1 2 3 0\n",
    "p pos1in3 2 1\n1 -2 2 0\n",
    "p 2in3 1 0\n",
    "p 1in3 2 2\n1 2 2 0\n",
])
def test_cnf_errors(text):
    with pytest.raises(io.FormatError):
        io.read_cnf(text)
