import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from revram.gates import PAPER_GATES, builtin_gate
from revram.netlist import (
    NetlistBuilder,
    NetlistError,
    all_assignments,
    check_reversibility,
    delay,
    evaluate,
    garbage_count,
    metrics,
    netlist_from_gates,
    quantum_cost,
)
from revram.revfmt import NetlistParseError, parse, serialize
from revram.synth import RamConfig, build_decoder, build_dff, build_msdff_we, build_rram


def one_to_two():
    b = NetlistBuilder("dec1")
    s = b.input("s0")
    one = b.const("one", 1)
    b.gate("FG", s, one)
    b.primary(one, "d0")
    b.primary(s, "d1")
    return b.build()


def test_one_to_two_decoder():
    ev = evaluate(one_to_two(), {"s0": 1})
    assert ev.primary == {"d0": 0, "d1": 1}
    assert garbage_count(one_to_two()) == 0
    assert metrics(one_to_two()).as_dict() == {
        "gate_count": 1, "quantum_cost": 1, "delay": 1, "garbage": 0, "lines": 2, "constants": 1,
    }


def test_empty_netlist():
    net = netlist_from_gates(3, [])
    ev = evaluate(net, {"x0": 1, "x1": 0, "x2": 1})
    assert ev.terminal == (1, 0, 1)
    assert quantum_cost(net) == 0
    assert delay(net) == 0


def test_decoder_two_to_four_address_two():
    ev = evaluate(build_decoder(2), {"s0": 0, "s1": 1})
    assert [ev.primary[f"d{a}"] for a in range(4)] == [0, 0, 1, 0]


def test_decoder_metrics():
    d2, d3 = build_decoder(2), build_decoder(3)
    assert quantum_cost(d2) == 9 and delay(d2) == 9 and garbage_count(d2) == 1
    assert quantum_cost(d3) == 25


def test_single_fg_delay():
    assert delay(netlist_from_gates(2, [("FG", (0, 1))])) == 1


def test_delay_occupancy():
    # disjoint gates run in parallel, a shared line serialises them
    net = netlist_from_gates(4, [("FG", (0, 1)), ("FG", (2, 3))])
    assert delay(net) == 1
    net = netlist_from_gates(3, [("TG", (0, 1, 2)), ("FG", (0, 1))])
    assert delay(net) == 6
    assert delay(net, "unit") == 2
    with pytest.raises(ValueError):
        delay(net, "wire")


def test_msdff_metrics():
    for net in (build_msdff_we(False), build_msdff_we(True)):
        assert delay(net) == 17
        assert garbage_count(net) == 3


def test_evaluate_checks_inputs():
    with pytest.raises(NetlistError, match="missing s1"):
        evaluate(build_decoder(2), {"s0": 1})
    with pytest.raises(NetlistError, match="unexpected"):
        evaluate(build_decoder(1), {"s0": 1, "s9": 0})


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_decoders_reversible(n):
    verdict = check_reversibility(build_decoder(n))
    assert verdict.reversible
    assert verdict.free_lines == n


def test_decoder_free_inputs_distinct():
    before, after = all_assignments(build_decoder(2))
    assert len(before) == 4
    assert len({row.tobytes() for row in after}) == 4


def test_printed_mfrg1_not_reversible():
    net = netlist_from_gates(3, [("MFRG1_PRINTED", (0, 1, 2))])
    verdict = check_reversibility(net)
    assert not verdict
    assert verdict.collision == (0b100, 0b101)


def test_refuses_above_bound():
    net = netlist_from_gates(23, [])
    with pytest.raises(NetlistError, match="exhaustive bound"):
        check_reversibility(net)
    assert check_reversibility(netlist_from_gates(5, []), bound=5)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(PAPER_GATES), st.permutations(range(5))), max_size=12))
def test_random_paper_circuits_reversible(spec):
    gates = [(g, perm[: builtin_gate(g).width]) for g, perm in spec]
    assert check_reversibility(netlist_from_gates(5, gates), chunk=7)


def test_builder_validation():
    b = NetlistBuilder()
    b.input("a")
    with pytest.raises(NetlistError):
        b.input("a")
    b.input("b")
    b.primary("a")
    with pytest.raises(NetlistError, match="unclassified"):
        b.build()
    with pytest.raises(NetlistError):
        b.primary("a")


def test_gate_binding_validation():
    with pytest.raises(NetlistError, match="duplicate"):
        netlist_from_gates(3, [("TG", (0, 0, 1))])
    with pytest.raises(NetlistError, match="needs 3"):
        netlist_from_gates(3, [("TG", (0, 1))])
    with pytest.raises(NetlistError, match="out of range"):
        netlist_from_gates(3, [("FG", (0, 5))])


def test_unpaired_state_rejected():
    b = NetlistBuilder()
    q = b.state("q", "r0")
    b.primary(q)
    with pytest.raises(NetlistError, match="pair"):
        b.build()


# --- text format ------------------------------------------------------------

def _same(a, b):
    assert a.lines == b.lines
    assert a.outputs == b.outputs
    assert a.name == b.name
    assert [(g.gate.name, g.bindings) for g in a.gates] == [(g.gate.name, g.bindings) for g in b.gates]


def test_serialize_one_to_two():
    text = serialize(one_to_two())
    assert ".numvars 2" in text.splitlines()
    assert ".constants -1" in text.splitlines()
    assert "fg s0 one" in text.splitlines()
    assert ".feedback" not in text


@pytest.mark.parametrize(
    "net",
    [build_decoder(1), build_decoder(4), build_dff(), build_msdff_we(), build_msdff_we(True),
     build_rram(RamConfig(1, 1)), build_rram(RamConfig(2, 3, "functional"))],
    ids=lambda n: n.name,
)
def test_round_trip(net):
    text = serialize(net)
    back = parse(text)
    _same(back, net)
    assert serialize(back) == text


def test_parse_plain_file():
    text = """
    # a comment
    .version 2.0
    .numvars 3
    .variables a b c
    .constants --0
    .garbage -1-
    .begin
    t3 a b c   # toffoli
    .end
    """
    net = parse(text)
    assert net.lines[2].role == "constant_zero"
    assert net.outputs[1].role == "garbage"
    assert evaluate(net, {"a": 1, "b": 1}).terminal == (1, 1, 1)


@pytest.mark.parametrize(
    "text, match",
    [
        ("t3 a a b", "more than once"),
        ("t3 a b", "takes 3"),
        (".numvars 1\n.variables a\n.constants -\n.garbage -\n.begin\nzz a\n.end", "unknown gate"),
        (".numvars 1\n.variables a\n.constants -\n.garbage -\n.begin\nnot b\n.end", "unknown variable"),
        (".numvars 2\n.variables a\n.constants --\n.garbage --\n.begin\n.end", "expected 2"),
        (".numvars 1\n.variables a\n.constants x\n.garbage -\n.begin\n.end", "invalid characters"),
        (".numvars 1\n.variables a\n.constants -\n.garbage -\n.begin\nnot a", "missing .end"),
        (".numvars 1\n.variables a\n.garbage -\n.begin\n.end", "missing header directive .constants"),
        (".numvars 1\n.numvars 1", "duplicate directive"),
        (".bogus 1", "unknown or misplaced"),
        (".numvars 1\n.variables a\n.constants -\n.garbage -\n.begin\n.end\nnot a", "after .end"),
    ],
)
def test_parse_errors(text, match):
    with pytest.raises(NetlistParseError, match=match):
        parse(text)


def test_parse_error_position():
    with pytest.raises(NetlistParseError) as info:
        parse(".numvars 1\n.variables a\n.constants -\n.garbage -\n.begin\n\n  mf9 a\n.end")
    assert info.value.line == 7
    assert str(info.value).startswith("7:")


def test_batch_matches_single():
    net = build_rram(RamConfig(1, 2, "functional"))
    rng = np.random.default_rng(3)
    states = rng.integers(0, 2, (50, len(net.lines))).astype(np.uint8)
    batch = net.program.run_batch(states.copy())
    for row, out in zip(states, batch):
        assert net.program.run_single([int(x) for x in row]) == [int(x) for x in out]
