import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppadkit.circuit import (
    BitString,
    BooleanCircuit,
    CircuitError,
    NetlistError,
    evaluate,
    from_function_table,
    from_truth_table,
    function_table,
    parse_circuit,
    serialize_circuit,
)


def bs(text: str) -> BitString:
    return BitString.parse(text)


def test_bitstring_int_roundtrip():
    assert BitString.from_int(1, 4) == bs("0001")
    assert bs("1010").to_int() == 10
    assert str(BitString.from_int(6, 4)) == "0110"
    for v in range(16):
        assert BitString.from_int(v, 4).to_int() == v


def test_bitstring_rejects_bad_input():
    with pytest.raises(ValueError):
        BitString(())
    with pytest.raises(ValueError):
        BitString((0, 2))
    with pytest.raises(ValueError):
        BitString.from_int(4, 2)


def test_not_gate():
    c = BooleanCircuit(1, (("INPUT", 0), ("NOT", 0)), (1,))
    assert evaluate(c, bs("1")) == bs("0")
    assert evaluate(c, bs("0")) == bs("1")


def test_identity_circuit():
    c = BooleanCircuit(4, tuple(("INPUT", k) for k in range(4)), (0, 1, 2, 3))
    assert evaluate(c, bs("0110")) == bs("0110")


def test_two_bit_incrementer():
    # lsb' = lsb XOR 1, msb' = msb XOR lsb; oracle below enumerates all rows.
    c = BooleanCircuit(
        2,
        (("INPUT", 0), ("INPUT", 1), ("CONST", 1), ("XOR", 1, 2), ("XOR", 0, 1)),
        (4, 3),
    )
    assert evaluate(c, bs("01")) == bs("10")
    for v in range(4):
        got = evaluate(c, BitString.from_int(v, 2)).to_int()
        assert got == (v + 1) % 4


def test_evaluate_rejects_width_mismatch():
    c = BooleanCircuit(1, (("INPUT", 0), ("NOT", 0)), (1,))
    with pytest.raises(CircuitError):
        evaluate(c, bs("01"))


def test_construction_rejects_forward_reference():
    with pytest.raises(CircuitError):
        BooleanCircuit(1, (("INPUT", 0), ("NOT", 1)), (1,))
    with pytest.raises(CircuitError):
        BooleanCircuit(1, (("INPUT", 0), ("AND", 0, 5)), (1,))
    with pytest.raises(CircuitError):
        BooleanCircuit(1, (("INPUT", 0),), (3,))


def test_from_truth_table_not():
    c = from_truth_table({bs("0"): bs("1"), bs("1"): bs("0")})
    assert evaluate(c, bs("0")) == bs("1")
    assert evaluate(c, bs("1")) == bs("0")


def test_from_truth_table_identity_two_bits():
    table = {
        BitString.from_int(v, 2): BitString.from_int(v, 2) for v in range(4)
    }
    c = from_truth_table(table)
    assert evaluate(c, bs("10")) == bs("10")


def test_from_truth_table_three_bit_successor():
    # Successor map for the path 000 -> 001 -> 011 -> 111, others fixed.
    succ = {0: 1, 1: 3, 3: 7}
    table = {
        BitString.from_int(v, 3): BitString.from_int(succ.get(v, v), 3)
        for v in range(8)
    }
    c = from_truth_table(table)
    for v in range(8):
        assert evaluate(c, BitString.from_int(v, 3)).to_int() == succ.get(v, v)


def test_from_truth_table_rejects_inconsistent_widths():
    with pytest.raises(CircuitError):
        from_truth_table({bs("0"): bs("1"), bs("10"): bs("0")})
    with pytest.raises(CircuitError):
        from_truth_table({bs("0"): bs("1"), bs("1"): bs("00")})


@given(
    st.integers(min_value=1, max_value=6),
    st.integers(min_value=1, max_value=4),
    st.randoms(use_true_random=False),
)
@settings(max_examples=40, deadline=None)
def test_compiled_table_reproduces_function(in_w, out_w, rnd):
    table = [rnd.randrange(1 << out_w) for _ in range(1 << in_w)]
    c = from_function_table(table, in_w, out_w)
    got = function_table(c)
    assert list(got) == table
    # spot-check against single evaluation too
    x = rnd.randrange(1 << in_w)
    assert evaluate(c, BitString.from_int(x, in_w)).to_int() == table[x]


def test_compiled_table_width_12():
    rnd = random.Random(12)
    table = [rnd.randrange(1 << 12) for _ in range(1 << 12)]
    c = from_function_table(table, 12, 12)
    assert list(function_table(c)) == table


def test_parse_not_circuit():
    c = parse_circuit("INPUT\nNOT 0\nOUTPUTS 1\n")
    assert c.input_width == 1
    assert c.output_width == 1
    assert evaluate(c, bs("1")) == bs("0")


def test_parse_rejects_out_of_range_reference():
    with pytest.raises(NetlistError):
        parse_circuit("INPUT\nNOT 0\nAND 0 5\nOUTPUTS 2\n")


def test_parse_rejects_self_reference():
    with pytest.raises(NetlistError):
        parse_circuit("INPUT\nNOT 1\nOUTPUTS 1\n")


def test_parse_reports_line_numbers():
    with pytest.raises(NetlistError, match="line 3"):
        parse_circuit("INPUT\nNOT 0\nBOGUS 1\nOUTPUTS 1\n")


def test_parse_allows_comments_and_blank_lines():
    text = "# a comment\nINPUT\n\nNOT 0  # invert\nOUTPUTS 1\n"
    c = parse_circuit(text)
    assert evaluate(c, bs("0")) == bs("1")


def test_serialize_parse_roundtrip_is_canonical():
    rnd = random.Random(7)
    table = [rnd.randrange(4) for _ in range(8)]
    c = from_function_table(table, 3, 2)
    text = serialize_circuit(c)
    assert serialize_circuit(parse_circuit(text)) == text
    messy = "# header\n" + text.replace("\n", "\n\n")
    assert serialize_circuit(parse_circuit(messy)) == text


def test_roundtrip_preserves_semantics():
    rnd = random.Random(3)
    table = [rnd.randrange(16) for _ in range(16)]
    c = from_function_table(table, 4, 4)
    c2 = parse_circuit(serialize_circuit(c))
    assert list(function_table(c2)) == table
