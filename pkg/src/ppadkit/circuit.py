"""Boolean circuits over {INPUT, CONST, NOT, AND, OR, XOR}.

Circuits are immutable gate lists in topological order; they are the
compact representation behind every exponential-size object in this
package (successor/predecessor maps, grid colourings).  Gate operands
must point at strictly earlier gates, so evaluation is a single forward
sweep and can never recurse.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

TRUTH_TABLE_MAX_BITS = 20

_UNARY = frozenset({"NOT"})
_BINARY = frozenset({"AND", "OR", "XOR"})


class CircuitError(ValueError):
    """Structurally invalid circuit (bad operand index, width mismatch...)."""


class NetlistError(ValueError):
    """Malformed netlist text; carries a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True)
class BitString:
    """Fixed-width bit vector; bits[0] is the most significant bit."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.bits) < 1:
            raise ValueError("BitString width must be >= 1")
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("BitString entries must be 0 or 1")

    @property
    def width(self) -> int:
        return len(self.bits)

    @classmethod
    def from_int(cls, value: int, width: int) -> "BitString":
        if not 0 <= value < (1 << width):
            raise ValueError(f"value {value} does not fit in {width} bits")
        return cls(tuple((value >> (width - 1 - k)) & 1 for k in range(width)))

    @classmethod
    def parse(cls, text: str) -> "BitString":
        if not text or any(c not in "01" for c in text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    def to_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


@dataclass(frozen=True)
class BooleanCircuit:
    """Acyclic gate list; ``nodes[i]`` may reference only indices < i.

    Node forms: ("INPUT", k), ("CONST", b), ("NOT", a), ("AND", a, b),
    ("OR", a, b), ("XOR", a, b).
    """

    input_width: int
    nodes: tuple[tuple, ...]
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.input_width < 1:
            raise CircuitError("input_width must be >= 1")
        if not self.outputs:
            raise CircuitError("circuit must declare at least one output")
        n_inputs = 0
        for idx, node in enumerate(self.nodes):
            op = node[0]
            if op == "INPUT":
                if node[1] != n_inputs:
                    raise CircuitError(
                        f"node {idx}: INPUT gates must appear in order"
                    )
                n_inputs += 1
            elif op == "CONST":
                if node[1] not in (0, 1):
                    raise CircuitError(f"node {idx}: CONST operand must be 0 or 1")
            elif op in _UNARY or op in _BINARY:
                for ref in node[1:]:
                    if not 0 <= ref < idx:
                        raise CircuitError(
                            f"node {idx}: operand {ref} is not an earlier node"
                        )
            else:
                raise CircuitError(f"node {idx}: unknown gate {op!r}")
        if n_inputs != self.input_width:
            raise CircuitError(
                f"{n_inputs} INPUT gates but input_width={self.input_width}"
            )
        for ref in self.outputs:
            if not 0 <= ref < len(self.nodes):
                raise CircuitError(f"output index {ref} out of range")

    @property
    def output_width(self) -> int:
        return len(self.outputs)

    @cached_property
    def _input_positions(self) -> tuple[int, ...]:
        return tuple(i for i, node in enumerate(self.nodes) if node[0] == "INPUT")


def evaluate(circuit: BooleanCircuit, inp: BitString) -> BitString:
    """Run the circuit on one input; pure and deterministic."""
    if inp.width != circuit.input_width:
        raise CircuitError(
            f"input width {inp.width} != circuit input width {circuit.input_width}"
        )
    values = [0] * len(circuit.nodes)
    bits = inp.bits
    for idx, node in enumerate(circuit.nodes):
        op = node[0]
        if op == "INPUT":
            values[idx] = bits[node[1]]
        elif op == "CONST":
            values[idx] = node[1]
        elif op == "NOT":
            values[idx] = 1 - values[node[1]]
        elif op == "AND":
            values[idx] = values[node[1]] & values[node[2]]
        elif op == "OR":
            values[idx] = values[node[1]] | values[node[2]]
        else:  # XOR
            values[idx] = values[node[1]] ^ values[node[2]]
    return BitString(tuple(values[o] for o in circuit.outputs))


def _input_mask(input_width: int, k: int) -> int:
    # Bit x of the mask = bit k (MSB-first) of input index x.
    half = 1 << (input_width - 1 - k)
    mask = ((1 << half) - 1) << half
    width = 2 * half
    total = 1 << input_width
    while width < total:
        mask |= mask << width
        width *= 2
    return mask


def output_columns(circuit: BooleanCircuit) -> list[int]:
    """Evaluate on all 2^input_width inputs at once, bit-parallel.

    Returns one big integer per output; bit x of column j is output bit j
    on input index x (MSB-first input encoding).  Intermediate node values
    are freed as soon as their last consumer has run, so peak memory stays
    proportional to the live frontier rather than the whole node list.
    """
    n = circuit.input_width
    size = 1 << n
    full = (1 << size) - 1
    last_use = [0] * len(circuit.nodes)
    for idx, node in enumerate(circuit.nodes):
        if node[0] in _UNARY or node[0] in _BINARY:
            for ref in node[1:]:
                last_use[ref] = idx
    keep = set(circuit.outputs)

    values: dict[int, int] = {}
    for idx, node in enumerate(circuit.nodes):
        op = node[0]
        if op == "INPUT":
            values[idx] = _input_mask(n, node[1])
        elif op == "CONST":
            values[idx] = full if node[1] else 0
        elif op == "NOT":
            values[idx] = values[node[1]] ^ full
        elif op == "AND":
            values[idx] = values[node[1]] & values[node[2]]
        elif op == "OR":
            values[idx] = values[node[1]] | values[node[2]]
        else:
            values[idx] = values[node[1]] ^ values[node[2]]
        if op in _UNARY or op in _BINARY:
            for ref in node[1:]:
                if last_use[ref] == idx and ref not in keep:
                    values.pop(ref, None)
    return [values[o] for o in circuit.outputs]


def function_table(circuit: BooleanCircuit) -> np.ndarray:
    """Full function table as an int64 array indexed by input value."""
    n = circuit.input_width
    size = 1 << n
    nbytes = (size + 7) // 8
    out = np.zeros(size, dtype=np.int64)
    for j, col in enumerate(output_columns(circuit)):
        raw = np.frombuffer(col.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[:size]
        out += bits.astype(np.int64) << (circuit.output_width - 1 - j)
    return out


class CircuitBuilder:
    """Incremental builder with hash-consing and constant folding."""

    def __init__(self, input_width: int):
        self.nodes: list[tuple] = [("INPUT", k) for k in range(input_width)]
        self._cache: dict[tuple, int] = {}
        self.inputs = list(range(input_width))

    def _intern(self, node: tuple) -> int:
        idx = self._cache.get(node)
        if idx is None:
            idx = len(self.nodes)
            self.nodes.append(node)
            self._cache[node] = idx
        return idx

    def _const_of(self, idx: int) -> int | None:
        node = self.nodes[idx]
        return node[1] if node[0] == "CONST" else None

    def const(self, bit: int) -> int:
        return self._intern(("CONST", bit))

    def not_(self, a: int) -> int:
        ca = self._const_of(a)
        if ca is not None:
            return self.const(1 - ca)
        node = self.nodes[a]
        if node[0] == "NOT":
            return node[1]
        return self._intern(("NOT", a))

    def and_(self, a: int, b: int) -> int:
        ca, cb = self._const_of(a), self._const_of(b)
        if ca == 0 or cb == 0:
            return self.const(0)
        if ca == 1:
            return b
        if cb == 1:
            return a
        if a == b:
            return a
        if a > b:
            a, b = b, a
        return self._intern(("AND", a, b))

    def or_(self, a: int, b: int) -> int:
        ca, cb = self._const_of(a), self._const_of(b)
        if ca == 1 or cb == 1:
            return self.const(1)
        if ca == 0:
            return b
        if cb == 0:
            return a
        if a == b:
            return a
        if a > b:
            a, b = b, a
        return self._intern(("OR", a, b))

    def xor(self, a: int, b: int) -> int:
        ca, cb = self._const_of(a), self._const_of(b)
        if ca is not None and cb is not None:
            return self.const(ca ^ cb)
        if ca == 0:
            return b
        if cb == 0:
            return a
        if ca == 1:
            return self.not_(b)
        if cb == 1:
            return self.not_(a)
        if a == b:
            return self.const(0)
        if a > b:
            a, b = b, a
        return self._intern(("XOR", a, b))

    def mux(self, sel: int, hi: int, lo: int) -> int:
        """hi when sel=1, lo when sel=0."""
        if hi == lo:
            return hi
        cs = self._const_of(sel)
        if cs is not None:
            return hi if cs else lo
        return self.or_(self.and_(sel, hi), self.and_(self.not_(sel), lo))

    def build(self, outputs: list[int]) -> BooleanCircuit:
        return BooleanCircuit(
            input_width=len(self.inputs),
            nodes=tuple(self.nodes),
            outputs=tuple(outputs),
        )


def from_function_table(
    table: list[int], input_width: int, output_width: int
) -> BooleanCircuit:
    """Compile an integer-indexed function table into a multiplexer tree.

    ``table[x]`` is the output value (MSB-first encoding) on input index x;
    the list must have exactly 2^input_width entries.
    """
    if input_width > TRUTH_TABLE_MAX_BITS:
        raise CircuitError(
            f"input width {input_width} exceeds table cap {TRUTH_TABLE_MAX_BITS}"
        )
    size = 1 << input_width
    if len(table) != size:
        raise CircuitError(f"table has {len(table)} entries, expected {size}")
    builder = CircuitBuilder(input_width)
    outputs = []
    for j in range(output_width):
        shift = output_width - 1 - j

        def tree(depth: int, lo: int, hi: int) -> int:
            if depth == input_width:
                return builder.const((table[lo] >> shift) & 1)
            mid = (lo + hi) // 2
            low_half = tree(depth + 1, lo, mid)
            high_half = tree(depth + 1, mid, hi)
            return builder.mux(builder.inputs[depth], high_half, low_half)

        outputs.append(tree(0, 0, size))
    return builder.build(outputs)


def from_truth_table(table: dict[BitString, BitString]) -> BooleanCircuit:
    """Compile an explicit input->output mapping into a circuit.

    All keys must share one width (<= 20) and all values another; inputs
    absent from the table map to all zeroes.
    """
    if not table:
        raise CircuitError("empty truth table")
    keys = iter(table)
    first = next(keys)
    in_w = first.width
    out_w = table[first].width
    int_table = [0] * (1 << in_w) if in_w <= TRUTH_TABLE_MAX_BITS else None
    if int_table is None:
        raise CircuitError(f"input width {in_w} exceeds table cap")
    for k, v in table.items():
        if k.width != in_w:
            raise CircuitError("truth table keys have inconsistent widths")
        if v.width != out_w:
            raise CircuitError("truth table values have inconsistent widths")
        int_table[k.to_int()] = v.to_int()
    return from_function_table(int_table, in_w, out_w)


def serialize_circuit(circuit: BooleanCircuit) -> str:
    """Canonical netlist text: one gate per line, OUTPUTS line last."""
    lines = []
    for node in circuit.nodes:
        op = node[0]
        if op == "INPUT":
            lines.append("INPUT")
        else:
            lines.append(" ".join([op] + [str(x) for x in node[1:]]))
    lines.append("OUTPUTS " + " ".join(str(o) for o in circuit.outputs))
    return "\n".join(lines) + "\n"


def parse_circuit(text: str) -> BooleanCircuit:
    """Parse netlist text; rejects cyclic or out-of-range references."""
    nodes: list[tuple] = []
    outputs: tuple[int, ...] | None = None
    n_inputs = 0

    def ref(tok: str, line_no: int, limit: int) -> int:
        try:
            value = int(tok)
        except ValueError:
            raise NetlistError(line_no, f"expected a node index, got {tok!r}")
        if value < 0 or value >= limit:
            raise NetlistError(
                line_no,
                f"node reference {value} out of range (acyclicity requires < {limit})",
            )
        return value

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if outputs is not None:
            raise NetlistError(line_no, "content after OUTPUTS line")
        toks = line.split()
        op = toks[0].upper()
        idx = len(nodes)
        if op == "INPUT":
            if len(toks) != 1:
                raise NetlistError(line_no, "INPUT takes no operands")
            nodes.append(("INPUT", n_inputs))
            n_inputs += 1
        elif op == "CONST":
            if len(toks) != 2 or toks[1] not in ("0", "1"):
                raise NetlistError(line_no, "CONST takes a single 0|1 operand")
            nodes.append(("CONST", int(toks[1])))
        elif op == "NOT":
            if len(toks) != 2:
                raise NetlistError(line_no, "NOT takes one operand")
            nodes.append(("NOT", ref(toks[1], line_no, idx)))
        elif op in _BINARY:
            if len(toks) != 3:
                raise NetlistError(line_no, f"{op} takes two operands")
            nodes.append(
                (op, ref(toks[1], line_no, idx), ref(toks[2], line_no, idx))
            )
        elif op == "OUTPUTS":
            if len(toks) < 2:
                raise NetlistError(line_no, "OUTPUTS needs at least one index")
            outputs = tuple(ref(t, line_no, len(nodes)) for t in toks[1:])
        else:
            raise NetlistError(line_no, f"unknown gate {toks[0]!r}")
    if outputs is None:
        raise NetlistError(len(text.splitlines()) or 1, "missing OUTPUTS line")
    if n_inputs == 0:
        raise NetlistError(1, "circuit declares no INPUT gates")
    try:
        return BooleanCircuit(
            input_width=n_inputs, nodes=tuple(nodes), outputs=outputs
        )
    except CircuitError as exc:
        raise NetlistError(1, str(exc)) from exc
