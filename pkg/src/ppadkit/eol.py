"""End-of-line instances: successor/predecessor circuit pairs.

An instance implicitly defines a digraph on all n-bit vertices in which
every vertex has in- and out-degree at most one: the arc v -> w exists
exactly when successor(v) = w and predecessor(w) = v.  The all-zero
vertex is promised to be a line start, so every instance has another
unbalanced vertex; finding one is the search problem solved (naively)
here and verified exactly.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from functools import cached_property

from .circuit import (
    BitString,
    BooleanCircuit,
    evaluate,
    from_function_table,
    function_table,
    parse_circuit,
    serialize_circuit,
)

BRUTE_FORCE_MAX_BITS = 20
PARITY_MAX_BITS = 16
TABLE_MAX_BITS = 16
RANDOM_INSTANCE_MAX_BITS = 12


class InvalidInstanceError(ValueError):
    """The circuit pair breaks the instance promise or shape rules."""


class StepBudgetExceededError(RuntimeError):
    """Line following ran past 2^n steps: the circuits are malformed."""

    def __init__(self, steps: int):
        super().__init__(
            f"walk exceeded its step budget after {steps} steps; "
            "the instance graph is not a simple line"
        )
        self.steps = steps


class SolutionKind(enum.Enum):
    SINK = "SINK"
    SOURCE = "SOURCE"


@dataclass(frozen=True)
class EolSolution:
    x: BitString
    kind: SolutionKind


@dataclass(frozen=True)
class EndOfLineInstance:
    """Pair of n-in/n-out circuits with predecessor(0)=0 != successor(0)."""

    n: int
    successor: BooleanCircuit
    predecessor: BooleanCircuit

    def __post_init__(self) -> None:
        for name, c in (("successor", self.successor), ("predecessor", self.predecessor)):
            if c.input_width != self.n or c.output_width != self.n:
                raise InvalidInstanceError(
                    f"{name} circuit must map {self.n} bits to {self.n} bits"
                )
        zero = BitString.from_int(0, self.n)
        if evaluate(self.predecessor, zero).to_int() != 0:
            raise InvalidInstanceError("predecessor must fix the all-zero vertex")
        if evaluate(self.successor, zero).to_int() == 0:
            raise InvalidInstanceError("successor must move the all-zero vertex")

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]]:
        if self.n > TABLE_MAX_BITS:
            raise InvalidInstanceError(
                f"n={self.n} too large to materialise full successor tables"
            )
        return (
            function_table(self.successor).tolist(),
            function_table(self.predecessor).tolist(),
        )


def verify_solution(inst: EndOfLineInstance, x: BitString) -> EolSolution | None:
    """Accept x when P(S(x)) != x, or S(P(x)) != x with x nonzero.

    Returns the classified solution, or None on rejection.  When both
    disjuncts hold the SINK reading is reported.
    """
    if x.width != inst.n:
        raise InvalidInstanceError(
            f"solution width {x.width} != instance width {inst.n}"
        )
    sx = evaluate(inst.successor, x)
    if evaluate(inst.predecessor, sx) != x:
        return EolSolution(x, SolutionKind.SINK)
    px = evaluate(inst.predecessor, x)
    if evaluate(inst.successor, px) != x and x.to_int() != 0:
        return EolSolution(x, SolutionKind.SOURCE)
    return None


def follow_line(inst: EndOfLineInstance) -> EolSolution:
    """Walk x <- S(x) from the all-zero vertex until the line ends.

    The result is always a SINK-kind solution.  A budget of 2^n + 1 steps
    guards against malformed circuits whose walk cycles.
    """
    budget = (1 << inst.n) + 1
    if inst.n <= TABLE_MAX_BITS:
        succ, pred = inst._tables
        x = 0
        for _ in range(budget):
            y = succ[x]
            if pred[y] != x:
                return EolSolution(BitString.from_int(x, inst.n), SolutionKind.SINK)
            x = y
        raise StepBudgetExceededError(budget)
    x = BitString.from_int(0, inst.n)
    for _ in range(budget):
        y = evaluate(inst.successor, x)
        if evaluate(inst.predecessor, y) != x:
            return EolSolution(x, SolutionKind.SINK)
        x = y
    raise StepBudgetExceededError(budget)


def brute_force_solutions(inst: EndOfLineInstance) -> list[EolSolution]:
    """Every solution vertex, in ascending (lexicographic) order.

    This is the exhaustive oracle the solvers and reductions are checked
    against; capped at n <= 20.
    """
    if inst.n > BRUTE_FORCE_MAX_BITS:
        raise InvalidInstanceError(f"n={inst.n} exceeds brute-force cap")
    succ = function_table(inst.successor).tolist()
    pred = function_table(inst.predecessor).tolist()
    out = []
    for x in range(1 << inst.n):
        if pred[succ[x]] != x:
            out.append(EolSolution(BitString.from_int(x, inst.n), SolutionKind.SINK))
        elif x != 0 and succ[pred[x]] != x:
            out.append(
                EolSolution(BitString.from_int(x, inst.n), SolutionKind.SOURCE)
            )
    return out


def degree_parity_check(inst: EndOfLineInstance) -> int:
    """Count odd-degree vertices of the arc graph; the count is even.

    Arc v -> w exists iff successor(v)=w and predecessor(w)=v, so every
    vertex has in- and out-degree at most 1 and a self-loop contributes
    degree 2.  Raises if the even-parity invariant is somehow broken.
    """
    if inst.n > PARITY_MAX_BITS:
        raise InvalidInstanceError(f"n={inst.n} exceeds parity-check cap")
    succ = function_table(inst.successor).tolist()
    pred = function_table(inst.predecessor).tolist()
    odd = 0
    for v in range(1 << inst.n):
        out_deg = 1 if pred[succ[v]] == v else 0
        in_deg = 1 if succ[pred[v]] == v else 0
        if (out_deg + in_deg) % 2 == 1:
            odd += 1
    if odd % 2 != 0:
        raise AssertionError(f"odd-degree vertex count {odd} is not even")
    return odd


def random_instance(n: int, lines: int, seed: int) -> EndOfLineInstance:
    """Seeded instance made of vertex-disjoint directed paths.

    One path starts at the all-zero vertex; every vertex not on a path is
    self-fixed, so the solution set is exactly the path endpoints (other
    than the all-zero start).
    """
    if n > RANDOM_INSTANCE_MAX_BITS:
        raise InvalidInstanceError(f"n={n} exceeds generator cap")
    if lines < 1:
        raise ValueError("lines must be >= 1")
    size = 1 << n
    if 2 * lines > size:
        raise InvalidInstanceError(
            f"n={n} is too small to host {lines} disjoint lines"
        )
    rng = random.Random(seed)
    pool = list(range(1, size))
    rng.shuffle(pool)
    spare = size - 2 * lines
    succ = list(range(size))
    pred = list(range(size))
    cursor = 0
    for line_idx in range(lines):
        extra = rng.randint(0, spare // (lines - line_idx)) if spare else 0
        spare -= extra
        length = 1 + extra  # number of arcs
        if line_idx == 0:
            path = [0] + pool[cursor : cursor + length]
            cursor += length
        else:
            path = pool[cursor : cursor + length + 1]
            cursor += length + 1
        for a, b in zip(path, path[1:]):
            succ[a] = b
            pred[b] = a
    return EndOfLineInstance(
        n=n,
        successor=from_function_table(succ, n, n),
        predecessor=from_function_table(pred, n, n),
    )


def write_instance(inst: EndOfLineInstance) -> str:
    return (
        f"EOL n={inst.n}\n"
        + serialize_circuit(inst.successor)
        + "---\n"
        + serialize_circuit(inst.predecessor)
    )


def read_instance(text: str) -> EndOfLineInstance:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("EOL n="):
        raise InvalidInstanceError("missing 'EOL n=<n>' header")
    try:
        n = int(lines[0].split("=", 1)[1])
    except ValueError:
        raise InvalidInstanceError(f"bad header {lines[0]!r}")
    body = "\n".join(lines[1:])
    if "\n---" in "\n" + body:
        succ_text, pred_text = ("\n" + body).split("\n---", 1)
    else:
        raise InvalidInstanceError("missing '---' separator between circuits")
    return EndOfLineInstance(
        n=n,
        successor=parse_circuit(succ_text),
        predecessor=parse_circuit(pred_text),
    )
