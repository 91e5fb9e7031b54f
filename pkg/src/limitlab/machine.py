"""The Goedel-numbered machine universe.

Index i names the i-th binary string in length-lex order (index 0 is the
empty string).  Every string decodes to exactly one machine:

  * first bit 1: a literal machine.  The remaining bits, read as a binary
    numeral, are both the machine's output and the digits it writes; an empty
    remainder is a diverger.
  * first bit 0: a state table.  3 bits give k-1 (so 1..8 states), then 3k
    transition records follow, one per (state, symbol in blank/0/1) in that
    order.  A record is 2 bits write (00 blank, 01 zero, 10 one, 11 invalid),
    1 bit move (0 left, 1 right), and ceil(log2(k+1)) bits next-state where
    0 means halt.  Underrun, leftover bits, or an invalid field make the
    string a diverger, so decoding is total.

The bit layout above is normative for interoperability and must not change.

Simulation is deterministic and budgeted: a run either halts with an output
and an exact step count, or reports that the budget ran out.  The output of
a halted tape is the binary numeral from the leftmost non-blank cell up to
the first blank after it (an all-blank tape outputs 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

__all__ = [
    "BLANK",
    "ZERO",
    "ONE",
    "LEFT",
    "RIGHT",
    "Literal",
    "Table",
    "Diverger",
    "MachineKind",
    "StateTable",
    "Configuration",
    "Halted",
    "OutOfBudget",
    "OUT_OF_BUDGET",
    "RunResult",
    "index_to_program",
    "program_to_index",
    "decode_program",
    "encode_table",
    "table_index",
    "literal_index",
    "run",
    "run_on_empty",
    "trace",
    "read_output",
    "canonical_bits",
    "Simulator",
    "shared_simulator",
]

# Tape symbols double as base-3 digits in history codes; keep these values.
BLANK, ZERO, ONE = 0, 1, 2
LEFT, RIGHT = 0, 1

_SYMBOLS = (BLANK, ZERO, ONE)
_WRITE_BITS = {"00": BLANK, "01": ZERO, "10": ONE}
_WRITE_CODE = {BLANK: "00", ZERO: "01", ONE: "10"}


def canonical_bits(x: int) -> str:
    """Canonical binary numeral of x; 0 is the one-digit string "0"."""
    if x < 0:
        raise ValueError("naturals only")
    return format(x, "b")


def index_to_program(i: int) -> str:
    """The i-th binary string in length-lex order."""
    if i < 0:
        raise ValueError("naturals only")
    return format(i + 1, "b")[1:]


def program_to_index(program: str) -> int:
    """Inverse of index_to_program."""
    return int("1" + program, 2) - 1


@dataclass(frozen=True)
class StateTable:
    """k states (1..8); rows[s-1][symbol] = (write, move, next), next 0 halts."""

    k: int
    rows: tuple[tuple[tuple[int, int, int], ...], ...]

    def record(self, state: int, symbol: int) -> tuple[int, int, int]:
        return self.rows[state - 1][symbol]


@dataclass(frozen=True)
class Literal:
    payload: int


@dataclass(frozen=True)
class Table:
    states: StateTable


@dataclass(frozen=True)
class Diverger:
    pass


MachineKind = Union[Literal, Table, Diverger]

_DIVERGER = Diverger()


def decode_program(program: str) -> MachineKind:
    """Total decoder from program strings to machines."""
    if program == "":
        return _DIVERGER
    if program[0] == "1":
        payload = program[1:]
        if payload == "":
            return _DIVERGER
        return Literal(int(payload, 2))
    if len(program) < 4:
        return _DIVERGER
    k = int(program[1:4], 2) + 1
    next_bits = k.bit_length()
    record_bits = 2 + 1 + next_bits
    body = program[4:]
    if len(body) != 3 * k * record_bits:
        return _DIVERGER
    rows = []
    pos = 0
    for _state in range(k):
        row = []
        for _symbol in _SYMBOLS:
            write = _WRITE_BITS.get(body[pos : pos + 2])
            if write is None:
                return _DIVERGER
            move = RIGHT if body[pos + 2] == "1" else LEFT
            nxt = int(body[pos + 3 : pos + 3 + next_bits], 2)
            if nxt > k:
                return _DIVERGER
            row.append((write, move, nxt))
            pos += record_bits
        rows.append(tuple(row))
    return Table(StateTable(k, tuple(rows)))


def encode_table(table: StateTable) -> str:
    """Emit the program string whose decode is exactly this table."""
    if not 1 <= table.k <= 8:
        raise ValueError("state count must be 1..8")
    if len(table.rows) != table.k:
        raise ValueError("need one row per state")
    next_bits = table.k.bit_length()
    out = ["0", format(table.k - 1, "03b")]
    for row in table.rows:
        if len(row) != 3:
            raise ValueError("need one record per symbol")
        for write, move, nxt in row:
            if write not in _WRITE_CODE or move not in (LEFT, RIGHT):
                raise ValueError("bad record field")
            if not 0 <= nxt <= table.k:
                raise ValueError("next state out of range")
            out.append(_WRITE_CODE[write])
            out.append("1" if move == RIGHT else "0")
            out.append(format(nxt, f"0{next_bits}b"))
    return "".join(out)


def table_index(table: StateTable) -> int:
    return program_to_index(encode_table(table))


def literal_index(x: int) -> int:
    """Index of the literal machine writing x; an upper bound for any shorter
    program with the same output."""
    return program_to_index("1" + canonical_bits(x))


@dataclass
class Configuration:
    """state 0..k (0 only when halted), head cell, and the visited tape cells."""

    state: int
    head: int
    tape: dict[int, int] = field(default_factory=dict)

    def copy(self) -> "Configuration":
        return Configuration(self.state, self.head, dict(self.tape))


@dataclass(frozen=True)
class Halted:
    output: int
    steps: int


@dataclass(frozen=True)
class OutOfBudget:
    pass


OUT_OF_BUDGET = OutOfBudget()

RunResult = Union[Halted, OutOfBudget]


def read_output(symbols: Sequence[int]) -> int:
    """Binary numeral from the leftmost non-blank symbol to the next blank."""
    bits = []
    seen = False
    for s in symbols:
        if s == BLANK:
            if seen:
                break
            continue
        seen = True
        bits.append("1" if s == ONE else "0")
    if not bits:
        return 0
    return int("".join(bits), 2)


def _tape_output(tape: dict[int, int]) -> int:
    cells = [c for c, s in tape.items() if s != BLANK]
    if not cells:
        return 0
    lo = min(cells)
    symbols = []
    c = lo
    while tape.get(c, BLANK) != BLANK:
        symbols.append(tape[c])
        c += 1
    return read_output(symbols)


def _input_tape(value: int | None) -> dict[int, int]:
    if value is None:
        return {}
    return {
        i: (ONE if b == "1" else ZERO)
        for i, b in enumerate(canonical_bits(value))
    }


class _TableRun:
    """Incremental simulation state for one (table, input) pair.

    Advancing never rewinds, so a memoized run answers every budget for the
    same pair exactly as a fresh simulation would.
    """

    __slots__ = ("table", "state", "head", "tape", "steps", "halted")

    def __init__(self, table: StateTable, input_value: int | None):
        self.table = table
        self.state = 1
        self.head = 0
        self.tape = _input_tape(input_value)
        self.steps = 0
        self.halted: Halted | None = None

    def advance(self, budget: int) -> RunResult:
        while self.halted is None and self.steps < budget:
            write, move, nxt = self.table.record(
                self.state, self.tape.get(self.head, BLANK)
            )
            self.tape[self.head] = write
            self.head += 1 if move == RIGHT else -1
            self.state = nxt
            self.steps += 1
            if nxt == 0:
                self.halted = Halted(_tape_output(self.tape), self.steps)
        if self.halted is not None and self.halted.steps <= budget:
            return self.halted
        return OUT_OF_BUDGET


class Simulator:
    """Memoizing front end for run results.

    Results are identical to fresh simulation; the cache only avoids
    re-stepping the same (machine, input) pair under growing budgets.
    """

    def __init__(self) -> None:
        self._kinds: dict[int, MachineKind] = {}
        self._runs: dict[tuple[int, int | None], _TableRun] = {}

    def kind(self, index: int) -> MachineKind:
        got = self._kinds.get(index)
        if got is None:
            got = decode_program(index_to_program(index))
            self._kinds[index] = got
        return got

    def result(self, index: int, input_value: int | None, budget: int) -> RunResult:
        kind = self.kind(index)
        if isinstance(kind, Diverger):
            return OUT_OF_BUDGET
        if isinstance(kind, Literal):
            steps = len(canonical_bits(kind.payload))
            if steps <= budget:
                return Halted(kind.payload, steps)
            return OUT_OF_BUDGET
        key = (index, input_value)
        state = self._runs.get(key)
        if state is None:
            state = _TableRun(kind.states, input_value)
            self._runs[key] = state
        return state.advance(budget)


shared_simulator = Simulator()


def run(index: int, input_value: int, budget: int, sim: Simulator | None = None) -> RunResult:
    """Run machine index on input_value for at most budget steps."""
    return (sim or shared_simulator).result(index, input_value, budget)


def run_on_empty(index: int, budget: int, sim: Simulator | None = None) -> RunResult:
    """Run machine index on an all-blank tape for at most budget steps."""
    return (sim or shared_simulator).result(index, None, budget)


def trace(index: int, input_value: int | None, budget: int) -> list[Configuration]:
    """Full configuration sequence up to halting or the budget.

    input_value None means an all-blank initial tape.  Literal machines never
    consult the tape; their configurations start blank regardless of input so
    that the halting tape reads back exactly the payload.
    """
    kind = decode_program(index_to_program(index))
    if isinstance(kind, Literal):
        digits = canonical_bits(kind.payload)
        cfgs = [Configuration(1, 0, {})]
        tape: dict[int, int] = {}
        for j, b in enumerate(digits):
            if j + 1 > budget:
                break
            tape[j] = ONE if b == "1" else ZERO
            state = 0 if j + 1 == len(digits) else 1
            cfgs.append(Configuration(state, j + 1, dict(tape)))
        return cfgs
    if isinstance(kind, Diverger):
        base = Configuration(1, 0, _input_tape(input_value))
        return [base.copy() for _ in range(budget + 1)]
    cfg = Configuration(1, 0, _input_tape(input_value))
    cfgs = [cfg.copy()]
    table = kind.states
    for _ in range(budget):
        if cfg.state == 0:
            break
        write, move, nxt = table.record(cfg.state, cfg.tape.get(cfg.head, BLANK))
        cfg.tape[cfg.head] = write
        cfg.head += 1 if move == RIGHT else -1
        cfg.state = nxt
        cfgs.append(cfg.copy())
    return cfgs
