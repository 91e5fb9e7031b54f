"""The guess-stream runtime.

A limit property is evaluated stage by stage: at stage t it either emits a
guess or stays silent, under a per-stage step budget.  The stream of stage
outcomes is the observable object; its limit (if any) is the property value.
Silent stages are benign: a stream has stabilized when its final guessed
value is the only value guessed across a trailing window of guessed stages.

Stage evaluators run strictly in stage order within one stream and may carry
memoized state between stages, but every fact they cache must be a function
of (input, stage, budget) alone; two runs with equal arguments produce
byte-identical streams.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Optional, Protocol, Union

from .encoding import encode_prefix
from .machine import Literal, decode_program, index_to_program, literal_index

__all__ = [
    "Guess",
    "NoOutput",
    "NO_OUTPUT",
    "StageOutcome",
    "StageResult",
    "StageEvaluator",
    "StageFunction",
    "pure_stage_function",
    "StageEvent",
    "GuessStream",
    "BudgetSchedule",
    "DEFAULT_BUDGET_BASE",
    "DEFAULT_BUDGET_SLOPE",
    "DEFAULT_STABILIZATION_WINDOW",
    "run_stages",
    "Verdict",
    "StabilizationReport",
    "stabilization",
    "az_index",
    "az_inverse",
    "SequenceFamily",
    "az_sequence",
    "compose_prefix_property",
    "trace_lines",
]


@dataclass(frozen=True)
class Guess:
    value: int


@dataclass(frozen=True)
class NoOutput:
    pass


NO_OUTPUT = NoOutput()

StageOutcome = Union[Guess, NoOutput]

# (outcome, machine steps charged to the stage)
StageResult = tuple[StageOutcome, int]


class StageEvaluator(Protocol):
    def stage(self, s: int, t: int, budget: int) -> StageResult: ...


@dataclass(frozen=True)
class StageFunction:
    """A named limit property; make() yields a fresh evaluator per stream."""

    property_id: str
    make: Callable[[], StageEvaluator]


class _PureEvaluator:
    def __init__(self, fn: Callable[[int, int, int], StageResult]):
        self.fn = fn

    def stage(self, s: int, t: int, budget: int) -> StageResult:
        return self.fn(s, t, budget)


def pure_stage_function(
    property_id: str, fn: Callable[[int, int, int], StageResult]
) -> StageFunction:
    """Wrap a stateless (s, t, budget) -> StageResult procedure."""
    return StageFunction(property_id, lambda: _PureEvaluator(fn))


@dataclass(frozen=True)
class StageEvent:
    stage: int
    outcome: StageOutcome
    steps_used: int


@dataclass
class GuessStream:
    property_id: str
    input: int
    events: list[StageEvent] = field(default_factory=list)

    def guesses(self) -> list[tuple[int, int]]:
        """(stage, value) for every guessing stage, in order."""
        return [
            (e.stage, e.outcome.value)
            for e in self.events
            if isinstance(e.outcome, Guess)
        ]

    def guess_values(self) -> list[int]:
        return [v for _, v in self.guesses()]


DEFAULT_BUDGET_BASE = 64
DEFAULT_BUDGET_SLOPE = 64
DEFAULT_STABILIZATION_WINDOW = 16


@dataclass(frozen=True)
class BudgetSchedule:
    """Per-stage step allowance for each simulated machine: base + slope*t."""

    base: int = DEFAULT_BUDGET_BASE
    slope: int = DEFAULT_BUDGET_SLOPE

    def __call__(self, t: int) -> int:
        return self.base + self.slope * t


def run_stages(
    f: StageFunction,
    s: int,
    t_max: int,
    schedule: Optional[Callable[[int], int]] = None,
) -> GuessStream:
    """Evaluate stages 0..t_max in order and record every outcome."""
    if t_max < 0:
        raise ValueError("t_max must be at least 0")
    schedule = schedule or BudgetSchedule()
    evaluator = f.make()
    stream = GuessStream(f.property_id, s)
    for t in range(t_max + 1):
        outcome, steps = evaluator.stage(s, t, schedule(t))
        stream.events.append(StageEvent(t, outcome, steps))
    return stream


class Verdict(str, Enum):
    STABILIZED = "stabilized"
    STILL_CHANGING = "still_changing"
    NO_GUESS_YET = "no_guess_yet"


@dataclass(frozen=True)
class StabilizationReport:
    last_value: Optional[int]
    last_change_stage: Optional[int]
    stable_for: int
    window: int
    verdict: Verdict


def stabilization(stream: GuessStream, window: int = DEFAULT_STABILIZATION_WINDOW) -> StabilizationReport:
    """Empirical convergence verdict; silent stages never reset the run."""
    if window < 1:
        raise ValueError("window must be positive")
    guesses = stream.guesses()
    if not guesses:
        return StabilizationReport(None, None, 0, window, Verdict.NO_GUESS_YET)
    last_value = guesses[-1][1]
    run_start = len(guesses)
    while run_start > 0 and guesses[run_start - 1][1] == last_value:
        run_start -= 1
    stable_for = len(guesses) - run_start
    verdict = Verdict.STABILIZED if stable_for >= window else Verdict.STILL_CHANGING
    return StabilizationReport(
        last_value, guesses[run_start][0], stable_for, window, verdict
    )


def az_index(x: int) -> int:
    """Handle for the constant-x sequence: the literal machine writing x."""
    return literal_index(x)


def az_inverse(y: int) -> int:
    """Constant value of the sequence named by handle y."""
    kind = decode_program(index_to_program(y))
    if not isinstance(kind, Literal):
        raise ValueError(f"index {y} is not a constant-sequence handle")
    return kind.payload


@dataclass(frozen=True)
class SequenceFamily:
    """A total stage-indexed sequence generator."""

    generator: Callable[[int], int]

    def prefix(self, t: int) -> list[int]:
        return [self.generator(n) for n in range(t + 1)]


def az_sequence(y: int) -> SequenceFamily:
    value = az_inverse(y)
    return SequenceFamily(lambda n: value)


class _PrefixEvaluator:
    def __init__(self, q: Callable[[int, int], StageResult], seq: SequenceFamily):
        self.q = q
        self.seq = seq
        self.values: list[int] = []

    def stage(self, s: int, t: int, budget: int) -> StageResult:
        while len(self.values) <= t:
            self.values.append(self.seq.generator(len(self.values)))
        return self.q(encode_prefix(self.values[: t + 1]), budget)


def compose_prefix_property(
    q: Callable[[int, int], StageResult],
    seq: SequenceFamily,
    property_id: str = "composed",
) -> StageFunction:
    """Stage t feeds q the coded prefix of seq up to t, under the stage budget."""
    return StageFunction(property_id, lambda: _PrefixEvaluator(q, seq))


def _record(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def trace_lines(
    stream: GuessStream, report: Optional[StabilizationReport] = None
) -> list[str]:
    """Line-delimited JSON trace; all numbers as decimal strings."""
    lines = []
    for e in stream.events:
        payload = {
            "property": stream.property_id,
            "input": str(stream.input),
            "stage": str(e.stage),
            "outcome": "guess" if isinstance(e.outcome, Guess) else "no_output",
            "steps_used": str(e.steps_used),
        }
        if isinstance(e.outcome, Guess):
            payload["value"] = str(e.outcome.value)
        lines.append(_record(payload))
    if report is not None:
        payload = {
            "property": stream.property_id,
            "input": str(stream.input),
            "record": "stabilization",
            "verdict": report.verdict.value,
            "stable_for": str(report.stable_for),
            "window": str(report.window),
        }
        if report.last_value is not None:
            payload["last_value"] = str(report.last_value)
        if report.last_change_stage is not None:
            payload["last_change_stage"] = str(report.last_change_stage)
        lines.append(_record(payload))
    return lines
