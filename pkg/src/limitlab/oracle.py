"""Brute-force ground truth over the bounded machine universe.

Everything here answers by exhaustive simulation and says nothing beyond its
budget: a machine that has not halted within B steps is reported as
undecided-at-B, never as diverging.  Certificates carry the budget for that
reason.  This module deliberately depends only on the machine universe, so
its answers can certify the limit properties without sharing code with them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .machine import Halted, Simulator, literal_index, run, run_on_empty

__all__ = [
    "Confirmed",
    "Refuted",
    "Certificate",
    "brute_k",
    "brute_incompressible",
    "brute_equal_upto",
    "brute_err",
]


@dataclass(frozen=True)
class Confirmed:
    pass


@dataclass(frozen=True)
class Refuted:
    witness: int


@dataclass(frozen=True)
class Certificate:
    claim: str
    budget: int
    verdict: Union[Confirmed, Refuted]
    undecided: tuple[int, ...] = ()

    @property
    def confirmed(self) -> bool:
        return isinstance(self.verdict, Confirmed)


def brute_k(x: int, budget: int, sim: Optional[Simulator] = None) -> int:
    """Least index at most literal_index(x) that writes x from a blank tape
    within the budget.  The literal machine itself always qualifies."""
    z = literal_index(x)
    for y in range(z):
        result = run_on_empty(y, budget, sim)
        if isinstance(result, Halted) and result.output == x:
            return y
    return z


def brute_incompressible(upto: int, budget: int, sim: Optional[Simulator] = None) -> list[int]:
    """Ascending x < upto whose shortest known program is the literal one."""
    return [x for x in range(upto) if brute_k(x, budget, sim) == literal_index(x)]


def brute_equal_upto(i: int, j: int, n: int, budget: int, sim: Optional[Simulator] = None) -> Certificate:
    """Compare machine outputs on 0..n; refute with the least differing input.

    Inputs where either side exceeds the budget are skipped and listed as
    undecided, so a Confirmed verdict means only: no difference was seen at
    this budget.
    """
    undecided = []
    witness = None
    for z in range(n + 1):
        a = run(i, z, budget, sim)
        b = run(j, z, budget, sim)
        if not (isinstance(a, Halted) and isinstance(b, Halted)):
            undecided.append(z)
            continue
        if a.output != b.output:
            witness = z
            break
    if witness is not None:
        return Certificate(
            f"machines {i} and {j} differ at input {witness}",
            budget,
            Refuted(witness),
            tuple(undecided),
        )
    return Certificate(
        f"machines {i} and {j} agree on all inputs 0..{n} decided at this budget",
        budget,
        Confirmed(),
        tuple(undecided),
    )


def brute_err(i: int, j: int, t: int, budget: int, sim: Optional[Simulator] = None) -> Fraction:
    """Exact disagreement ratio |{y in 1..t : output_i(y) != output_j(y)}| / t.

    Demands totality at this budget: any undecided point is an error, since
    an error ratio over partially decided points would not be exact.
    """
    if t < 1:
        raise ValueError("the error ratio needs t >= 1")
    differ = 0
    for y in range(1, t + 1):
        a = run(i, y, budget, sim)
        b = run(j, y, budget, sim)
        if not (isinstance(a, Halted) and isinstance(b, Halted)):
            raise ValueError(
                f"input {y} undecided at budget {budget}; the exact ratio needs all points to halt"
            )
        if a.output != b.output:
            differ += 1
    return Fraction(differ, t)
