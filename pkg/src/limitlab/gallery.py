"""Hand-built state tables used by tests, demos, and the docs.

Every machine here is tiny (at most four states) and exists to witness one
behaviour: identity computed at different speeds, a single planted output
difference, a planted divergence, or a residue-triggered tape edit.
"""

from __future__ import annotations

from .machine import BLANK, LEFT, ONE, RIGHT, StateTable, ZERO, table_index

__all__ = [
    "FAST_IDENTITY",
    "IDENTITY_2_STEPS",
    "IDENTITY_4_STEPS",
    "DIFFERS_AT_3",
    "DIFFERS_AT_4",
    "HALTS_ON_0_1_LOOPS_ON_2",
    "MARKS_MULTIPLES_OF_3",
    "fast_identity_index",
    "identity_2_index",
    "identity_4_index",
    "differs_at_3_index",
    "differs_at_4_index",
    "loops_on_2_index",
    "marks_multiples_of_3_index",
]


def _row(blank, zero, one):
    return (blank, zero, one)


# Rewrites the scanned symbol and halts: output equals input in one step.
FAST_IDENTITY = StateTable(
    1,
    (
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 0), (ONE, LEFT, 0)),
    ),
)

# One bounce right and back: identity in exactly two steps.
IDENTITY_2_STEPS = StateTable(
    2,
    (
        _row((BLANK, RIGHT, 2), (ZERO, RIGHT, 2), (ONE, RIGHT, 2)),
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 0), (ONE, LEFT, 0)),
    ),
)

# Two bounces: identity in exactly four steps on every input.
IDENTITY_4_STEPS = StateTable(
    4,
    (
        _row((BLANK, RIGHT, 2), (ZERO, RIGHT, 2), (ONE, RIGHT, 2)),
        _row((BLANK, LEFT, 3), (ZERO, LEFT, 3), (ONE, LEFT, 3)),
        _row((BLANK, RIGHT, 4), (ZERO, RIGHT, 4), (ONE, RIGHT, 4)),
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 0), (ONE, LEFT, 0)),
    ),
)

# Identity except on input 3 ("11"), where it appends a 1 and outputs 7.
# Never takes more than three steps.
DIFFERS_AT_3 = StateTable(
    3,
    (
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 0), (ONE, RIGHT, 2)),
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 0), (ONE, RIGHT, 3)),
        _row((ONE, RIGHT, 0), (ZERO, LEFT, 0), (ONE, LEFT, 0)),
    ),
)

# Identity except on input 4 ("100"), where it appends a 1 and outputs 9.
# Never takes more than four steps, so it is pointwise no slower than
# IDENTITY_4_STEPS while disagreeing with it at a single input.
DIFFERS_AT_4 = StateTable(
    4,
    (
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 0), (ONE, RIGHT, 2)),
        _row((BLANK, LEFT, 0), (ZERO, RIGHT, 3), (ONE, LEFT, 0)),
        _row((BLANK, LEFT, 0), (ZERO, RIGHT, 4), (ONE, LEFT, 0)),
        _row((ONE, RIGHT, 0), (ZERO, LEFT, 0), (ONE, LEFT, 0)),
    ),
)

# Halts unchanged on inputs 0 and 1; walks left forever on input 2 ("10").
# Its least divergence point is 2.
HALTS_ON_0_1_LOOPS_ON_2 = StateTable(
    3,
    (
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 0), (ONE, RIGHT, 2)),
        _row((BLANK, LEFT, 0), (ZERO, LEFT, 3), (ONE, LEFT, 0)),
        _row((BLANK, LEFT, 3), (ZERO, LEFT, 3), (ONE, LEFT, 3)),
    ),
)

# Tracks the input's value mod 3 while scanning right (states are residues;
# reading bit b moves residue r to 2r+b mod 3).  At the end of the input it
# appends a 1 exactly when the residue is 0, so its outputs differ from the
# identity function precisely on multiples of 3.
MARKS_MULTIPLES_OF_3 = StateTable(
    3,
    (
        _row((ONE, RIGHT, 0), (ZERO, RIGHT, 1), (ONE, RIGHT, 2)),
        _row((BLANK, RIGHT, 0), (ZERO, RIGHT, 3), (ONE, RIGHT, 1)),
        _row((BLANK, RIGHT, 0), (ZERO, RIGHT, 2), (ONE, RIGHT, 3)),
    ),
)


def fast_identity_index() -> int:
    return table_index(FAST_IDENTITY)


def identity_2_index() -> int:
    return table_index(IDENTITY_2_STEPS)


def identity_4_index() -> int:
    return table_index(IDENTITY_4_STEPS)


def differs_at_3_index() -> int:
    return table_index(DIFFERS_AT_3)


def differs_at_4_index() -> int:
    return table_index(DIFFERS_AT_4)


def loops_on_2_index() -> int:
    return table_index(HALTS_ON_0_1_LOOPS_ON_2)


def marks_multiples_of_3_index() -> int:
    return table_index(MARKS_MULTIPLES_OF_3)
