"""Exact Collatz dynamics over Python's arbitrary-precision integers.

Single steps, first-descent traces, chained descents and total stopping
times.  Everything here is a pure function; values are immutable and the
step granularity keeps O (3n+1) and E (n/2) separate so trace lengths
line up with the pattern algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CycleDetected, StepCapExceeded
from .patterns import DescentPattern, StepKind

# Far above the 96 steps of 27; guards against nontermination only.
DEFAULT_STEP_CAP = 100_000


def col_step(n: int) -> tuple[int, StepKind]:
    """One application of the Collatz function: (n/2, E) if even, (3n+1, O) if odd."""
    if n < 1:
        raise ValueError("the Collatz function is defined on n >= 1")
    if n & 1:
        return 3 * n + 1, StepKind.O
    return n >> 1, StepKind.E


@dataclass(frozen=True)
class DescentTrace:
    """A concrete trajectory from a start down to its first strictly smaller value.

    values[t] is the value after step t+1; values[-1] == first_lower < start,
    and every earlier value is strictly above the start.
    """

    start: int
    pattern: DescentPattern
    values: tuple[int, ...]
    first_lower: int

    def __len__(self) -> int:
        return len(self.values)


def descent_trace(n: int, step_cap: int = DEFAULT_STEP_CAP) -> DescentTrace:
    """Iterate col_step from n until the first value strictly below n.

    Raises StepCapExceeded if the cap is hit first and CycleDetected if the
    trajectory returns to n (which would be a nontrivial cycle).  n = 1 is
    excluded: its trajectory loops 1-4-2-1 and never descends.
    """
    if n < 2:
        raise ValueError("descent is defined for n >= 2")
    v = n
    chars: list[str] = []
    values: list[int] = []
    while True:
        v, kind = col_step(v)
        chars.append(kind.value)
        values.append(v)
        if v < n:
            break
        if v == n:
            raise CycleDetected(f"trajectory of {n} returned to its start after {len(values)} steps")
        if len(values) >= step_cap:
            raise StepCapExceeded(f"no value below {n} within {step_cap} steps")
    return DescentTrace(
        start=n,
        pattern=DescentPattern.parse("".join(chars)),
        values=tuple(values),
        first_lower=v,
    )


def chain_descents(n: int, step_cap: int = DEFAULT_STEP_CAP) -> list[DescentTrace]:
    """Descend repeatedly, restarting from each first-lower value, until 1.

    The concatenated traces are exactly the full trajectory of n down to 1,
    so the segment lengths sum to the total stopping time.
    """
    if n < 2:
        raise ValueError("chained descent is defined for n >= 2")
    segments: list[DescentTrace] = []
    v = n
    while v != 1:
        tr = descent_trace(v, step_cap=step_cap)
        segments.append(tr)
        v = tr.first_lower
    return segments


def total_stopping_time(n: int, step_cap: int = DEFAULT_STEP_CAP) -> int:
    """Number of col_step applications to reach 1 (0 for n = 1).

    Deliberately a direct simulation, independent of the descent
    decomposition, so the two can be checked against each other.
    """
    if n < 1:
        raise ValueError("stopping time is defined for n >= 1")
    steps = 0
    v = n
    while v != 1:
        if v & 1:
            v = 3 * v + 1
        else:
            v >>= 1
        steps += 1
        if steps > step_cap:
            raise StepCapExceeded(f"{n} did not reach 1 within {step_cap} steps")
    return steps
