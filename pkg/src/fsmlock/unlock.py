"""Driving locked machines: unlock walks, keyspace sweeps, exact probabilities.

Sweeps are exhaustive and guarded (default 24-bit ceiling) and may be
partitioned into ranges whose partial counts sum to the sequential
total, so callers can fan the work out.  Probabilities are exact
``fractions.Fraction`` values, never floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .bits import BitString
from .fsm import Fsm
from .lock import BoostedFsm

DEFAULT_SWEEP_LIMIT = 24

MAX_VALID_EXAMPLES = 8


class NotUnlockedError(ValueError):
    """Raised when an operation requires a successful unlock and did not get one."""


@dataclass(frozen=True)
class UnlockOutcome:
    """Where an unlock walk ended: out of the chain, or in a trap."""

    unlocked: bool
    steps: int | None = None
    trap_state: str | None = None
    trap_step: int | None = None

    @classmethod
    def success(cls, steps: int) -> "UnlockOutcome":
        return cls(unlocked=True, steps=steps)

    @classmethod
    def trapped(cls, state: str, step: int) -> "UnlockOutcome":
        return cls(unlocked=False, trap_state=state, trap_step=step)

    def __str__(self) -> str:
        if self.unlocked:
            return f"Unlocked({self.steps})"
        return f"Trapped({self.trap_state}, step {self.trap_step})"


@dataclass(frozen=True)
class EnumerationReport:
    """Result of an exhaustive keyspace sweep."""

    space_size: int
    valid_count: int
    valid_examples: tuple[BitString, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.valid_count <= self.space_size:
            raise ValueError("valid_count must lie within the swept space")


def run_unlock(locked: BoostedFsm, response: BitString, license: BitString) -> UnlockOutcome:
    """Drive the key port with the (response, license) determiner sequence.

    Original inputs are held at zero during the walk.  The walk is
    Unlocked iff it stands on the original reset state after exactly
    the chain length of steps; entering a black hole or stalling in
    place traps it immediately.
    """
    schedule = locked.key_schedule(response, license)
    fsm = locked.fsm
    quiet = "0" * locked.original_inputs_width
    bits = locked.selector_bits
    traps = frozenset(locked.black_holes)
    state = fsm.reset_state
    for step, value in enumerate(schedule.determiners):
        following, _ = fsm.step(state, quiet + format(value, f"0{bits}b"))
        if following in traps or following == state:
            return UnlockOutcome.trapped(following, step)
        state = following
    if state == locked.original_reset:
        return UnlockOutcome.success(len(schedule.determiners))
    return UnlockOutcome.trapped(state, len(schedule.determiners) - 1)


def iter_valid_responses(locked: BoostedFsm, license: BitString,
                         start: int, stop: int) -> Iterator[BitString]:
    """Unlocking responses among values [start, stop), ascending."""
    width = locked.response_width
    for value in range(start, stop):
        candidate = BitString(width, value)
        if run_unlock(locked, candidate, license).unlocked:
            yield candidate


def iter_valid_licenses(locked: BoostedFsm, response: BitString,
                        start: int, stop: int) -> Iterator[BitString]:
    """Unlocking licenses among values [start, stop), ascending."""
    width = locked.license_width
    for value in range(start, stop):
        candidate = BitString(width, value)
        if run_unlock(locked, response, candidate).unlocked:
            yield candidate


def _sweep(width: int, candidates: Iterator[BitString], limit: int) -> EnumerationReport:
    if width > limit:
        raise ValueError(
            f"sweep width {width} exceeds the enumeration guard of {limit} bits;"
            " raise the limit explicitly for larger spaces")
    count = 0
    examples: list[BitString] = []
    for candidate in candidates:
        count += 1
        if len(examples) < MAX_VALID_EXAMPLES:
            examples.append(candidate)
    return EnumerationReport(1 << width, count, tuple(examples))


def count_valid_responses(locked: BoostedFsm, license: BitString,
                          limit: int = DEFAULT_SWEEP_LIMIT) -> EnumerationReport:
    """Try every possible device response against a fixed license."""
    width = locked.response_width
    return _sweep(width, iter_valid_responses(locked, license, 0, 1 << width), limit)


def count_valid_licenses(locked: BoostedFsm, response: BitString,
                         limit: int = DEFAULT_SWEEP_LIMIT) -> EnumerationReport:
    """Try every possible license against a fixed device response."""
    width = locked.license_width
    return _sweep(width, iter_valid_licenses(locked, response, 0, 1 << width), limit)


def unlock_probability_layered(branch_states: int, layers: int) -> Fraction:
    """Chance a uniformly random response unlocks the layered baseline,
    excluding the authorized response: (m^(M/2) - 1) / 2^(M * ceil(log2 m))."""
    if branch_states < 2:
        raise ValueError(f"need at least 2 branch states, got {branch_states}")
    if layers < 2 or layers % 2:
        raise ValueError(f"layer count must be even and >= 2, got {layers}")
    step_bits = (branch_states - 1).bit_length()
    return Fraction(branch_states ** (layers // 2) - 1, 2 ** (layers * step_bits))


def unlock_probability_proposed() -> Fraction:
    """Chance a uniformly random unauthorized response unlocks a dummy-chain
    lock: exactly zero, since only the single authorized response walks out."""
    return Fraction(0)


def trace_equivalence(original: Fsm, locked: BoostedFsm, response: BitString,
                      license: BitString, inputs: list[str]) -> bool:
    """Check the unlocked machine replays the original trace, state for state.

    Runs the unlock walk first (raising :class:`NotUnlockedError` if it
    traps), then feeds ``inputs`` to both machines with the key port
    held at zero, comparing outputs and state names at every step.
    """
    outcome = run_unlock(locked, response, license)
    if not outcome.unlocked:
        raise NotUnlockedError(f"cannot compare traces: unlock failed ({outcome})")
    idle_key = "0" * locked.selector_bits
    here = original.reset_state
    there = locked.original_reset
    for vector in inputs:
        here, expected = original.step(here, vector)
        there, observed = locked.fsm.step(there, vector + idle_key)
        if observed != expected or there != here:
            return False
    return True
