"""Sizing arithmetic for the keyed dummy chain.

A lock that consumes an L-bit license through a b-bit selector port
needs an even chain of n = 2L/b dummy states plus h = 2^b - 1 black
holes, so b must divide L.  ``optimize`` picks the feasible selector
width minimizing the added-state total SN = (2^b - 1) + 2L/b;
``continuous_optimum_b`` solves the relaxed real-valued optimality
condition 2^b * b^2 = 2L / ln 2 for comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class LockParams:
    """A feasible sizing of the dummy chain for one license width."""

    license_bits: int
    selector_bits: int
    chain_states: int
    black_hole_states: int
    added_states: int

    def __post_init__(self) -> None:
        L, b = self.license_bits, self.selector_bits
        if L < 1 or b < 1:
            raise ValueError("license and selector widths must be positive")
        if L % b:
            raise ValueError(f"selector width {b} does not divide license width {L}")
        if self.chain_states != 2 * L // b:
            raise ValueError(f"chain must have {2 * L // b} states, got {self.chain_states}")
        if self.black_hole_states != 2 ** b - 1:
            raise ValueError(
                f"need {2 ** b - 1} black holes for a {b}-bit selector,"
                f" got {self.black_hole_states}")
        if self.added_states != self.chain_states + self.black_hole_states:
            raise ValueError("added_states must be chain_states + black_hole_states")

    @classmethod
    def for_widths(cls, license_bits: int, selector_bits: int) -> "LockParams":
        n = 2 * license_bits // selector_bits
        h = 2 ** selector_bits - 1
        return cls(license_bits, selector_bits, n, h, n + h)


def feasible_selector_widths(license_bits: int) -> list[int]:
    """All selector widths usable for an L-bit license: the divisors of L."""
    if license_bits < 1:
        raise ValueError(f"license width must be positive, got {license_bits}")
    return [b for b in range(1, license_bits + 1) if license_bits % b == 0]


def states_added(license_bits: int, selector_bits: int) -> int:
    """Total states the lock adds: (2^b - 1) black holes + 2L/b chain states."""
    if license_bits < 1 or selector_bits < 1:
        raise ValueError("license and selector widths must be positive")
    if license_bits % selector_bits:
        raise ValueError(
            f"selector width {selector_bits} does not divide license width {license_bits}")
    return (2 ** selector_bits - 1) + 2 * license_bits // selector_bits


def optimize(license_bits: int) -> LockParams:
    """The feasible sizing with the fewest added states (ties: narrower selector)."""
    best = min(feasible_selector_widths(license_bits),
               key=lambda b: (states_added(license_bits, b), b))
    return LockParams.for_widths(license_bits, best)


def continuous_optimum_b(license_bits: int) -> float:
    """Real-valued selector width solving 2^b * b^2 = 2L / ln 2.

    The left side is strictly increasing for b > 0, so the root is
    unique; it is bracketed and bisected to within 1e-9.
    """
    if license_bits < 1:
        raise ValueError(f"license width must be positive, got {license_bits}")
    target = 2.0 * license_bits / math.log(2.0)

    def lhs(b: float) -> float:
        return 2.0 ** b * b * b

    lo, hi = 1e-12, 1.0
    while lhs(hi) < target:
        hi *= 2.0
    while hi - lo > 1e-9:
        mid = (lo + hi) / 2.0
        if lhs(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def states_added_layered(branch_states: int, layers: int) -> int:
    """States an alternating-layer lock adds: (M/2) * (1 + m) for M layers.

    Each odd layer is a single funnel state and each even layer fans out
    to m selectable states; M must be even.
    """
    if branch_states < 2:
        raise ValueError(f"need at least 2 branch states, got {branch_states}")
    if layers < 2 or layers % 2:
        raise ValueError(f"layer count must be even and >= 2, got {layers}")
    return (layers // 2) * (1 + branch_states)
