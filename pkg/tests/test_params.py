import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fsmlock import (LockParams, continuous_optimum_b, feasible_selector_widths,
                     optimize, states_added, states_added_layered)


def test_feasible_widths_are_divisors():
    assert feasible_selector_widths(6) == [1, 2, 3, 6]
    assert feasible_selector_widths(4) == [1, 2, 4]
    assert feasible_selector_widths(1) == [1]
    assert feasible_selector_widths(128) == [1, 2, 4, 8, 16, 32, 64, 128]
    with pytest.raises(ValueError):
        feasible_selector_widths(0)


def test_states_added_examples():
    assert states_added(4, 2) == 7
    assert states_added(6, 2) == 9
    assert states_added(128, 4) == 79
    with pytest.raises(ValueError):
        states_added(6, 4)


def test_optimize_reference_points():
    assert optimize(4) == LockParams(4, 2, 4, 3, 7)
    assert optimize(6) == LockParams(6, 2, 6, 3, 9)
    assert optimize(128) == LockParams(128, 4, 64, 15, 79)


def test_optimize_prefers_narrow_selector_on_ties():
    # L=2: b=1 gives 1+4=5, b=2 gives 3+2=5; the tie goes to b=1
    assert optimize(2).selector_bits == 1
    assert optimize(2).added_states == 5


def test_optimize_prime_license_width():
    p = optimize(5)
    assert p.selector_bits == 1
    assert p.added_states == 11


def test_lock_params_validation():
    with pytest.raises(ValueError):
        LockParams(6, 4, 3, 15, 18)  # 4 does not divide 6
    with pytest.raises(ValueError):
        LockParams(6, 2, 5, 3, 8)  # wrong chain length
    with pytest.raises(ValueError):
        LockParams(6, 2, 6, 4, 10)  # wrong black hole count
    with pytest.raises(ValueError):
        LockParams(6, 2, 6, 3, 10)  # wrong total


def test_continuous_optimum_examples():
    b6 = continuous_optimum_b(6)
    assert 1.0 < b6 < 3.0
    assert abs(2.0 ** b6 * b6 * b6 - 12.0 / math.log(2.0)) < 1e-6
    b128 = continuous_optimum_b(128)
    assert 4.0 < b128 < 5.0
    with pytest.raises(ValueError):
        continuous_optimum_b(0)


def test_continuous_optimum_fixed_point():
    # At L = 36 ln 2 the equation 2^b b^2 = 2L/ln 2 = 72 has the exact root b=3.
    assert abs(continuous_optimum_b(36 * math.log(2.0)) - 3.0) < 1e-6


def test_layered_examples():
    assert states_added_layered(4, 4) == 10
    assert states_added_layered(4, 6) == 15
    assert states_added_layered(3, 178) == 356
    assert states_added_layered(2, 2) == 3


def test_layered_validation():
    with pytest.raises(ValueError):
        states_added_layered(4, 5)  # odd layer count
    with pytest.raises(ValueError):
        states_added_layered(1, 4)
    with pytest.raises(ValueError):
        states_added_layered(4, 0)


@given(st.integers(min_value=1, max_value=256))
def test_optimum_beats_every_feasible_width(license_bits):
    best = optimize(license_bits)
    assert best.license_bits == license_bits
    assert best.black_hole_states == 2 ** best.selector_bits - 1
    assert best.chain_states == 2 * license_bits // best.selector_bits
    assert best.chain_states % 2 == 0
    assert best.added_states == best.chain_states + best.black_hole_states
    for b in feasible_selector_widths(license_bits):
        assert best.added_states <= states_added(license_bits, b)


@given(st.integers(min_value=1, max_value=256))
def test_optimum_brackets_the_continuous_solution(license_bits):
    # The integer optimum is floor/ceil of b* when those divide L, or else
    # one of the two divisors bracketing b*; SN(b) is unimodal in b.
    divisors = feasible_selector_widths(license_bits)
    b_star = continuous_optimum_b(license_bits)
    nearby = {b for b in (math.floor(b_star), math.ceil(b_star)) if b in divisors}
    below = [b for b in divisors if b <= b_star]
    above = [b for b in divisors if b >= b_star]
    if below:
        nearby.add(max(below))
    if above:
        nearby.add(min(above))
    assert optimize(license_bits).selector_bits in nearby
