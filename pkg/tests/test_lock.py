import random

import pytest

from fsmlock import (BitString, KeySchedule, LayeredParams, build_bfsm,
                     build_layered, determiners, emit_kiss2, layered_determiners,
                     optimize, random_license, run_unlock)


def test_determiners_worked_example(example_response, example_license):
    schedule = determiners(example_response, example_license, optimize(6))
    assert schedule.determiners == (3, 0, 2, 0, 0, 3)
    assert schedule.selector_bits == 2


def test_determiners_all_zero_license(example_response):
    schedule = determiners(example_response, BitString(6, 0), optimize(6))
    d = schedule.determiners
    assert all(d[i] == d[i - 1] for i in range(1, 6, 2))


def test_determiners_license_equals_response(example_response):
    schedule = determiners(example_response, example_response, optimize(6))
    assert all(schedule.determiners[i] == 0 for i in range(1, 6, 2))


def test_determiners_width_mismatch(example_response):
    with pytest.raises(ValueError):
        determiners(example_response, BitString(4, 0), optimize(6))
    with pytest.raises(ValueError):
        determiners(BitString(4, 0), example_response, optimize(6))


def test_key_schedule_validation():
    with pytest.raises(ValueError):
        KeySchedule(2, (1, 2, 3))  # odd length
    with pytest.raises(ValueError):
        KeySchedule(2, (4, 0))  # out of range
    with pytest.raises(ValueError):
        KeySchedule(0, ())


def test_random_license_is_deterministic():
    assert random_license(9, 6) == random_license(9, 6)
    assert random_license(9, 1).width == 1
    with pytest.raises(ValueError):
        random_license(9, 0)


def test_random_license_varies_with_seed():
    rng = random.Random(17)
    distinct = 0
    for _ in range(1000):
        s = rng.getrandbits(32)
        if random_license(s, 16) != random_license(s + 1, 16):
            distinct += 1
    assert distinct >= 990


def test_build_bfsm_shape(seven_state_ip, example_response, example_license):
    locked = build_bfsm(seven_state_ip, example_response, example_license)
    assert len(locked.fsm.states) == 16  # 7 + 6 + 3
    assert locked.fsm.reset_state == "DS0"
    assert locked.dummy_states == ("DS0", "DS1", "DS2", "DS3", "DS4", "DS5")
    assert locked.black_holes == ("BH0", "BH1", "BH2")
    assert locked.original_reset == seven_state_ip.reset_state
    assert locked.selector_bits == 2
    assert locked.fsm.inputs_width == seven_state_ip.inputs_width + 2
    assert locked.fsm.outputs_width == seven_state_ip.outputs_width
    assert locked.response_width == 6
    assert locked.license_width == 6
    assert locked.unlock_steps == 6


def test_build_bfsm_dummy_states_have_full_fanout(seven_state_ip):
    # L=2 -> b=1, n=4, h=1: each dummy state has h+1 = 2 out-transitions
    locked = build_bfsm(seven_state_ip, BitString(2, 0b10), BitString(2, 0b01))
    for name in locked.dummy_states:
        assert len(locked.fsm.transitions_from(name)) == 2
    assert len(locked.dummy_states) == 4
    assert len(locked.black_holes) == 1


def test_build_bfsm_wrong_values_fill_holes_in_ascending_order(
        seven_state_ip, example_response, example_license):
    locked = build_bfsm(seven_state_ip, example_response, example_license)
    # DS0's determiner is 3, so wrong values 0,1,2 map to BH0,BH1,BH2
    arcs = locked.fsm.transitions_from("DS0")
    by_value = {int(t.input.chars[-2:], 2): t.dst for t in arcs}
    assert by_value == {3: "DS1", 0: "BH0", 1: "BH1", 2: "BH2"}


def test_build_bfsm_key_port_is_least_significant(seven_state_ip, example_response,
                                                  example_license):
    locked = build_bfsm(seven_state_ip, example_response, example_license)
    for t in locked.fsm.transitions:
        if t.src in locked.dummy_states:
            assert t.input.chars[:1] == "-"  # original input held don't-care
        if t.src in set(seven_state_ip.states):
            assert t.input.chars[-2:] == "--"  # key port don't-care


def test_build_bfsm_preserves_original_transitions(seven_state_ip, example_response,
                                                   example_license):
    locked = build_bfsm(seven_state_ip, example_response, example_license)
    originals = [t for t in locked.fsm.transitions
                 if t.src in set(seven_state_ip.states)]
    assert len(originals) == len(seven_state_ip.transitions)
    for ours, theirs in zip(seven_state_ip.transitions, originals):
        assert theirs.input.chars == ours.input.chars + "--"
        assert theirs.src == ours.src
        assert theirs.dst == ours.dst
        assert theirs.output == ours.output


def test_build_bfsm_black_holes_closed(seven_state_ip, example_response, example_license):
    locked = build_bfsm(seven_state_ip, example_response, example_license)
    holes = set(locked.black_holes)
    for hole in holes:
        assert locked.fsm.reachable_states(hole) <= holes


def test_build_bfsm_renames_on_collision(example_response, example_license):
    from fsmlock import Fsm, TernaryPattern, Transition
    clash = Fsm(1, 1, ("DS0", "BH2"), "DS0",
                (Transition(TernaryPattern("1"), "DS0", "BH2", TernaryPattern("1")),
                 Transition(TernaryPattern("0"), "BH2", "DS0", TernaryPattern("0"))))
    locked = build_bfsm(clash, example_response, example_license)
    assert locked.dummy_states[0] == "DS0_1"
    assert "DS0" in locked.fsm.states  # the original survives untouched
    assert len(locked.fsm.states) == 2 + 9
    outcome = run_unlock(locked, example_response, example_license)
    assert outcome.unlocked


def test_build_bfsm_width_mismatch(seven_state_ip, example_response):
    with pytest.raises(ValueError):
        build_bfsm(seven_state_ip, example_response, BitString(4, 0))


def test_build_bfsm_deterministic(seven_state_ip, example_response, example_license):
    a = build_bfsm(seven_state_ip, example_response, example_license, wiring_seed=5)
    b = build_bfsm(seven_state_ip, example_response, example_license, wiring_seed=5)
    assert emit_kiss2(a.fsm) == emit_kiss2(b.fsm)


def test_layered_params():
    lp = LayeredParams(4, 6)
    assert lp.bits_per_step == 2
    assert lp.response_bits == 12
    assert lp.license_bits == 6
    assert LayeredParams(2, 2).bits_per_step == 1
    assert LayeredParams(3, 4).bits_per_step == 2
    assert LayeredParams(5, 2).bits_per_step == 3
    with pytest.raises(ValueError):
        LayeredParams(1, 2)
    with pytest.raises(ValueError):
        LayeredParams(4, 3)


def test_layered_determiners_xor_only_on_odd_steps():
    lp = LayeredParams(4, 4)
    puf = BitString.from_text("11100100")
    license = BitString.from_text("0110")
    schedule = layered_determiners(puf, license, lp)
    # LSB-first chunks of puf: 00, 01, 10, 11; license chunks: 10, 01
    assert schedule.determiners == (0b00, 0b01 ^ 0b10, 0b10, 0b11 ^ 0b01)
    with pytest.raises(ValueError):
        layered_determiners(puf, BitString(6, 0), lp)
    with pytest.raises(ValueError):
        layered_determiners(BitString(6, 0), license, lp)


def test_build_layered_shape(seven_state_ip):
    lp = LayeredParams(4, 6)
    locked = build_layered(seven_state_ip, random_license(1, 12),
                           random_license(2, 6), lp)
    assert len(locked.fsm.states) == 7 + 15
    assert locked.black_holes == ()  # power-of-two branch count
    assert locked.unlock_steps == 6
    assert locked.response_width == 12
    assert locked.license_width == 6
    assert locked.fsm.reset_state == locked.dummy_states[0]


def test_build_layered_fig1_shape(seven_state_ip):
    lp = LayeredParams(4, 2)
    locked = build_layered(seven_state_ip, random_license(1, 4),
                           random_license(2, 2), lp)
    assert len(locked.fsm.states) == 7 + 5  # one funnel + four branch states


def test_build_layered_non_power_of_two_adds_shared_hole(seven_state_ip):
    lp = LayeredParams(3, 4)
    locked = build_layered(seven_state_ip, random_license(1, lp.response_bits),
                           random_license(2, lp.license_bits), lp)
    assert len(locked.black_holes) == 1
    assert len(locked.fsm.states) == 7 + (4 // 2) * (1 + 3) + 1
    hole = locked.black_holes[0]
    assert locked.fsm.reachable_states(hole) == frozenset({hole})


def test_build_layered_exhaustive_tiny(seven_state_ip):
    lp = LayeredParams(2, 2)
    license = BitString(1, 1)
    locked = build_layered(seven_state_ip, BitString(2, 0b10), license, lp)
    assert len(locked.fsm.states) == 7 + 3
    unlocking = [v for v in range(4)
                 if run_unlock(locked, BitString(2, v), license).unlocked]
    assert len(unlocking) == 2


def usable_layered_response(lp: LayeredParams, fill: int) -> BitString:
    # Even-step chunks select a branch and must be < m; a response whose
    # chunk lands outside that range cannot unlock even when authorized,
    # which is a property of the layered scheme itself.
    c = lp.bits_per_step
    value = 0
    for i in range(lp.layers):
        top = lp.branch_states if i % 2 == 0 else 1 << c
        value |= ((i * 7 + fill) % top) << (i * c)
    return BitString(lp.response_bits, value)


def test_build_layered_authorized_pair_unlocks(seven_state_ip):
    for m, layers in ((2, 4), (3, 2), (4, 6), (5, 2)):
        lp = LayeredParams(m, layers)
        puf = usable_layered_response(lp, m + layers)
        license = random_license(m * 37 + layers, lp.license_bits)
        locked = build_layered(seven_state_ip, puf, license, lp)
        outcome = run_unlock(locked, puf, license)
        assert outcome.unlocked and outcome.steps == layers


def test_build_layered_out_of_range_authorized_chunk_traps(seven_state_ip):
    # m=3 leaves chunk value 3 unused; a response carrying it walks into
    # the shared black hole even though the machine was built for it.
    lp = LayeredParams(3, 2)
    puf = BitString(4, 0b0011)  # step-0 chunk = 3 >= m
    license = random_license(0, lp.license_bits)
    locked = build_layered(seven_state_ip, puf, license, lp)
    outcome = run_unlock(locked, puf, license)
    assert not outcome.unlocked
    assert outcome.trap_state == locked.black_holes[0]


def test_layered_width_mismatch(seven_state_ip):
    lp = LayeredParams(4, 6)
    with pytest.raises(ValueError):
        build_layered(seven_state_ip, BitString(11, 0), BitString(6, 0), lp)
    with pytest.raises(ValueError):
        build_layered(seven_state_ip, BitString(12, 0), BitString(5, 0), lp)


def test_boosted_fsm_scheme_tag_validation(seven_state_ip, example_response, example_license):
    from fsmlock import BoostedFsm
    locked = build_bfsm(seven_state_ip, example_response, example_license)
    with pytest.raises(ValueError):
        BoostedFsm(locked.fsm, locked.dummy_states, locked.black_holes,
                   locked.original_reset, locked.selector_bits, "unknown")
    with pytest.raises(ValueError):
        BoostedFsm(locked.fsm, locked.dummy_states, locked.black_holes,
                   locked.original_reset, locked.selector_bits, "layered")
