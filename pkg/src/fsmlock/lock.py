"""Locking an FSM to a device: the keyed dummy chain and its layered baseline.

``build_bfsm`` prepends a chain of dummy states to the original machine.
Each dummy state reads a selector value from a key port (extra input
bits appended at the least-significant positions); exactly one value,
the step's determiner, advances along the chain, and every wrong value
falls into one of the black-hole trap states.  The determiner sequence
interleaves raw device-response chunks (even steps) with response XOR
license chunks (odd steps), so walking out of the chain requires both
the right device and the right license.

``build_layered`` constructs the alternating-layer baseline this design
is measured against: odd layers hold one funnel state, even layers m
selectable states, and only the even-to-odd steps are license-keyed,
which is why many device responses unlock it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bits import BitString
from .fsm import Fsm, TernaryPattern, Transition
from .params import LockParams, optimize

PROPOSED = "proposed"
LAYERED = "layered"

_RENAME_ATTEMPTS = 10_000


@dataclass(frozen=True)
class KeySchedule:
    """The per-step selector values that walk the dummy chain."""

    selector_bits: int
    determiners: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.selector_bits < 1:
            raise ValueError("selector width must be positive")
        if len(self.determiners) % 2:
            raise ValueError("determiner sequences pair even/odd steps, length must be even")
        top = 1 << self.selector_bits
        for d in self.determiners:
            if not 0 <= d < top:
                raise ValueError(f"determiner {d} out of range for {self.selector_bits} bits")


@dataclass(frozen=True)
class LayeredParams:
    """Shape of the layered baseline: M alternating layers, m states per even layer."""

    branch_states: int
    layers: int

    def __post_init__(self) -> None:
        if self.branch_states < 2:
            raise ValueError(f"need at least 2 branch states, got {self.branch_states}")
        if self.layers < 2 or self.layers % 2:
            raise ValueError(f"layer count must be even and >= 2, got {self.layers}")

    @property
    def bits_per_step(self) -> int:
        """Selector bits per step: ceil(log2 m)."""
        return (self.branch_states - 1).bit_length()

    @property
    def response_bits(self) -> int:
        return self.layers * self.bits_per_step

    @property
    def license_bits(self) -> int:
        return (self.layers // 2) * self.bits_per_step


@dataclass(frozen=True)
class BoostedFsm:
    """A locked machine plus the bookkeeping needed to drive and audit it."""

    fsm: Fsm
    dummy_states: tuple[str, ...]
    black_holes: tuple[str, ...]
    original_reset: str
    selector_bits: int
    scheme: str
    layered: LayeredParams | None = None

    def __post_init__(self) -> None:
        if self.scheme not in (PROPOSED, LAYERED):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if (self.scheme == LAYERED) != (self.layered is not None):
            raise ValueError("layered parameters must accompany exactly the layered scheme")

    @property
    def unlock_steps(self) -> int:
        """Key-port steps from reset to the original machine's reset."""
        if self.scheme == LAYERED:
            assert self.layered is not None
            return self.layered.layers
        return len(self.dummy_states)

    @property
    def response_width(self) -> int:
        if self.scheme == LAYERED:
            assert self.layered is not None
            return self.layered.response_bits
        return len(self.dummy_states) * self.selector_bits // 2

    @property
    def license_width(self) -> int:
        if self.scheme == LAYERED:
            assert self.layered is not None
            return self.layered.license_bits
        return self.response_width

    @property
    def original_inputs_width(self) -> int:
        return self.fsm.inputs_width - self.selector_bits

    def key_schedule(self, response: BitString, license: BitString) -> KeySchedule:
        """The determiner sequence this machine's scheme derives from the pair."""
        if self.scheme == LAYERED:
            assert self.layered is not None
            return layered_determiners(response, license, self.layered)
        return determiners(response, license, LockParams.for_widths(
            self.license_width, self.selector_bits))


def determiners(puf: BitString, license: BitString, params: LockParams) -> KeySchedule:
    """Selector values for the dummy chain: d_i is the response chunk i//2,
    XORed with the matching license chunk on odd steps."""
    if puf.width != params.license_bits or license.width != params.license_bits:
        raise ValueError(
            f"response/license widths ({puf.width}, {license.width})"
            f" must both equal {params.license_bits}")
    b = params.selector_bits
    values = []
    for i in range(params.chain_states):
        d = puf.chunk(i // 2, b)
        if i % 2:
            d ^= license.chunk(i // 2, b)
        values.append(d)
    return KeySchedule(b, tuple(values))


def layered_determiners(puf: BitString, license: BitString, lp: LayeredParams) -> KeySchedule:
    """Selector values for the layered baseline: raw response chunk at even
    steps (free branch choice), response XOR license chunk at odd steps."""
    if puf.width != lp.response_bits:
        raise ValueError(f"response width {puf.width} must be {lp.response_bits}")
    if license.width != lp.license_bits:
        raise ValueError(f"license width {license.width} must be {lp.license_bits}")
    c = lp.bits_per_step
    values = []
    for i in range(lp.layers):
        d = puf.chunk(i, c)
        if i % 2:
            d ^= license.chunk(i // 2, c)
        values.append(d)
    return KeySchedule(c, tuple(values))


def random_license(seed: int, width: int) -> BitString:
    """A reproducible license draw: pure function of (seed, width)."""
    if width < 1:
        raise ValueError(f"license width must be positive, got {width}")
    return BitString(width, random.Random(seed).getrandbits(width))


def _fresh_names(taken: set[str], stems: list[str]) -> list[str]:
    """Names for generated states, suffixed uniformly if the original uses any."""
    for attempt in range(_RENAME_ATTEMPTS):
        suffix = "" if attempt == 0 else f"_{attempt}"
        candidates = [stem + suffix for stem in stems]
        if taken.isdisjoint(candidates):
            return candidates
    raise RuntimeError("could not find collision-free names for generated states")


def _selector_pattern(original_width: int, value: int, bits: int) -> TernaryPattern:
    """Key-port pattern: don't-care on the original inputs, exact on the selector."""
    return TernaryPattern("-" * original_width + format(value, f"0{bits}b"))


def build_bfsm(original: Fsm, puf: BitString, license: BitString,
               wiring_seed: int = 0) -> BoostedFsm:
    """Lock ``original`` behind a keyed dummy chain.

    Sizing comes from ``optimize(L)`` for L = license width.  The chain
    walks DS0 -> ... -> DS{n-1} -> original reset; at each DS_i the
    correct b-bit key value is the determiner d_i, and the k-th wrong
    value in ascending order leads to black hole BH_k.  Black holes
    transition among themselves (chosen by ``wiring_seed``) on every
    input, so the set is closed.  Original transitions are preserved
    verbatim with don't-care selector bits appended; chain and trap
    outputs are all don't-care.
    """
    if puf.width != license.width:
        raise ValueError(f"response width {puf.width} != license width {license.width}")
    params = optimize(puf.width)
    b, n, h = params.selector_bits, params.chain_states, params.black_hole_states
    schedule = determiners(puf, license, params)

    taken = set(original.states)
    names = _fresh_names(taken, [f"DS{i}" for i in range(n)] + [f"BH{k}" for k in range(h)])
    dummies, holes = names[:n], names[n:]

    ow = original.outputs_width
    dark = TernaryPattern("-" * ow)
    transitions: list[Transition] = []
    for i, here in enumerate(dummies):
        onward = dummies[i + 1] if i + 1 < n else original.reset_state
        wrong = 0
        for value in range(1 << b):
            if value == schedule.determiners[i]:
                dst = onward
            else:
                dst = holes[wrong]
                wrong += 1
            transitions.append(
                Transition(_selector_pattern(original.inputs_width, value, b), here, dst, dark))
    rng = random.Random(wiring_seed)
    wildcard = TernaryPattern("-" * (original.inputs_width + b))
    for hole in holes:
        transitions.append(Transition(wildcard, hole, holes[rng.randrange(h)], dark))
    spacer = "-" * b
    for t in original.transitions:
        transitions.append(
            Transition(TernaryPattern(t.input.chars + spacer), t.src, t.dst, t.output))

    fsm = Fsm(
        inputs_width=original.inputs_width + b,
        outputs_width=ow,
        states=tuple(dummies) + tuple(holes) + original.states,
        reset_state=dummies[0],
        transitions=tuple(transitions),
    )
    return BoostedFsm(fsm, tuple(dummies), tuple(holes), original.reset_state, b, PROPOSED)


def build_layered(original: Fsm, puf: BitString, license: BitString,
                  lp: LayeredParams) -> BoostedFsm:
    """Lock ``original`` behind the alternating-layer baseline.

    Odd layers hold one funnel state whose key value freely selects
    among the next layer's m states (selector values >= m trap, which
    can only happen when m is not a power of two and adds one shared
    black hole).  Even layers share a single keyed label per layer: the
    response XOR license chunk advances, anything else traps.  The last
    layer exits to the original reset.
    """
    m, layers = lp.branch_states, lp.layers
    c = lp.bits_per_step
    schedule = layered_determiners(puf, license, lp)
    needs_hole = (1 << c) != m

    stems: list[str] = []
    for layer in range(1, layers + 1):
        if layer % 2:
            stems.append(f"LS{layer}")
        else:
            stems.extend(f"LS{layer}_{k}" for k in range(m))
    if needs_hole:
        stems.append("BH0")
    names = _fresh_names(set(original.states), stems)
    hole = names[-1] if needs_hole else None
    layer_states: list[list[str]] = []
    cursor = 0
    for layer in range(1, layers + 1):
        width = 1 if layer % 2 else m
        layer_states.append(names[cursor:cursor + width])
        cursor += width

    ow = original.outputs_width
    dark = TernaryPattern("-" * ow)
    transitions: list[Transition] = []
    for step in range(layers):
        here_states = layer_states[step]
        exit_states = layer_states[step + 1] if step + 1 < layers else [original.reset_state]
        if step % 2 == 0:
            # odd layer (1-indexed): the key value picks the branch state
            funnel = here_states[0]
            for value in range(1 << c):
                if value < m:
                    dst = exit_states[value]
                else:
                    assert hole is not None
                    dst = hole
                transitions.append(
                    Transition(_selector_pattern(original.inputs_width, value, c),
                               funnel, dst, dark))
        else:
            # even layer: one shared keyed label per layer advances, wrong values trap
            label = schedule.determiners[step]
            for here in here_states:
                transitions.append(
                    Transition(_selector_pattern(original.inputs_width, label, c),
                               here, exit_states[0], dark))
                if hole is not None:
                    for value in range(1 << c):
                        if value != label:
                            transitions.append(
                                Transition(_selector_pattern(original.inputs_width, value, c),
                                           here, hole, dark))
    if hole is not None:
        transitions.append(
            Transition(TernaryPattern("-" * (original.inputs_width + c)), hole, hole, dark))
    spacer = "-" * c
    for t in original.transitions:
        transitions.append(
            Transition(TernaryPattern(t.input.chars + spacer), t.src, t.dst, t.output))

    ordered = [name for group in layer_states for name in group]
    if hole is not None:
        ordered.append(hole)
    fsm = Fsm(
        inputs_width=original.inputs_width + c,
        outputs_width=ow,
        states=tuple(ordered) + original.states,
        reset_state=layer_states[0][0],
        transitions=tuple(transitions),
    )
    dummies = tuple(name for group in layer_states for name in group)
    holes = (hole,) if hole is not None else ()
    return BoostedFsm(fsm, dummies, holes, original.reset_state, c, LAYERED, lp)
