"""Mealy finite-state machines and the KISS2 text format.

Transitions carry ternary input patterns ('0', '1', '-' per position) and
fire by first-match-in-order: simulation scans a state's transitions in
file order and takes the first whose pattern matches.  A step with no
matching transition stalls, staying in place with all-zero outputs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

_PATTERN_CHARS = frozenset("01-")
_TOKEN_RE = re.compile(r"\S+")


class Kiss2Error(ValueError):
    """Malformed KISS2 text; carries the 1-based line (and column) at fault."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where = f" ({where})"
        super().__init__(message + where)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class TernaryPattern:
    """A fixed-width pattern over {'0', '1', '-'}; '-' matches either bit."""

    chars: str

    def __post_init__(self) -> None:
        if not _PATTERN_CHARS.issuperset(self.chars):
            bad = next(c for c in self.chars if c not in _PATTERN_CHARS)
            raise ValueError(f"invalid pattern character {bad!r} in {self.chars!r}")

    @property
    def width(self) -> int:
        return len(self.chars)

    def matches(self, bits: str) -> bool:
        """True when every non-'-' position agrees with ``bits``."""
        if len(bits) != len(self.chars):
            raise ValueError(
                f"cannot match {len(bits)}-bit vector against {len(self.chars)}-wide pattern"
            )
        return all(p == "-" or p == b for p, b in zip(self.chars, bits))

    def __str__(self) -> str:
        return self.chars


@dataclass(frozen=True)
class Transition:
    input: TernaryPattern
    src: str
    dst: str
    output: TernaryPattern


@dataclass(frozen=True)
class Fsm:
    """An immutable Mealy machine.

    ``states`` is ordered (it fixes the binary encoding used by the HDL
    emitter) and every transition endpoint must appear in it.  Input
    vectors are plain strings of '0'/'1', one character per input, in the
    same positional order as the transition patterns.
    """

    inputs_width: int
    outputs_width: int
    states: tuple[str, ...]
    reset_state: str
    transitions: tuple[Transition, ...]

    def __post_init__(self) -> None:
        if self.inputs_width < 0 or self.outputs_width < 0:
            raise ValueError("port widths must be non-negative")
        seen: set[str] = set()
        for name in self.states:
            if not name:
                raise ValueError("state names must be non-empty")
            if name in seen:
                raise ValueError(f"duplicate state name {name!r}")
            seen.add(name)
        if self.reset_state not in seen:
            raise ValueError(f"reset state {self.reset_state!r} is not a state")
        for t in self.transitions:
            if t.src not in seen or t.dst not in seen:
                raise ValueError(
                    f"transition {t.src!r} -> {t.dst!r} references an unknown state"
                )
            if t.input.width != self.inputs_width:
                raise ValueError(
                    f"input pattern {t.input.chars!r} is not {self.inputs_width} wide"
                )
            if t.output.width != self.outputs_width:
                raise ValueError(
                    f"output pattern {t.output.chars!r} is not {self.outputs_width} wide"
                )

    @cached_property
    def _by_src(self) -> dict[str, tuple[Transition, ...]]:
        grouped: dict[str, list[Transition]] = {name: [] for name in self.states}
        for t in self.transitions:
            grouped[t.src].append(t)
        return {name: tuple(ts) for name, ts in grouped.items()}

    def transitions_from(self, state: str) -> tuple[Transition, ...]:
        """Transitions out of ``state``, in file order."""
        if state not in self._by_src:
            raise ValueError(f"unknown state {state!r}")
        return self._by_src[state]

    def step(self, state: str, inputs: str) -> tuple[str, str]:
        """One clock edge: returns (next state, output bits).

        The first matching transition in file order fires; '-' output
        positions read as '0'.  With no match the machine stalls: it
        stays in ``state`` and outputs all zeros.
        """
        if len(inputs) != self.inputs_width or any(c not in "01" for c in inputs):
            raise ValueError(
                f"input vector {inputs!r} is not a {self.inputs_width}-bit string"
            )
        for t in self.transitions_from(state):
            if t.input.matches(inputs):
                return t.dst, t.output.chars.replace("-", "0")
        return state, "0" * self.outputs_width

    def reachable_states(self, start: str) -> frozenset[str]:
        """States reachable from ``start`` by any input sequence (including it)."""
        if start not in self._by_src:
            raise ValueError(f"unknown state {start!r}")
        seen = {start}
        frontier = [start]
        while frontier:
            here = frontier.pop()
            for t in self._by_src[here]:
                if t.dst not in seen:
                    seen.add(t.dst)
                    frontier.append(t.dst)
        return frozenset(seen)


def counter_fsm(n_states: int) -> Fsm:
    """A small demo IP: an enable-gated ring counter.

    One input (enable), one output (carry).  On enable the counter
    advances c0 -> c1 -> ... and wraps, emitting 1 on the wrap step;
    without enable it holds.
    """
    if n_states < 2:
        raise ValueError("counter needs at least 2 states")
    names = tuple(f"c{i}" for i in range(n_states))
    transitions = []
    for i, name in enumerate(names):
        nxt = names[(i + 1) % n_states]
        carry = "1" if i == n_states - 1 else "0"
        transitions.append(Transition(TernaryPattern("1"), name, nxt, TernaryPattern(carry)))
        transitions.append(Transition(TernaryPattern("0"), name, name, TernaryPattern("0")))
    return Fsm(1, 1, names, names[0], tuple(transitions))


def parse_kiss2(text: str) -> Fsm:
    """Parse KISS2 text into an :class:`Fsm`.

    Supports the .i/.o/.p/.s/.r/.e directives and '#' comments.  States
    are collected in order of first appearance (src before dst, line by
    line); the reset state defaults to the src of the first transition
    when no .r directive is present.  Declared .p/.s counts, when given,
    must match the body.
    """
    inputs_width: int | None = None
    outputs_width: int | None = None
    declared_transitions: int | None = None
    declared_states: int | None = None
    transitions_line: int | None = None
    states_line: int | None = None
    reset: str | None = None
    states: list[str] = []
    state_set: set[str] = set()
    transitions: list[Transition] = []

    def register(name: str) -> None:
        if name not in state_set:
            state_set.add(name)
            states.append(name)

    def parse_count(token: str, line_no: int, column: int, what: str) -> int:
        if not token.isdigit():
            raise Kiss2Error(f"{what} must be a non-negative integer, got {token!r}",
                             line_no, column)
        return int(token)

    ended = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN_RE.finditer(line)]
        if not tokens:
            continue
        if ended:
            raise Kiss2Error("content after .e", line_no, tokens[0][1])
        first, first_col = tokens[0]
        if first.startswith("."):
            if first == ".e":
                if len(tokens) != 1:
                    raise Kiss2Error(".e takes no arguments", line_no, tokens[1][1])
                ended = True
                continue
            if first not in (".i", ".o", ".p", ".s", ".r"):
                raise Kiss2Error(f"unknown directive {first!r}", line_no, first_col)
            if len(tokens) != 2:
                raise Kiss2Error(f"{first} takes exactly one argument", line_no, first_col)
            arg, arg_col = tokens[1]
            if first == ".i":
                inputs_width = parse_count(arg, line_no, arg_col, "input count")
            elif first == ".o":
                outputs_width = parse_count(arg, line_no, arg_col, "output count")
            elif first == ".p":
                declared_transitions = parse_count(arg, line_no, arg_col, "transition count")
                transitions_line = line_no
            elif first == ".s":
                declared_states = parse_count(arg, line_no, arg_col, "state count")
                states_line = line_no
            else:
                reset = arg
            continue
        if len(tokens) != 4:
            raise Kiss2Error(
                f"transition line needs 4 fields (input src dst output), got {len(tokens)}",
                line_no, first_col)
        if inputs_width is None or outputs_width is None:
            raise Kiss2Error("transition before .i/.o directives", line_no, first_col)
        (in_tok, in_col), (src, _), (dst, _), (out_tok, out_col) = tokens
        for tok, col, width, what in (
            (in_tok, in_col, inputs_width, "input"),
            (out_tok, out_col, outputs_width, "output"),
        ):
            for offset, c in enumerate(tok):
                if c not in _PATTERN_CHARS:
                    raise Kiss2Error(f"invalid {what} pattern character {c!r}",
                                     line_no, col + offset)
            if len(tok) != width:
                raise Kiss2Error(
                    f"{what} pattern {tok!r} is {len(tok)} wide, expected {width}",
                    line_no, col)
        register(src)
        register(dst)
        transitions.append(
            Transition(TernaryPattern(in_tok), src, dst, TernaryPattern(out_tok)))

    if inputs_width is None:
        raise Kiss2Error("missing .i directive")
    if outputs_width is None:
        raise Kiss2Error("missing .o directive")
    if not transitions:
        raise Kiss2Error("no transitions")
    if declared_transitions is not None and declared_transitions != len(transitions):
        raise Kiss2Error(
            f".p declares {declared_transitions} transitions, body has {len(transitions)}",
            transitions_line)
    if reset is not None:
        register(reset)
    if declared_states is not None and declared_states != len(states):
        raise Kiss2Error(
            f".s declares {declared_states} states, body has {len(states)}",
            states_line)
    reset_state = reset if reset is not None else transitions[0].src
    return Fsm(inputs_width, outputs_width, tuple(states), reset_state, tuple(transitions))


def emit_kiss2(fsm: Fsm) -> str:
    """Render an :class:`Fsm` as KISS2 text.

    Emits .i/.o/.p/.s/.r then one line per transition in order, then .e,
    preserving '-' positions verbatim.  The format has no way to write a
    zero-width pattern field, so machines with zero inputs or outputs
    are rejected.
    """
    if fsm.inputs_width == 0 or fsm.outputs_width == 0:
        raise ValueError("KISS2 cannot represent zero-width input or output fields")
    lines = [
        f".i {fsm.inputs_width}",
        f".o {fsm.outputs_width}",
        f".p {len(fsm.transitions)}",
        f".s {len(fsm.states)}",
        f".r {fsm.reset_state}",
    ]
    for t in fsm.transitions:
        lines.append(f"{t.input.chars} {t.src} {t.dst} {t.output.chars}")
    lines.append(".e")
    return "\n".join(lines) + "\n"
