"""Command-line surface: parameter tables, locking, sweeps, verification, demo.

Exit codes: 0 success, 1 usage, 2 input parse error, 3 infeasible
parameters, 4 verification failure.  Human-readable report on stdout;
a machine-readable key=value block follows a `---` line; diagnostics
go to stderr.  All randomness flows from explicit --seed flags.
"""

from __future__ import annotations

import argparse
import os
import random
import re
import sys
from typing import NoReturn

from .bits import BitString
from .fsm import Fsm, Kiss2Error, counter_fsm, parse_kiss2
from .hdl import emit_hdl
from .lock import (LAYERED, PROPOSED, LayeredParams, build_bfsm, build_layered,
                   random_license)
from .params import continuous_optimum_b, optimize, states_added_layered
from .protocol import (Deliverable, DeliverableError, ProtocolError, activate,
                       run_protocol)
from .puf import MockPuf, respond
from .report import CITED_HIGH_SECURITY_LAYERED, HIGH_SECURITY_LAYERED_SHAPE
from .unlock import (DEFAULT_SWEEP_LIMIT, count_valid_licenses,
                     count_valid_responses, run_unlock, trace_equivalence,
                     unlock_probability_layered, unlock_probability_proposed)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4

_LAYERED_ARG_RE = re.compile(r"^m=(\d+),M=(\d+)$")


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; this tool reserves
    2 for input parse errors, so usage errors exit 1 instead."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _machine_block(pairs: list[tuple[str, object]]) -> None:
    print("---")
    for key, value in pairs:
        print(f"{key}={value}")


def _layered_arg(text: str) -> LayeredParams:
    match = _LAYERED_ARG_RE.match(text)
    if not match:
        raise argparse.ArgumentTypeError(
            f"expected m=<count>,M=<layers>, got {text!r}")
    try:
        return LayeredParams(int(match.group(1)), int(match.group(2)))
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _bits_arg(text: str) -> BitString:
    try:
        return BitString.from_text(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _read_fsm(path: str) -> Fsm:
    with open(path, "r", encoding="ascii") as handle:
        return parse_kiss2(handle.read())


def _module_name(stem: str) -> str:
    cleaned = re.sub(r"[^A-Za-z0-9_]", "_", stem) or "fsm"
    return f"locked_{cleaned}"


def _step_bits_note(lp: LayeredParams) -> str | None:
    if (1 << lp.bits_per_step) != lp.branch_states:
        return (f"note: {lp.branch_states} is not a power of two; each step"
                f" consumes ceil(log2 {lp.branch_states}) = {lp.bits_per_step} bits")
    return None


def cmd_params(args: argparse.Namespace) -> int:
    if args.license_bits < 1:
        return _fail(EXIT_INFEASIBLE, f"no feasible selector width for L={args.license_bits}")
    p = optimize(args.license_bits)
    b_star = continuous_optimum_b(args.license_bits)
    print(f"license bits        L  = {p.license_bits}")
    print(f"selector bits       b  = {p.selector_bits}")
    print(f"dummy chain states  n  = {p.chain_states}")
    print(f"black-hole states   h  = {p.black_hole_states}")
    print(f"added states        SN = {p.added_states}")
    print(f"continuous optimum  b* = {b_star:.9f} (integer scan decides)")
    pairs: list[tuple[str, object]] = [
        ("L", p.license_bits), ("b", p.selector_bits), ("n", p.chain_states),
        ("h", p.black_hole_states), ("sn", p.added_states),
        ("b_star", f"{b_star:.9f}"),
    ]
    lp: LayeredParams | None = args.layered
    if lp is not None:
        added = states_added_layered(lp.branch_states, lp.layers)
        print(f"layered baseline (m={lp.branch_states}, M={lp.layers}):"
              f" {added} added states")
        note = _step_bits_note(lp)
        if note:
            print(note)
        if (lp.branch_states, lp.layers) == (
                HIGH_SECURITY_LAYERED_SHAPE.branch_states,
                HIGH_SECURITY_LAYERED_SHAPE.layers):
            print(f"note: the commonly cited total for (m=3, M=178) is"
                  f" {CITED_HIGH_SECURITY_LAYERED}; the layer formula"
                  f" (M/2)(1+m) gives {added} and no derivation of"
                  f" {CITED_HIGH_SECURITY_LAYERED} is on record")
        pairs += [("layered_m", lp.branch_states), ("layered_M", lp.layers),
                  ("layered_step_bits", lp.bits_per_step), ("layered_added", added)]
    _machine_block(pairs)
    return EXIT_OK


def _resolve_response(args: argparse.Namespace, width: int) -> BitString | int:
    """The response from --response or --device-seed/--challenge; int = exit code."""
    if args.response is not None:
        if args.response.width != width:
            return _fail(EXIT_INFEASIBLE,
                         f"--response is {args.response.width} bits, need {width}")
        return args.response
    if args.device_seed is not None:
        return respond(MockPuf(args.device_seed), args.challenge, width)
    return _fail(EXIT_USAGE, "provide --response or --device-seed")


def cmd_lock(args: argparse.Namespace) -> int:
    try:
        original = _read_fsm(args.input)
    except (OSError, Kiss2Error) as err:
        return _fail(EXIT_PARSE, str(err))

    if args.license is not None:
        license = args.license
    elif args.license_bits is not None:
        if args.license_bits < 1:
            return _fail(EXIT_INFEASIBLE, "license width must be positive")
        license = random_license(args.seed, args.license_bits)
    else:
        return _fail(EXIT_USAGE, "provide -L or --license")

    lp: LayeredParams | None = args.layered
    if args.scheme == LAYERED:
        if lp is None:
            return _fail(EXIT_USAGE, "--scheme layered needs --layered m=<m>,M=<M>")
        if license.width != lp.license_bits:
            return _fail(EXIT_INFEASIBLE,
                         f"layered (m={lp.branch_states}, M={lp.layers}) takes a"
                         f" {lp.license_bits}-bit license, got {license.width}")
        response_width = lp.response_bits
    else:
        response_width = license.width

    response = _resolve_response(args, response_width)
    if isinstance(response, int):
        return response

    try:
        if args.scheme == LAYERED:
            assert lp is not None
            locked = build_layered(original, response, license, lp)
        else:
            locked = build_bfsm(original, response, license, wiring_seed=args.seed)
    except ValueError as err:
        return _fail(EXIT_INFEASIBLE, str(err))

    stem = os.path.splitext(os.path.basename(args.input))[0]
    if args.device_seed is not None:
        fpga_id = MockPuf(args.device_seed).device_id
        challenge = args.challenge
    else:
        fpga_id = "external-response"
        challenge = 0
    deliverable = Deliverable.bundle(locked, license, stem, fpga_id, challenge)
    deliverable.write_dir(args.out)
    written = ["locked.kiss2", "license.txt", "meta.txt"]
    if args.hdl:
        hdl_path = os.path.join(args.out, "locked.v")
        with open(hdl_path, "w", encoding="ascii") as handle:
            handle.write(emit_hdl(locked.fsm, _module_name(stem)))
        written.append("locked.v")

    added_states = len(locked.fsm.states) - len(original.states)
    added_transitions = len(locked.fsm.transitions) - len(original.transitions)
    print(f"locked {stem}: {len(original.states)} -> {len(locked.fsm.states)} states"
          f" (+{added_states}), {len(original.transitions)} ->"
          f" {len(locked.fsm.transitions)} transitions (+{added_transitions})")
    if lp is not None:
        note = _step_bits_note(lp)
        if note:
            print(note)
    print(f"wrote {', '.join(written)} to {args.out}")
    pairs: list[tuple[str, object]] = [
        ("scheme", locked.scheme), ("b", locked.selector_bits),
        ("n", len(locked.dummy_states)), ("h", len(locked.black_holes)),
        ("added_states", added_states), ("added_transitions", added_transitions),
        ("total_states", len(locked.fsm.states)),
        ("response_bits", locked.response_width),
        ("license_bits", locked.license_width), ("out", args.out),
    ]
    _machine_block(pairs)
    return EXIT_OK


def cmd_count_valid(args: argparse.Namespace) -> int:
    try:
        deliverable = Deliverable.read_dir(args.locked)
        locked = deliverable.to_bfsm()
    except (DeliverableError, Kiss2Error, ValueError) as err:
        return _fail(EXIT_PARSE, str(err))
    license = deliverable.license
    if args.license is not None:
        try:
            with open(args.license, "r", encoding="ascii") as handle:
                license = BitString.from_text(handle.read().strip())
        except (OSError, ValueError) as err:
            return _fail(EXIT_PARSE, f"bad license file: {err}")

    try:
        if args.target == "responses":
            report = count_valid_responses(locked, license, limit=args.limit)
        else:
            response = respond(MockPuf(args.device_seed), deliverable.challenge,
                               locked.response_width) if args.device_seed is not None \
                else None
            if response is None:
                if args.response is None:
                    return _fail(EXIT_USAGE,
                                 "license sweep needs --response or --device-seed")
                response = args.response
            if response.width != locked.response_width:
                return _fail(EXIT_INFEASIBLE,
                             f"--response is {response.width} bits,"
                             f" need {locked.response_width}")
            report = count_valid_licenses(locked, response, limit=args.limit)
    except ValueError as err:
        return _fail(EXIT_INFEASIBLE, str(err))

    print(f"scheme: {locked.scheme}")
    print(f"valid {args.target}: {report.valid_count} / {report.space_size}")
    if report.valid_examples:
        shown = " ".join(e.text for e in report.valid_examples)
        print(f"examples: {shown}")
    pairs: list[tuple[str, object]] = [
        ("scheme", locked.scheme), ("target", args.target),
        ("valid_count", report.valid_count), ("space_size", report.space_size),
    ]
    if args.target == "responses":
        brute = f"{max(report.valid_count - 1, 0)}/{report.space_size}"
        print(f"excluding the authorized response: {brute}")
        if locked.scheme == LAYERED:
            assert locked.layered is not None
            closed = unlock_probability_layered(locked.layered.branch_states,
                                                locked.layered.layers)
            print(f"closed-form unauthorized unlock probability: {closed}")
            note = _step_bits_note(locked.layered)
            if note:
                print(note)
        else:
            closed = unlock_probability_proposed()
            print(f"closed-form unauthorized unlock probability: {closed}")
        pairs += [("excluding_authorized", brute), ("closed_form", closed)]
    _machine_block(pairs)
    if locked.scheme == PROPOSED and args.target == "responses" \
            and report.valid_count != 1:
        return _fail(EXIT_VERIFY,
                     f"expected exactly 1 valid response, found {report.valid_count}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        original = _read_fsm(args.original)
        deliverable = Deliverable.read_dir(args.locked)
        locked = deliverable.to_bfsm()
    except (OSError, Kiss2Error, DeliverableError, ValueError) as err:
        return _fail(EXIT_PARSE, str(err))
    license = args.license if args.license is not None else deliverable.license
    if license.width != locked.license_width:
        return _fail(EXIT_INFEASIBLE,
                     f"license is {license.width} bits, need {locked.license_width}")
    if args.challenge is None:
        args.challenge = deliverable.challenge
    response = _resolve_response(args, locked.response_width)
    if isinstance(response, int):
        return response

    outcome = run_unlock(locked, response, license)
    if not outcome.unlocked:
        return _fail(EXIT_VERIFY,
                     f"trapped at step {outcome.trap_step} in {outcome.trap_state}")
    print(f"unlock: {outcome}")
    rng = random.Random(args.seed)
    width = original.inputs_width
    for trial in range(args.trials):
        vectors = ["".join(rng.choice("01") for _ in range(width))
                   for _ in range(args.steps)]
        if not trace_equivalence(original, locked, response, license, vectors):
            return _fail(EXIT_VERIFY, f"trace mismatch on trial {trial}")
    if args.trials:
        print(f"trace equivalence: {args.trials} trials x {args.steps} steps, all equal")
    _machine_block([
        ("unlocked", 1), ("steps", outcome.steps), ("trials", args.trials),
        ("steps_per_trial", args.steps),
    ])
    return EXIT_OK


def cmd_protocol_demo(args: argparse.Namespace) -> int:
    if args.license_bits < 1:
        return _fail(EXIT_INFEASIBLE, "license width must be positive")
    ip = counter_fsm(7)
    try:
        transcript, deliverable = run_protocol(
            args.device_seed, [args.challenge], "demo-counter", ip,
            args.license_bits, rng_seed=args.seed)
    except ProtocolError as err:
        return _fail(EXIT_VERIFY, str(err))
    except ValueError as err:
        return _fail(EXIT_INFEASIBLE, str(err))
    print(transcript.render(), end="")

    wrong_seed = args.wrong_device_seed
    if wrong_seed is None:
        wrong_seed = args.device_seed + 1
    right = activate(deliverable, MockPuf(args.device_seed), deliverable.challenge)
    wrong = activate(deliverable, MockPuf(wrong_seed), deliverable.challenge)
    print(f"authorized device {deliverable.fpga_id}: {right}")
    print(f"wrong device (seed {wrong_seed}): {wrong}")
    if not right.unlocked:
        return _fail(EXIT_VERIFY, f"authorized activation failed: {right}")
    _machine_block([
        ("steps", len(transcript.entries)),
        ("added_states", len(deliverable.dummy_states) + len(deliverable.black_holes)),
        ("authorized_unlocked", 1),
        ("authorized_steps", right.steps),
        ("wrong_unlocked", int(wrong.unlocked)),
    ])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fsmlock",
                     description="Lock FSM IP cores to one device via a keyed"
                                 " dummy chain with black-hole trap states.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[], help="sizing table for a license width")
    p.add_argument("-L", "--license-bits", type=int, required=True,
                   help="license width in bits")
    p.add_argument("--layered", type=_layered_arg, default=None, metavar="m=M,M=N",
                   help="also report the layered baseline, e.g. m=3,M=178")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("lock", help="build a locked machine and write a deliverable")
    p.add_argument("input", help="original FSM (KISS2)")
    p.add_argument("-L", "--license-bits", type=int, default=None,
                   help="draw a random license of this width (uses --seed)")
    p.add_argument("--license", type=_bits_arg, default=None,
                   help="explicit license bits (MSB first)")
    p.add_argument("--response", type=_bits_arg, default=None,
                   help="explicit device response bits (MSB first)")
    p.add_argument("--device-seed", type=int, default=None,
                   help="derive the response from this device seed")
    p.add_argument("--challenge", type=int, default=0,
                   help="challenge used with --device-seed")
    p.add_argument("--scheme", choices=[PROPOSED, LAYERED], default=PROPOSED)
    p.add_argument("--layered", type=_layered_arg, default=None, metavar="m=M,M=N",
                   help="layered shape, e.g. m=4,M=6")
    p.add_argument("--seed", type=int, default=0, help="license/wiring seed")
    p.add_argument("-o", "--out", required=True, help="deliverable directory")
    p.add_argument("--hdl", action="store_true", help="also write locked.v")
    p.set_defaults(func=cmd_lock)

    p = sub.add_parser("count-valid", help="exhaustively sweep responses or licenses")
    p.add_argument("locked", help="deliverable directory")
    p.add_argument("--license", default=None,
                   help="license file overriding the deliverable's license.txt")
    p.add_argument("--target", choices=["responses", "licenses"], default="responses")
    p.add_argument("--response", type=_bits_arg, default=None,
                   help="fixed response for a license sweep")
    p.add_argument("--device-seed", type=int, default=None,
                   help="derive the fixed response for a license sweep")
    p.add_argument("--limit", type=int, default=DEFAULT_SWEEP_LIMIT,
                   help="enumeration guard in bits")
    p.set_defaults(func=cmd_count_valid)

    p = sub.add_parser("verify", help="check unlock and behavior preservation")
    p.add_argument("original", help="original FSM (KISS2)")
    p.add_argument("locked", help="deliverable directory")
    p.add_argument("--license", type=_bits_arg, default=None,
                   help="license bits (default: the deliverable's)")
    p.add_argument("--response", type=_bits_arg, default=None,
                   help="explicit device response bits")
    p.add_argument("--device-seed", type=int, default=None,
                   help="derive the response from this device seed")
    p.add_argument("--challenge", type=int, default=None,
                   help="challenge for --device-seed (default: the deliverable's)")
    p.add_argument("--trials", type=int, default=100,
                   help="random input sequences to compare (0 = unlock only)")
    p.add_argument("--steps", type=int, default=32, help="length of each sequence")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("protocol-demo", help="run the seven-step licensing flow")
    p.add_argument("-L", "--license-bits", type=int, default=6)
    p.add_argument("--device-seed", type=int, default=123)
    p.add_argument("--challenge", type=int, default=1)
    p.add_argument("--wrong-device-seed", type=int, default=None,
                   help="second device to try (default: device seed + 1)")
    p.add_argument("--seed", type=int, default=0, help="license/wiring seed")
    p.set_defaults(func=cmd_protocol_demo)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE
    return args.func(args)


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
