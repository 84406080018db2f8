#!/usr/bin/env python3
"""Regenerate the KISS2 benchmark stand-ins in this directory.

The classic MCNC'91 sequential benchmarks are not redistributable here,
so these files are deterministic stand-ins matching the originals'
header profiles (.i/.o/.s/.p) while the transition structure is drawn
from a fixed seed.  "complete" profiles enumerate every (state, input
vector) pair the way the dk* machines do; "sparse" profiles use ternary
input patterns with first-match priority, like the larger controllers.

Run from the repository root:  python benchmarks/make_benchmarks.py
"""

from __future__ import annotations

import os
import random

# name, inputs, outputs, states, transitions, style
PROFILES = [
    ("dk14", 3, 5, 7, 56, "complete"),
    ("dk16", 2, 3, 27, 108, "complete"),
    ("dk27", 1, 2, 7, 14, "complete"),
    ("bbara", 4, 2, 10, 60, "sparse"),
    ("styr", 9, 10, 30, 166, "sparse"),
    ("planet", 7, 19, 48, 115, "sparse"),
]

SEED = 2718


def state_names(count: int) -> list[str]:
    return [f"s{i}" for i in range(count)]


def random_output(rng: random.Random, width: int, dash_rate: float) -> str:
    return "".join(
        "-" if rng.random() < dash_rate else rng.choice("01") for _ in range(width))


def complete_machine(rng: random.Random, iw: int, ow: int, ns: int) -> list[str]:
    """One transition per (state, concrete input vector); ring edge on input 0
    keeps every state reachable from s0."""
    names = state_names(ns)
    lines = []
    for i, src in enumerate(names):
        for value in range(1 << iw):
            pattern = format(value, f"0{iw}b")
            if value == 0:
                dst = names[(i + 1) % ns]
            else:
                dst = names[rng.randrange(ns)]
            lines.append(f"{pattern} {src} {dst} {random_output(rng, ow, 0.0)}")
    return lines


def sparse_machine(rng: random.Random, iw: int, ow: int, ns: int, np: int) -> list[str]:
    """Ternary patterns, first-match priority.  Each state opens with a
    catch-all-shaped edge to the next ring state so later patterns are
    genuinely shadowed sometimes, which exercises priority semantics."""
    names = state_names(ns)
    base, extra = divmod(np, ns)
    lines = []
    for i, src in enumerate(names):
        quota = base + (1 if i < extra else 0)
        for k in range(quota):
            if k == 0:
                fixed = {rng.randrange(iw): rng.choice("01")}
                dst = names[(i + 1) % ns]
            else:
                positions = rng.sample(range(iw), k=min(iw, 1 + rng.randrange(3)))
                fixed = {pos: rng.choice("01") for pos in positions}
                dst = names[rng.randrange(ns)]
            pattern = "".join(fixed.get(pos, "-") for pos in range(iw))
            lines.append(f"{pattern} {src} {dst} {random_output(rng, ow, 0.15)}")
    return lines


def render(name: str, iw: int, ow: int, ns: int, np: int, style: str) -> str:
    rng = random.Random(f"{SEED}/{name}")
    if style == "complete":
        body = complete_machine(rng, iw, ow, ns)
    else:
        body = sparse_machine(rng, iw, ow, ns, np)
    assert len(body) == np, f"{name}: body has {len(body)} lines, profile says {np}"
    head = [
        f"# {name}: deterministic stand-in matching the MCNC'91 header profile",
        f"# regenerate with: python benchmarks/make_benchmarks.py (seed {SEED})",
        f".i {iw}",
        f".o {ow}",
        f".p {np}",
        f".s {ns}",
        ".r s0",
    ]
    return "\n".join(head + body + [".e"]) + "\n"


def main() -> None:
    here = os.path.dirname(os.path.abspath(__file__))
    for name, iw, ow, ns, np, style in PROFILES:
        path = os.path.join(here, f"{name}.kiss2")
        with open(path, "w", encoding="ascii") as handle:
            handle.write(render(name, iw, ow, ns, np, style))
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
