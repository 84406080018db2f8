"""A deterministic stand-in for a device-unique challenge-response circuit.

Responses come from a splitmix-style 64-bit finalizer over the device
seed and challenge, so the same (seed, challenge, width) always yields
the same response while different seeds decorrelate thoroughly.  Widths
beyond 64 rehash with a block counter; narrower widths are prefixes of
wider ones (bit k is independent of the requested width).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .bits import BitString

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

MAX_RESPONSE_BITS = 512


def mix64(z: int) -> int:
    """The splitmix64 output finalizer (bijective on 64-bit values)."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass(frozen=True)
class MockPuf:
    """One simulated device, identified by its 64-bit manufacturing seed."""

    device_seed: int

    def __post_init__(self) -> None:
        if not 0 <= self.device_seed <= _MASK64:
            raise ValueError(f"device seed must fit in 64 bits, got {self.device_seed}")

    @property
    def device_id(self) -> str:
        """Public identifier: the mixed seed, in decimal."""
        return str(mix64(self.device_seed))


def respond(puf: MockPuf, challenge: int, width: int) -> BitString:
    """The device's ``width``-bit response to a 64-bit challenge.

    Bit k of the response is bit (k mod 64) of
    ``mix64(seed ^ challenge ^ (k // 64) * golden)``.
    """
    if not 0 <= challenge <= _MASK64:
        raise ValueError(f"challenge must fit in 64 bits, got {challenge}")
    if not 1 <= width <= MAX_RESPONSE_BITS:
        raise ValueError(f"response width must be in 1..{MAX_RESPONSE_BITS}, got {width}")
    value = 0
    for block in range((width + 63) // 64):
        word = mix64(puf.device_seed ^ challenge ^ ((block * _GOLDEN) & _MASK64))
        value |= word << (64 * block)
    return BitString(width, value & ((1 << width) - 1))


@dataclass(frozen=True)
class CrPair:
    """One enrolled challenge-response pair."""

    challenge: int
    response: BitString


def enroll(device_seed: int, challenges: list[int], width: int) -> tuple[str, list[CrPair]]:
    """Measure a fresh device once per challenge (enrollment happens before sale)."""
    if not challenges:
        raise ValueError("enrollment needs at least one challenge")
    puf = MockPuf(device_seed)
    return puf.device_id, [CrPair(c, respond(puf, c, width)) for c in challenges]


class CrDbError(ValueError):
    """Malformed challenge-response database file."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"{message} (line {line})")
        self.line = line


@dataclass
class CrDatabase:
    """The IP vendor's store of enrolled pairs, keyed by device id."""

    records: dict[str, tuple[CrPair, ...]] = field(default_factory=dict)

    def add(self, device_id: str, pairs: list[CrPair]) -> None:
        if device_id in self.records:
            raise ValueError(f"device {device_id} is already enrolled")
        if not pairs:
            raise ValueError("cannot enroll a device with no pairs")
        self.records[device_id] = tuple(pairs)

    def pairs_for(self, device_id: str) -> tuple[CrPair, ...]:
        if device_id not in self.records:
            raise KeyError(f"no enrolled pairs for device {device_id}")
        return self.records[device_id]


def save_db(db: CrDatabase, path: str) -> None:
    """Write the database as tab-separated text, atomically (write then rename)."""
    lines = []
    for device_id, pairs in db.records.items():
        for pair in pairs:
            lines.append(f"{device_id}\t{pair.challenge:016x}\t{pair.response.text}")
    body = "".join(line + "\n" for line in lines)
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="ascii") as handle:
        handle.write(body)
    os.replace(tmp, path)


def load_db(path: str) -> CrDatabase:
    """Read a database file back; any malformed line fails the whole load."""
    records: dict[str, list[CrPair]] = {}
    with open(path, "r", encoding="ascii") as handle:
        text = handle.read()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise CrDbError(
                f"expected 3 tab-separated fields, got {len(fields)}", line_no)
        device_id, challenge_hex, response_bits = fields
        if not device_id:
            raise CrDbError("empty device id", line_no)
        try:
            challenge = int(challenge_hex, 16)
        except ValueError:
            raise CrDbError(f"bad challenge {challenge_hex!r}", line_no) from None
        if not 0 <= challenge <= _MASK64:
            raise CrDbError(f"challenge {challenge_hex!r} exceeds 64 bits", line_no)
        try:
            response = BitString.from_text(response_bits)
        except ValueError:
            raise CrDbError(f"bad response bits {response_bits!r}", line_no) from None
        if response.width == 0:
            raise CrDbError("empty response", line_no)
        records.setdefault(device_id, []).append(CrPair(challenge, response))
    return CrDatabase({device_id: tuple(pairs) for device_id, pairs in records.items()})
