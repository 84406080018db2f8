"""The three-party pay-per-device licensing flow.

Parties are plain in-process objects exchanging message values; a run
produces an auditable seven-step transcript plus a Deliverable bundling
the locked machine, its license, and the metadata activation needs.
Knowledge stays where the flow puts it: the FPGA vendor keeps device
seeds, the IP vendor keeps only enrolled challenge-response pairs, and
the system designer ends up with a device, a locked IP, and a license,
never seeing a raw response.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .bits import BitString
from .fsm import Fsm, emit_kiss2, parse_kiss2
from .lock import LAYERED, BoostedFsm, LayeredParams, build_bfsm, random_license
from .puf import CrDatabase, CrPair, MockPuf, enroll, respond
from .unlock import UnlockOutcome, run_unlock


class ProtocolError(RuntimeError):
    """A party cannot honor a message (unknown ids, spent challenges, failed activation)."""


class DeliverableError(ValueError):
    """A deliverable directory is missing pieces or malformed."""


@dataclass(frozen=True)
class CrTransfer:
    """Step 2: enrollment data handed from FPGA vendor to IP vendor."""

    device_id: str
    pairs: tuple[CrPair, ...]


@dataclass(frozen=True)
class DeviceSale:
    """Step 3: the physical device (with its id) handed to the designer."""

    device_id: str
    device: MockPuf


@dataclass(frozen=True)
class OrderRequest:
    """Step 4: the designer names the FPGA and the IP to license."""

    fpga_id: str
    ip_id: str


@dataclass(frozen=True)
class TranscriptEntry:
    step: int
    sender: str
    receiver: str
    summary: str


@dataclass(frozen=True)
class Transcript:
    """Ordered record of who told what to whom, one entry per protocol step."""

    entries: tuple[TranscriptEntry, ...]

    def __post_init__(self) -> None:
        for earlier, later in zip(self.entries, self.entries[1:]):
            if later.step < earlier.step:
                raise ValueError("transcript steps must be non-decreasing")

    def render(self) -> str:
        return "".join(
            f"{e.step}. {e.sender} -> {e.receiver}: {e.summary}\n" for e in self.entries)


_META_LIST_KEYS = ("dummy_states", "black_holes")


@dataclass(frozen=True)
class Deliverable:
    """Step 6: the locked IP, its license, and what activation needs to know."""

    locked_kiss2: str
    license: BitString
    ip_id: str
    fpga_id: str
    challenge: int
    scheme: str
    selector_bits: int
    dummy_states: tuple[str, ...]
    black_holes: tuple[str, ...]
    original_reset: str
    layered: LayeredParams | None = None

    @classmethod
    def bundle(cls, bfsm: BoostedFsm, license: BitString, ip_id: str,
               fpga_id: str, challenge: int) -> "Deliverable":
        return cls(
            locked_kiss2=emit_kiss2(bfsm.fsm),
            license=license,
            ip_id=ip_id,
            fpga_id=fpga_id,
            challenge=challenge,
            scheme=bfsm.scheme,
            selector_bits=bfsm.selector_bits,
            dummy_states=bfsm.dummy_states,
            black_holes=bfsm.black_holes,
            original_reset=bfsm.original_reset,
            layered=bfsm.layered,
        )

    def to_bfsm(self) -> BoostedFsm:
        """Reconstruct the locked machine from the shipped text."""
        fsm = parse_kiss2(self.locked_kiss2)
        known = set(fsm.states)
        for name in (*self.dummy_states, *self.black_holes, self.original_reset):
            if name not in known:
                raise DeliverableError(f"metadata names unknown state {name!r}")
        return BoostedFsm(fsm, self.dummy_states, self.black_holes,
                          self.original_reset, self.selector_bits, self.scheme,
                          self.layered)

    def meta_text(self) -> str:
        lines = [
            f"ip_id={self.ip_id}",
            f"fpga_id={self.fpga_id}",
            f"challenge_hex={self.challenge:016x}",
            f"scheme={self.scheme}",
            f"b={self.selector_bits}",
            f"n={len(self.dummy_states)}",
            f"h={len(self.black_holes)}",
            f"original_reset={self.original_reset}",
            f"dummy_states={','.join(self.dummy_states)}",
            f"black_holes={','.join(self.black_holes)}",
        ]
        if self.layered is not None:
            lines.append(f"m={self.layered.branch_states}")
            lines.append(f"M={self.layered.layers}")
        return "".join(line + "\n" for line in lines)

    def write_dir(self, path: str) -> None:
        """Lay the deliverable out as locked.kiss2 + license.txt + meta.txt."""
        os.makedirs(path, exist_ok=True)
        for name, text in (
            ("locked.kiss2", self.locked_kiss2),
            ("license.txt", self.license.text + "\n"),
            ("meta.txt", self.meta_text()),
        ):
            with open(os.path.join(path, name), "w", encoding="ascii") as handle:
                handle.write(text)

    @classmethod
    def read_dir(cls, path: str) -> "Deliverable":
        def slurp(name: str) -> str:
            full = os.path.join(path, name)
            try:
                with open(full, "r", encoding="ascii") as handle:
                    return handle.read()
            except OSError as err:
                raise DeliverableError(f"cannot read {full}: {err}") from None

        locked_kiss2 = slurp("locked.kiss2")
        try:
            license = BitString.from_text(slurp("license.txt").strip())
        except ValueError as err:
            raise DeliverableError(f"bad license.txt: {err}") from None
        meta: dict[str, str] = {}
        for line_no, raw in enumerate(slurp("meta.txt").splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise DeliverableError(f"meta.txt line {line_no} is not key=value")
            meta[key.strip()] = value.strip()
        try:
            scheme = meta["scheme"]
            selector_bits = int(meta["b"])
            chain = int(meta["n"])
            holes = int(meta["h"])
            challenge = int(meta["challenge_hex"], 16)
            dummy_states = tuple(s for s in meta["dummy_states"].split(",") if s)
            black_holes = tuple(s for s in meta["black_holes"].split(",") if s)
            deliverable = cls(
                locked_kiss2=locked_kiss2,
                license=license,
                ip_id=meta["ip_id"],
                fpga_id=meta["fpga_id"],
                challenge=challenge,
                scheme=scheme,
                selector_bits=selector_bits,
                dummy_states=dummy_states,
                black_holes=black_holes,
                original_reset=meta["original_reset"],
                layered=LayeredParams(int(meta["m"]), int(meta["M"]))
                if scheme == LAYERED else None,
            )
        except KeyError as err:
            raise DeliverableError(f"meta.txt is missing key {err.args[0]!r}") from None
        except ValueError as err:
            raise DeliverableError(f"bad meta.txt value: {err}") from None
        if len(deliverable.dummy_states) != chain or len(deliverable.black_holes) != holes:
            raise DeliverableError("meta.txt counts disagree with the listed state names")
        return deliverable


@dataclass
class FpgaVendor:
    """Manufactures devices, enrolls them, and sells them on."""

    device_seeds: dict[str, int] = field(default_factory=dict)

    def manufacture(self, device_seed: int) -> str:
        device_id = MockPuf(device_seed).device_id
        self.device_seeds[device_id] = device_seed
        return device_id

    def enroll_device(self, device_id: str, challenges: list[int],
                      width: int) -> CrTransfer:
        if device_id not in self.device_seeds:
            raise ProtocolError(f"no such device {device_id}")
        _, pairs = enroll(self.device_seeds[device_id], challenges, width)
        return CrTransfer(device_id, tuple(pairs))

    def sell(self, device_id: str) -> DeviceSale:
        if device_id not in self.device_seeds:
            raise ProtocolError(f"no such device {device_id}")
        return DeviceSale(device_id, MockPuf(self.device_seeds[device_id]))


@dataclass
class IpVendor:
    """Holds the IP library and the enrolled pairs; locks IPs to order."""

    ip_library: dict[str, Fsm] = field(default_factory=dict)
    crdb: CrDatabase = field(default_factory=CrDatabase)
    challenges_spent: dict[str, int] = field(default_factory=dict)

    def register_ip(self, ip_id: str, ip: Fsm) -> None:
        self.ip_library[ip_id] = ip

    def receive_enrollment(self, transfer: CrTransfer) -> None:
        self.crdb.add(transfer.device_id, list(transfer.pairs))

    def fill_order(self, order: OrderRequest, license_seed: int,
                   wiring_seed: int) -> Deliverable:
        if order.ip_id not in self.ip_library:
            raise ProtocolError(f"unknown IP {order.ip_id}")
        if order.fpga_id not in self.crdb.records:
            raise ProtocolError(f"no enrolled pairs for device {order.fpga_id}")
        pairs = self.crdb.pairs_for(order.fpga_id)
        spent = self.challenges_spent.get(order.fpga_id, 0)
        if spent >= len(pairs):
            raise ProtocolError(f"device {order.fpga_id} has no unspent challenges")
        pair = pairs[spent]
        self.challenges_spent[order.fpga_id] = spent + 1
        license = random_license(license_seed, pair.response.width)
        bfsm = build_bfsm(self.ip_library[order.ip_id], pair.response, license,
                          wiring_seed=wiring_seed)
        return Deliverable.bundle(bfsm, license, order.ip_id, order.fpga_id,
                                  pair.challenge)


@dataclass
class SystemDesigner:
    """Buys a device and locked IPs; holds no challenge-response data."""

    device_id: str | None = None
    device: MockPuf | None = None
    deliverables: list[Deliverable] = field(default_factory=list)

    def buy_device(self, sale: DeviceSale) -> None:
        self.device_id = sale.device_id
        self.device = sale.device

    def place_order(self, ip_id: str) -> OrderRequest:
        if self.device_id is None:
            raise ProtocolError("cannot order an IP without a device")
        return OrderRequest(self.device_id, ip_id)

    def receive(self, deliverable: Deliverable) -> None:
        self.deliverables.append(deliverable)


def activate(deliverable: Deliverable, device: MockPuf, challenge: int) -> UnlockOutcome:
    """Step 7: measure the device at the deliverable's challenge and walk the chain."""
    bfsm = deliverable.to_bfsm()
    response = respond(device, challenge, bfsm.response_width)
    return run_unlock(bfsm, response, deliverable.license)


def run_protocol(device_seed: int, challenges: list[int], ip_id: str, ip: Fsm,
                 license_bits: int, rng_seed: int = 0,
                 ) -> tuple[Transcript, Deliverable]:
    """Play the seven steps end to end and return the audit trail.

    Deterministic for fixed arguments: the license and black-hole
    wiring derive from ``rng_seed``, everything else from the inputs.
    A failed final activation means the construction itself is broken,
    so it raises instead of returning a transcript.
    """
    fpga_vendor = FpgaVendor()
    ip_vendor = IpVendor()
    designer = SystemDesigner()
    entries: list[TranscriptEntry] = []

    device_id = fpga_vendor.manufacture(device_seed)
    ip_vendor.register_ip(ip_id, ip)
    entries.append(TranscriptEntry(
        1, "fpga_vendor", "fpga_vendor",
        f"manufactured device {device_id}; stored {len(challenges)} challenges"))

    transfer = fpga_vendor.enroll_device(device_id, challenges, license_bits)
    ip_vendor.receive_enrollment(transfer)
    entries.append(TranscriptEntry(
        2, "fpga_vendor", "ip_vendor",
        f"C-R pairs for device {device_id}: {len(transfer.pairs)}"
        f" pairs, {license_bits}-bit responses"))

    sale = fpga_vendor.sell(device_id)
    designer.buy_device(sale)
    entries.append(TranscriptEntry(
        3, "fpga_vendor", "designer", f"sold device {device_id}"))

    order = designer.place_order(ip_id)
    entries.append(TranscriptEntry(
        4, "designer", "ip_vendor",
        f"order: IP {order.ip_id} for device {order.fpga_id}"))

    deliverable = ip_vendor.fill_order(order, license_seed=rng_seed,
                                       wiring_seed=rng_seed)
    locked = deliverable.to_bfsm()
    added = len(locked.fsm.states) - len(ip.states)
    entries.append(TranscriptEntry(
        5, "ip_vendor", "ip_vendor",
        f"locked {ip_id} for challenge {deliverable.challenge:016x}: +{added} states"))

    designer.receive(deliverable)
    entries.append(TranscriptEntry(
        6, "ip_vendor", "designer",
        f"deliverable: locked {ip_id} + {deliverable.license.width}-bit license"))

    assert designer.device is not None
    outcome = activate(deliverable, designer.device, deliverable.challenge)
    if not outcome.unlocked:
        raise ProtocolError(f"activation failed on the ordered device: {outcome}")
    entries.append(TranscriptEntry(
        7, "designer", "designer",
        f"activated {ip_id} on device {device_id}: {outcome}"))

    return Transcript(tuple(entries)), deliverable
