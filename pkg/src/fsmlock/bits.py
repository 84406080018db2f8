"""Fixed-width bit vectors.

Bit index 0 is the least-significant bit; the textual form is written
most-significant bit first, so ``BitString(6, 0b001011).text == "001011"``
and ``.bit(0) == 1``.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class BitString:
    """An immutable bit vector of a fixed width."""

    width: int
    value: int = 0

    def __post_init__(self) -> None:
        if self.width < 0:
            raise ValueError(f"width must be non-negative, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(
                f"value {self.value} does not fit in {self.width} bits"
            )

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        """Build from an MSB-first string of '0' and '1' characters."""
        if any(c not in "01" for c in text):
            raise ValueError(f"not a binary string: {text!r}")
        return cls(len(text), int(text, 2) if text else 0)

    @property
    def text(self) -> str:
        """MSB-first textual form; empty string for width 0."""
        if self.width == 0:
            return ""
        return format(self.value, f"0{self.width}b")

    def bit(self, index: int) -> int:
        """The bit at ``index`` (0 = least significant)."""
        if not 0 <= index < self.width:
            raise IndexError(f"bit index {index} out of range for width {self.width}")
        return (self.value >> index) & 1

    def chunk(self, index: int, bits: int) -> int:
        """The ``index``-th ``bits``-wide slice, counted from the LSB end.

        ``chunk(0, b)`` covers bit positions ``b-1 .. 0``, ``chunk(1, b)``
        covers ``2b-1 .. b``, and so on.  The slice must lie entirely
        within the vector.
        """
        if bits <= 0:
            raise ValueError(f"chunk width must be positive, got {bits}")
        if index < 0 or (index + 1) * bits > self.width:
            raise ValueError(
                f"chunk {index} of width {bits} exceeds vector width {self.width}"
            )
        return (self.value >> (index * bits)) & ((1 << bits) - 1)

    def xor(self, other: "BitString") -> "BitString":
        if self.width != other.width:
            raise ValueError(
                f"width mismatch: {self.width} vs {other.width}"
            )
        return BitString(self.width, self.value ^ other.value)

    def __str__(self) -> str:
        return self.text
