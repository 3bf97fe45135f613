"""Fixed-width bit strings and the toolkit's canonical bit/hex conventions.

Bit index 0 is the lowest-degree (least significant) position everywhere in
this package.  Hex renderings are zero-padded to ceil(width / 4) digits with
bit 0 in the least significant bit of the last hex digit, so serialized
values are bit-exact across implementations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator


class LengthMismatchError(ValueError):
    """Two bit strings of different widths were combined."""


@dataclass(frozen=True, slots=True)
class Bits:
    """Immutable bit string of a fixed width."""

    value: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError(f"width must be >= 1, got {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value:#x} does not fit in {self.width} bits")

    @classmethod
    def zeros(cls, width: int) -> "Bits":
        return cls(0, width)

    @classmethod
    def random(cls, width: int, rng: random.Random) -> "Bits":
        """Uniform width-bit string, i.e. Bernoulli(0.5) per bit."""
        return cls(rng.getrandbits(width), width)

    @classmethod
    def from_hex(cls, text: str, width: int) -> "Bits":
        digits = (width + 3) // 4
        if len(text) != digits:
            raise ValueError(f"expected {digits} hex digits for {width} bits, got {len(text)}")
        value = int(text, 16)
        if value >= 1 << width:
            raise ValueError(f"hex value {text!r} exceeds {width} bits")
        return cls(value, width)

    @property
    def hex(self) -> str:
        return f"{self.value:0{(self.width + 3) // 4}x}"

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def bit(self, i: int) -> int:
        if not 0 <= i < self.width:
            raise IndexError(f"bit index {i} out of range for width {self.width}")
        return (self.value >> i) & 1

    def flip(self, *positions: int) -> "Bits":
        mask = 0
        for i in positions:
            if not 0 <= i < self.width:
                raise IndexError(f"bit index {i} out of range for width {self.width}")
            mask |= 1 << i
        return Bits(self.value ^ mask, self.width)

    def hamming(self, other: "Bits") -> int:
        if self.width != other.width:
            raise LengthMismatchError(f"widths differ: {self.width} vs {other.width}")
        return (self.value ^ other.value).bit_count()

    def __xor__(self, other: "Bits") -> "Bits":
        if self.width != other.width:
            raise LengthMismatchError(f"widths differ: {self.width} vs {other.width}")
        return Bits(self.value ^ other.value, self.width)

    def __len__(self) -> int:
        return self.width

    def __iter__(self) -> Iterator[int]:
        """Bits in index order, i.e. lowest degree first."""
        v = self.value
        for _ in range(self.width):
            yield v & 1
            v >>= 1

    def __str__(self) -> str:
        return self.hex
