"""Fixed-width bit words with MSB-first ordering.

Every bit string in this package follows one convention: bit 0 is the most
significant bit of the word. When a word is packed into bytes, bit 0 of the
word becomes bit 7 of byte 0, and the final byte is zero-padded on the low
end. Hex encodings are the hex digits of that byte packing.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable

BITFILE_MAGIC = b"DMB1"


@dataclass(frozen=True)
class BitWord:
    """Immutable width-tagged bit string backed by an int."""

    value: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 0:
            raise ValueError(f"negative width {self.width}")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    def __len__(self) -> int:
        return self.width

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitWord":
        value = 0
        width = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit must be 0 or 1, got {b!r}")
            value = (value << 1) | b
            width += 1
        return cls(value, width)

    def bits(self) -> tuple[int, ...]:
        """All bits, most significant first."""
        return tuple((self.value >> (self.width - 1 - i)) & 1 for i in range(self.width))

    def field(self, offset: int, width: int) -> int:
        """Value of the bits [offset, offset + width), MSB-first."""
        if offset < 0 or width < 0 or offset + width > self.width:
            raise ValueError(f"field [{offset}, {offset + width}) outside word of width {self.width}")
        return (self.value >> (self.width - offset - width)) & ((1 << width) - 1)

    @classmethod
    def concat(cls, parts: Iterable["BitWord"]) -> "BitWord":
        value = 0
        width = 0
        for p in parts:
            value = (value << p.width) | p.value
            width += p.width
        return cls(value, width)

    def to_bytes(self) -> bytes:
        n = (self.width + 7) // 8
        return (self.value << (8 * n - self.width)).to_bytes(n, "big")

    @classmethod
    def from_bytes(cls, data: bytes, width: int) -> "BitWord":
        if len(data) != (width + 7) // 8:
            raise ValueError(f"{len(data)} bytes cannot hold exactly {width} bits")
        pad = 8 * len(data) - width
        raw = int.from_bytes(data, "big")
        if raw & ((1 << pad) - 1):
            raise ValueError("nonzero padding bits")
        return cls(raw >> pad, width)

    def hex(self) -> str:
        return self.to_bytes().hex()

    @classmethod
    def from_hex(cls, text: str, width: int) -> "BitWord":
        return cls.from_bytes(bytes.fromhex(text), width)


def pack_symbols(symbols: Iterable[int], bits_per_symbol: int) -> BitWord:
    """Pack fixed-width symbols into a word, first symbol in the high bits."""
    if bits_per_symbol < 1:
        raise ValueError("bits_per_symbol must be >= 1")
    value = 0
    width = 0
    limit = 1 << bits_per_symbol
    for s in symbols:
        if not 0 <= s < limit:
            raise ValueError(f"symbol {s} does not fit in {bits_per_symbol} bits")
        value = (value << bits_per_symbol) | s
        width += bits_per_symbol
    return BitWord(value, width)


def unpack_symbols(word: BitWord, bits_per_symbol: int) -> tuple[int, ...]:
    """Inverse of pack_symbols."""
    if bits_per_symbol < 1:
        raise ValueError("bits_per_symbol must be >= 1")
    if word.width % bits_per_symbol:
        raise ValueError(f"width {word.width} is not a multiple of {bits_per_symbol}")
    n = word.width // bits_per_symbol
    mask = (1 << bits_per_symbol) - 1
    return tuple((word.value >> (bits_per_symbol * (n - 1 - i))) & mask for i in range(n))


def write_bitfile(path: str | os.PathLike, word: BitWord) -> None:
    """Write a word as: magic, 8-byte big-endian bit count, MSB-first payload."""
    with open(path, "wb") as f:
        f.write(BITFILE_MAGIC)
        f.write(word.width.to_bytes(8, "big"))
        f.write(word.to_bytes())


def read_bitfile(path: str | os.PathLike) -> BitWord:
    with open(path, "rb") as f:
        magic = f.read(4)
        if magic != BITFILE_MAGIC:
            raise ValueError(f"not a bit file (bad magic {magic!r})")
        width = int.from_bytes(f.read(8), "big")
        data = f.read()
    return BitWord.from_bytes(data, width)
