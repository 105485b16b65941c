"""Energy-ranked construction of the LUT tree.

The tree is built bottom-up. The leaf table enumerates every u-bit output
pattern, reads it as a run of 2-bit amplitude-class symbols, scores it by
total class energy, and keeps the cheapest 2^v patterns. Each layer above
emits words that are concatenations of r-bit fields, one per child; a
candidate word is scored by summing, over its fields, the child's band
energy for that field value, and again the cheapest 2^v candidates are
kept.

Entries are stored in ascending (energy, numeric value) order, so a LUT
index doubles as an energy rank. A v-bit index is composed as the r parent
bits (high) followed by the s information bits (low); a fixed parent value
therefore addresses a contiguous band of 2^s entries, and the exported
band energy is the arithmetic mean over that band. Parents preferring low
field values thus steer every subtree toward low-energy bands, which is
what shapes the output distribution.

All LUTs within a layer share identical contents. Synthesis is
deterministic: identical inputs give bit-identical tables.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

from .mapping import amplitude_pairs
from .tree import LayerParams, TreeSpec, spec_fingerprint, spec_to_mappings, validate_tree

LUTFILE_MAGIC = b"DMLUT001"
LUTFILE_FORMAT = 1


class LutFormatError(ValueError):
    """A serialized LUT set is malformed or inconsistent."""


def pair_class_energies(pairs: Iterable[Sequence[int]]) -> tuple[float, ...]:
    """Mean squared magnitude per class, one class per magnitude group.

    Groups must be disjoint sets of positive odd magnitudes, listed in
    ascending energy order (class index order is energy order).
    """
    seen: set[int] = set()
    energies: list[float] = []
    for i, members in enumerate(pairs):
        if not members:
            raise ValueError(f"class {i} has no members")
        for a in members:
            if a <= 0 or a % 2 == 0:
                raise ValueError(f"magnitude {a} must be positive and odd")
            if a in seen:
                raise ValueError(f"magnitude {a} appears in more than one class")
            seen.add(a)
        energies.append(sum(a * a for a in members) / len(members))
    if not energies:
        raise ValueError("no classes given")
    for lo, hi in zip(energies, energies[1:]):
        if hi <= lo:
            raise ValueError(f"class energies must be strictly increasing, got {energies}")
    return tuple(energies)


# Energies of the four classes under the standard pair layout, uniform LSB.
DEFAULT_CLASS_ENERGIES = pair_class_energies(amplitude_pairs())


@dataclass(frozen=True)
class Lut:
    """One layer's table: entries[i] is the u-bit output for index i.

    entries are the selected subset of all u-bit words, in ascending
    (energy, value) order; entry_energy holds the matching scores, and
    band_energy the per-band means (one band per parent r-value; a single
    band covering everything for the top layer).
    """

    layer_index: int
    in_bits: int
    out_bits: int
    entries: tuple[int, ...]
    entry_energy: tuple[float, ...]
    band_energy: tuple[float, ...]


@dataclass(frozen=True)
class LutSet:
    """All per-layer tables plus the mirror maps, aligned with spec.layers.

    inverse[i] maps a selected u-bit word of spec.layers[i] back to its
    index; unselected words are absent. Treat instances as immutable.
    """

    spec: TreeSpec
    luts: tuple[Lut, ...]
    inverse: tuple[dict[int, int], ...]
    class_energies: tuple[float, ...]

    def lut_for_layer(self, layer_index: int) -> Lut:
        return self.luts[self.spec.depth - layer_index]

    def inverse_for_layer(self, layer_index: int) -> dict[int, int]:
        return self.inverse[self.spec.depth - layer_index]


def _select(candidates: list[tuple[float, int]], keep: int) -> tuple[tuple[int, ...], tuple[float, ...]]:
    candidates.sort()
    kept = candidates[:keep]
    return tuple(w for _, w in kept), tuple(e for e, _ in kept)


def _band_means(energies: Sequence[float], parent_bits: int | None) -> tuple[float, ...]:
    # Index = r (high) || s (low): band rv covers one contiguous slice.
    if parent_bits is None:
        return (sum(energies) / len(energies),)
    n_bands = 1 << parent_bits
    size = len(energies) // n_bands
    return tuple(sum(energies[b * size : (b + 1) * size]) / size for b in range(n_bands))


def synthesize_leaf_lut(
    layer: LayerParams,
    class_energies: Sequence[float] = DEFAULT_CLASS_ENERGIES,
    class_bits: int = 2,
) -> Lut:
    """Build the symbol-side table by exhaustive pattern ranking."""
    n_classes = 1 << class_bits
    if len(class_energies) != n_classes:
        raise ValueError(f"need {n_classes} class energies, got {len(class_energies)}")
    if layer.out_bits % class_bits:
        raise ValueError(f"leaf output width {layer.out_bits} not divisible by {class_bits}")
    if layer.in_bits > layer.out_bits:
        raise ValueError(f"v={layer.in_bits} exceeds u={layer.out_bits}")
    n_sym = layer.out_bits // class_bits
    mask = n_classes - 1
    candidates = []
    for pattern in range(1 << layer.out_bits):
        e = 0.0
        for k in range(n_sym):
            e += class_energies[(pattern >> (class_bits * (n_sym - 1 - k))) & mask]
        candidates.append((e, pattern))
    entries, energies = _select(candidates, 1 << layer.in_bits)
    return Lut(
        layer_index=layer.layer_index,
        in_bits=layer.in_bits,
        out_bits=layer.out_bits,
        entries=entries,
        entry_energy=energies,
        band_energy=_band_means(energies, layer.parent_bits),
    )


def synthesize_parent_lut(layer: LayerParams, child_band_energy: Sequence[float]) -> Lut:
    """Build a non-leaf table; candidate words address child bands.

    A candidate u-bit word is t fields of r_child bits; the leftmost field
    feeds the lowest-indexed child. Its score is the sum of the child band
    energies its fields select.
    """
    n_bands = len(child_band_energy)
    r_child = n_bands.bit_length() - 1
    if n_bands < 2 or n_bands != 1 << r_child:
        raise ValueError(f"child band table size {n_bands} is not a power of two >= 2")
    if layer.out_bits % r_child:
        raise ValueError(f"u={layer.out_bits} is not a multiple of the child field width {r_child}")
    t = layer.out_bits // r_child
    mask = n_bands - 1
    candidates = []
    for word in range(1 << layer.out_bits):
        e = 0.0
        for j in range(t):
            e += child_band_energy[(word >> (r_child * (t - 1 - j))) & mask]
        candidates.append((e, word))
    entries, energies = _select(candidates, 1 << layer.in_bits)
    return Lut(
        layer_index=layer.layer_index,
        in_bits=layer.in_bits,
        out_bits=layer.out_bits,
        entries=entries,
        entry_energy=energies,
        band_energy=_band_means(energies, layer.parent_bits),
    )


def synthesize_tree(
    spec: TreeSpec,
    class_energies: Sequence[float] = DEFAULT_CLASS_ENERGIES,
) -> LutSet:
    """Build every layer bottom-up and the mirror maps."""
    by_layer: dict[int, Lut] = {}
    by_layer[1] = synthesize_leaf_lut(spec.leaf, class_energies, spec.class_bits)
    for layer_index in range(2, spec.depth + 1):
        layer = spec.layer(layer_index)
        by_layer[layer_index] = synthesize_parent_lut(layer, by_layer[layer_index - 1].band_energy)
    luts = tuple(by_layer[layer.layer_index] for layer in spec.layers)
    inverse = tuple({w: i for i, w in enumerate(lut.entries)} for lut in luts)
    return LutSet(spec=spec, luts=luts, inverse=inverse, class_energies=tuple(class_energies))


def stored_bit_counts(lutset: LutSet) -> dict[str, int]:
    """Bits held by the concrete tables (counting the per-LUT copies).

    The mirror table is addressed by all 2^u words and stores a v-bit
    index per address.
    """
    dm_bits = 0
    invdm_bits = 0
    for layer, lut in zip(lutset.spec.layers, lutset.luts):
        dm_bits += layer.lut_count * len(lut.entries) * lut.out_bits
        invdm_bits += layer.lut_count * (1 << lut.out_bits) * lut.in_bits
    return {"dm_bits": dm_bits, "invdm_bits": invdm_bits}


def _pack_words_le(words: Sequence[int], width: int) -> bytes:
    """Pack fixed-width words into a little-endian bit stream.

    Bit k of the stream is bit (k & 7) of byte (k >> 3); each word
    contributes its bits LSB first.
    """
    buf = bytearray()
    acc = 0
    nbits = 0
    for w in words:
        acc |= w << nbits
        nbits += width
        while nbits >= 8:
            buf.append(acc & 0xFF)
            acc >>= 8
            nbits -= 8
    if nbits:
        buf.append(acc & 0xFF)
    return bytes(buf)


def _unpack_words_le(data: bytes, width: int, count: int) -> list[int]:
    if len(data) != (count * width + 7) // 8:
        raise LutFormatError(f"layer blob has {len(data)} bytes, expected {(count * width + 7) // 8}")
    acc = int.from_bytes(data, "little")
    mask = (1 << width) - 1
    out = []
    for i in range(count):
        out.append((acc >> (i * width)) & mask)
    if acc >> (count * width):
        raise LutFormatError("nonzero padding bits in layer blob")
    return out


def save_lutset(lutset: LutSet, path: str | os.PathLike) -> None:
    """Serialize to the versioned binary format.

    Layout: magic, 4-byte LE header length, JSON header (format version,
    modulation widths, layer rows, class energies, spec fingerprint), then
    per layer top-down a 4-byte LE byte count followed by the 2^v entries
    packed as little-endian u-bit words.
    """
    spec = lutset.spec
    header = {
        "format": LUTFILE_FORMAT,
        "m": spec.bits_per_qam,
        "m_sb": spec.shaped_bits_per_qam,
        "layers": spec_to_mappings(spec),
        "class_energy": list(lutset.class_energies),
        "spec_sha256": spec_fingerprint(spec),
    }
    blob = json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
    with open(path, "wb") as f:
        f.write(LUTFILE_MAGIC)
        f.write(len(blob).to_bytes(4, "little"))
        f.write(blob)
        for lut in lutset.luts:
            packed = _pack_words_le(lut.entries, lut.out_bits)
            f.write(len(packed).to_bytes(4, "little"))
            f.write(packed)


def load_lutset(path: str | os.PathLike) -> LutSet:
    """Read the binary format, rebuild derived data, and validate.

    Energies are recomputed from the class-energy table (they are not
    stored); entries are checked for width, injectivity, and ascending
    (energy, value) order.
    """
    with open(path, "rb") as f:
        magic = f.read(8)
        if magic != LUTFILE_MAGIC:
            raise LutFormatError(f"bad magic {magic!r}")
        header_len = int.from_bytes(f.read(4), "little")
        try:
            header = json.loads(f.read(header_len).decode())
        except ValueError as exc:
            raise LutFormatError(f"unreadable header: {exc}") from exc
        if header.get("format") != LUTFILE_FORMAT:
            raise LutFormatError(f"unsupported format {header.get('format')!r}")
        spec = validate_tree(header["layers"], header["m"], header["m_sb"])
        if spec_fingerprint(spec) != header["spec_sha256"]:
            raise LutFormatError("spec fingerprint mismatch")
        class_energies = tuple(float(e) for e in header["class_energy"])
        entries_per_layer = []
        for layer in spec.layers:
            nbytes = int.from_bytes(f.read(4), "little")
            data = f.read(nbytes)
            entries_per_layer.append(_unpack_words_le(data, layer.out_bits, 1 << layer.in_bits))
        if f.read(1):
            raise LutFormatError("trailing bytes after last layer")
    return lutset_from_entries(spec, entries_per_layer, class_energies)


def lutset_from_entries(
    spec: TreeSpec,
    entries_per_layer: Sequence[Sequence[int]],
    class_energies: Sequence[float] = DEFAULT_CLASS_ENERGIES,
) -> LutSet:
    """Assemble a LutSet from explicit per-layer entries (top-down order).

    Recomputes entry and band energies bottom-up and enforces the table
    invariants; does not re-check that entries are the globally cheapest
    selection (use synthesize_tree for that).
    """
    if len(entries_per_layer) != spec.depth:
        raise LutFormatError(f"expected {spec.depth} layers of entries, got {len(entries_per_layer)}")
    class_bits = spec.class_bits
    mask_class = (1 << class_bits) - 1
    luts_by_layer: dict[int, Lut] = {}
    for layer_index in range(1, spec.depth + 1):
        layer = spec.layer(layer_index)
        entries = tuple(entries_per_layer[spec.depth - layer_index])
        if len(entries) != 1 << layer.in_bits:
            raise LutFormatError(f"layer {layer_index}: expected {1 << layer.in_bits} entries")
        energies = []
        if layer_index == 1:
            n_sym = layer.out_bits // class_bits
            for w in entries:
                e = 0.0
                for k in range(n_sym):
                    e += class_energies[(w >> (class_bits * (n_sym - 1 - k))) & mask_class]
                energies.append(e)
        else:
            child = luts_by_layer[layer_index - 1]
            r_child = (len(child.band_energy)).bit_length() - 1
            t = layer.out_bits // r_child
            mask = len(child.band_energy) - 1
            for w in entries:
                e = 0.0
                for j in range(t):
                    e += child.band_energy[(w >> (r_child * (t - 1 - j))) & mask]
                energies.append(e)
        limit = 1 << layer.out_bits
        seen: set[int] = set()
        for w in entries:
            if not 0 <= w < limit:
                raise LutFormatError(f"layer {layer_index}: entry {w} wider than u={layer.out_bits}")
            if w in seen:
                raise LutFormatError(f"layer {layer_index}: duplicate entry {w}")
            seen.add(w)
        for i in range(1, len(entries)):
            if (energies[i], entries[i]) < (energies[i - 1], entries[i - 1]):
                raise LutFormatError(f"layer {layer_index}: entries not in (energy, value) order at {i}")
        luts_by_layer[layer_index] = Lut(
            layer_index=layer_index,
            in_bits=layer.in_bits,
            out_bits=layer.out_bits,
            entries=entries,
            entry_energy=tuple(energies),
            band_energy=_band_means(energies, layer.parent_bits),
        )
    luts = tuple(luts_by_layer[layer.layer_index] for layer in spec.layers)
    inverse = tuple({w: i for i, w in enumerate(lut.entries)} for lut in luts)
    return LutSet(spec=spec, luts=luts, inverse=inverse, class_energies=tuple(class_energies))
