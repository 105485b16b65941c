import pytest

from dmkit import (
    DEFAULT_CLASS_ENERGIES,
    LayerParams,
    LutFormatError,
    load_lutset,
    lut_size_report,
    pair_class_energies,
    save_lutset,
    stored_bit_counts,
    synthesize_leaf_lut,
    synthesize_parent_lut,
    synthesize_tree,
    validate_tree,
)
from conftest import SINGLE_ROWS, TREE2_ROWS, TREE3_ROWS


# --- independent selection oracle ------------------------------------------
# Recomputes every layer's selection from scratch using string slicing, so
# it shares no bit plumbing with the implementation.


def oracle_leaf(v, u, energies):
    scored = []
    for p in range(2**u):
        text = format(p, f"0{u}b")
        e = sum(energies[int(text[2 * i : 2 * i + 2], 2)] for i in range(u // 2))
        scored.append((e, p))
    scored.sort()
    return scored[: 2**v]

def oracle_parent(v, u, r_child, bands):
    t = u // r_child
    scored = []
    for w in range(2**u):
        text = format(w, f"0{u}b")
        e = sum(bands[int(text[r_child * j : r_child * (j + 1)], 2)] for j in range(t))
        scored.append((e, w))
    scored.sort()
    return scored[: 2**v]

def oracle_bands(scored, r, s):
    if r is None:
        return [sum(e for e, _ in scored) / len(scored)]
    return [
        sum(e for e, _ in scored[b * 2**s : (b + 1) * 2**s]) / 2**s
        for b in range(2**r)
    ]


# --- class energies ----------------------------------------------------------


def test_pair_class_energies_standard():
    assert pair_class_energies([(1, 3), (5, 7), (9, 11), (13, 15)]) == (5, 37, 101, 197)


def test_pair_class_energies_small_cases():
    assert pair_class_energies([(1,)]) == (1,)
    assert pair_class_energies([(3, 5)]) == (17,)


def test_pair_class_energies_rejects_bad_classes():
    with pytest.raises(ValueError, match="more than one class"):
        pair_class_energies([(1, 3), (3, 5)])
    with pytest.raises(ValueError, match="odd"):
        pair_class_energies([(2, 4)])
    with pytest.raises(ValueError, match="increasing"):
        pair_class_energies([(5, 7), (1, 3)])
    with pytest.raises(ValueError):
        pair_class_energies([])


# --- single-layer synthesis --------------------------------------------------


def test_leaf_one_symbol():
    layer = LayerParams(layer_index=1, lut_count=1, info_bits=1, in_bits=1, out_bits=2)
    lut = synthesize_leaf_lut(layer)
    assert lut.entries == (0b00, 0b01)
    assert lut.entry_energy == (5.0, 37.0)


def test_leaf_seven_layer_table(full_lutset):
    leaf = full_lutset.lut_for_layer(1)
    assert len(leaf.entries) == 512
    assert leaf.entries[0] == 0
    assert leaf.entry_energy[0] == 25.0  # five cheapest-class symbols


def test_leaf_keep_all_sorted():
    layer = LayerParams(layer_index=1, lut_count=1, info_bits=4, in_bits=4, out_bits=4)
    lut = synthesize_leaf_lut(layer)
    assert sorted(lut.entries) == list(range(16))
    assert list(lut.entry_energy) == sorted(lut.entry_energy)


def test_parent_two_band_example():
    layer = LayerParams(
        layer_index=2, lut_count=1, info_bits=1, in_bits=1, out_bits=2, fanin=None, parent_bits=None
    )
    lut = synthesize_parent_lut(layer, (5.0, 37.0))
    # candidate energies: 00 -> 10, 01 -> 42, 10 -> 42, 11 -> 74; the value
    # tie-break keeps 01 over 10
    assert lut.entries == (0b00, 0b01)
    assert lut.entry_energy == (10.0, 42.0)


def test_parent_keep_all():
    layer = LayerParams(layer_index=2, lut_count=1, info_bits=4, in_bits=4, out_bits=4)
    lut = synthesize_parent_lut(layer, (1.0, 10.0))
    assert sorted(lut.entries) == list(range(16))
    assert list(lut.entry_energy) == sorted(lut.entry_energy)


def test_parent_layer2_of_full_tree(full_lutset):
    lut = full_lutset.lut_for_layer(2)
    assert len(lut.entries) == 2048
    assert lut.entries[0] == 0


def test_parent_rejects_bad_band_table():
    layer = LayerParams(layer_index=2, lut_count=1, info_bits=2, in_bits=2, out_bits=4)
    with pytest.raises(ValueError, match="power of two"):
        synthesize_parent_lut(layer, (1.0, 2.0, 3.0))


# --- whole-tree synthesis vs the oracle --------------------------------------


@pytest.mark.parametrize("rows", [TREE2_ROWS, TREE3_ROWS], ids=["two-layer", "three-layer"])
def test_tree_matches_selection_oracle(rows):
    spec = validate_tree(rows, 8, 4)
    lutset = synthesize_tree(spec)
    scored = oracle_leaf(spec.leaf.in_bits, spec.leaf.out_bits, DEFAULT_CLASS_ENERGIES)
    bands = oracle_bands(scored, spec.leaf.parent_bits, spec.leaf.info_bits)
    assert full_entries(lutset, 1) == [w for _, w in scored]
    for layer_index in range(2, spec.depth + 1):
        layer = spec.layer(layer_index)
        child = spec.layer(layer_index - 1)
        scored = oracle_parent(layer.in_bits, layer.out_bits, child.parent_bits, bands)
        bands = oracle_bands(scored, layer.parent_bits, layer.info_bits)
        assert full_entries(lutset, layer_index) == [w for _, w in scored]


def full_entries(lutset, layer_index):
    return list(lutset.lut_for_layer(layer_index).entries)


def test_single_layer_tree_is_one_leaf():
    spec = validate_tree(SINGLE_ROWS, 8, 4)
    lutset = synthesize_tree(spec)
    assert len(lutset.luts) == 1
    scored = oracle_leaf(2, 4, DEFAULT_CLASS_ENERGIES)
    assert list(lutset.luts[0].entries) == [w for _, w in scored]


# --- table invariants ---------------------------------------------------------


def test_tables_injective_and_sorted(full_lutset):
    for lut in full_lutset.luts:
        assert len(set(lut.entries)) == len(lut.entries)
        pairs = list(zip(lut.entry_energy, lut.entries))
        assert pairs == sorted(pairs)


def test_band_energy_monotone(full_lutset):
    for lut in full_lutset.luts:
        assert list(lut.band_energy) == sorted(lut.band_energy)


def test_mirror_maps(full_lutset):
    for lut, inverse in zip(full_lutset.luts, full_lutset.inverse):
        assert len(inverse) == len(lut.entries)
        for i, w in enumerate(lut.entries):
            assert inverse[w] == i


def test_synthesis_deterministic(full_spec, full_lutset):
    assert synthesize_tree(full_spec) == full_lutset


def test_stored_bits_match_closed_form(full_spec, full_lutset):
    assert stored_bit_counts(full_lutset) == lut_size_report(full_spec)


def test_custom_energy_table_changes_selection():
    # With inverted costs hidden behind a valid ascending table the
    # selection must follow the table, not the default.
    spec = validate_tree(SINGLE_ROWS, 8, 4)
    lutset = synthesize_tree(spec, (1.0, 2.0, 3.0, 100.0))
    assert all((w >> 2) != 3 and (w & 3) != 3 for w in lutset.luts[0].entries)


# --- serialization -------------------------------------------------------------


def test_save_load_roundtrip(tmp_path, full_lutset):
    path = tmp_path / "full.lut"
    save_lutset(full_lutset, path)
    assert load_lutset(path) == full_lutset
    # byte-identical on re-save
    again = tmp_path / "again.lut"
    save_lutset(full_lutset, again)
    assert path.read_bytes() == again.read_bytes()


def test_entries_out_of_order_rejected(tree2_lutset):
    from dmkit import lutset_from_entries

    rows = [list(lut.entries) for lut in tree2_lutset.luts]
    rows[-1][0], rows[-1][1] = rows[-1][1], rows[-1][0]
    with pytest.raises(LutFormatError, match="order"):
        lutset_from_entries(tree2_lutset.spec, rows)


def test_duplicate_entries_rejected(tree2_lutset):
    from dmkit import lutset_from_entries

    rows = [list(lut.entries) for lut in tree2_lutset.luts]
    rows[-1][1] = rows[-1][0]
    with pytest.raises(LutFormatError, match="duplicate"):
        lutset_from_entries(tree2_lutset.spec, rows)


def test_load_rejects_corruption(tmp_path, tree2_lutset):
    path = tmp_path / "t.lut"
    save_lutset(tree2_lutset, path)
    raw = bytearray(path.read_bytes())

    bad = tmp_path / "magic.lut"
    bad.write_bytes(b"NOTALUT0" + raw[8:])
    with pytest.raises(LutFormatError, match="magic"):
        load_lutset(bad)

    trunc = tmp_path / "trunc.lut"
    trunc.write_bytes(raw[:-1])
    with pytest.raises(LutFormatError):
        load_lutset(trunc)

    extra = tmp_path / "extra.lut"
    extra.write_bytes(bytes(raw) + b"\x00")
    with pytest.raises(LutFormatError, match="trailing"):
        load_lutset(extra)
