import math
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dmkit import (
    BitWord,
    CcdmCode,
    Composition,
    CompositionMismatch,
    RankOverflow,
    ccdm_decode,
    ccdm_encode,
    composition_from_pmf,
    multiset_count,
    rank,
    sequence_to_word,
    unrank,
    word_to_sequence,
)

FULL_COUNTS = (157, 104, 46, 13)


def test_composition_basics():
    comp = Composition((2, 1))
    assert comp.n == 3
    with pytest.raises(ValueError):
        Composition(())
    with pytest.raises(ValueError):
        Composition((0, 0))
    with pytest.raises(ValueError):
        Composition((1, -1))


def test_composition_from_pmf_tie_goes_low():
    assert composition_from_pmf([0.5, 0.5], 3).counts == (2, 1)


def test_composition_from_pmf_published_column():
    comp = composition_from_pmf([0.4906, 0.3250, 0.1438, 0.0406], 320)
    assert comp.counts == FULL_COUNTS


def test_composition_from_pmf_degenerate():
    assert composition_from_pmf([1.0, 0.0, 0.0, 0.0], 5).counts == (5, 0, 0, 0)


def test_composition_from_pmf_rejects_bad_input():
    with pytest.raises(ValueError):
        composition_from_pmf([0.7, 0.7], 4)
    with pytest.raises(ValueError):
        composition_from_pmf([1.2, -0.2], 4)
    with pytest.raises(ValueError):
        composition_from_pmf([1.0], 0)


def test_multiset_count_small():
    assert multiset_count(Composition((2, 2))) == 6
    assert multiset_count(Composition((5, 0, 0, 0))) == 1
    assert multiset_count(Composition((1, 1, 1))) == 6


def test_multiset_count_full_word_capacity():
    # Independent route: the factorial form of the multinomial coefficient.
    count = multiset_count(Composition(FULL_COUNTS))
    by_factorials = math.factorial(320)
    for c in FULL_COUNTS:
        by_factorials //= math.factorial(c)
    assert count == by_factorials
    assert count.bit_length() - 1 >= 507
    assert Composition(FULL_COUNTS).k_max == 507


def test_unrank_two_symbols():
    comp = Composition((1, 1))
    assert unrank(comp, 0) == (0, 1)
    assert unrank(comp, 1) == (1, 0)
    with pytest.raises(ValueError):
        unrank(comp, 2)
    with pytest.raises(ValueError):
        unrank(comp, -1)


def test_unrank_zero_is_sorted():
    for counts in [(3, 2), (1, 2, 3), (2, 0, 1), FULL_COUNTS]:
        comp = Composition(counts)
        seq = unrank(comp, 0)
        assert seq == tuple(sorted(seq))


def test_unrank_matches_brute_force_enumeration():
    comp = Composition((2, 2))
    expected = sorted(set(permutations((0, 0, 1, 1))))
    got = [unrank(comp, i) for i in range(6)]
    assert got == expected


def test_rank_inverts_unrank():
    comp = Composition((2, 2))
    for i in range(6):
        assert rank(unrank(comp, i)) == i
    assert rank((0, 0, 1, 1)) == 0
    assert rank((1, 1, 0, 0)) == multiset_count(comp) - 1


def test_rank_infers_trailing_classes():
    # a sequence that never uses class 3 still ranks consistently
    comp = Composition((2, 1, 1))
    for i in range(multiset_count(comp)):
        assert rank(unrank(comp, i)) == i


def test_code_capacity_check():
    CcdmCode(Composition((2, 2)), 2)  # 4 <= 6
    with pytest.raises(ValueError, match="capacity"):
        CcdmCode(Composition((2, 2)), 3)  # 8 > 6
    with pytest.raises(ValueError):
        CcdmCode(Composition((2, 2)), -1)


def test_toy_code_two_cases():
    code = CcdmCode(Composition((1, 1)), 1)
    assert ccdm_encode(code, BitWord(0, 1)) == (0, 1)
    assert ccdm_encode(code, BitWord(1, 1)) == (1, 0)
    assert ccdm_decode(code, (0, 1)) == BitWord(0, 1)
    assert ccdm_decode(code, (1, 0)) == BitWord(1, 1)


def test_full_code_zero_input_is_sorted_sequence():
    code = CcdmCode(Composition(FULL_COUNTS), 507)
    seq = ccdm_encode(code, BitWord(0, 507))
    assert seq == (0,) * 157 + (1,) * 104 + (2,) * 46 + (3,) * 13


def test_full_code_roundtrip_sample():
    import random

    code = CcdmCode(Composition(FULL_COUNTS), 507)
    rng = random.Random(17)
    for _ in range(60):
        word = BitWord(rng.getrandbits(507), 507)
        seq = ccdm_encode(code, word)
        counts = [seq.count(c) for c in range(4)]
        assert tuple(counts) == FULL_COUNTS
        assert ccdm_decode(code, seq) == word


def test_decode_rejects_wrong_composition():
    code = CcdmCode(Composition((2, 2)), 2)
    with pytest.raises(CompositionMismatch):
        ccdm_decode(code, (0, 0, 0, 1))
    with pytest.raises(CompositionMismatch):
        ccdm_decode(code, (0, 0, 1, 5))


def test_decode_rejects_out_of_codebook_rank():
    code = CcdmCode(Composition((2, 2)), 2)
    high = unrank(Composition((2, 2)), 5)
    with pytest.raises(RankOverflow):
        ccdm_decode(code, high)


def test_encode_rejects_wrong_width():
    code = CcdmCode(Composition((2, 2)), 2)
    with pytest.raises(ValueError):
        ccdm_encode(code, BitWord(0, 3))


def test_sequence_word_packing():
    seq = (0, 1, 2, 3, 0)
    word = sequence_to_word(seq)
    assert word.width == 10
    assert word_to_sequence(word) == seq


@settings(max_examples=80, deadline=None)
@given(
    counts=st.lists(st.integers(min_value=0, max_value=5), min_size=1, max_size=4).filter(
        lambda c: 0 < sum(c) <= 10
    ),
    data=st.data(),
)
def test_rank_unrank_roundtrip_property(counts, data):
    comp = Composition(tuple(counts))
    total = multiset_count(comp)
    index = data.draw(st.integers(min_value=0, max_value=total - 1))
    seq = unrank(comp, index)
    assert len(seq) == comp.n
    assert tuple(seq.count(c) for c in range(len(counts))) == comp.counts
    assert rank(seq) == index


def test_unrank_is_lexicographically_increasing():
    comp = Composition((2, 1, 1))
    seqs = [unrank(comp, i) for i in range(multiset_count(comp))]
    assert seqs == sorted(seqs)
    assert len(set(seqs)) == len(seqs)
