"""Distribution-matching toolkit.

Synthesizes fixed-length LUT-tree distribution matchers by energy-ranked
table construction, runs the exact matcher/dematcher pair, provides a
constant-composition baseline built on exact enumerative coding and a
Maxwell-Boltzmann reference solver, and computes shaped-signal statistics
(exact and sampled) for 16-PAM / 256-QAM signaling.
"""

from .bits import BitWord, pack_symbols, read_bitfile, unpack_symbols, write_bitfile
from .ccdm import (
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
from .codec import (
    InvalidWord,
    decode,
    decode_stream,
    dump_test_vectors,
    encode,
    encode_stream,
    load_test_vectors,
    split_info,
)
from .config import ToolkitConfig, builtin_config_path, load_config, parse_config
from .mapping import AMPLITUDES, PAIR_BASE, amplitude_pairs, assemble, pam_amplitudes, word_to_qam
from .maxwell import AMPLITUDES_16PAM, MbDistribution, mb_distribution, mb_fit
from .stats import (
    PUBLISHED_REFERENCE,
    StatsReport,
    comparison_report,
    entropy_bits,
    exact_class_pmf,
    exhaustive_class_pmf,
    monte_carlo_pmf,
    render_csv,
    render_text,
    stats_for_ccdm,
    stats_for_lutset,
    stats_for_mb,
    stats_from_pmf,
)
from .synthesis import (
    DEFAULT_CLASS_ENERGIES,
    Lut,
    LutFormatError,
    LutSet,
    load_lutset,
    lutset_from_entries,
    pair_class_energies,
    save_lutset,
    stored_bit_counts,
    synthesize_leaf_lut,
    synthesize_parent_lut,
    synthesize_tree,
)
from .tree import (
    CountViolation,
    CouplingViolation,
    GranularityViolation,
    LayerParams,
    TreeConfigError,
    TreeSpec,
    WidthViolation,
    lut_size_report,
    spec_fingerprint,
    spec_to_mappings,
    validate_tree,
)

__version__ = "0.1.0"

__all__ = [
    "AMPLITUDES",
    "AMPLITUDES_16PAM",
    "BitWord",
    "CcdmCode",
    "Composition",
    "CompositionMismatch",
    "CountViolation",
    "CouplingViolation",
    "DEFAULT_CLASS_ENERGIES",
    "GranularityViolation",
    "InvalidWord",
    "LayerParams",
    "Lut",
    "LutFormatError",
    "LutSet",
    "MbDistribution",
    "PAIR_BASE",
    "PUBLISHED_REFERENCE",
    "RankOverflow",
    "StatsReport",
    "ToolkitConfig",
    "TreeConfigError",
    "TreeSpec",
    "WidthViolation",
    "amplitude_pairs",
    "assemble",
    "builtin_config_path",
    "ccdm_decode",
    "ccdm_encode",
    "comparison_report",
    "composition_from_pmf",
    "decode",
    "decode_stream",
    "dump_test_vectors",
    "encode",
    "encode_stream",
    "entropy_bits",
    "exact_class_pmf",
    "exhaustive_class_pmf",
    "load_config",
    "load_lutset",
    "load_test_vectors",
    "lut_size_report",
    "lutset_from_entries",
    "mb_distribution",
    "mb_fit",
    "monte_carlo_pmf",
    "multiset_count",
    "pack_symbols",
    "pair_class_energies",
    "pam_amplitudes",
    "parse_config",
    "rank",
    "read_bitfile",
    "render_csv",
    "render_text",
    "save_lutset",
    "sequence_to_word",
    "spec_fingerprint",
    "spec_to_mappings",
    "split_info",
    "stats_for_ccdm",
    "stats_for_lutset",
    "stats_for_mb",
    "stats_from_pmf",
    "stored_bit_counts",
    "synthesize_leaf_lut",
    "synthesize_parent_lut",
    "synthesize_tree",
    "unpack_symbols",
    "unrank",
    "validate_tree",
    "word_to_qam",
    "word_to_sequence",
    "write_bitfile",
]
