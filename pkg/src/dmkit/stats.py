"""Signal statistics of shaped outputs: exact, sampled, and derived.

exact_class_pmf propagates index distributions down the tree: the top
index is uniform over its information bits; a layer's entry distribution
induces the distribution of each child's parent field, and a child index
is that field joined with uniform information bits. At the symbol side
the per-entry class counts are averaged. Every intermediate probability
is a dyadic rational, so double accumulation is exact to well below 1e-12.

stats_from_pmf turns a class or magnitude distribution into the usual
shaped-signal figures: mean QAM symbol energy, QAM symbol entropy
2H(X) = 2(H(|X|) + 1) with the unshaped sign and LSB uniform, the maximum
spectral efficiency beta at code rate 1, the rate loss 2H(X) - beta, and
the constellation gain (2^beta - 1) d_min^2 / (6 E) in dB.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .bits import BitWord, unpack_symbols
from .ccdm import CcdmCode
from .codec import encode
from .maxwell import MbDistribution, mb_fit
from .synthesis import LutSet

DEFAULT_SEED = 12345

# Published statistics of the bundled 7-layer 256-QAM configuration with a
# 320-symbol word, used by the comparison report to show deltas.
PUBLISHED_REFERENCE: dict[str, dict[str, object]] = {
    "ccdm": {
        "p_abs": (0.2453, 0.2453, 0.1625, 0.1625, 0.0719, 0.0719, 0.0203, 0.0203),
        "energy": 74.00,
        "two_h": 7.242,
        "beta": 7.169,
        "r_loss": 0.073,
        "gain_db": 1.097,
    },
    "hidm": {
        "p_abs": (0.2376, 0.2376, 0.1684, 0.1684, 0.0757, 0.0757, 0.0183, 0.0183),
        "energy": 74.70,
        "two_h": 7.252,
        "beta": 7.169,
        "r_loss": 0.083,
        "gain_db": 1.056,
    },
    "mb": {
        "p_abs": (0.2628, 0.2355, 0.1891, 0.1360, 0.0877, 0.0506, 0.0262, 0.0121),
        "energy": 68.31,
        "two_h": 7.169,
        "beta": 7.169,
        "r_loss": 0.0,
        "gain_db": 1.444,
    },
}


@dataclass(frozen=True)
class StatsReport:
    """One column of shaped-signal statistics."""

    p_abs: tuple[float, ...]
    energy: float
    two_h: float
    beta: float
    r_loss: float
    gain_db: float
    d_min: float = 2.0

    def as_dict(self) -> dict[str, float]:
        out = {f"p_abs_{2 * i + 1}": p for i, p in enumerate(self.p_abs)}
        out.update(
            energy=self.energy,
            two_h=self.two_h,
            beta=self.beta,
            r_loss=self.r_loss,
            gain_db=self.gain_db,
            d_min=self.d_min,
        )
        return out


def entropy_bits(pmf: Sequence[float]) -> float:
    """Shannon entropy in bits; zero-probability terms contribute nothing."""
    return -sum(p * math.log2(p) for p in pmf if p > 0.0)


def _check_pmf(pmf: Sequence[float]) -> None:
    if any(p < 0 for p in pmf):
        raise ValueError(f"pmf has negative entries: {pmf}")
    if abs(sum(pmf) - 1.0) > 1e-9:
        raise ValueError(f"pmf sums to {sum(pmf)}, expected 1")


def exact_class_pmf(lutset: LutSet) -> tuple[float, ...]:
    """Class distribution of the shaped output under uniform input bits."""
    spec = lutset.spec
    dists: list[list[float]] = [[1.0 / (1 << spec.top.in_bits)] * (1 << spec.top.in_bits)]
    for pos in range(spec.depth - 1):
        child = spec.layers[pos + 1]
        t, r, s = child.fanin, child.parent_bits, child.info_bits
        entries = lutset.luts[pos].entries
        mask = (1 << r) - 1
        u_s = 1.0 / (1 << s)
        next_dists: list[list[float]] = []
        for dist in dists:
            for j in range(t):
                shift = r * (t - 1 - j)
                field_p = [0.0] * (1 << r)
                for i, w in enumerate(entries):
                    field_p[(w >> shift) & mask] += dist[i]
                child_dist = [0.0] * (1 << child.in_bits)
                for rv in range(1 << r):
                    p = field_p[rv] * u_s
                    if p:
                        base = rv << s
                        for sv in range(1 << s):
                            child_dist[base + sv] = p
                next_dists.append(child_dist)
        dists = next_dists

    class_bits = spec.class_bits
    n_classes = 1 << class_bits
    leaf = lutset.luts[-1]
    n_sym = leaf.out_bits // class_bits
    mask = n_classes - 1
    per_entry: list[tuple[int, ...]] = []
    for w in leaf.entries:
        cnt = [0] * n_classes
        for k in range(n_sym):
            cnt[(w >> (class_bits * (n_sym - 1 - k))) & mask] += 1
        per_entry.append(tuple(cnt))
    totals = [0.0] * n_classes
    for dist in dists:
        for i, cnt in enumerate(per_entry):
            p = dist[i]
            if p:
                for c in range(n_classes):
                    if cnt[c]:
                        totals[c] += p * cnt[c]
    grand = sum(totals)
    return tuple(x / grand for x in totals)


def exhaustive_class_pmf(lutset: LutSet, limit_bits: int = 20) -> tuple[float, ...]:
    """Class distribution averaged over the entire codebook by encoding.

    Only feasible for small trees; refuses more than limit_bits input bits.
    """
    spec = lutset.spec
    if spec.n_info > limit_bits:
        raise ValueError(f"codebook of 2^{spec.n_info} words is too large to enumerate")
    class_bits = spec.class_bits
    totals = [0] * (1 << class_bits)
    for value in range(1 << spec.n_info):
        shaped = encode(lutset, BitWord(value, spec.n_info))
        for sym in unpack_symbols(shaped, class_bits):
            totals[sym] += 1
    grand = sum(totals)
    return tuple(x / grand for x in totals)


def monte_carlo_pmf(
    lutset: LutSet,
    n_words: int,
    seed: int = DEFAULT_SEED,
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Class distribution sampled from encodes of random words.

    Returns (estimate, standard error of the estimate) per class; words
    are independent, so the error is the sample stderr of the per-word
    class fractions. Deterministic for a fixed seed.
    """
    if n_words < 1:
        raise ValueError("n_words must be >= 1")
    spec = lutset.spec
    rng = random.Random(seed)
    class_bits = spec.class_bits
    n_classes = 1 << class_bits
    sums = [0.0] * n_classes
    sq_sums = [0.0] * n_classes
    for _ in range(n_words):
        word = BitWord(rng.getrandbits(spec.n_info), spec.n_info)
        symbols = unpack_symbols(encode(lutset, word), class_bits)
        counts = [0] * n_classes
        for sym in symbols:
            counts[sym] += 1
        for c in range(n_classes):
            frac = counts[c] / len(symbols)
            sums[c] += frac
            sq_sums[c] += frac * frac
    means = [s / n_words for s in sums]
    if n_words == 1:
        stderr = [0.0] * n_classes
    else:
        stderr = [
            math.sqrt(max(sq_sums[c] - n_words * means[c] ** 2, 0.0) / (n_words - 1) / n_words)
            for c in range(n_classes)
        ]
    return tuple(means), tuple(stderr)


def stats_from_pmf(
    pmf: Sequence[float],
    *,
    n_info: int | None = None,
    n_pam: int | None = None,
    m: int = 8,
    m_sb: int = 4,
    beta: float | None = None,
    d_min: float = 2.0,
) -> StatsReport:
    """Shaped-signal statistics from a class or magnitude distribution.

    pmf with 2^(m_sb/2) entries is a class distribution (the unshaped LSB
    splits each class evenly over its pair); with 2^(m/2 - 1) entries it is
    already the magnitude distribution. beta defaults to
    2((m - m_sb)/2 + n_info/n_pam) when the word sizes are given, else to
    2H(X) (a zero-rate-loss reference).
    """
    if m_sb % 2 or not 2 <= m_sb <= m:
        raise ValueError(f"need even m_sb with 2 <= m_sb <= m, got m={m}, m_sb={m_sb}")
    _check_pmf(pmf)
    n_classes = 1 << (m_sb // 2)
    n_amps = 1 << (m // 2 - 1)
    if len(pmf) == n_classes:
        members = n_amps // n_classes
        p_abs = tuple(p / members for p in pmf for _ in range(members))
    elif len(pmf) == n_amps:
        p_abs = tuple(pmf)
    else:
        raise ValueError(f"pmf length {len(pmf)} is neither {n_classes} classes nor {n_amps} magnitudes")
    amplitudes = tuple(2 * i + 1 for i in range(n_amps))
    energy = 2.0 * sum(p * a * a for p, a in zip(p_abs, amplitudes))
    two_h = 2.0 * (entropy_bits(p_abs) + 1.0)
    if beta is None:
        if (n_info is None) != (n_pam is None):
            raise ValueError("give both n_info and n_pam, or neither")
        if n_info is not None:
            beta = 2.0 * ((m - m_sb) / 2 + n_info / n_pam)
        else:
            beta = two_h
    r_loss = two_h - beta
    gain_db = 10.0 * math.log10((2.0**beta - 1.0) * d_min * d_min / (6.0 * energy))
    return StatsReport(
        p_abs=p_abs,
        energy=energy,
        two_h=two_h,
        beta=beta,
        r_loss=r_loss,
        gain_db=gain_db,
        d_min=d_min,
    )


def stats_for_lutset(lutset: LutSet) -> StatsReport:
    """Exact statistics of the tree matcher's output."""
    spec = lutset.spec
    return stats_from_pmf(
        exact_class_pmf(lutset),
        n_info=spec.n_info,
        n_pam=spec.n_pam,
        m=spec.bits_per_qam,
        m_sb=spec.shaped_bits_per_qam,
    )


def stats_for_ccdm(code: CcdmCode, m: int = 8, m_sb: int = 4) -> StatsReport:
    """Statistics of a constant-composition code (class pmf = counts/n, exact)."""
    n = code.composition.n
    class_pmf = tuple(c / n for c in code.composition.counts)
    return stats_from_pmf(class_pmf, n_info=code.k, n_pam=n, m=m, m_sb=m_sb)


def stats_for_mb(dist: MbDistribution, beta: float | None = None) -> StatsReport:
    """Statistics of a Maxwell-Boltzmann reference (zero rate loss by default)."""
    return stats_from_pmf(dist.p_abs, beta=beta)


def comparison_report(
    lutset: LutSet,
    code: CcdmCode,
    mb_target_two_h: float | None = None,
) -> dict[str, StatsReport]:
    """The three columns side by side: constant-composition, tree, MB.

    The MB reference is fitted to mb_target_two_h, defaulting to the
    tree's beta so all columns compare at equal rate.
    """
    spec = lutset.spec
    m, m_sb = spec.bits_per_qam, spec.shaped_bits_per_qam
    if mb_target_two_h is None:
        mb_target_two_h = 2.0 * ((m - m_sb) / 2 + spec.n_info / spec.n_pam)
    return {
        "ccdm": stats_for_ccdm(code, m=m, m_sb=m_sb),
        "hidm": stats_for_lutset(lutset),
        "mb": stats_for_mb(mb_fit(mb_target_two_h)),
    }


_SCALAR_ROWS = (
    ("E", "energy", "{:10.2f}", "{:+.2f}"),
    ("2H(X) (bpcu)", "two_h", "{:10.3f}", "{:+.3f}"),
    ("beta (bpcu)", "beta", "{:10.3f}", "{:+.3f}"),
    ("R_loss (bpcu)", "r_loss", "{:10.3f}", "{:+.3f}"),
    ("G (dB)", "gain_db", "{:10.3f}", "{:+.3f}"),
)


def render_text(
    reports: Mapping[str, StatsReport],
    reference: Mapping[str, Mapping[str, object]] | None = None,
) -> str:
    """Aligned text table; reference deltas in parentheses where known."""
    if reference is None:
        reference = PUBLISHED_REFERENCE
    names = list(reports)
    width = 22

    def cell(value: float, fmt: str, dfmt: str, ref_value: float | None) -> str:
        txt = fmt.format(value)
        if ref_value is not None:
            txt += f" ({dfmt.format(value - ref_value)})"
        return txt.ljust(width)

    lines = ["statistic".ljust(16) + "".join(n.ljust(width) for n in names)]
    n_amps = len(next(iter(reports.values())).p_abs)
    for i in range(n_amps):
        amp = 2 * i + 1
        row = f"P|X|({amp})".ljust(16)
        for name in names:
            ref = reference.get(name, {}).get("p_abs")
            ref_value = ref[i] if ref is not None else None  # type: ignore[index]
            row += cell(reports[name].p_abs[i], "{:10.4f}", "{:+.4f}", ref_value)
        lines.append(row)
    for label, attr, fmt, dfmt in _SCALAR_ROWS:
        row = label.ljust(16)
        for name in names:
            ref_value = reference.get(name, {}).get(attr)
            row += cell(getattr(reports[name], attr), fmt, dfmt, ref_value)  # type: ignore[arg-type]
        lines.append(row)
    return "\n".join(line.rstrip() for line in lines) + "\n"


def render_csv(reports: Mapping[str, StatsReport]) -> str:
    """Machine-readable CSV, one row per signal."""
    buf = io.StringIO()
    first = next(iter(reports.values()))
    fieldnames = ["signal"] + list(first.as_dict())
    writer = csv.DictWriter(buf, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for name, report in reports.items():
        row: dict[str, object] = {"signal": name}
        row.update({k: repr(v) for k, v in report.as_dict().items()})
        writer.writerow(row)
    return buf.getvalue()
