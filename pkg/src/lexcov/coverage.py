"""Word lists, coverage percentages, version deltas, dictionary diffs.

Percentages are computed exactly and rounded half-up to two decimals,
matching how the coverage tables are conventionally printed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .automaton import CaseFoldPolicy, Lexicon
from .delaf import DictFile
from .dico import DicoResult, TokenStatus
from .errors import MismatchedCorpus
from .preprocess import TokenKind

_TWO_PLACES = Decimal("0.01")


def pct(part: int, total: int) -> Decimal:
    """100*part/total rounded half-up to two decimals (0.00 if total is 0)."""
    if total == 0:
        return Decimal("0.00")
    return (Decimal(part) * 100 / Decimal(total)).quantize(_TWO_PLACES, ROUND_HALF_UP)


@dataclass
class WordList:
    entries: dict[str, int] = field(default_factory=dict)
    fold_mode: str = "folded"  # "folded" or "cased"

    @property
    def type_count(self) -> int:
        return len(self.entries)

    @property
    def token_count(self) -> int:
        return sum(self.entries.values())


def build_word_list(streams, fold_mode: str = "folded") -> WordList:
    """Count word-token types over one or more token streams."""
    if hasattr(streams, "tokens"):
        streams = [streams]
    entries = {}
    folded = fold_mode == "folded"
    for stream in streams:
        for tok in stream.tokens:
            if tok.kind is not TokenKind.WORD:
                continue
            form = tok.text.casefold() if folded else tok.text
            entries[form] = entries.get(form, 0) + 1
    return WordList(entries=entries, fold_mode=fold_mode)


def write_word_list_tsv(word_list: WordList, path) -> None:
    """TSV export sorted by descending frequency, then form."""
    rows = sorted(word_list.entries.items(), key=lambda kv: (-kv[1], kv[0]))
    Path(path).write_text(
        "".join(f"{form}\t{freq}\n" for form, freq in rows), encoding="utf-8"
    )


@dataclass
class CoverageReport:
    corpus_id: str
    dict_id: str
    types_total: int
    types_unknown: int
    tokens_total: int
    tokens_unknown: int

    @property
    def pct_types_unknown(self) -> Decimal:
        return pct(self.types_unknown, self.types_total)

    @property
    def pct_tokens_unknown(self) -> Decimal:
        return pct(self.tokens_unknown, self.tokens_total)

    def to_dict(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "dict_id": self.dict_id,
            "types_total": self.types_total,
            "types_unknown": self.types_unknown,
            "pct_types_unknown": str(self.pct_types_unknown),
            "tokens_total": self.tokens_total,
            "tokens_unknown": self.tokens_unknown,
            "pct_tokens_unknown": str(self.pct_tokens_unknown),
        }


def coverage_from_counts(
    corpus_id, dict_id, types_total, types_unknown, tokens_total, tokens_unknown
) -> CoverageReport:
    """Replay mode: build a report from externally obtained counts."""
    return CoverageReport(
        corpus_id, dict_id, types_total, types_unknown, tokens_total, tokens_unknown
    )


def coverage_from_dico(
    word_list: WordList, dico: DicoResult, corpus_id: str = "", dict_id: str = ""
) -> CoverageReport:
    """Coverage of a word list given the dictionary-application result of
    the same corpus.  A type counts as unknown when none of its token
    occurrences received an analysis or compound cover."""
    folded = word_list.fold_mode == "folded"
    known = set()
    for ann in dico.annotations:
        if ann.status is not None and ann.status is not TokenStatus.UNKNOWN:
            known.add(ann.text.casefold() if folded else ann.text)
    types_unknown = 0
    tokens_unknown = 0
    for form, freq in word_list.entries.items():
        if form not in known:
            types_unknown += 1
            tokens_unknown += freq
    return CoverageReport(
        corpus_id,
        dict_id,
        word_list.type_count,
        types_unknown,
        word_list.token_count,
        tokens_unknown,
    )


def coverage_from_lexicon(
    word_list: WordList,
    lexicons,
    policy: CaseFoldPolicy = CaseFoldPolicy.UNITEX_LIKE,
    corpus_id: str = "",
    dict_id: str = "",
) -> CoverageReport:
    """Coverage computed by direct lookup of each type (no compound pass)."""
    if isinstance(lexicons, Lexicon):
        lexicons = [lexicons]
    types_unknown = 0
    tokens_unknown = 0
    for form, freq in word_list.entries.items():
        if not any(lex.lookup(form, policy) for lex in lexicons):
            types_unknown += 1
            tokens_unknown += freq
    return CoverageReport(
        corpus_id,
        dict_id,
        word_list.type_count,
        types_unknown,
        word_list.token_count,
        tokens_unknown,
    )


@dataclass
class VersionDelta:
    """Improvement from an old to a new dictionary version, in percentage
    points of unknown types/tokens (positive means the new one covers more)."""

    corpus_id: str
    delta_types_pp: Decimal
    delta_tokens_pp: Decimal

    def to_dict(self) -> dict:
        return {
            "corpus_id": self.corpus_id,
            "delta_types_pp": str(self.delta_types_pp),
            "delta_tokens_pp": str(self.delta_tokens_pp),
        }


def compare_versions(r_old: CoverageReport, r_new: CoverageReport) -> VersionDelta:
    if r_old.corpus_id != r_new.corpus_id:
        raise MismatchedCorpus(f"{r_old.corpus_id!r} vs {r_new.corpus_id!r}")
    return VersionDelta(
        corpus_id=r_old.corpus_id,
        delta_types_pp=r_old.pct_types_unknown - r_new.pct_types_unknown,
        delta_tokens_pp=r_old.pct_tokens_unknown - r_new.pct_tokens_unknown,
    )


def mean_delta(deltas: list[Decimal]) -> Decimal:
    if not deltas:
        return Decimal("0.00")
    return (sum(deltas) / len(deltas)).quantize(_TWO_PLACES, ROUND_HALF_UP)


@dataclass
class DictDiff:
    only_in_a: list[str]
    only_in_b: list[str]
    common: int
    fold_mode: str

    def to_dict(self) -> dict:
        return {
            "only_in_a": self.only_in_a,
            "only_in_b": self.only_in_b,
            "common": self.common,
            "fold_mode": self.fold_mode,
        }


def diff_dictionaries(
    a: list[DictFile], b: list[DictFile], fold_mode: str = "folded"
) -> DictDiff:
    """Set comparison of unique surface forms of two dictionary versions."""
    folded = fold_mode == "folded"

    def forms(files):
        out = set()
        for f in files:
            for e in f.entries:
                out.add(e.surface_form.casefold() if folded else e.surface_form)
        return out

    fa, fb = forms(a), forms(b)
    return DictDiff(
        only_in_a=sorted(fa - fb),
        only_in_b=sorted(fb - fa),
        common=len(fa & fb),
        fold_mode=fold_mode,
    )


# -- rendering --------------------------------------------------------------

def format_int(value: int, locale: str = "plain") -> str:
    if locale == "pt-BR":
        return f"{value:,}".replace(",", ".")
    return str(value)


def format_pct(value: Decimal, locale: str = "plain") -> str:
    text = f"{value:.2f}"
    if locale == "pt-BR":
        text = text.replace(".", ",")
    return text + "%"


def render_coverage_text(report: CoverageReport, locale: str = "plain") -> str:
    lines = [
        f"corpus:          {report.corpus_id}",
        f"dictionary:      {report.dict_id}",
        f"types:           {format_int(report.types_total, locale)}",
        f"unknown types:   {format_int(report.types_unknown, locale)}"
        f" ({format_pct(report.pct_types_unknown, locale)})",
        f"tokens:          {format_int(report.tokens_total, locale)}",
        f"unknown tokens:  {format_int(report.tokens_unknown, locale)}"
        f" ({format_pct(report.pct_tokens_unknown, locale)})",
    ]
    return "\n".join(lines)


def render_delta_text(delta: VersionDelta, locale: str = "plain") -> str:
    def pp(value):
        text = f"{value:.2f}"
        return text.replace(".", ",") if locale == "pt-BR" else text

    return "\n".join(
        [
            f"corpus:         {delta.corpus_id}",
            f"types delta:    {pp(delta.delta_types_pp)} pp",
            f"tokens delta:   {pp(delta.delta_tokens_pp)} pp",
        ]
    )


def render_diff_text(diff: DictDiff) -> str:
    lines = [f"common forms: {diff.common} (fold: {diff.fold_mode})"]
    lines.append(f"only in A ({len(diff.only_in_a)}):")
    lines.extend(f"  {form}" for form in diff.only_in_a)
    lines.append(f"only in B ({len(diff.only_in_b)}):")
    lines.extend(f"  {form}" for form in diff.only_in_b)
    return "\n".join(lines)
