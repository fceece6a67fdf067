"""Dictionary application: partition a token stream into known simple
words, compound matches, and unknown forms (the dlf/dlc/err outputs)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path

from .automaton import CaseFoldPolicy, Lexicon
from .delaf import DictEntry, serialize_entry
from .errors import PolicyMismatch
from .preprocess import TokenKind, TokenStream


class TokenStatus(enum.Enum):
    KNOWN_SIMPLE = "known_simple"
    IN_COMPOUND_ONLY = "in_compound_only"
    UNKNOWN = "unknown"


@dataclass
class TokenAnnotation:
    text: str
    kind: TokenKind
    sentence_index: int
    sentence_initial: bool
    status: TokenStatus | None          # None for number/punct/space tokens
    analyses: tuple[DictEntry, ...] = ()


@dataclass
class DicoResult:
    policy: CaseFoldPolicy
    dlf: set[DictEntry] = field(default_factory=set)
    dlc: dict[DictEntry, int] = field(default_factory=dict)
    err: set[str] = field(default_factory=set)
    annotations: list[TokenAnnotation] = field(default_factory=list)

    def status_counts(self) -> dict[TokenStatus, int]:
        counts = {status: 0 for status in TokenStatus}
        for ann in self.annotations:
            if ann.status is not None:
                counts[ann.status] += 1
        return counts

    @property
    def word_token_count(self) -> int:
        return sum(1 for a in self.annotations if a.status is not None)


def apply_dictionaries(
    lexicons, stream: TokenStream, policy: CaseFoldPolicy = CaseFoldPolicy.UNITEX_LIKE
) -> DicoResult:
    """Annotate every word token of the stream against the lexicons.

    ``lexicons`` is one Lexicon or an ordered list; lookups take the union
    while compound ties follow list order.  Compounds are matched greedily,
    longest first, left to right, within sentence bounds, no overlaps.
    """
    if isinstance(lexicons, Lexicon):
        lexicons = [lexicons]
    result = DicoResult(policy=policy)
    tokens = stream.tokens

    # compound pass: greedy longest match, anchored left to right
    covered = [False] * len(tokens)
    sentence_end = _sentence_ends(tokens)
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok.kind is not TokenKind.WORD or covered[i]:
            i += 1
            continue
        window = tokens[i : sentence_end[i]]
        best = None  # (span, lex_order, form, ids)
        for order, lex in enumerate(lexicons):
            for span, form, ids in lex.match_compounds(window, policy):
                if span > 1 and (best is None or span > best[0]):
                    best = (span, order, form, ids)
                break  # matches are longest-first per lexicon
        if best is None:
            i += 1
            continue
        span, order, form, ids = best
        for entry in _entries(lexicons[order], form, ids):
            result.dlc[entry] = result.dlc.get(entry, 0) + 1
        for k in range(i, i + span):
            covered[k] = True
        i += span

    # simple pass
    for i, tok in enumerate(tokens):
        if tok.kind is not TokenKind.WORD:
            result.annotations.append(
                TokenAnnotation(tok.text, tok.kind, tok.sentence_index, False, None)
            )
            continue
        matched = {}
        for lex in lexicons:
            for form, ids in lex.lookup_forms(tok.text, policy).items():
                entries = _entries(lex, form, ids)
                matched.setdefault(form, []).extend(entries)
        if matched:
            status = TokenStatus.KNOWN_SIMPLE
            analyses = tuple(
                sorted(
                    {e for group in matched.values() for e in group},
                    key=serialize_entry,
                )
            )
            result.dlf.update(analyses)
        elif covered[i]:
            status = TokenStatus.IN_COMPOUND_ONLY
            analyses = ()
        else:
            status = TokenStatus.UNKNOWN
            analyses = ()
            result.err.add(tok.text)
        result.annotations.append(
            TokenAnnotation(
                tok.text,
                tok.kind,
                tok.sentence_index,
                tok.sentence_initial,
                status,
                analyses,
            )
        )
    return result


def _entries(lex: Lexicon, form: str, ids) -> list[DictEntry]:
    return [lex.entry_for(form, i) for i in ids]


def _sentence_ends(tokens) -> list[int]:
    """For each position, the index one past its sentence's last token."""
    ends = [0] * len(tokens)
    end = len(tokens)
    for i in range(len(tokens) - 1, -1, -1):
        if i + 1 < len(tokens) and tokens[i + 1].sentence_index != tokens[i].sentence_index:
            end = i + 1
        ends[i] = end
    return ends


def merge_results(a: DicoResult, b: DicoResult) -> DicoResult:
    """Combine results of two disjoint streams processed identically."""
    if a.policy is not b.policy:
        raise PolicyMismatch(f"{a.policy.value} vs {b.policy.value}")
    merged = DicoResult(policy=a.policy)
    merged.dlf = a.dlf | b.dlf
    merged.err = a.err | b.err
    merged.dlc = dict(a.dlc)
    for entry, count in b.dlc.items():
        merged.dlc[entry] = merged.dlc.get(entry, 0) + count
    # keep sentence indices unique across the concatenation
    offset = 1 + max((x.sentence_index for x in a.annotations), default=-1)
    merged.annotations = a.annotations + [
        replace(ann, sentence_index=ann.sentence_index + offset)
        for ann in b.annotations
    ]
    return merged


def _analysis_label(entry: DictEntry) -> str:
    # analysis without the surface form, e.g. "correr.V:I1s"
    lemma = "" if entry.lemma == entry.surface_form else entry.lemma
    parts = [lemma, ".", entry.gram_code]
    parts.extend("+" + t for t in entry.sem_traits)
    parts.extend(":" + c for c in entry.flex_codes)
    return "".join(parts)


def write_outputs(result: DicoResult, outdir) -> None:
    """Write the dlf/dlc/err sub-dictionaries and annotations.tsv."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    _write_lines(outdir / "dlf", sorted(serialize_entry(e) for e in result.dlf))
    _write_lines(outdir / "dlc", sorted(serialize_entry(e) for e in result.dlc))
    _write_lines(outdir / "err", sorted(result.err))
    rows = []
    for ann in result.annotations:
        if ann.kind is TokenKind.SPACE:
            continue
        rows.append(
            "\t".join(
                (
                    ann.text,
                    ann.kind.value,
                    str(ann.sentence_index),
                    ann.status.value if ann.status else "",
                    ";".join(_analysis_label(e) for e in ann.analyses),
                )
            )
        )
    _write_lines(outdir / "annotations.tsv", rows)


def _write_lines(path, lines) -> None:
    Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def read_annotations(path) -> list[TokenAnnotation]:
    """Read annotations.tsv back; sentence-initial flags are recomputed
    (first word token of each sentence)."""
    annotations = []
    seen_sentences = set()
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            row = raw.rstrip("\n").split("\t")
            if len(row) != 5:
                continue
            text, kind, sentence_index, status, _ = row
            kind = TokenKind(kind)
            sentence_index = int(sentence_index)
            initial = False
            if kind is TokenKind.WORD and sentence_index not in seen_sentences:
                initial = True
                seen_sentences.add(sentence_index)
            annotations.append(
                TokenAnnotation(
                    text,
                    kind,
                    sentence_index,
                    initial,
                    TokenStatus(status) if status else None,
                )
            )
    return annotations
