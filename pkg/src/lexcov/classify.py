"""Heuristic categorization of out-of-coverage forms.

Each unknown form gets exactly one of seven categories, decided by an
ordered rule pipeline.  Every rule that fires is recorded as evidence so
the winner can be audited; thresholds live in ClassifierConfig.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .automaton import Lexicon
from .dico import DicoResult, TokenStatus
from .errors import ConfigError
from .preprocess import reform_normalize

PORTUGUESE_ALPHABET = "abcdefghijklmnopqrstuvwxyzáàâãçéêíóôõúü"

_VOWELS = set("aeiouyáàâãéèêíìóòôõúùü")


class Category(enum.Enum):
    TYPING_ERROR = "typing_error"
    OLD_SPELLING = "old_spelling"
    PROPER_NAME = "proper_name"
    ABBREVIATION_ACRONYM = "abbreviation_acronym"
    FOREIGN_OR_SLANG = "foreign_or_slang"
    OTHER_NOUN = "other_noun"
    OTHER = "other"


RULE_CATEGORY = {
    "R-acr": Category.ABBREVIATION_ACRONYM,
    "R-old": Category.OLD_SPELLING,
    "R-prop": Category.PROPER_NAME,
    "R-typo": Category.TYPING_ERROR,
    "R-foreign": Category.FOREIGN_OR_SLANG,
    "R-noun": Category.OTHER_NOUN,
}

DEFAULT_PRECEDENCE = ("R-acr", "R-old", "R-prop", "R-typo", "R-foreign", "R-noun")

# bigrams essentially absent from Portuguese spelling; ^/$ anchor to the
# word start/end
DEFAULT_FOREIGN_BIGRAMS = ("th", "sh", "ck", "wh", "gh", "ed$", "^y")

# everyday forms where k/w/y is ordinary Portuguese usage
DEFAULT_FOREIGN_EXCEPTIONS = frozenset(
    {"km", "kg", "kw", "kb", "watt", "watts", "web", "kiwi", "wi"}
)


@dataclass
class CasingProfile:
    """How a form's occurrences were written in the source text."""

    all_lower: int = 0
    capitalized: int = 0
    all_upper: int = 0
    mixed: int = 0
    non_initial: int = 0       # occurrences not in sentence-initial position
    non_initial_cap: int = 0   # of those, how many were capitalized

    @property
    def total(self) -> int:
        return self.all_lower + self.capitalized + self.all_upper + self.mixed

    def ratio(self, count: int) -> float:
        return count / self.total if self.total else 0.0

    @property
    def mid_sentence_cap_ratio(self) -> float:
        return self.non_initial_cap / self.non_initial if self.non_initial else 0.0


@dataclass
class UnknownRecord:
    form: str                  # casefolded
    frequency: int
    profile: CasingProfile
    category: Category | None = None
    winning_rule: str | None = None
    firing_rules: tuple[str, ...] = ()
    evidence: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class ClassifierConfig:
    precedence: tuple[str, ...] = DEFAULT_PRECEDENCE
    acr_min_len: int = 2
    acr_max_len: int = 6
    upper_ratio: float = 0.9
    prop_ratio: float = 0.9
    typo_min_form_len: int = 5
    typo_split_min_part: int = 2
    noun_ratio: float = 0.9
    noun_min_len: int = 4
    acronyms: frozenset = frozenset()
    foreign_bigrams: tuple[str, ...] = DEFAULT_FOREIGN_BIGRAMS
    foreign_exceptions: frozenset = DEFAULT_FOREIGN_EXCEPTIONS

    def __post_init__(self):
        for rule in self.precedence:
            if rule not in RULE_CATEGORY:
                raise ConfigError(f"unknown rule id in precedence list: {rule!r}")


def _casing_class(text: str) -> str:
    if text == text.lower():
        return "all_lower"
    if len(text) > 1 and text == text.upper():
        return "all_upper"
    if text[0].isupper() and text[1:] == text[1:].lower():
        return "capitalized"
    return "mixed"


def build_unknown_records(dico: DicoResult) -> list[UnknownRecord]:
    """Group a run's unknown token occurrences into per-form records."""
    profiles: dict[str, CasingProfile] = {}
    for ann in dico.annotations:
        if ann.status is not TokenStatus.UNKNOWN:
            continue
        form = ann.text.casefold()
        prof = profiles.setdefault(form, CasingProfile())
        cls = _casing_class(ann.text)
        setattr(prof, cls, getattr(prof, cls) + 1)
        if not ann.sentence_initial:
            prof.non_initial += 1
            if ann.text[0].isupper():
                prof.non_initial_cap += 1
    return [
        UnknownRecord(form=form, frequency=prof.total, profile=prof)
        for form, prof in sorted(profiles.items())
    ]


def edit_distance_1_candidates(form: str, lex: Lexicon, alphabet=PORTUGUESE_ALPHABET):
    """Lexicon forms at Levenshtein distance exactly 1, sorted."""
    seen = set()
    n = len(form)
    for i in range(n):
        seen.add(form[:i] + form[i + 1 :])                      # deletion
        for ch in alphabet:
            seen.add(form[:i] + ch + form[i + 1 :])             # substitution
    for i in range(n + 1):
        for ch in alphabet:
            seen.add(form[:i] + ch + form[i:])                  # insertion
    seen.discard(form)
    return sorted(c for c in seen if c and c in lex)


def _split_candidates(form, lexicons, min_part):
    for i in range(min_part, len(form) - min_part + 1):
        left, right = form[:i], form[i:]
        if any(left in lex for lex in lexicons) and any(
            right in lex for lex in lexicons
        ):
            yield left, right


def classify(
    records: list[UnknownRecord],
    lex_new: Lexicon,
    lex_old: Lexicon | None = None,
    config: ClassifierConfig | None = None,
) -> list[UnknownRecord]:
    """Assign a category to every record; first firing rule in precedence
    order wins, all firing rules are kept as evidence."""
    config = config or ClassifierConfig()
    lexicons = [lex_new] + ([lex_old] if lex_old is not None else [])
    out = []
    for record in records:
        fired = {}
        for rule in config.precedence:
            detail = _RULES[rule](record, lexicons, lex_new, config)
            if detail is not None:
                fired[rule] = detail
        if fired:
            winner = next(r for r in config.precedence if r in fired)
            category = RULE_CATEGORY[winner]
        else:
            winner = None
            category = Category.OTHER
        out.append(
            replace(
                record,
                category=category,
                winning_rule=winner,
                firing_rules=tuple(fired),
                evidence=[(rule, detail) for rule, detail in fired.items()],
            )
        )
    return out


def _rule_acr(record, lexicons, lex_new, config):
    form = record.form
    prof = record.profile
    if (
        config.acr_min_len <= len(form) <= config.acr_max_len
        and prof.ratio(prof.all_upper) >= config.upper_ratio
    ):
        return f"all-uppercase in {prof.all_upper}/{prof.total} occurrences"
    if form and not any(ch in _VOWELS for ch in form):
        return "vowel-free form"
    if form in config.acronyms:
        return "listed acronym"
    return None


def _rule_old(record, lexicons, lex_new, config):
    reformed = reform_normalize(record.form)
    if reformed != record.form and reformed in lex_new:
        return f"reform spelling {reformed!r} is in the new dictionary"
    return None


def _rule_prop(record, lexicons, lex_new, config):
    prof = record.profile
    if prof.non_initial >= 1 and prof.mid_sentence_cap_ratio >= config.prop_ratio:
        return (
            f"capitalized mid-sentence in {prof.non_initial_cap}/{prof.non_initial}"
            " occurrences"
        )
    return None


def _rule_typo(record, lexicons, lex_new, config):
    form = record.form
    for lex in lexicons:
        for cand in edit_distance_1_candidates(form, lex):
            if len(cand) >= config.typo_min_form_len:
                return f"edit distance 1 to {cand!r}"
    for left, right in _split_candidates(form, lexicons, config.typo_split_min_part):
        return f"splits into {left!r} + {right!r}"
    return None


def _rule_foreign(record, lexicons, lex_new, config):
    form = record.form
    if form not in config.foreign_exceptions and any(ch in "kwy" for ch in form):
        return "contains k/w/y"
    for bigram in config.foreign_bigrams:
        if bigram.startswith("^"):
            if form.startswith(bigram[1:]):
                return f"starts with {bigram[1:]!r}"
        elif bigram.endswith("$"):
            if form.endswith(bigram[:-1]):
                return f"ends with {bigram[:-1]!r}"
        elif bigram in form:
            return f"contains {bigram!r}"
    return None


def _rule_noun(record, lexicons, lex_new, config):
    prof = record.profile
    if (
        len(record.form) >= config.noun_min_len
        and prof.ratio(prof.all_lower) >= config.noun_ratio
    ):
        return f"all-lowercase in {prof.all_lower}/{prof.total} occurrences"
    return None


_RULES = {
    "R-acr": _rule_acr,
    "R-old": _rule_old,
    "R-prop": _rule_prop,
    "R-typo": _rule_typo,
    "R-foreign": _rule_foreign,
    "R-noun": _rule_noun,
}


def write_classification_tsv(records: list[UnknownRecord], path) -> None:
    rows = []
    for r in records:
        rows.append(
            "\t".join(
                (
                    r.form,
                    str(r.frequency),
                    r.category.value,
                    r.winning_rule or "",
                    ",".join(r.firing_rules),
                    "; ".join(f"{rule}: {detail}" for rule, detail in r.evidence),
                )
            )
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("".join(row + "\n" for row in rows))


def category_histogram(records: list[UnknownRecord]) -> dict[str, int]:
    hist = {c.value: 0 for c in Category}
    for r in records:
        hist[r.category.value] += 1
    return hist


# -- config file ------------------------------------------------------------

_INT_KEYS = {
    "acr_min_len",
    "acr_max_len",
    "typo_min_form_len",
    "typo_split_min_part",
    "noun_min_len",
}
_FLOAT_KEYS = {"upper_ratio", "prop_ratio", "noun_ratio"}
_LIST_KEYS = {"precedence", "foreign_bigrams"}
_PATH_KEYS = {"acronym_list", "bigram_list", "exception_list"}


def load_classifier_config(path) -> ClassifierConfig:
    """Key/value config: ``key = value`` lines, ``#`` comments, lists in
    ``[a, b]`` form, word-list values naming files (one word per line)."""
    kwargs = {}
    with open(path, encoding="utf-8-sig") as fh:
        for line_number, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{line_number}: expected 'key = value'")
            key = key.strip()
            value = value.strip().strip('"')
            try:
                if key in _INT_KEYS:
                    kwargs[key] = int(value)
                elif key in _FLOAT_KEYS:
                    kwargs[key] = float(value)
                elif key in _LIST_KEYS:
                    items = [v.strip().strip('"') for v in value.strip("[]").split(",")]
                    kwargs[key] = tuple(i for i in items if i)
                elif key in _PATH_KEYS:
                    with open(value, encoding="utf-8-sig") as wf:
                        words = frozenset(
                            w.strip().casefold() for w in wf if w.strip()
                        )
                    if key == "acronym_list":
                        kwargs["acronyms"] = words
                    elif key == "bigram_list":
                        kwargs["foreign_bigrams"] = tuple(sorted(words))
                    else:
                        kwargs["foreign_exceptions"] = words
                else:
                    raise ConfigError(f"{path}:{line_number}: unknown key {key!r}")
            except (ValueError, OSError) as exc:
                raise ConfigError(f"{path}:{line_number}: {exc}") from None
    return ClassifierConfig(**kwargs)
