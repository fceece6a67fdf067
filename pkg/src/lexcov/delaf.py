"""DELAF entry model and text-format parsing/serialization.

The accepted line grammar is::

    form ',' lemma '.' gram_code ('+' sem_trait)* (':' flex_code)*

``\\,`` escapes a literal comma inside form/lemma and ``\\\\`` escapes a
backslash.  An empty lemma field means "lemma equals the surface form".
The normative format description lives in docs/delaf-format.md.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path

from .errors import MalformedEntry


class RoleTag(enum.Enum):
    """Which logical dictionary a file plays in a run."""

    GENERAL = "general"
    ABBREVIATIONS_ACRONYMS = "abbreviations_acronyms"
    USER = "user"


@dataclass(frozen=True)
class DictEntry:
    """One DELAF line: an inflected form with its analysis."""

    surface_form: str
    lemma: str
    gram_code: str
    sem_traits: tuple[str, ...] = ()
    flex_codes: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.surface_form:
            raise ValueError("surface_form must be non-empty")
        if not self.lemma:
            raise ValueError("lemma must be non-empty")
        if not self.gram_code:
            raise ValueError("gram_code must be non-empty")

    def is_multiword(self) -> bool:
        return " " in self.surface_form


@dataclass
class DictFile:
    """An ordered collection of entries loaded from one DELAF file."""

    entries: list[DictEntry]
    role_tag: RoleTag = RoleTag.GENERAL
    path: str | None = None


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace(",", "\\,")


def _scan_field(
    line: str, start: int, terminators: str, line_number: int | None
) -> tuple[str, int]:
    """Read an escaped field until one of ``terminators``.

    Returns the unescaped field text and the index of the terminator (or
    end of line).
    """
    out = []
    i = start
    n = len(line)
    while i < n:
        ch = line[i]
        if ch == "\\":
            if i + 1 >= n:
                raise MalformedEntry("dangling backslash", line, i, line_number)
            out.append(line[i + 1])
            i += 2
            continue
        if ch in terminators:
            return "".join(out), i
        out.append(ch)
        i += 1
    return "".join(out), n


def parse_entry(line: str, line_number: int | None = None) -> DictEntry:
    """Parse a single DELAF line into a DictEntry.

    Raises MalformedEntry if the line does not match the grammar.
    """
    form, i = _scan_field(line, 0, ",", line_number)
    if i >= len(line):
        raise MalformedEntry("missing ',' separator", line, len(line), line_number)
    if not form:
        raise MalformedEntry("empty surface form", line, 0, line_number)
    lemma, j = _scan_field(line, i + 1, ".", line_number)
    if j >= len(line):
        raise MalformedEntry("missing '.' separator", line, len(line), line_number)
    codes = line[j + 1 :]
    code_part, colon, flex_part = codes.partition(":")
    if colon and not flex_part:
        raise MalformedEntry("empty inflectional code", line, j + 1, line_number)
    pieces = code_part.split("+")
    gram_code = pieces[0]
    if not gram_code:
        raise MalformedEntry("empty grammatical code", line, j + 1, line_number)
    sem_traits = pieces[1:]
    if any(not s for s in sem_traits):
        raise MalformedEntry("empty semantic trait", line, j + 1, line_number)
    flex_codes = flex_part.split(":") if flex_part else []
    if any(not f for f in flex_codes):
        raise MalformedEntry("empty inflectional code", line, j + 1, line_number)
    return DictEntry(
        surface_form=form,
        lemma=lemma or form,
        gram_code=gram_code,
        sem_traits=tuple(sem_traits),
        flex_codes=tuple(flex_codes),
    )


def serialize_entry(entry: DictEntry) -> str:
    """Emit the canonical DELAF line for an entry."""
    lemma = "" if entry.lemma == entry.surface_form else _escape(entry.lemma)
    out = [_escape(entry.surface_form), ",", lemma, ".", entry.gram_code]
    for trait in entry.sem_traits:
        out.append("+" + trait)
    for code in entry.flex_codes:
        out.append(":" + code)
    return "".join(out)


def load_dict_file(path: str | Path, role_tag: RoleTag = RoleTag.GENERAL) -> DictFile:
    """Load a DELAF text file, skipping blank lines, preserving order."""
    text = Path(path).read_text(encoding="utf-8-sig")
    entries = []
    for line_number, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        entries.append(parse_entry(line, line_number))
    return DictFile(entries=entries, role_tag=role_tag, path=str(path))


def save_dict_file(dict_file: DictFile, path: str | Path) -> None:
    """Write a DictFile in canonical form: serialized lines sorted by code point."""
    lines = sorted(serialize_entry(e) for e in dict_file.entries)
    Path(path).write_text("\n".join(lines) + "\n" if lines else "", encoding="utf-8")


def canonicalize_line(line: str) -> str:
    """The canonical serialization of a well-formed DELAF line."""
    return serialize_entry(parse_entry(line))
