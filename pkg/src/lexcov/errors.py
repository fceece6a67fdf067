"""Exception types shared across the package."""


class LexcovError(Exception):
    """Base class for all errors raised by this package."""


class MalformedEntry(LexcovError):
    """A DELAF line does not match the entry grammar.

    Carries the offending line, the column where parsing failed, and
    (when known) the 1-based line number in the source file.
    """

    def __init__(self, message, line, column, line_number=None):
        self.line = line
        self.column = column
        self.line_number = line_number
        where = f"line {line_number}, " if line_number is not None else ""
        super().__init__(f"{where}col {column}: {message}: {line!r}")


class EmptyLexicon(LexcovError):
    """Compilation was attempted with zero entries."""


class FormatVersionMismatch(LexcovError):
    """A saved lexicon file uses an unsupported format version."""


class CorruptFile(LexcovError):
    """A saved lexicon file failed structural or checksum validation."""


class PolicyMismatch(LexcovError):
    """Results produced under different case policies cannot be merged."""


class MismatchedCorpus(LexcovError):
    """Coverage reports refer to different corpora and cannot be compared."""


class ConfigError(LexcovError):
    """A classifier configuration file is invalid."""
