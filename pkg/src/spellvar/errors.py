"""Exception types shared across the package.

The CLI maps :class:`SpellvarError` (and I/O errors) to exit code 2;
argument problems exit with code 1.
"""


class SpellvarError(Exception):
    """Base class for all errors raised by spellvar."""


class EmptyInputError(SpellvarError):
    """Nothing to cluster: empty input, or every phrase normalized away."""


class CorpusFormatError(SpellvarError):
    """A corpus file could not be parsed (bad CSV, missing column, ...)."""


class TruthFormatError(SpellvarError):
    """A truth file is malformed (missing header, duplicate token rows)."""


class EvaluationInputError(SpellvarError):
    """Predicted and true clusterings do not cover the same token set."""
