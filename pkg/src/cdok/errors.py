"""Exception types shared across the package."""

from __future__ import annotations


class CdokError(Exception):
    """Base class for all library errors."""


class InvalidInput(CdokError):
    """Malformed or empty input data."""


class InvalidParameter(CdokError):
    """A build or query parameter is out of its allowed range."""


class InvalidRange(CdokError):
    """An index range is empty, inverted, or out of bounds."""


class DimensionError(CdokError):
    """Matrix shapes do not line up for the requested product."""


class UnknownColor(CdokError):
    """A query named a color id that does not exist in the oracle."""


class PatternNotFound(CdokError):
    """A snippets query pattern has no occurrence in the indexed text.

    ``which`` is 1 or 2, identifying the missing pattern.
    """

    def __init__(self, which: int):
        super().__init__(f"pattern {which} does not occur in the text")
        self.which = which


class OracleFormatError(CdokError):
    """A serialized oracle file is malformed or fails its checksum."""
