"""Exception hierarchy.

Each class carries the CLI exit code it maps to so the front end never has
to special-case exception types.
"""

from __future__ import annotations


class HmilTedError(Exception):
    exit_code = 1


class JsonParseError(HmilTedError):
    """Malformed JSON input. ``offset`` is a byte offset into the input."""

    exit_code = 2

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)


class DuplicateKeyError(JsonParseError):
    def __init__(self, key: str):
        self.key = key
        super().__init__(f"duplicate object key {key!r}")


class InputError(HmilTedError):
    exit_code = 2


class CostConfigError(HmilTedError):
    exit_code = 3


class ResourceLimitError(HmilTedError):
    exit_code = 4


class ContractViolation(ValueError, HmilTedError):
    """A precondition of a library call was not met by the caller."""

    exit_code = 2
