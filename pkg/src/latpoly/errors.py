"""Exception types shared across the package."""

from __future__ import annotations

import enum


class LatpolyError(Exception):
    """Base class for all package errors."""


class InvalidConfiguration(LatpolyError, ValueError):
    """A polymer, walk or ensemble description violates its invariants."""


class ResourceLimitExceeded(LatpolyError):
    """An exhaustive computation hit its object budget before finishing.

    ``partial`` records how far the run got (objects processed, or the walk
    length reached by a sampler) so callers can report it instead of a
    truncated result.
    """

    def __init__(self, message: str, partial: int):
        super().__init__(f"{message} (partial progress: {partial})")
        self.partial = partial


class TableChecksumError(LatpolyError):
    pass


class TableConflictError(LatpolyError):
    pass


class _Sentinel(enum.Enum):
    NOT_IN_IMAGE = "not-in-image"

    def __repr__(self) -> str:
        return "NOT_IN_IMAGE"

    def __bool__(self) -> bool:
        return False


#: Returned by inverse maps when the argument is not the image of any input.
NOT_IN_IMAGE = _Sentinel.NOT_IN_IMAGE
