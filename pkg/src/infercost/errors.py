"""Shared exception types."""

from __future__ import annotations


class ValidationError(ValueError):
    """An input violated a domain invariant.

    `field` names the offending parameter or column when known, so callers
    (CLI, HTTP layer) can point at it without parsing the message.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class EndpointError(RuntimeError):
    """An external endpoint could not be reached or refused the run."""
