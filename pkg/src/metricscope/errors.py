"""Error taxonomy shared by the engine, the HTTP service and the CLI.

Every engine error carries a stable ``code`` so the API layer can map it to
an HTTP status without string matching.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class; ``code`` is one of bad_request / not_found / conflict /
    unsupported / internal."""

    code = "internal"

    def __init__(self, message: str, detail: dict | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}


class ContractError(EngineError):
    """A precondition of an operation was violated by the caller."""

    code = "bad_request"


class ParseError(ContractError):
    """Malformed input data; ``detail`` carries row/column when known."""


class IntegrityError(ContractError):
    """Dataset-level consistency violation (e.g. duplicate COD)."""


class NotFoundError(EngineError):
    code = "not_found"


class ConflictError(EngineError):
    code = "conflict"


class UnsupportedError(EngineError):
    """Requested structure/technique cannot serve this input."""

    code = "unsupported"
