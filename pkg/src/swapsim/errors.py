"""Domain error hierarchy.

Every error carries a stable machine-readable ``code`` and the HTTP status the
API gateway maps it to (400 for precondition/validation failures, 404 for
missing resources, 409 for duplicate/concurrency conflicts).
"""

from __future__ import annotations

from typing import Any


class DomainError(Exception):
    """Base class for all simulator errors."""

    code = "DOMAIN_ERROR"
    http_status = 400

    def __init__(self, message: str, details: dict[str, Any] | None = None):
        super().__init__(message)
        self.message = message
        self.details = details


class InvalidTrade(DomainError):
    code = "INVALID_TRADE"


class InvalidTransition(DomainError):
    code = "INVALID_TRANSITION"


class InvalidSchedule(DomainError):
    code = "INVALID_SCHEDULE"


class InvalidInterval(DomainError):
    code = "INVALID_INTERVAL"


class UnknownParty(DomainError):
    code = "UNKNOWN_PARTY"


class InvalidParty(DomainError):
    code = "INVALID_PARTY"


class InvalidCommand(DomainError):
    code = "INVALID_COMMAND"


class ResetMissing(DomainError):
    code = "RESET_MISSING"


class ClockRegression(DomainError):
    code = "CLOCK_REGRESSION"


class UnroutableCommand(DomainError):
    code = "UNROUTABLE_COMMAND"


class NotFound(DomainError):
    code = "NOT_FOUND"
    http_status = 404


class NoClock(DomainError):
    code = "NO_CLOCK"
    http_status = 404


class DuplicateTrade(DomainError):
    code = "DUPLICATE_TRADE"
    http_status = 409


class ConcurrencyConflict(DomainError):
    code = "CONCURRENCY_CONFLICT"
    http_status = 409


class AlreadyExists(DomainError):
    code = "ALREADY_EXISTS"
    http_status = 409


class AlreadyReset(DomainError):
    code = "ALREADY_RESET"
    http_status = 409


class AlreadyPaid(DomainError):
    code = "ALREADY_PAID"
    http_status = 409


class AlreadySettled(DomainError):
    code = "ALREADY_SETTLED"
    http_status = 409


class NothingScheduled(DomainError):
    code = "NOTHING_SCHEDULED"
    http_status = 409


class PartyInUse(DomainError):
    code = "PARTY_IN_USE"
    http_status = 409


class DuplicateLei(DomainError):
    code = "DUPLICATE_LEI"
    http_status = 409
