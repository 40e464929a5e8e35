"""Typed error hierarchy.

Every error carries a short machine-readable ``code`` (for example
``"pole-at-one"``) so that callers and the CLI can branch on the failure
kind without parsing messages.
"""

from __future__ import annotations


class TauberianaError(Exception):
    """Base class for all library errors.

    Args:
        code: Stable kebab-case identifier of the failure kind.
        message: Human-readable description.
    """

    def __init__(self, code: str, message: str = ""):
        self.code = code
        super().__init__(f"[{code}] {message}" if message else f"[{code}]")


class DomainError(TauberianaError):
    """Argument outside the supported region (poles, strips, half-planes)."""


class InvalidParams(TauberianaError):
    """Parameters violate a documented precondition."""


class ConvergenceError(TauberianaError):
    """A quadrature or refinement loop failed to stabilise."""


class BudgetError(TauberianaError):
    """A requested error budget cannot be met."""


class OverflowGuard(TauberianaError):
    """A magnitude would leave the floating-point range."""


class SpecError(TauberianaError):
    """A series specification is unsupported or incomplete."""


class ConfigError(TauberianaError):
    """An experiment configuration could not be parsed or dispatched."""
