"""Shared exception types."""
from __future__ import annotations


class ScenarioValidationError(ValueError):
    """Raised when a scenario document violates the schema or a constraint.

    Carries one (key_path, message) pair per problem so callers (CLI, HTTP
    service) can point at the offending keys.
    """

    def __init__(self, issues: list[tuple[str, str]]):
        self.issues = list(issues)
        lines = [f"{path}: {msg}" for path, msg in self.issues]
        super().__init__("invalid scenario: " + "; ".join(lines))


class GridMemoryError(RuntimeError):
    """Requested full-history grid would exceed the configured memory cap."""
