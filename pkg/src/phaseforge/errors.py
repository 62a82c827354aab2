"""Shared exception types."""

from __future__ import annotations


class PreconditionError(ValueError):
    """A construction or geometry precondition failed.

    ``condition`` is a stable machine-readable slug naming the violated
    requirement; ``detail`` is the human-readable explanation.
    """

    def __init__(self, condition: str, detail: str):
        super().__init__(f"{condition}: {detail}")
        self.condition = condition
        self.detail = detail
