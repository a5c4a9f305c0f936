"""Work accounting for exhaustive searches and verification passes."""

from __future__ import annotations

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """The requested enumeration does not fit in the configured budget."""


class Budget:
    """Counts abstract candidate evaluations against a hard limit.

    Searches either reserve their full cost up front with ``require``
    (when the cost is known from the search-space size) or pay as they
    go with ``spend``.  Either way the limit is a hard stop, so a run
    that finishes has done a bounded, reported amount of work.
    """

    __slots__ = ("limit", "spent")

    def __init__(self, limit: int = DEFAULT_BUDGET):
        if limit <= 0:
            raise ValueError("budget must be positive")
        self.limit = limit
        self.spent = 0

    def require(self, n: int, what: str = "enumeration") -> None:
        """Refuse up front when a fully counted pass cannot fit."""
        if self.spent + n > self.limit:
            raise BudgetExceeded(
                f"{what} needs {n} candidate evaluations; "
                f"{self.limit - self.spent} left of {self.limit}"
            )

    def spend(self, n: int = 1, what: str = "search") -> None:
        self.spent += n
        if self.spent > self.limit:
            raise BudgetExceeded(f"{what} exceeded the budget of {self.limit}")
