"""Shared error types and budget configuration."""

from __future__ import annotations

from dataclasses import dataclass


class BudgetExceeded(RuntimeError):
    """An exhaustive scan would exceed the configured budget."""

    def __init__(self, what, needed, budget):
        super().__init__(f"{what}: {needed} exceeds budget {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


DEFAULT_ELEMENT_BUDGET = 2**20
DEFAULT_PAIR_BUDGET = 2**22


@dataclass(frozen=True)
class Budgets:
    """Enumeration budgets: elements for single scans, pairs for double scans."""

    elements: int = DEFAULT_ELEMENT_BUDGET
    pairs: int = DEFAULT_PAIR_BUDGET
