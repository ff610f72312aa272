"""Calendar month arithmetic for monthly time series.

A ``Month`` is an immutable year-month period ("2018-12"). Internally it is
the count of months since year 0, which makes ordering, shifting, and span
arithmetic plain integer operations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@total_ordering
@dataclass(frozen=True)
class Month:
    """A calendar year-month, e.g. ``Month(2018, 12)``."""

    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @classmethod
    def parse(cls, text: str) -> "Month":
        """Parse an ISO ``YYYY-MM`` string."""
        m = _MONTH_RE.match(text.strip())
        if m is None:
            raise ValueError(f"expected YYYY-MM, got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def ordinal(self) -> int:
        """Months elapsed since year 0."""
        return self.year * 12 + (self.month - 1)

    @classmethod
    def from_ordinal(cls, ordinal: int) -> "Month":
        year, month0 = divmod(ordinal, 12)
        return cls(year, month0 + 1)

    def __add__(self, months: int) -> "Month":
        return Month.from_ordinal(self.ordinal + int(months))

    def __sub__(self, other):
        if isinstance(other, Month):
            return self.ordinal - other.ordinal
        return Month.from_ordinal(self.ordinal - int(other))

    def __lt__(self, other: "Month") -> bool:
        return self.ordinal < other.ordinal

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def month_range(start: Month, count: int) -> list[Month]:
    """``count`` consecutive months starting at ``start``."""
    return [start + i for i in range(count)]
