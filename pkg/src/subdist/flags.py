"""Exactness flags shared by every table-producing operation.

Every numeric result carries one of three flags: it is exact, it is a
certified lower bound (a search hit a cap before finishing), or it is an
upper bound that might drop in a larger enumeration (truncation bias).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

EXACT = "exact"
LOWER_BOUND = "lower-bound"
UPPER_UNCERTAIN = "upper-uncertain"


@dataclass(frozen=True)
class Flagged:
    """An integer result together with its exactness flag and optional witness."""

    value: int
    flag: str = EXACT
    witness: Any = None

    @property
    def is_exact(self) -> bool:
        return self.flag == EXACT

    def __int__(self) -> int:
        return self.value
