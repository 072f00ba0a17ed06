from __future__ import annotations

from .errors import ClockError


class SimClock:
    """Simulated days since genesis. Only moves forward, and only when told to."""

    def __init__(self, start: int = 0):
        if start < 0:
            raise ClockError("simulated time cannot be negative")
        self._now = start

    def now(self) -> int:
        return self._now

    def advance(self, days: int) -> int:
        if isinstance(days, bool) or not isinstance(days, int) or days < 0:
            raise ClockError(f"can only advance by a non-negative whole number of days, got {days!r}")
        self._now += days
        return self._now
