"""Sliding-window Gini and entropy over the most recent stream events."""

from __future__ import annotations

from collections import deque
from typing import Deque, Dict, Tuple

from .core import Label
from .entropy import EntropyState
from .gini import GiniState

__all__ = ["SlidingWindowEstimator"]


class SlidingWindowEstimator:
    """Both impurity metrics of the last ``capacity`` labels, in O(1) per event.

    A full window evicts its oldest label (unit-decrement transition) before
    inserting the new one (unit-increment transition), so occupancy never
    exceeds the capacity. The window holds labels only; memory is
    O(capacity + distinct classes). Callers feeding long streams typically
    pass small interned ids.

    ``refresh_period`` > 0 recomputes both metrics exactly from the class
    counts every that-many events (O(k)), bounding float drift on very long
    runs; 0 disables it.

    Single-writer: observe() mutates in place and is not safe for concurrent
    use. Treat ``window`` and ``counts`` as read-only.
    """

    def __init__(self, capacity: int, refresh_period: int = 0) -> None:
        if capacity < 1:
            raise ValueError("window capacity must be >= 1")
        if refresh_period < 0:
            raise ValueError("refresh period must be >= 0 (0 disables)")
        self.capacity = capacity
        self.refresh_period = refresh_period
        self.window: Deque[Label] = deque()
        self.counts: Dict[Label, int] = {}
        self.gini = GiniState()
        self.entropy = EntropyState()
        self.events_since_refresh = 0

    def __len__(self) -> int:
        return len(self.window)

    def observe(self, label: Label) -> None:
        """Slide the window forward by one labeled event."""
        if len(self.window) >= self.capacity:
            oldest = self.window.popleft()
            remaining = self.counts[oldest] - 1
            if remaining:
                self.counts[oldest] = remaining
            else:
                del self.counts[oldest]
            self.gini = self.gini.dec(remaining)
            self.entropy = self.entropy.dec(remaining)
        before = self.counts.get(label, 0)
        self.window.append(label)
        self.counts[label] = before + 1
        self.gini = self.gini.inc(before)
        self.entropy = self.entropy.inc(before)
        self.events_since_refresh += 1
        if self.refresh_period and self.events_since_refresh >= self.refresh_period:
            self.refresh()

    def refresh(self) -> None:
        """Recompute both metrics exactly from the window's class counts."""
        self.gini = GiniState.from_counts(self.counts)
        self.entropy = EntropyState.from_counts(self.counts)
        self.events_since_refresh = 0

    def metrics(self) -> Tuple[float, float]:
        """Current (gini, entropy), clamped for reporting; O(1)."""
        return (self.gini.clamped, self.entropy.clamped)
