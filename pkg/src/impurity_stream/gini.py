"""Incremental Gini index as pure state transitions on (total, value).

The pair (S, G) is a sufficient statistic: the sum of squared class masses
is recoverable as S^2 * (1 - G), and every update below rewrites that sum in
O(1) (or O(#changed classes) for batches) instead of revisiting the sample:

    append x        sum' = sum + x^2
    inc (unit)      sum' = sum + 2*before + 1
    dec (unit)      sum' = sum - 2*after - 1
    add class m     sum' = sum + m^2
    del class m     sum' = sum - m^2
    merge           sum' = sum_a + sum_b
    overlay         sum' = sum_a + sum_b + 2 * sum(x_i * y_i)

then value' = 1 - sum' / total'^2. States are immutable values; transitions
return new states and never mutate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterator, Mapping, Tuple

from .core import Label, gini_exact, sum_squares

__all__ = ["GiniState", "DeltaSet"]

# Relative slack when deciding whether a float total has been fully drained;
# protects unit-exact streams from spurious division-by-zero after long
# float-mass update chains.
_DRAIN_TOL = 1e-9


class DeltaSet:
    """Pending per-class increases: label -> (current mass, increase).

    Increases must be strictly positive. Current masses may be zero for
    classes not yet in the sample; Gini updates accept that, entropy updates
    do not (append the class instead).
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[Label, Tuple[float, float]] | None = None) -> None:
        self._entries: Dict[Label, Tuple[float, float]] = {}
        if entries:
            for label, (current, increase) in entries.items():
                self.add(label, current, increase)

    def add(self, label: Label, current: float, increase: float) -> None:
        if current < 0.0:
            raise ValueError("current mass must be nonnegative")
        if increase <= 0.0:
            raise ValueError("increase must be positive")
        self._entries[label] = (current, increase)

    @property
    def total_increase(self) -> float:
        return sum(increase for _, increase in self._entries.values())

    def items(self):
        return self._entries.items()

    def values(self):
        return self._entries.values()

    def __len__(self) -> int:
        return len(self._entries)

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __iter__(self) -> Iterator[Label]:
        return iter(self._entries)

    def __repr__(self) -> str:
        return f"DeltaSet({self._entries!r})"


def _as_delta(delta: DeltaSet | Mapping[Label, Tuple[float, float]]) -> DeltaSet:
    return delta if isinstance(delta, DeltaSet) else DeltaSet(delta)


@dataclass(frozen=True, slots=True)
class GiniState:
    """Total mass and Gini index of a sample, advanced without the sample."""

    total: float = 0.0
    value: float = 0.0

    @classmethod
    def from_counts(cls, counts: Mapping[Label, float]) -> "GiniState":
        """Evaluate a count vector exactly (O(k))."""
        return cls(float(sum(counts.values())), gini_exact(counts))

    @property
    def clamped(self) -> float:
        """The value for reporting, clamped into [0, 1]."""
        return min(1.0, max(0.0, self.value))

    def append(self, x: float) -> "GiniState":
        """Concatenate one new element (a class not yet in the sample)."""
        if x <= 0.0:
            raise ValueError("appended mass must be positive")
        new_total = self.total + x
        ssq = sum_squares(self.total, self.value) + x * x
        return GiniState(new_total, 1.0 - ssq / (new_total * new_total))

    def batch_increase(self, delta: DeltaSet | Mapping[Label, Tuple[float, float]]) -> "GiniState":
        """Grow several existing classes at once; O(#changed classes).

        Each entry supplies the class's current mass x and its increase r;
        the squared-mass sum shifts by 2*x*r + r^2 per entry.
        """
        delta = _as_delta(delta)
        if not delta:
            return self
        shift = 0.0
        increase = 0.0
        for current, r in delta.values():
            shift += 2.0 * current * r + r * r
            increase += r
        new_total = self.total + increase
        ssq = sum_squares(self.total, self.value) + shift
        return GiniState(new_total, 1.0 - ssq / (new_total * new_total))

    def inc(self, class_count_before: float) -> "GiniState":
        """One stream event: some class's mass grows by one unit."""
        new_total = self.total + 1.0
        ssq = sum_squares(self.total, self.value) + 2.0 * class_count_before + 1.0
        return GiniState(new_total, 1.0 - ssq / (new_total * new_total))

    def dec(self, class_count_after: float) -> "GiniState":
        """Undo one stream event: some class's mass shrinks by one unit.

        ``class_count_after`` is that class's mass after the removal. Exact
        inverse of inc(); an emptied sample resets to (0, 0).
        """
        if self.total <= 0.0:
            raise ValueError("cannot remove from an empty sample")
        new_total = self.total - 1.0
        if new_total <= _DRAIN_TOL * self.total:
            return GiniState()
        ssq = sum_squares(self.total, self.value) - 2.0 * class_count_after - 1.0
        return GiniState(new_total, 1.0 - ssq / (new_total * new_total))

    def add_class(self, class_mass: float) -> "GiniState":
        """Introduce a brand-new class with the given mass."""
        return self.append(class_mass)

    def del_class(self, class_mass: float) -> "GiniState":
        """Remove one class entirely; ``class_mass`` is its whole mass.

        Exact inverse of add_class(); an emptied sample resets to (0, 0).
        """
        if class_mass <= 0.0:
            raise ValueError("class mass must be positive")
        if class_mass > self.total * (1.0 + _DRAIN_TOL):
            raise ValueError("class mass exceeds sample total")
        new_total = self.total - class_mass
        if new_total <= _DRAIN_TOL * self.total:
            return GiniState()
        ssq = sum_squares(self.total, self.value) - class_mass * class_mass
        return GiniState(new_total, 1.0 - ssq / (new_total * new_total))

    def merge(self, other: "GiniState") -> "GiniState":
        """Concatenate two samples over disjoint class sets.

        Disjointness is the caller's obligation; it cannot be checked from
        the states alone. Commutative; the empty state is the identity.
        """
        if self.total == 0.0:
            return other
        if other.total == 0.0:
            return self
        new_total = self.total + other.total
        ssq = sum_squares(self.total, self.value) + sum_squares(other.total, other.value)
        return GiniState(new_total, 1.0 - ssq / (new_total * new_total))

    def overlay(self, other: "GiniState", cross: float) -> "GiniState":
        """Elementwise sum of two aligned samples (z_i = x_i + y_i).

        The cross term ``cross`` = sum(x_i * y_i) is not recoverable from
        the two states and must be supplied from the raw vectors.
        """
        if cross < 0.0:
            raise ValueError("cross term must be nonnegative")
        new_total = self.total + other.total
        if new_total == 0.0:
            return GiniState()
        ssq = (
            sum_squares(self.total, self.value)
            + sum_squares(other.total, other.value)
            + 2.0 * cross
        )
        return GiniState(new_total, 1.0 - ssq / (new_total * new_total))
