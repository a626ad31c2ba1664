"""Exact Gini index and Shannon entropy of labeled count vectors.

Both metrics are taken over the discrete distribution obtained by
normalizing a sample of nonnegative per-class masses ("counts"):

    gini    = 1 - sum((x / S)^2)                 in [0, 1 - 1/k]
    entropy = -sum((x / S) * log2(x / S))        in [0, log2 k] bits

where S is the total mass and k the number of distinct classes. Everything
here recomputes from raw counts in O(k); it is the ground truth that the
incremental state machines in the rest of the package are checked against.

Empty samples (S = 0) have both metrics defined as 0, and terms of the form
0 * log2(0) are taken as 0 throughout.
"""

from __future__ import annotations

import math
from typing import Dict, Hashable, Iterable, Iterator, Mapping, Tuple

__all__ = [
    "Label",
    "ClassCounts",
    "Interner",
    "ExactEstimator",
    "gini_exact",
    "entropy_exact",
    "sum_squares",
    "rescale_entropy",
    "plog2p",
]

# Class identifiers are opaque; streams typically use dense ints from Interner.
Label = Hashable


def plog2p(p: float) -> float:
    """p * log2(p), extended continuously with 0 * log2(0) == 0."""
    return p * math.log2(p) if p > 0.0 else 0.0


def gini_exact(counts: Mapping[Label, float] | "ClassCounts") -> float:
    """Gini index of a count vector, recomputed from scratch.

    Accepts any mapping from class label to nonnegative mass. Returns 0 for
    an empty (or all-zero) sample.
    """
    values = counts.values()
    total = sum(values)
    if total <= 0.0:
        return 0.0
    return 1.0 - sum(v * v for v in values) / (total * total)


def entropy_exact(counts: Mapping[Label, float] | "ClassCounts") -> float:
    """Shannon entropy (bits) of a count vector, recomputed from scratch."""
    values = counts.values()
    total = sum(values)
    if total <= 0.0:
        return 0.0
    acc = sum(plog2p(v / total) for v in values)
    # Avoid returning -0.0 for pure samples.
    return -acc if acc != 0.0 else 0.0


def sum_squares(total: float, gini: float) -> float:
    """Recover sum(x_i^2) of a sample from its total mass and Gini index.

    The Gini index determines the sum of squared masses:

        sum(x_i^2) = S^2 * (1 - G)

    which is the quantity every incremental Gini formula consumes.
    """
    return total * total * (1.0 - gini)


def rescale_entropy(h: float, total: float, added_mass: float) -> float:
    """Re-denominate an entropy over an enlarged total mass.

    Given a sample with entropy ``h`` and mass ``total``, returns the value
    of -sum((x_i / (S + R)) * log2(x_i / (S + R))) for R = ``added_mass``:

        (S / (S + R)) * (h - log2(S / (S + R)))

    This is the "old sample" contribution appearing in every incremental
    entropy formula. The empty sample must be short-circuited by the caller.
    """
    if total <= 0.0:
        raise ValueError("rescale_entropy requires a nonempty sample (total > 0)")
    if added_mass <= 0.0:
        raise ValueError("added mass must be positive")
    q = total / (total + added_mass)
    return q * (h - math.log2(q))


class ClassCounts:
    """Per-class nonnegative masses with a cached total.

    Zero-mass classes are never stored. Masses are reals rather than ints so
    that unit-count streams and arbitrary-mass updates share one type.
    """

    __slots__ = ("_counts", "_total")

    def __init__(self, counts: Mapping[Label, float] | None = None) -> None:
        self._counts: Dict[Label, float] = {}
        self._total = 0.0
        if counts:
            for label, mass in counts.items():
                self.add(label, mass)

    @property
    def total(self) -> float:
        return self._total

    def add(self, label: Label, mass: float = 1.0) -> None:
        """Add mass to a class (creating it on first sight)."""
        if mass < 0.0:
            raise ValueError("mass must be nonnegative")
        if mass == 0.0:
            return
        self._counts[label] = self._counts.get(label, 0.0) + mass
        self._total += mass

    def remove(self, label: Label, mass: float = 1.0) -> None:
        """Remove mass from a class; the class disappears when emptied."""
        if mass <= 0.0:
            raise ValueError("mass must be positive")
        current = self._counts.get(label)
        if current is None:
            raise KeyError(label)
        if mass > current:
            raise ValueError(f"cannot remove {mass} from class with mass {current}")
        remaining = current - mass
        if remaining > 0.0:
            self._counts[label] = remaining
        else:
            del self._counts[label]
        self._total -= mass
        if not self._counts:
            self._total = 0.0

    def get(self, label: Label, default: float = 0.0) -> float:
        return self._counts.get(label, default)

    def as_dict(self) -> Dict[Label, float]:
        return dict(self._counts)

    def items(self):
        return self._counts.items()

    def values(self):
        return self._counts.values()

    def keys(self):
        return self._counts.keys()

    def __getitem__(self, label: Label) -> float:
        return self._counts[label]

    def __contains__(self, label: Label) -> bool:
        return label in self._counts

    def __len__(self) -> int:
        return len(self._counts)

    def __iter__(self) -> Iterator[Label]:
        return iter(self._counts)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ClassCounts):
            return self._counts == other._counts
        return NotImplemented

    def __repr__(self) -> str:
        return f"ClassCounts({self._counts!r})"


class Interner:
    """Dense integer ids for string labels, assigned on first sight.

    Interning is injective: equal labels always map to the same id, distinct
    labels to distinct ids. The label universe is open; new labels may show
    up at any point of a stream.
    """

    __slots__ = ("_ids", "_labels")

    def __init__(self, labels: Iterable[str] = ()) -> None:
        self._ids: Dict[str, int] = {}
        self._labels: list[str] = []
        for label in labels:
            self.intern(label)

    def intern(self, label: str) -> int:
        """Return the id for a label, allocating the next dense id if new."""
        class_id = self._ids.get(label)
        if class_id is None:
            class_id = len(self._labels)
            self._ids[label] = class_id
            self._labels.append(label)
        return class_id

    def label_of(self, class_id: int) -> str:
        return self._labels[class_id]

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self._labels)

    def __contains__(self, label: str) -> bool:
        return label in self._ids

    def __len__(self) -> int:
        return len(self._labels)

    def __repr__(self) -> str:
        return f"Interner({len(self._labels)} labels)"


class ExactEstimator:
    """Reference stream estimator: unbounded counts, brute-force metrics.

    observe() is O(1); every metrics() call recomputes both metrics from the
    full count vector in O(k). This is the expensive baseline the
    incremental estimators replace, and the oracle they are tested against.
    """

    __slots__ = ("counts",)

    def __init__(self, counts: ClassCounts | None = None) -> None:
        self.counts = counts if counts is not None else ClassCounts()

    def observe(self, label: Label) -> None:
        self.counts.add(label, 1.0)

    def metrics(self) -> Tuple[float, float]:
        return (gini_exact(self.counts), entropy_exact(self.counts))
