"""Fading-factor (exponentially discounted) Gini and entropy."""

from __future__ import annotations

import math
from typing import Dict, Tuple

from .core import Label, plog2p

__all__ = ["FadingEstimator"]


class FadingEstimator:
    """Recency-weighted impurity metrics in constant space.

    Each observe() folds the previous metric value back in through a factor
    ``alpha`` in (0, 1], geometrically discounting older contributions by
    age, while the per-class counts themselves stay unweighted integers.
    With alpha = 1 nothing fades and the trace coincides with the exact
    metrics of the whole stream so far.

    Memory is O(distinct classes), independent of stream length.
    Single-writer; not safe for concurrent mutation.
    """

    def __init__(self, alpha: float) -> None:
        if not 0.0 < alpha <= 1.0:
            raise ValueError("fading factor must be in (0, 1]")
        self.alpha = alpha
        self.n = 0
        self.counts: Dict[Label, int] = {}
        self.g = 0.0
        self.h = 0.0

    def observe(self, label: Label) -> None:
        """Fold one labeled event into both faded metrics.

        The metric updates read the pre-event n and class count; the counts
        advance afterwards.
        """
        n = self.n
        n_i = self.counts.get(label, 0)
        new_n = n + 1
        numer = n * n * (1.0 - self.alpha * self.g) + 2.0 * n_i + 1.0
        self.g = 1.0 - numer / (new_n * new_n)
        if n:
            q = n / new_n
            old_part = q * (self.alpha * self.h - math.log2(q))
        else:
            old_part = 0.0
        self.h = old_part - plog2p((n_i + 1) / new_n) + plog2p(n_i / new_n)
        self.n = new_n
        self.counts[label] = n_i + 1

    def metrics(self) -> Tuple[float, float]:
        """Current (gini, entropy) clamped for reporting; O(1).

        Gini clamps into [0, 1]; entropy clamps tiny negatives to 0 but has
        no a-priori upper bound once alpha < 1.
        """
        return (min(1.0, max(0.0, self.g)), max(0.0, self.h))
