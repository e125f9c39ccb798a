"""Low-probability truncation of ditstring tables.

Filtering drops every probability strictly below a threshold and
renormalizes the survivors, mimicking what a finite shot budget does to
measured ditstring frequencies (a threshold of 1e-3 is roughly a 1000-shot
return).  It is applied once to the full-system table; all marginals feeding
the mutual-information composites are then taken from that single filtered
table.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import ProbabilityTable, composite_mutual_information
from .hilbert import Partition

COMPOSITE_QUANTITIES = ("weak", "strong", "delta")

DEFAULT_LEVELS = np.geomspace(1e-8, 1.0, 60)


class EmptyTableError(ValueError):
    """Every probability fell below the filter threshold."""


@dataclass(frozen=True)
class FilterSweep:
    """Composite-MI value and survivor count per filter level."""

    levels: np.ndarray
    values: np.ndarray
    survivors: np.ndarray
    emptied: np.ndarray  # True where the filter removed everything
    quantity: str

    def __post_init__(self):
        if not (np.diff(self.levels) > 0).all():
            raise ValueError("filter levels must be strictly increasing")


def filter_probabilities(table: ProbabilityTable,
                         p_min: float) -> ProbabilityTable:
    """Drop entries with p < p_min (ties kept) and renormalize the rest."""
    if not 0.0 <= p_min <= 1.0:
        raise ValueError(f"p_min must lie in [0, 1], got {p_min}")
    keep = table.probs >= p_min
    survivors = np.where(keep, table.probs, 0.0)
    total = survivors.sum()
    if total <= 0.0:
        raise EmptyTableError(f"filter level {p_min} removed every probability")
    return ProbabilityTable(probs=survivors / total, sites=table.sites,
                            local_dim=table.local_dim)


def filtered_composite(table: ProbabilityTable, partition: Partition,
                       p_min: float, quantity: str):
    """One composite-MI value computed from the filtered table.

    Returns ``(value, emptied)``; an emptied table yields value 0 with the
    flag set, matching the terminal drop to zero once the threshold passes
    the largest probability.
    """
    if quantity not in COMPOSITE_QUANTITIES:
        raise ValueError(f"quantity must be one of {COMPOSITE_QUANTITIES}, "
                         f"got {quantity!r}")
    try:
        filtered = filter_probabilities(table, p_min)
    except EmptyTableError:
        return 0.0, True
    return composite_mutual_information(filtered, partition)[quantity], False


def filter_sweep(table: ProbabilityTable, partition: Partition, quantity: str,
                 levels=None) -> FilterSweep:
    """Evaluate the filtered composite over an ascending grid of levels."""
    levels = DEFAULT_LEVELS if levels is None else np.asarray(levels, dtype=float)
    values = np.empty(levels.shape)
    survivors = np.empty(levels.shape, dtype=np.int64)
    emptied = np.empty(levels.shape, dtype=bool)
    for k, level in enumerate(levels):
        values[k], emptied[k] = filtered_composite(table, partition, level, quantity)
        survivors[k] = int((table.probs >= level).sum()) if not emptied[k] else 0
    return FilterSweep(levels=levels, values=values, survivors=survivors,
                       emptied=emptied, quantity=quantity)
