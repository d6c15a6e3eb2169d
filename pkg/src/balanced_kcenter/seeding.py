"""Farthest-first traversal seeding."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backends
from .metric_core import DistanceOracle, MetricInstance


@dataclass(frozen=True, eq=False)
class SeedSet:
    """Seeds in selection order plus each point's squared distance to its nearest seed."""

    indices: tuple[int, ...]
    min_dist2: np.ndarray


def gonzalez_select(
    instance: MetricInstance,
    k: int | None = None,
    first: int = 0,
    backend: str | None = None,
) -> SeedSet:
    """Pick k seeds by farthest-first traversal starting from point `first`.

    Each step selects the point farthest from the chosen set; ties go to the
    lowest point index. min_dist2 in the result is finalized over all k seeds.
    """
    if k is None:
        k = instance.k
    n = instance.n
    if not 0 <= first < n:
        raise ValueError(f"first seed index {first} out of range for n={n}")
    kernels, _ = backends.resolve(backend)
    oracle = DistanceOracle(instance)

    min_d2 = np.full(n, np.inf, dtype=np.float64)
    indices = [int(first)]
    farthest = oracle.update_min_sqdist(first, min_d2, kernels)
    for _ in range(k - 1):
        indices.append(farthest)
        farthest = oracle.update_min_sqdist(indices[-1], min_d2, kernels)
    return SeedSet(indices=tuple(indices), min_dist2=min_d2)
