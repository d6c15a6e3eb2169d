"""Candidate radii and coverage-region decomposition.

A region is the set of points sharing one coverage mask: bit j of the mask is
set iff the point lies within the current squared radius of ball j. Coverage
comparisons use plain <= on the same float64 values that generated the
candidate radii, so a candidate radius covers exactly the pairs it came from.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import backends
from .metric_core import DistanceOracle, MetricInstance
from .seeding import SeedSet


@dataclass(frozen=True, eq=False)
class CandidateRadii:
    """Strictly increasing squared distances {dist2(p, s): p in P, s in seeds}."""

    values: np.ndarray


@dataclass(frozen=True, eq=False)
class CenterTuple:
    """k ball centers drawn from the seed set, repetitions allowed.

    centers are point indices; slots are the matching positions in the seed
    set, used to gather precomputed distance columns.
    """

    centers: tuple[int, ...]
    slots: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class RegionTable:
    """Coverage decomposition at one (tuple, radius) probe."""

    k: int
    masks: np.ndarray
    counts: dict[int, int]
    uncovered: int


def candidate_radii(
    instance: MetricInstance,
    seeds: SeedSet,
    table: np.ndarray | None = None,
    backend: str | None = None,
) -> CandidateRadii:
    """All distinct point-to-seed squared distances, sorted ascending."""
    if table is None:
        table = DistanceOracle(instance).seed_table(seeds.indices, backend)
    return CandidateRadii(values=np.unique(table))


def build_region_table(
    instance: MetricInstance,
    centers: CenterTuple | Sequence[int],
    r2: float,
    table: np.ndarray | None = None,
    backend: str | None = None,
) -> RegionTable:
    """Region masks and counts for the given centers at squared radius r2.

    table, when provided, must hold the squared distances to exactly these
    centers in the same column order (the search module precomputes it).
    """
    idx = centers.centers if isinstance(centers, CenterTuple) else tuple(centers)
    if table is None:
        table = DistanceOracle(instance).seed_table(idx, backend)
    kernels, _ = backends.resolve(backend)
    masks, counts_vec = kernels.region_scan(table, r2)
    counts = {int(m): int(c) for m, c in enumerate(counts_vec) if c > 0 and m > 0}
    return RegionTable(k=int(table.shape[1]), masks=masks, counts=counts,
                       uncovered=int(counts_vec[0]))
