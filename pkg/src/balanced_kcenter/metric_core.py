"""Problem instances and squared-distance access.

All internal arithmetic stays in squared-distance space; square roots appear
only when a radius is reported. The matrix variant squares its entries on
load so both variants compare the same kind of number.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backends

K_CAP = 6  # region tables and tuple counts grow as 2**k; beyond this is opt-in


class InstanceParseError(ValueError):
    """Input data could not be parsed into a usable instance."""


class BoundsError(ValueError):
    """(k, lower, upper) violate 1 <= L <= floor(n/k) <= ceil(n/k) <= U <= n."""


class ClusterCapError(ValueError):
    """k exceeds K_CAP and the exponential-work override was not given."""


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """A balanced k-center instance: points or a distance matrix, plus size bounds.

    kind is "coords" (points: n-by-d float64) or "matrix" (d2matrix: n-by-n
    squared entries of the given symmetric distance matrix).
    """

    kind: str
    k: int
    lower: int
    upper: int
    points: np.ndarray | None = None
    d2matrix: np.ndarray | None = None

    @property
    def n(self) -> int:
        if self.kind == "coords":
            return self.points.shape[0]
        return self.d2matrix.shape[0]

    @property
    def dim(self) -> int | None:
        return self.points.shape[1] if self.kind == "coords" else None


def load_instance(
    data,
    *,
    k: int,
    lower: int,
    upper: int,
    metric: str = "coords",
    allow_large_k: bool = False,
) -> MetricInstance:
    """Validate raw data and bounds, returning a MetricInstance.

    Raises InstanceParseError for malformed data, ClusterCapError when k
    exceeds K_CAP without allow_large_k, and BoundsError when the size-bound
    chain 1 <= lower <= floor(n/k) <= ceil(n/k) <= upper <= n fails.
    """
    if metric not in ("coords", "matrix"):
        raise InstanceParseError(f"unknown metric kind {metric!r}")
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2 or arr.shape[0] == 0:
        raise InstanceParseError("instance data must be a non-empty 2-D array")
    if not np.isfinite(arr).all():
        raise InstanceParseError("instance data contains non-finite values")

    if metric == "matrix":
        n = arr.shape[0]
        if arr.shape[1] != n:
            raise InstanceParseError("distance matrix must be square")
        if not (arr == arr.T).all():
            raise InstanceParseError("distance matrix must be symmetric")
        if (np.diag(arr) != 0.0).any():
            raise InstanceParseError("distance matrix must have a zero diagonal")
        if (arr < 0.0).any():
            raise InstanceParseError("distance matrix entries must be non-negative")
    else:
        n = arr.shape[0]

    if not isinstance(k, (int, np.integer)) or k < 1:
        raise BoundsError(f"k must be a positive integer, got {k!r}")
    k = int(k)
    if k > K_CAP and not allow_large_k:
        raise ClusterCapError(
            f"k={k} exceeds the default cap {K_CAP}; enumeration and region "
            "tables grow exponentially in k, pass allow_large_k to proceed"
        )
    lower = int(lower)
    upper = int(upper)
    if not (1 <= lower <= n // k):
        raise BoundsError(f"require 1 <= lower <= floor(n/k): lower={lower}, n={n}, k={k}")
    if not (-(-n // k) <= upper <= n):
        raise BoundsError(f"require ceil(n/k) <= upper <= n: upper={upper}, n={n}, k={k}")

    if metric == "matrix":
        d2 = np.ascontiguousarray(arr * arr)
        return MetricInstance(kind="matrix", k=k, lower=lower, upper=upper, d2matrix=d2)
    pts = np.ascontiguousarray(arr)
    return MetricInstance(kind="coords", k=k, lower=lower, upper=upper, points=pts)


@dataclass(frozen=True, eq=False)
class DistanceOracle:
    """Uniform squared-distance access over either instance variant.

    Scalar queries accumulate coordinate differences sequentially so their
    results agree exactly with the bulk kernels.
    """

    instance: MetricInstance

    def dist2(self, i: int, j: int) -> float:
        inst = self.instance
        if inst.kind == "matrix":
            return float(inst.d2matrix[i, j])
        p, q = inst.points[i], inst.points[j]
        acc = 0.0
        for t in range(len(p)):
            diff = float(p[t]) - float(q[t])
            acc += diff * diff
        return acc

    def update_min_sqdist(self, seed: int, min_d2: np.ndarray, kernels) -> int:
        """Min-update min_d2 with distances to one seed; return argmax index."""
        inst = self.instance
        if inst.kind == "matrix":
            return kernels.update_min_sqdist_row(inst.d2matrix[seed], min_d2)
        return kernels.update_min_sqdist_coords(inst.points, seed, min_d2)

    def seed_table(self, seeds, backend: str | None = None) -> np.ndarray:
        """n-by-len(seeds) squared-distance table, C-contiguous."""
        inst = self.instance
        idx = np.asarray(seeds, dtype=np.int64)
        if inst.kind == "matrix":
            return np.ascontiguousarray(inst.d2matrix[:, idx])
        kernels, _ = backends.resolve(backend)
        return kernels.seed_sqdist_table(inst.points, idx)
