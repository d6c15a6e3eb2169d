"""Pure-numpy fallback for the hot kernels.

Arithmetic must match the compiled extension bit for bit: squared distances
are accumulated dimension by dimension (sequential adds), never via matmul
or axis-sums whose reduction order differs from a plain C loop.
"""
from __future__ import annotations

import numpy as np


def update_min_sqdist_coords(points: np.ndarray, seed: int, min_d2: np.ndarray) -> int:
    """Min-update min_d2 with squared distances to points[seed]; return argmax.

    min_d2 is updated in place. The returned index is the first position
    attaining the maximum of the updated array (lowest-index tie break).
    """
    s = points[seed]
    d = points.shape[1]
    diff = points[:, 0] - s[0]
    acc = diff * diff
    for t in range(1, d):
        diff = points[:, t] - s[t]
        acc += diff * diff
    np.minimum(min_d2, acc, out=min_d2)
    return int(np.argmax(min_d2))


def update_min_sqdist_row(d2row: np.ndarray, min_d2: np.ndarray) -> int:
    """Matrix-variant step: min-update with a precomputed squared-distance row."""
    np.minimum(min_d2, d2row, out=min_d2)
    return int(np.argmax(min_d2))


def seed_sqdist_table(points: np.ndarray, seeds: np.ndarray) -> np.ndarray:
    """n-by-k table of squared distances from every point to each seed."""
    n, d = points.shape
    k = len(seeds)
    table = np.empty((n, k), dtype=np.float64)
    for j in range(k):
        s = points[seeds[j]]
        diff = points[:, 0] - s[0]
        acc = diff * diff
        for t in range(1, d):
            diff = points[:, t] - s[t]
            acc += diff * diff
        table[:, j] = acc
    return table


def region_scan(table: np.ndarray, r2: float) -> tuple[np.ndarray, np.ndarray]:
    """Coverage masks and per-mask counts at squared radius r2.

    table is n-by-k (distances to the k balls of one center tuple). Returns
    (masks, counts) where masks[p] has bit j set iff table[p, j] <= r2
    (exact comparison) and counts has length 2**k with counts[m] the number
    of points whose mask is m; counts[0] counts uncovered points.
    """
    n, k = table.shape
    masks = np.zeros(n, dtype=np.int64)
    for j in range(k):
        masks += (table[:, j] <= r2).astype(np.int64) << j
    counts = np.bincount(masks, minlength=1 << k)
    return masks, counts
