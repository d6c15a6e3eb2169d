"""Shared random generators for the test suite.

Region tables built here are synthetic: masks and counts are chosen
directly instead of coming from a geometric instance, which exercises the
assignment and rounding layers on shapes geometry rarely produces.
"""
import numpy as np

from balanced_kcenter.coverage import RegionTable


def random_bounds(rng, n, k):
    """Any valid (lower, upper) pair for n points in k clusters."""
    lower = int(rng.integers(1, n // k + 1))
    upper = int(rng.integers(-(-n // k), n + 1))
    return lower, upper


def random_points(rng, n_max=12, d_max=3, n_min=2):
    n = int(rng.integers(n_min, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    # half the draws land on a small integer grid so distance ties happen
    if rng.random() < 0.5:
        return rng.integers(0, 4, size=(n, d)).astype(float)
    return rng.normal(size=(n, d))


def random_counts(rng, k, max_regions=4, max_count=5):
    """Random region counts keyed by distinct nonzero k-bit masks."""
    all_masks = list(range(1, 1 << k))
    m = int(rng.integers(1, min(max_regions, len(all_masks)) + 1))
    picks = rng.choice(len(all_masks), size=m, replace=False)
    return {all_masks[i]: int(rng.integers(1, max_count + 1)) for i in sorted(picks)}


def make_table(k, counts, uncovered=0):
    """RegionTable with per-point masks consistent with the given counts."""
    members = []
    for mask in sorted(counts):
        members.extend([mask] * counts[mask])
    return RegionTable(k=k, masks=np.array(members, dtype=np.int64),
                       counts=dict(counts), uncovered=uncovered)


def integer_feasible(counts, k, lower, upper):
    """Exhaustive integer-assignment check; ground truth for the solver."""
    regions = sorted(counts.items())
    sums = [0] * k

    def place(i):
        if i == len(regions):
            return all(lower <= s <= upper for s in sums)
        mask, cnt = regions[i]
        bits = [j for j in range(k) if mask >> j & 1]

        def split(b, left):
            j = bits[b]
            if b == len(bits) - 1:
                if sums[j] + left > upper:
                    return False
                sums[j] += left
                ok = place(i + 1)
                sums[j] -= left
                return ok
            for take in range(left + 1):
                if sums[j] + take > upper:
                    break
                sums[j] += take
                if split(b + 1, left - take):
                    sums[j] -= take
                    return True
                sums[j] -= take
            return False

        return split(0, cnt)

    return place(0)
