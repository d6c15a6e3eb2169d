"""Center-tuple search over candidate radii.

A 4-approximate balanced clustering always exists with all centers drawn
from the farthest-first seed set, so the search enumerates center tuples
from the seeds, binary-searches each tuple's minimal feasible candidate
radius (feasibility is monotone in the radius), and keeps the best tuple.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .coverage import (CandidateRadii, CenterTuple, RegionTable,
                       build_region_table, candidate_radii)
from .metric_core import DistanceOracle, MetricInstance
from .rounding import round_to_integer
from .seeding import SeedSet, gonzalez_select
from .sol import SolSolution, build_sol, mask_bits, solve_sol


@dataclass(eq=False)
class SearchContext:
    """Shared, read-only state for feasibility probes."""

    instance: MetricInstance
    seeds: SeedSet
    table: np.ndarray          # n-by-k squared distances to the seeds
    radii: CandidateRadii
    backend_name: str

    def tuple_table(self, ct: CenterTuple) -> np.ndarray:
        """Contiguous distance columns for one center tuple."""
        return np.ascontiguousarray(self.table[:, list(ct.slots)])


def precompute_seed_distances(
    instance: MetricInstance, seeds: SeedSet, backend: str | None = None
) -> np.ndarray:
    return DistanceOracle(instance).seed_table(seeds.indices, backend)


def build_context(
    instance: MetricInstance,
    seeds: SeedSet | None = None,
    first: int = 0,
    backend: str | None = None,
) -> SearchContext:
    from . import backends

    _, name = backends.resolve(backend)
    if seeds is None:
        seeds = gonzalez_select(instance, first=first, backend=name)
    table = precompute_seed_distances(instance, seeds, backend=name)
    radii = candidate_radii(instance, seeds, table=table)
    return SearchContext(instance=instance, seeds=seeds, table=table,
                         radii=radii, backend_name=name)


def enumerate_tuples(seeds: SeedSet, k: int | None = None,
                     mode: str = "multisets") -> list[CenterTuple]:
    """Center tuples from the seed set, ascending lexicographic by point index.

    mode "multisets" enumerates C(|S|+k-1, k) combinations with repetition;
    identical size bounds across clusters make permutations of a tuple
    equivalent. mode "ordered" enumerates all |S|**k ordered tuples.
    """
    if k is None:
        k = len(seeds.indices)
    pool = sorted((idx, slot) for slot, idx in enumerate(seeds.indices))
    if mode == "multisets":
        combos = itertools.combinations_with_replacement(pool, k)
    elif mode == "ordered":
        combos = itertools.product(pool, repeat=k)
    else:
        raise ValueError(f"unknown tuple mode {mode!r}")
    return [CenterTuple(centers=tuple(p for p, _ in combo),
                        slots=tuple(s for _, s in combo))
            for combo in combos]


def feasible(
    ct: CenterTuple,
    r2: float,
    ctx: SearchContext,
    table: np.ndarray | None = None,
    trace: list | None = None,
) -> SolSolution | None:
    """Integral feasible assignment for the tuple at squared radius r2, or None.

    Composes the region table, the rational assignment system, and rounding
    (a no-op when the solver lands on an integral vertex).
    """
    if table is None:
        table = ctx.tuple_table(ct)
    inst = ctx.instance
    rt = build_region_table(inst, ct, r2, table=table, backend=ctx.backend_name)
    system = build_sol(rt, inst.lower, inst.upper)
    if system is None:
        return None
    sol = solve_sol(system)
    if sol is None:
        return None
    return round_to_integer(sol, trace=trace)


def min_feasible_radius(
    ct: CenterTuple,
    ctx: SearchContext,
    method: str = "binary",
    trace: list | None = None,
) -> tuple[float, SolSolution] | None:
    """Smallest candidate squared radius at which the tuple is feasible.

    Feasibility is monotone in the radius, so a binary search over the
    sorted candidates finds the same answer as a linear scan (method
    "linear" exists for cross-checking). None when even the largest
    candidate is infeasible.
    """
    values = ctx.radii.values
    table = ctx.tuple_table(ct)
    if method == "linear":
        for r2 in values:
            sol = feasible(ct, float(r2), ctx, table=table, trace=trace)
            if sol is not None:
                return float(r2), sol
        return None
    top = feasible(ct, float(values[-1]), ctx, table=table, trace=trace)
    if top is None:
        return None
    lo, hi = 0, len(values) - 1
    best = (float(values[-1]), top)
    while lo < hi:
        mid = (lo + hi) // 2
        sol = feasible(ct, float(values[mid]), ctx, table=table, trace=trace)
        if sol is not None:
            hi = mid
            best = (float(values[mid]), sol)
        else:
            lo = mid + 1
    return best


def extract_labels(solution: SolSolution, rt: RegionTable) -> np.ndarray:
    """Deal each region's points (ascending index) to clusters (ascending).

    Returns 1-based labels.
    """
    labels = np.zeros(len(rt.masks), dtype=np.int64)
    for mask in sorted(rt.counts):
        pts = np.flatnonzero(rt.masks == mask)
        offset = 0
        for j in mask_bits(mask):
            take = int(solution.values[(mask, j)])
            labels[pts[offset:offset + take]] = j + 1
            offset += take
        if offset != len(pts):
            raise AssertionError(f"region {mask}: dealt {offset} of {len(pts)} points")
    return labels


@dataclass(frozen=True, eq=False)
class ClusteringResult:
    centers: tuple[int, ...]
    labels: np.ndarray         # 1-based cluster labels
    sizes: tuple[int, ...]
    radius: float
    radius2: float
    seed_indices: tuple[int, ...]
    assignment: SolSolution    # the integer region-to-cluster solution behind labels


def balanced_kcenter(
    instance: MetricInstance,
    first: int = 0,
    mode: str = "tuples",
    tuple_mode: str = "multisets",
    threads: int = 1,
    backend: str | None = None,
    trace: list | None = None,
    report: dict | None = None,
) -> ClusteringResult:
    """Balanced k-center clustering with centers drawn from the seed set.

    mode "tuples" searches all center tuples; "seed-set" is the ablation that
    uses the seeds themselves, in selection order, as the only tuple. Ties
    between tuples break toward the lexicographically smallest center tuple.
    The reported radius is a member of the candidate distance multiset.
    """
    t0 = time.perf_counter()
    ctx = build_context(instance, first=first, backend=backend)
    t1 = time.perf_counter()

    k = instance.k
    if mode == "seed-set":
        tuples = [CenterTuple(centers=ctx.seeds.indices, slots=tuple(range(k)))]
    elif mode == "tuples":
        tuples = enumerate_tuples(ctx.seeds, k, mode=tuple_mode)
    else:
        raise ValueError(f"unknown centers mode {mode!r}")

    def probe(ct: CenterTuple):
        local_trace: list = []
        hit = min_feasible_radius(ct, ctx, trace=local_trace)
        return ct, hit, local_trace

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(probe, tuples))
    else:
        outcomes = [probe(ct) for ct in tuples]

    best = None
    for ct, hit, local_trace in outcomes:
        if trace is not None and local_trace:
            trace.extend({"tuple": ct.centers, **entry} for entry in local_trace)
        if hit is None:
            continue
        r2, sol = hit
        key = (r2, ct.centers)
        if best is None or key < best[0]:
            best = (key, ct, r2, sol)
    if best is None:
        raise AssertionError("no tuple was feasible at the maximum candidate radius")
    _, ct, r2, sol = best
    t2 = time.perf_counter()

    rt = build_region_table(instance, ct, r2, table=ctx.tuple_table(ct),
                            backend=ctx.backend_name)
    labels = extract_labels(sol, rt)
    sizes = tuple(int(c) for c in np.bincount(labels, minlength=k + 1)[1:])
    t3 = time.perf_counter()

    if report is not None:
        report.update({
            "backend": ctx.backend_name,
            "seeds": list(ctx.seeds.indices),
            "tuples_examined": len(tuples),
            "candidate_radii": int(len(ctx.radii.values)),
            "rounding_adjustments": sum(len(lt) for _, _, lt in outcomes),
            "timings": {
                "prepare_s": t1 - t0,
                "search_s": t2 - t1,
                "labels_s": t3 - t2,
                "total_s": t3 - t0,
            },
        })
    return ClusteringResult(
        centers=ct.centers,
        labels=labels,
        sizes=sizes,
        radius=math.sqrt(r2),
        radius2=r2,
        seed_indices=ctx.seeds.indices,
        assignment=sol,
    )
