"""Independent verification oracles.

Nothing here shares code with the production feasibility path: coverage is
re-derived point by point, feasibility is decided by max-flow with lower
bounds, and optima come from explicit partition enumeration. Intended for
small instances (flow: up to a few thousand points; brute force: n <= 14).
"""
from __future__ import annotations

from collections import deque
from typing import Sequence

import numpy as np

from .coverage import CenterTuple
from .metric_core import DistanceOracle, MetricInstance

INFINITY = 10 ** 18


class FlowNetwork:
    """Dinic max-flow over an adjacency-list residual graph."""

    def __init__(self, n: int):
        self.n = n
        self.graph: list[list[list[int]]] = [[] for _ in range(n)]

    def add_edge(self, u: int, v: int, cap: int) -> None:
        self.graph[u].append([v, cap, len(self.graph[v])])
        self.graph[v].append([u, 0, len(self.graph[u]) - 1])

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, cap, _ in self.graph[u]:
                if cap > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        return level if level[t] >= 0 else None

    def _augment(self, u: int, t: int, flow: int, level, it) -> int:
        if u == t:
            return flow
        while it[u] < len(self.graph[u]):
            v, cap, rev = self.graph[u][it[u]]
            if cap > 0 and level[v] == level[u] + 1:
                pushed = self._augment(v, t, min(flow, cap), level, it)
                if pushed:
                    self.graph[u][it[u]][1] -= pushed
                    self.graph[v][rev][1] += pushed
                    return pushed
            it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                pushed = self._augment(s, t, INFINITY, level, it)
                if not pushed:
                    break
                total += pushed


def _center_indices(centers) -> tuple[int, ...]:
    if isinstance(centers, CenterTuple):
        return centers.centers
    return tuple(int(c) for c in centers)


def flow_feasible(
    instance: MetricInstance,
    centers,
    r2: float,
    lower: int | None = None,
    upper: int | None = None,
    table: np.ndarray | None = None,
) -> bool:
    """Point-level feasibility at squared radius r2 via max-flow.

    Each point must send one unit to a ball covering it; ball intakes are
    bounded by [lower, upper] (defaulting to the instance bounds). Lower
    bounds are handled with the standard supersource/supersink reduction;
    feasible iff the reduced flow saturates.
    """
    idx = _center_indices(centers)
    k = len(idx)
    n = instance.n
    lower = instance.lower if lower is None else int(lower)
    upper = instance.upper if upper is None else int(upper)
    if table is None:
        table = DistanceOracle(instance).seed_table(idx)

    source, sink = 0, n + k + 1
    ss, tt = n + k + 2, n + k + 3
    net = FlowNetwork(n + k + 4)
    for p in range(n):
        covered = False
        for j in range(k):
            if table[p, j] <= r2:
                net.add_edge(1 + p, 1 + n + j, 1)
                covered = True
        if not covered:
            return False
        net.add_edge(source, 1 + p, 1)
    for j in range(k):
        net.add_edge(1 + n + j, sink, upper - lower)
        net.add_edge(1 + n + j, tt, lower)
    net.add_edge(ss, source, n)
    if n - k * lower > 0:
        net.add_edge(sink, tt, n - k * lower)
    return net.max_flow(ss, tt) == n


def _sq_dist(a: np.ndarray, b: np.ndarray) -> float:
    diff = a - b
    return float(diff @ diff)


def _ball_from_boundary(boundary: list[np.ndarray]):
    """Smallest sphere through the boundary points: center, squared radius."""
    if not boundary:
        return None, -1.0
    q0 = boundary[0]
    if len(boundary) == 1:
        return q0.copy(), 0.0
    rows = np.array([q - q0 for q in boundary[1:]], dtype=np.float64)
    rhs = np.array([_sq_dist(q, q0) / 2.0 for q in boundary[1:]], dtype=np.float64)
    shift, *_ = np.linalg.lstsq(rows, rhs, rcond=None)
    center = q0 + shift
    r2 = max(_sq_dist(center, q) for q in boundary)
    return center, r2


def _welzl(points: list[np.ndarray], boundary: list[np.ndarray], dim: int):
    if not points or len(boundary) == dim + 1:
        return _ball_from_boundary(boundary)
    p = points[0]
    center, r2 = _welzl(points[1:], boundary, dim)
    if center is not None and _sq_dist(p, center) <= r2 * (1.0 + 1e-12):
        return center, r2
    return _welzl(points[1:], boundary + [p], dim)


def min_enclosing_ball(points) -> float:
    """Radius of the smallest ball enclosing a small point set.

    The center is solved first; the radius is the root of the maximum squared
    distance from the center, except for pairs, where half the pair distance
    needs one rounding fewer.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.shape[0] == 0:
        raise ValueError("min_enclosing_ball needs at least one point")
    if pts.shape[0] == 2:
        return float(np.sqrt(_sq_dist(pts[0], pts[1]))) / 2.0
    center, _ = _welzl([p for p in pts], [], pts.shape[1])
    r2 = max(_sq_dist(center, p) for p in pts)
    return float(np.sqrt(r2))


def _group_cost2(instance: MetricInstance, member_mask: int, cache: dict) -> float:
    """Squared covering cost of one group: continuous enclosing-ball radius
    for coordinates, best discrete eccentricity for matrix instances."""
    hit = cache.get(member_mask)
    if hit is not None:
        return hit
    members = [i for i in range(instance.n) if member_mask >> i & 1]
    if instance.kind == "coords":
        pts = [instance.points[i] for i in members]
        if len(pts) == 1:
            cost = 0.0
        elif len(pts) == 2:
            cost = _sq_dist(pts[0], pts[1]) / 4.0
        else:
            center, _ = _welzl(pts, [], instance.points.shape[1])
            cost = max(_sq_dist(center, p) for p in pts)
    else:
        d2 = instance.d2matrix
        cost = min(max(float(d2[c, m]) for m in members) for c in members)
    cache[member_mask] = cost
    return cost


def brute_force_optimum(instance: MetricInstance) -> tuple[float, np.ndarray]:
    """Exact optimal balanced radius by enumerating all size-valid partitions.

    Coordinate instances use continuous (enclosing-ball) centers; matrix
    instances pick the best member as a discrete center. Returns the radius
    and one optimal labeling (1-based). Guarded to tiny instances.
    """
    n, k = instance.n, instance.k
    if n > 14 or k > 4:
        raise ValueError(f"brute force oracle is limited to n <= 14, k <= 4 (got n={n}, k={k})")
    lower, upper = instance.lower, instance.upper
    cache: dict[int, float] = {}
    best: list = [np.inf, None]

    assign = np.zeros(n, dtype=np.int64)

    def recurse(p: int, blocks: list[list[int]]) -> None:
        # blocks: [bitmask, size] per open block
        if p == n:
            if len(blocks) != k or any(size < lower for _, size in blocks):
                return
            worst = max(_group_cost2(instance, m, cache) for m, _ in blocks)
            if worst < best[0]:
                best[0] = worst
                best[1] = assign[:n].copy()
            return
        remaining = n - p
        deficit = sum(max(0, lower - size) for _, size in blocks)
        deficit += (k - len(blocks)) * lower
        if deficit > remaining:
            return
        for bi, blk in enumerate(blocks):
            if blk[1] < upper:
                blk[0] |= 1 << p
                blk[1] += 1
                assign[p] = bi + 1
                recurse(p + 1, blocks)
                blk[0] &= ~(1 << p)
                blk[1] -= 1
        if len(blocks) < k:
            blocks.append([1 << p, 1])
            assign[p] = len(blocks)
            recurse(p + 1, blocks)
            blocks.pop()

    recurse(0, [])
    if best[1] is None:
        raise AssertionError("no size-valid partition exists despite validated bounds")
    return float(np.sqrt(best[0])), best[1]
