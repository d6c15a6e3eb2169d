"""Region-level assignment system, solved in exact rational arithmetic.

Variables x[mask][j] say how many points of the region with coverage mask
`mask` go to cluster j (bit j must be set in mask). Constraints: each region's
variables sum to its point count, and each cluster's total lies in [L, U].
Feasibility is decided by a phase-one simplex over fractions.Fraction with
Bland's rule, so the outcome is exact and deterministic. Vertex solutions of
this transportation-like system land integral, but callers must still route
results through the rounding module, which is a no-op on integral input.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coverage import RegionTable

F0 = Fraction(0)
F1 = Fraction(1)


def mask_bits(mask: int) -> tuple[int, ...]:
    """Set bit positions of mask, ascending."""
    out = []
    j = 0
    while mask:
        if mask & 1:
            out.append(j)
        mask >>= 1
        j += 1
    return tuple(out)


@dataclass(frozen=True, eq=False)
class SolSystem:
    """The assignment system for one (tuple, radius) probe."""

    k: int
    lower: int
    upper: int
    regions: tuple[tuple[int, int], ...]     # (mask, count), mask ascending
    variables: tuple[tuple[int, int], ...]   # (mask, cluster), lexicographic


@dataclass(eq=False)
class SolSolution:
    """An assignment of region points to clusters; values may be fractional.

    values maps every (mask, cluster) variable of the system, zeros included.
    """

    k: int
    lower: int
    upper: int
    values: dict[tuple[int, int], Fraction]

    def copy(self) -> "SolSolution":
        return SolSolution(self.k, self.lower, self.upper, dict(self.values))

    def cluster_sums(self) -> list[Fraction]:
        sums = [F0] * self.k
        for (_, j), v in self.values.items():
            sums[j] += v
        return sums

    def region_sums(self) -> dict[int, Fraction]:
        sums: dict[int, Fraction] = {}
        for (mask, _), v in self.values.items():
            sums[mask] = sums.get(mask, F0) + v
        return sums

    def fractional_items(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted((kv, v) for kv, v in self.values.items() if v.denominator != 1)

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.values.values())

    def is_feasible(self) -> bool:
        """Nonnegativity and cluster bounds; region sums are checked against keys."""
        if any(v < 0 for v in self.values.values()):
            return False
        lo, up = Fraction(self.lower), Fraction(self.upper)
        return all(lo <= s <= up for s in self.cluster_sums())


def build_sol(table: RegionTable, lower: int, upper: int) -> SolSystem | None:
    """Assemble the system from a region table; None if any point is uncovered."""
    if table.uncovered > 0:
        return None
    regions = tuple(sorted(table.counts.items()))
    variables = tuple((mask, j) for mask, _ in regions for j in mask_bits(mask))
    return SolSystem(k=table.k, lower=lower, upper=upper, regions=regions,
                     variables=variables)


def solve_sol(system: SolSystem) -> SolSolution | None:
    """Feasible rational solution of the system, or None when provably infeasible.

    Phase-one simplex: region rows are equalities with artificial variables,
    cluster bounds split into an upper row (slack basic from the start) and a
    lower row (surplus plus artificial). Bland's rule keeps pivoting finite
    and deterministic; all arithmetic is exact.
    """
    k, lower, upper = system.k, system.lower, system.upper
    nv = len(system.variables)
    var_pos = {v: i for i, v in enumerate(system.variables)}
    nr = len(system.regions)
    m = nr + 2 * k

    # column layout: x | upper slacks | lower surpluses | artificials
    s0 = nv
    t0 = nv + k
    a0 = nv + 2 * k
    art_rows = list(range(nr)) + list(range(nr + k, nr + 2 * k))
    ncols = a0 + len(art_rows)

    A = [[F0] * ncols for _ in range(m)]
    b = [F0] * m
    for ri, (mask, cnt) in enumerate(system.regions):
        for j in mask_bits(mask):
            A[ri][var_pos[(mask, j)]] = F1
        b[ri] = Fraction(cnt)
    for j in range(k):
        up_row, lo_row = nr + j, nr + k + j
        for (mask, jj), pos in var_pos.items():
            if jj == j:
                A[up_row][pos] = F1
                A[lo_row][pos] = F1
        A[up_row][s0 + j] = F1
        b[up_row] = Fraction(upper)
        A[lo_row][t0 + j] = -F1
        b[lo_row] = Fraction(lower)

    basis = [0] * m
    for ai, ri in enumerate(art_rows):
        A[ri][a0 + ai] = F1
        basis[ri] = a0 + ai
    for j in range(k):
        basis[nr + j] = s0 + j

    # reduced costs for the phase-one objective (minimize sum of artificials)
    red = [F0] * ncols
    for ri in art_rows:
        row = A[ri]
        for c in range(ncols):
            if row[c]:
                red[c] -= row[c]
    for ai in range(len(art_rows)):
        red[a0 + ai] = F0

    while True:
        enter = -1
        for c in range(ncols):
            if red[c] < 0:
                enter = c
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = A[i][enter]
            if a > 0:
                ratio = b[i] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise AssertionError("phase-one objective unbounded; system construction is broken")
        piv = A[leave][enter]
        if piv != F1:
            A[leave] = [v / piv for v in A[leave]]
            b[leave] /= piv
        prow, pb = A[leave], b[leave]
        for i in range(m):
            if i != leave and A[i][enter]:
                f = A[i][enter]
                A[i] = [v - f * p for v, p in zip(A[i], prow)]
                b[i] -= f * pb
        if red[enter]:
            f = red[enter]
            red = [v - f * p for v, p in zip(red, prow)]
        basis[leave] = enter

    if any(b[i] != 0 for i in range(m) if basis[i] >= a0):
        return None

    values = {v: F0 for v in system.variables}
    for i, bv in enumerate(basis):
        if bv < nv:
            values[system.variables[bv]] = b[i]
    return SolSolution(k=k, lower=lower, upper=upper, values=values)


def fractionalize(solution: SolSolution, system: SolSystem | None = None) -> SolSolution | None:
    """Manufacture a fractional feasible variant for rounding tests.

    Shifts 1/2 along a feasible cycle (cluster sums unchanged) when one
    exists, else along an admissible in-region pair whose two clusters have
    slack below U and above L. Returns None when neither move is available.
    The input must be integral and feasible; the result has at least two
    fractional entries. The solution carries its own bounds, so system is
    accepted only for call-shape compatibility.
    """
    half = Fraction(1, 2)
    values = solution.values
    masks = sorted({mask for mask, _ in values})

    # cycle: per step, shift half a point from cluster c_i to c_{i+1} inside
    # region m_i; distinct regions and clusters keep every touched variable
    # distinct, and each cluster's total is unchanged.
    def cycle_search() -> list[tuple[int, int, int]] | None:
        edges: dict[int, list[tuple[int, int]]] = {}
        for mask in masks:
            bits = mask_bits(mask)
            for a in bits:
                if values[(mask, a)] >= 1:
                    for c in bits:
                        if c != a:
                            edges.setdefault(a, []).append((mask, c))
        for e in edges.values():
            e.sort()

        def dfs(start, cur, used_masks, used_clusters, path):
            for mask, nxt in edges.get(cur, ()):
                if mask in used_masks:
                    continue
                if nxt == start and len(path) >= 1:
                    return path + [(mask, cur, nxt)]
                if nxt in used_clusters:
                    continue
                found = dfs(start, nxt, used_masks | {mask},
                            used_clusters | {nxt}, path + [(mask, cur, nxt)])
                if found:
                    return found
            return None

        for start in range(solution.k):
            found = dfs(start, start, frozenset(), frozenset({start}), [])
            if found and len(found) >= 2:
                return found
        return None

    cyc = cycle_search()
    if cyc is not None:
        out = solution.copy()
        for mask, a, c in cyc:
            out.values[(mask, a)] -= half
            out.values[(mask, c)] += half
        return out

    sums = solution.cluster_sums()
    for mask in masks:
        bits = mask_bits(mask)
        for j1 in bits:
            if values[(mask, j1)] < 1 or sums[j1] - half < solution.lower:
                continue
            for j2 in bits:
                if j2 == j1 or sums[j2] + half > solution.upper:
                    continue
                out = solution.copy()
                out.values[(mask, j1)] -= half
                out.values[(mask, j2)] += half
                return out
    return None
