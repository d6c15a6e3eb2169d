"""Rounding of fractional region assignments to integers.

A fractional solution induces a colored multigraph: vertices are clusters,
and each region (color) contributes an edge between every pair of clusters
whose variable in that region is fractional. Because a region's variables
sum to an integer point count, a region never has exactly one fractional
variable, and each color's fractional clusters form a clique.

Rounding repeatedly picks a structure and shifts an amount delta along it,
alternating decrements and increments so region sums never change:

  Case I   a cycle whose consecutive edges have distinct colors; all cluster
           sums are preserved.
  Case II  when the graph is a forest, a leaf-to-leaf path; only the two
           endpoint clusters change, and each endpoint has exactly one
           fractional variable, so its sum is fractional and strictly inside
           (L, U), which makes a shift of delta < 1 safe.
  Case III when the only cycles are single-color cliques: decompose into a
           pseudo-tree whose nodes are cliques or single vertices. A leaf
           clique with two vertices lacking outward edges admits a two-vertex
           in-region shift; otherwise a leaf-to-leaf path (which may cross
           clique interiors) is adjusted as in Case II.

delta is the smallest distance from a decremented value down to its floor or
an incremented value up to its ceiling, so every move makes at least one
variable integral and never creates a new fractional one: the count of
fractional entries strictly decreases each round.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .sol import SolSolution, mask_bits

F1 = Fraction(1)


class RoundingError(AssertionError):
    """An internal rounding invariant was violated; carries diagnostic state."""

    def __init__(self, message: str, solution: SolSolution | None = None):
        if solution is not None:
            message = f"{message}; values={dict(sorted(solution.values.items()))!r}"
        super().__init__(message)


@dataclass(frozen=True, eq=False)
class ColoredMultigraph:
    """Edges (u, v, color) with u < v; one color's edges induce a clique."""

    k: int
    edges: tuple[tuple[int, int, int], ...]

    def color_classes(self) -> dict[int, tuple[int, ...]]:
        classes: dict[int, set[int]] = {}
        for u, v, c in self.edges:
            classes.setdefault(c, set()).update((u, v))
        return {c: tuple(sorted(vs)) for c, vs in sorted(classes.items())}


@dataclass(frozen=True)
class PTNode:
    """Pseudo-tree node: a single vertex, or one color's clique of cycle vertices."""

    index: int
    vertices: tuple[int, ...]
    color: int | None
    parent: int | None
    children: tuple[int, ...]


@dataclass(frozen=True)
class PseudoTree:
    """Nodes in construction order; roots have parent None."""

    nodes: tuple[PTNode, ...]

    def leaves(self) -> tuple[PTNode, ...]:
        """Nodes of unrooted degree <= 1, in construction order."""
        out = []
        for node in self.nodes:
            deg = len(node.children) + (0 if node.parent is None else 1)
            if deg <= 1:
                out.append(node)
        return tuple(out)


def _fractional_colors(solution: SolSolution) -> dict[int, tuple[int, ...]]:
    """Active colors: region mask -> clusters with fractional value, ascending."""
    classes: dict[int, list[int]] = {}
    for (mask, j), v in sorted(solution.values.items()):
        if v.denominator != 1:
            classes.setdefault(mask, []).append(j)
    return {c: tuple(vs) for c, vs in sorted(classes.items())}


def build_graph(solution: SolSolution) -> ColoredMultigraph:
    """Colored multigraph of the solution's fractional structure."""
    edges = []
    for c, vs in _fractional_colors(solution).items():
        for i, u in enumerate(vs):
            for v in vs[i + 1:]:
                edges.append((u, v, c))
    edges.sort()
    return ColoredMultigraph(k=solution.k, edges=tuple(edges))


def _incidence(colors: dict[int, tuple[int, ...]]):
    """Sorted adjacency of the bipartite cluster/color incidence graph."""
    adj: dict[tuple[str, int], list[tuple[str, int]]] = {}
    for c, vs in sorted(colors.items()):
        adj[("c", c)] = [("v", v) for v in vs]
        for v in vs:
            adj.setdefault(("v", v), []).append(("c", c))
    for nbrs in adj.values():
        nbrs.sort()
    return adj


def find_multicolor_cycle(G: ColoredMultigraph):
    """A cycle whose consecutive edges have distinct colors, or None.

    Works on the cluster/color incidence graph: because each color's edges
    form a clique, a multicolor cycle exists exactly when that bipartite
    graph has a cycle, and any simple cycle there uses pairwise distinct
    colors, which subsumes contracting consecutive same-color edges.
    Returns [(v0, c0), (v1, c1), ...] meaning an edge of color c_i joins
    v_i and v_{i+1 mod m}.
    """
    colors = G.color_classes()
    adj = _incidence(colors)
    visited: set = set()
    stack: list = []
    pos: dict = {}

    def dfs(node, parent):
        visited.add(node)
        pos[node] = len(stack)
        stack.append(node)
        for nb in adj.get(node, ()):
            if nb == parent:
                continue
            if nb in pos:
                return stack[pos[nb]:]
            if nb not in visited:
                found = dfs(nb, node)
                if found is not None:
                    return found
        stack.pop()
        del pos[node]
        return None

    for start in sorted(adj):
        if start[0] != "v" or start in visited:
            continue
        cyc = dfs(start, None)
        if cyc is None:
            continue
        if cyc[0][0] == "c":
            cyc = cyc[1:] + cyc[:1]
        return [(cyc[i][1], cyc[i + 1][1]) for i in range(0, len(cyc), 2)]
    return None


def _frac_down(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _frac_up(x: Fraction) -> Fraction:
    return -(-x.numerator // x.denominator) - x


def adjust_cycle(cycle, solution: SolSolution) -> Fraction:
    """Alternate -delta/+delta around a multicolor cycle; cluster and region
    sums are unchanged. Mutates solution, returns delta."""
    m = len(cycle)
    couples = []
    for i, (v, c) in enumerate(cycle):
        w = cycle[(i + 1) % m][0]
        couples.append((c, v, w))
    delta = None
    for c, v, w in couples:
        lo = _frac_down(solution.values[(c, v)])
        hi = _frac_up(solution.values[(c, w)])
        if lo == 0 or hi == 0:
            raise RoundingError(f"cycle touches integral variable in region {c}", solution)
        step = min(lo, hi)
        delta = step if delta is None else min(delta, step)
    for c, v, w in couples:
        solution.values[(c, v)] -= delta
        solution.values[(c, w)] += delta
    return delta


def adjust_path(path, solution: SolSolution) -> Fraction:
    """Alternate -delta/+delta along a leaf-to-leaf path.

    path alternates vertices and colors: [v0, c0, v1, ..., c_{h-1}, v_h].
    Only the endpoint clusters' sums change; both must be fractional (hence
    strictly inside (L, U)), which is asserted before adjusting.
    """
    verts = path[0::2]
    cols = path[1::2]
    sums = solution.cluster_sums()
    for endpoint in (verts[0], verts[-1]):
        s = sums[endpoint]
        if s.denominator == 1:
            raise RoundingError(f"path endpoint cluster {endpoint} has integral sum {s}", solution)
        if not (solution.lower < s < solution.upper):
            raise RoundingError(f"path endpoint cluster {endpoint} sum {s} not inside bounds", solution)
    delta = None
    for i, c in enumerate(cols):
        lo = _frac_down(solution.values[(c, verts[i])])
        hi = _frac_up(solution.values[(c, verts[i + 1])])
        if lo == 0 or hi == 0:
            raise RoundingError(f"path touches integral variable in region {c}", solution)
        step = min(lo, hi)
        delta = step if delta is None else min(delta, step)
    for i, c in enumerate(cols):
        solution.values[(c, verts[i])] -= delta
        solution.values[(c, verts[i + 1])] += delta
    return delta


def pseudo_tree(G: ColoredMultigraph) -> PseudoTree:
    """Recursive decomposition for graphs whose only cycles are one-color cliques.

    Each step roots the component at its lowest-index vertex: if that vertex
    lies on a cycle, the node is the whole clique of its (lowest) color with
    at least three fractional clusters in the component; otherwise the node
    is the single vertex. Children are the components left after removing the
    node's vertices.
    """
    colors = G.color_classes()
    nodes: list[PTNode] = []

    def components(verts: set[int]) -> list[set[int]]:
        parent = {v: v for v in verts}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for vs in colors.values():
            inside = [v for v in vs if v in verts]
            for a, b in zip(inside, inside[1:]):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, set[int]] = {}
        for v in verts:
            groups.setdefault(find(v), set()).add(v)
        return [groups[r] for r in sorted(groups)]

    def build(comp: set[int], parent_idx: int | None) -> int:
        root = min(comp)
        big = [c for c, vs in sorted(colors.items())
               if root in vs and sum(v in comp for v in vs) >= 3]
        if big:
            c = big[0]
            members = tuple(v for v in colors[c] if v in comp)
            node = PTNode(len(nodes), members, c, parent_idx, ())
        else:
            node = PTNode(len(nodes), (root,), None, parent_idx, ())
        nodes.append(node)
        idx = node.index
        rest = comp - set(node.vertices)
        kids = tuple(build(sub, idx) for sub in components(rest))
        nodes[idx] = replace(nodes[idx], children=kids)
        return idx

    all_verts = {v for vs in colors.values() for v in vs}
    for comp in components(all_verts):
        build(comp, None)
    return PseudoTree(nodes=tuple(nodes))


def adjust_clique_leaf(clique: PTNode, solution: SolSolution) -> Fraction:
    """Two-vertex in-region shift on a leaf clique.

    Requires at least three clique vertices and at least two with no outward
    edge (their only fractional variable lies in the clique's region); both
    are asserted. The two lowest such vertices are adjusted.
    """
    c = clique.color
    if c is None or len(clique.vertices) < 3:
        raise RoundingError("leaf clique must have a color and at least three vertices", solution)
    colors = _fractional_colors(solution)
    pure = [v for v in clique.vertices
            if all(v not in vs for cc, vs in colors.items() if cc != c)]
    if len(pure) < 2:
        raise RoundingError(f"leaf clique {clique.vertices} of region {c} lacks two "
                            "vertices without outward edges", solution)
    v1, v2 = pure[0], pure[1]
    sums = solution.cluster_sums()
    for v in (v1, v2):
        if sums[v].denominator == 1:
            raise RoundingError(f"clique-leaf cluster {v} has integral sum", solution)
    delta = min(_frac_down(solution.values[(c, v1)]), _frac_up(solution.values[(c, v2)]))
    if delta <= 0:
        raise RoundingError("clique-leaf delta must be positive", solution)
    solution.values[(c, v1)] -= delta
    solution.values[(c, v2)] += delta
    return delta


def _leaf_path(colors: dict[int, tuple[int, ...]]):
    """Leaf-to-leaf alternating path in the (acyclic) incidence graph."""
    vert_colors: dict[int, list[int]] = {}
    for c, vs in sorted(colors.items()):
        for v in vs:
            vert_colors.setdefault(v, []).append(c)
    leaves = sorted(v for v, cs in vert_colors.items() if len(cs) == 1)
    if not leaves:
        return None
    start = leaves[0]
    path: list[int] = [start]

    def dfs(v: int, via: int | None) -> bool:
        if v != start and len(vert_colors[v]) == 1:
            return True
        for c in vert_colors[v]:
            if c == via:
                continue
            for w in colors[c]:
                if w == v:
                    continue
                path.append(c)
                path.append(w)
                if dfs(w, c):
                    return True
                path.pop()
                path.pop()
        return False

    if not dfs(start, None):
        return None
    return path


def _clique_leaf(solution: SolSolution, colors) -> PTNode | None:
    """First pseudo-tree leaf clique with two adjustable vertices, if any."""
    tree = pseudo_tree(build_graph(solution))
    for node in tree.leaves():
        if node.color is None or len(node.vertices) < 3:
            continue
        pure = [v for v in node.vertices
                if all(v not in vs for cc, vs in colors.items() if cc != node.color)]
        if len(pure) >= 2:
            return node
    return None


def round_to_integer(solution: SolSolution, system=None,
                     trace: list | None = None) -> SolSolution:
    """Round a feasible (possibly fractional) solution to an integral one.

    Pure: returns a new solution. Region sums and feasibility are preserved;
    the number of fractional entries strictly decreases every round, which is
    asserted along with the structural preconditions of each case. The
    solution carries its own bounds, so system is accepted only for
    call-shape compatibility. trace, when a list, receives one entry per
    adjustment: the case label, the delta applied, and the cycle/path/pair.
    """
    if not solution.is_feasible():
        raise RoundingError("input solution violates bounds or nonnegativity", solution)
    for mask, s in sorted(solution.region_sums().items()):
        if s.denominator != 1:
            raise RoundingError(f"region {mask} has non-integral point total {s}", solution)
    work = solution.copy()
    before = sorted(work.region_sums().items())
    nfrac = len(work.fractional_items())

    while nfrac:
        colors = _fractional_colors(work)
        for c, vs in colors.items():
            if len(vs) == 1:
                raise RoundingError(f"region {c} has exactly one fractional variable", work)
        cyc = find_multicolor_cycle(build_graph(work))
        if cyc is not None:
            case, delta = "I", adjust_cycle(cyc, work)
            site = cyc
        elif all(len(vs) == 2 for vs in colors.values()):
            path = _leaf_path(colors)
            if path is None:
                raise RoundingError("forest case found no leaf-to-leaf path", work)
            case, delta = "II", adjust_path(path, work)
            site = path
        else:
            node = _clique_leaf(work, colors)
            if node is not None:
                case, delta = "III-clique", adjust_clique_leaf(node, work)
                site = node.vertices
            else:
                path = _leaf_path(colors)
                if path is None:
                    raise RoundingError("clique case found no adjustment site", work)
                case, delta = "III-path", adjust_path(path, work)
                site = path
        now = len(work.fractional_items())
        if now >= nfrac:
            raise RoundingError(f"case {case} made no progress ({nfrac} -> {now})", work)
        if trace is not None:
            trace.append({"case": case, "delta": delta, "site": tuple(site)})
        nfrac = now

    if sorted(work.region_sums().items()) != before:
        raise RoundingError("region sums changed during rounding", work)
    if not work.is_feasible():
        raise RoundingError("rounded solution violates bounds", work)
    return work
