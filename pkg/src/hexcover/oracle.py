"""Exact Hamiltonian-path feasibility decision for coverage graphs.

`hamiltonian_audit` is the dataset admission gate: depth-first search with
backtracking over bitmask states, accelerated by soundness-preserving pruning
rules and a low-residual-degree child ordering. `brute_force_enumerate` is an
independent cross-check that walks every adjacency-valid cell permutation
with no ordering heuristics and no pruning.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from hexcover.graphbuild import CoverageGraph
from hexcover.hexgeom import InvalidParameterError

PRUNE_CONNECTIVITY = "connectivity"
PRUNE_LOW_DEGREE = "low-degree"
PRUNE_TERMINAL = "terminal-reach"
ALL_PRUNES = frozenset({PRUNE_CONNECTIVITY, PRUNE_LOW_DEGREE, PRUNE_TERMINAL})

BRUTE_FORCE_MAX_CELLS = 12


@dataclass(frozen=True)
class AuditResult:
    feasible: bool | None  # None means the search budget ran out
    witness: tuple[int, ...] | None
    nodes_expanded: int
    elapsed_ms: float

    @property
    def inconclusive(self) -> bool:
        return self.feasible is None


class _Budget(Exception):
    pass


def _adjacency_masks(g: CoverageGraph) -> list[int]:
    masks = []
    for i in range(g.n):
        m = 0
        for j in g.cell_neighbors(i):
            m |= 1 << j
        masks.append(m)
    return masks


def _connected(adj: list[int], n: int) -> bool:
    if n == 0:
        return False
    full = (1 << n) - 1
    reach = 1
    frontier = 1
    while frontier:
        nxt = 0
        m = frontier
        while m:
            b = m & -m
            nxt |= adj[b.bit_length() - 1]
            m ^= b
        frontier = nxt & ~reach
        reach |= frontier
    return reach == full


def hamiltonian_audit(
    g: CoverageGraph, budget: int | None = None, prunes: frozenset = ALL_PRUNES
) -> AuditResult:
    """Decide whether a base->terminal path visiting every cell once exists.

    Exact when run to completion. With a node-expansion budget the result may
    be inconclusive (feasible=None) but never a false negative. The pruning
    set only discards provably dead branches:

    - connectivity: every unvisited cell must stay reachable from the current
      cell through unvisited cells;
    - low-degree: among unvisited cells, only the next move and the final
      cell may have at most one unvisited neighbor, and only the final cell
      may have none;
    - terminal-reach: some unvisited cell adjacent to the terminal must
      remain, or the path cannot end.

    Children are ordered by ascending residual degree, then index, which
    makes nodes_expanded reproducible.
    """
    start = time.perf_counter()
    n = g.n
    adj = _adjacency_masks(g)
    if not _connected(adj, n):
        return AuditResult(False, None, 0, _ms(start))

    full = (1 << n) - 1
    term_mask = 0
    for t in g.terminal_links:
        term_mask |= 1 << t

    expanded = 0
    path: list[int] = []

    def dfs(v: int, visited: int) -> bool:
        nonlocal expanded
        expanded += 1
        if budget is not None and expanded > budget:
            raise _Budget
        if visited == full:
            return bool(term_mask >> v & 1)

        unvisited = full & ~visited
        if PRUNE_TERMINAL in prunes and not (unvisited & term_mask):
            return False

        if PRUNE_LOW_DEGREE in prunes:
            zero = low = 0
            m = unvisited
            while m:
                b = m & -m
                u = b.bit_length() - 1
                m ^= b
                d = (adj[u] & unvisited & ~b).bit_count()
                if d == 0:
                    zero += 1
                if d <= 1:
                    low += 1
            if zero >= 2 or low > 2:
                return False

        if PRUNE_CONNECTIVITY in prunes:
            frontier = adj[v] & unvisited
            reach = frontier
            while frontier:
                nxt = 0
                m = frontier
                while m:
                    b = m & -m
                    nxt |= adj[b.bit_length() - 1]
                    m ^= b
                frontier = nxt & unvisited & ~reach
                reach |= frontier
            if reach != unvisited:
                return False

        cands = []
        m = adj[v] & unvisited
        while m:
            b = m & -m
            j = b.bit_length() - 1
            m ^= b
            cands.append(((adj[j] & unvisited & ~b).bit_count(), j))
        cands.sort()
        for _, j in cands:
            path.append(j)
            if dfs(j, visited | (1 << j)):
                return True
            path.pop()
        return False

    starts = sorted(
        g.base_links, key=lambda s: ((adj[s] & ~(1 << s)).bit_count(), s)
    )
    try:
        for s in starts:
            path.append(s)
            if dfs(s, 1 << s):
                walk = (g.base_node, *path, g.terminal_node)
                return AuditResult(True, walk, expanded, _ms(start))
            path.pop()
    except _Budget:
        return AuditResult(None, None, expanded, _ms(start))
    return AuditResult(False, None, expanded, _ms(start))


def brute_force_enumerate(g: CoverageGraph) -> AuditResult:
    """Unpruned, unordered enumeration of all adjacency-valid cell orders.

    Independent cross-check for hamiltonian_audit; refuses graphs above
    BRUTE_FORCE_MAX_CELLS because the permutation space explodes.
    """
    if g.n > BRUTE_FORCE_MAX_CELLS:
        raise InvalidParameterError(
            f"brute force refused: {g.n} cells exceeds {BRUTE_FORCE_MAX_CELLS}"
        )
    start = time.perf_counter()
    n = g.n
    term = set(g.terminal_links)
    expanded = 0
    path: list[int] = []

    def extend(v: int, visited: set[int]) -> bool:
        nonlocal expanded
        expanded += 1
        if len(visited) == n:
            return v in term
        for j in g.cell_neighbors(v):
            if j in visited:
                continue
            visited.add(j)
            path.append(j)
            if extend(j, visited):
                return True
            path.pop()
            visited.remove(j)
        return False

    for s in sorted(g.base_links):
        path.append(s)
        if extend(s, {s}):
            walk = (g.base_node, *path, g.terminal_node)
            return AuditResult(True, walk, expanded, _ms(start))
        path.pop()
    return AuditResult(False, None, expanded, _ms(start))


def _ms(start: float) -> float:
    return (time.perf_counter() - start) * 1000.0
