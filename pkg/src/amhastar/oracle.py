"""Brute-force reference searches used to check planner output.

Everything here is deliberately independent of the planner: plain heapq
Dijkstra and breadth-first enumeration, no shared queue or expansion code.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from typing import Callable, Hashable, Iterable, Optional

from .domain import SearchDomain

INF = math.inf


def uniform_cost_optimal(domain: SearchDomain, state_cap: int = 2_000_000) -> Optional[float]:
    """Optimal start-to-goal cost by Dijkstra with no heuristic.

    Returns +inf when the goal is unreachable and None when the settled-state
    cap is exceeded before the goal is proven (oracle unavailable).
    """
    start = domain.start()
    if domain.is_goal(start):
        return 0
    dist = {start: 0}
    done = set()
    heap = [(0, start)]
    while heap:
        d, s = heapq.heappop(heap)
        if s in done:
            continue
        if domain.is_goal(s):
            return d
        done.add(s)
        if len(done) > state_cap:
            return None
        for s2, c in domain.successors(s):
            nd = d + c
            if nd < dist.get(s2, INF):
                dist[s2] = nd
                heapq.heappush(heap, (nd, s2))
    return INF


def breadth_first_distances(
    neighbors: Callable[[Hashable], Iterable[Hashable]],
    source: Hashable,
    max_depth: Optional[int] = None,
) -> dict[Hashable, int]:
    """Unit-cost distances from a source over an implicit graph."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        s = queue.popleft()
        d = dist[s]
        if max_depth is not None and d >= max_depth:
            continue
        for s2 in neighbors(s):
            if s2 not in dist:
                dist[s2] = d + 1
                queue.append(s2)
    return dist


def octile_distance(dx: int, dy: int, straight: float, diagonal: float) -> float:
    """Closed-form shortest path length on an empty 8-connected grid."""
    dx, dy = abs(dx), abs(dy)
    lo, hi = min(dx, dy), max(dx, dy)
    return lo * diagonal + (hi - lo) * straight


def tile_goal_distances(width: int, height: int) -> dict[bytes, int]:
    """Exact solve lengths for every reachable board of one puzzle size.

    One breadth-first sweep outward from the goal arrangement (moves are
    reversible, so distance from the goal equals distance to it). Feasible
    up to 3x3 / 2x4; the table is the exhaustive optimal-cost oracle for
    whole-instance suites, keyed by the packed tile bytes.
    """
    if width * height > 9:
        raise ValueError("exhaustive enumeration is intended for <= 9 cells")
    moves = []
    for i in range(width * height):
        r, c = divmod(i, width)
        around = []
        if r > 0:
            around.append(i - width)
        if r < height - 1:
            around.append(i + width)
        if c > 0:
            around.append(i - 1)
        if c < width - 1:
            around.append(i + 1)
        moves.append(tuple(around))
    goal = bytes(range(width * height))
    dist = {goal: 0}
    frontier = deque([(goal, 0)])
    while frontier:
        tiles, blank = frontier.popleft()
        d = dist[tiles]
        for j in moves[blank]:
            swapped = bytearray(tiles)
            swapped[blank], swapped[j] = swapped[j], swapped[blank]
            key = bytes(swapped)
            if key not in dist:
                dist[key] = d + 1
                frontier.append((key, j))
    return dist
