"""Shared builders for planner tests: small grids as explicit graphs."""
from __future__ import annotations

import math

from amhastar.explicit import ExplicitGraphDomain


def grid_graph(width, height, walls=()):
    """4-connected unit-cost grid as an adjacency dict over (x, y) nodes."""
    blocked = set(walls)
    edges = {}
    for y in range(height):
        for x in range(width):
            if (x, y) in blocked:
                continue
            out = []
            for dx, dy in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                nx, ny = x + dx, y + dy
                if 0 <= nx < width and 0 <= ny < height and (nx, ny) not in blocked:
                    out.append(((nx, ny), 1))
            edges[(x, y)] = out
    return edges


def grid_domain(width, height, start, goal, walls=(), n_inadmissible=1, inad_scale=3.0):
    """Euclidean-anchor grid domain; inadmissible heuristics scale manhattan."""
    edges = grid_graph(width, height, walls)
    gx, gy = goal
    anchor = {n: math.hypot(n[0] - gx, n[1] - gy) for n in edges}
    tables = [anchor]
    for i in range(n_inadmissible):
        scale = inad_scale + i
        tables.append({n: scale * (abs(n[0] - gx) + abs(n[1] - gy)) for n in edges})
    return ExplicitGraphDomain(edges, start, goal, heuristics=tables)
