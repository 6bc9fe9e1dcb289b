"""Lattice (x, y, heading) navigation over occupancy grids.

Successors come from a table of motion primitives (short swept pose
sequences respecting a minimum turning radius); collision checking places a
convex polygon footprint at every swept pose. Edge costs are the primitive
arc lengths in integer milli-meters. The anchor heuristic is straight-line
distance; three inadmissible heuristics are backward 8-connected Dijkstra
fields over the plain grid and over the grid with narrow passages blocked at
the footprint's inscribed and circumscribed radii.
"""
from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

from .domain import SearchDomain

INF = math.inf

# 16-heading direction fan: ascending angles, integer displacements.
DIRS16 = (
    (1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1),
    (-1, 0), (-2, -1), (-1, -1), (-1, -2), (0, -1), (1, -2), (1, -1), (2, -1),
)
DIRS8 = ((1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1))
DIRS4 = ((1, 0), (0, 1), (-1, 0), (0, -1))


def heading_vector(num_headings: int, theta: int) -> tuple[int, int]:
    if num_headings == 16:
        return DIRS16[theta]
    if num_headings == 8:
        return DIRS8[theta]
    if num_headings == 4:
        return DIRS4[theta]
    raise ValueError(f"unsupported heading count {num_headings}")


def heading_angle(num_headings: int, theta: int) -> float:
    dx, dy = heading_vector(num_headings, theta)
    return math.atan2(dy, dx)


class OccupancyGrid:
    """Rectangular cell grid; '.' free, '#' obstacle, out of bounds obstacle."""

    def __init__(self, width: int, height: int, resolution: float, cells: bytearray) -> None:
        if width <= 0 or height <= 0:
            raise ValueError("grid dimensions must be positive")
        if resolution <= 0:
            raise ValueError("resolution must be positive")
        if len(cells) != width * height:
            raise ValueError("cell buffer size mismatch")
        self.width = width
        self.height = height
        self.resolution = resolution
        self.cells = cells

    @classmethod
    def empty(cls, width: int, height: int, resolution: float = 1.0) -> "OccupancyGrid":
        return cls(width, height, resolution, bytearray(width * height))

    @classmethod
    def parse(cls, text: str) -> "OccupancyGrid":
        lines = [ln.rstrip("\n") for ln in text.splitlines() if ln.strip()]
        header = lines[0].split()
        w, h, res = int(header[0]), int(header[1]), float(header[2])
        if len(lines) != h + 1:
            raise ValueError(f"expected {h} map rows, found {len(lines) - 1}")
        cells = bytearray(w * h)
        for y, row in enumerate(lines[1:]):
            if len(row) != w:
                raise ValueError(f"map row {y} has width {len(row)}, expected {w}")
            for x, ch in enumerate(row):
                if ch == "#":
                    cells[y * w + x] = 1
                elif ch != ".":
                    raise ValueError(f"unexpected map character {ch!r}")
        return cls(w, h, res, cells)

    @classmethod
    def load(cls, path) -> "OccupancyGrid":
        with open(path) as fh:
            return cls.parse(fh.read())

    def to_text(self) -> str:
        res = self.resolution
        res_s = str(int(res)) if res == int(res) else repr(res)
        rows = [f"{self.width} {self.height} {res_s}"]
        for y in range(self.height):
            rows.append(
                "".join("#" if self.cells[y * self.width + x] else "."
                        for x in range(self.width))
            )
        return "\n".join(rows) + "\n"

    def in_bounds(self, x: int, y: int) -> bool:
        return 0 <= x < self.width and 0 <= y < self.height

    def is_obstacle(self, x: int, y: int) -> bool:
        if not self.in_bounds(x, y):
            return True
        return bool(self.cells[y * self.width + x])

    def set_obstacle(self, x: int, y: int, value: bool = True) -> None:
        self.cells[y * self.width + x] = 1 if value else 0


@dataclass(frozen=True)
class MotionPrimitive:
    """One feasible motion segment in cell units, relative to its start pose."""

    theta_start: int
    theta_end: int
    cost_milli: int
    poses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.cost_milli <= 0:
            raise ValueError("primitive cost must be positive")
        if not self.poses or self.poses[0] != (0, 0, self.theta_start):
            raise ValueError("primitive must start at (0, 0, theta_start)")
        if self.poses[-1][2] != self.theta_end:
            raise ValueError("primitive must end at theta_end")
        for (x0, y0, _), (x1, y1, _) in zip(self.poses, self.poses[1:]):
            if abs(x1 - x0) > 1 or abs(y1 - y0) > 1:
                raise ValueError("swept poses must advance at most one cell per step")

    @property
    def end(self) -> tuple[int, int, int]:
        return self.poses[-1]


@dataclass(frozen=True)
class RobotFootprint:
    """Convex polygon in the robot frame (meters), origin inside."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if len(self.vertices) < 3:
            raise ValueError("footprint needs at least 3 vertices")
        if not _is_convex_ccw(self.vertices):
            raise ValueError("footprint must be convex with counterclockwise winding")
        if _point_polygon_distance(0.0, 0.0, self.vertices) > 0:
            raise ValueError("footprint must contain the origin")

    @classmethod
    def rectangle(cls, length: float, width: float) -> "RobotFootprint":
        hl, hw = length / 2, width / 2
        return cls(((-hl, -hw), (hl, -hw), (hl, hw), (-hl, hw)))

    @property
    def inscribed_radius(self) -> float:
        verts = self.vertices
        n = len(verts)
        return min(
            _segment_distance(0.0, 0.0, verts[i], verts[(i + 1) % n]) for i in range(n)
        )

    @property
    def circumscribed_radius(self) -> float:
        return max(math.hypot(x, y) for x, y in self.vertices)

    def rotated(self, angle: float) -> tuple[tuple[float, float], ...]:
        c, s = math.cos(angle), math.sin(angle)
        return tuple((c * x - s * y, s * x + c * y) for x, y in self.vertices)


def _is_convex_ccw(verts: Sequence[tuple[float, float]]) -> bool:
    n = len(verts)
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        cx, cy = verts[(i + 2) % n]
        if (bx - ax) * (cy - ay) - (by - ay) * (cx - ax) <= 0:
            return False
    return True


def _segment_distance(px: float, py: float, a: tuple[float, float],
                      b: tuple[float, float]) -> float:
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    t = ((px - ax) * dx + (py - ay) * dy) / (dx * dx + dy * dy)
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def _point_polygon_distance(px: float, py: float,
                            verts: Sequence[tuple[float, float]]) -> float:
    """0 inside a convex CCW polygon, else distance to its boundary."""
    n = len(verts)
    inside = True
    for i in range(n):
        ax, ay = verts[i]
        bx, by = verts[(i + 1) % n]
        if (bx - ax) * (py - ay) - (by - ay) * (px - ax) < 0:
            inside = False
            break
    if inside:
        return 0.0
    return min(_segment_distance(px, py, verts[i], verts[(i + 1) % n]) for i in range(n))


def footprint_cell_mask(
    footprint: RobotFootprint, resolution: float, num_headings: int, theta: int
) -> tuple[tuple[int, int], ...]:
    """Cell offsets a posed footprint overlaps.

    A cell counts as overlapped when its center lies within the rotated
    polygon dilated by half a cell diagonal (conservative by construction).
    """
    verts = footprint.rotated(heading_angle(num_headings, theta))
    margin = resolution * math.sqrt(2) / 2
    reach = max(math.hypot(x, y) for x, y in verts) + margin
    span = int(math.ceil(reach / resolution))
    mask = []
    for dy in range(-span, span + 1):
        for dx in range(-span, span + 1):
            if _point_polygon_distance(dx * resolution, dy * resolution, verts) <= margin:
                mask.append((dx, dy))
    return tuple(mask)


def footprint_collides(
    grid: OccupancyGrid,
    pose: tuple[int, int, int],
    footprint: RobotFootprint,
    num_headings: int = 16,
) -> bool:
    """True when any grid cell overlapping the posed footprint is an obstacle."""
    x, y, theta = pose
    for dx, dy in footprint_cell_mask(footprint, grid.resolution, num_headings, theta):
        if grid.is_obstacle(x + dx, y + dy):
            return True
    return False


# -- motion primitive generation ---------------------------------------------


def _supercover(points: list[tuple[float, float]]) -> list[tuple[int, int]]:
    """Cells visited along a sampled curve, consecutive cells 8-adjacent."""
    cells = []
    for px, py in points:
        cell = (round(px), round(py))
        if not cells or cell != cells[-1]:
            if cells and (abs(cell[0] - cells[-1][0]) > 1 or abs(cell[1] - cells[-1][1]) > 1):
                raise ValueError("curve sampling too coarse for supercover")
            cells.append(cell)
    return cells


def _line_points(x1: float, y1: float, samples: int) -> list[tuple[float, float]]:
    return [(x1 * t / samples, y1 * t / samples) for t in range(samples + 1)]


def _bezier_points(p1: tuple[float, float], p2: tuple[float, float],
                   samples: int) -> list[tuple[float, float]]:
    (x1, y1), (x2, y2) = p1, p2
    pts = []
    for k in range(samples + 1):
        t = k / samples
        u = 1 - t
        pts.append((2 * u * t * x1 + t * t * x2, 2 * u * t * y1 + t * t * y2))
    return pts


def _polyline_length(points: list[tuple[float, float]]) -> float:
    return sum(
        math.hypot(x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(points, points[1:])
    )


def _arc_primitive(num_headings: int, theta: int, left: bool,
                   min_turn_radius: float) -> MotionPrimitive:
    h = num_headings
    theta_end = (theta + 1) % h if left else (theta - 1) % h
    v0 = heading_vector(h, theta)
    v1 = heading_vector(h, theta_end)
    end = (v0[0] + v1[0], v0[1] + v1[1])
    phi0 = heading_angle(h, theta)
    phi1 = heading_angle(h, theta_end)
    dphi = abs(math.remainder(phi1 - phi0, math.tau))
    chord = math.hypot(*end)
    radius = chord / (2 * math.sin(dphi / 2))
    if radius < min_turn_radius:
        raise ValueError(
            f"turn {theta}->{theta_end} has radius {radius:.2f} below "
            f"the {min_turn_radius:.2f} minimum"
        )
    # Control point: intersection of the start and end tangent lines.
    d0 = (math.cos(phi0), math.sin(phi0))
    d1 = (math.cos(phi1), math.sin(phi1))
    det = d0[0] * (-d1[1]) - d0[1] * (-d1[0])
    t = (end[0] * (-d1[1]) - end[1] * (-d1[0])) / det
    ctrl = (t * d0[0], t * d0[1])
    points = _bezier_points(ctrl, (float(end[0]), float(end[1])), 256)
    cells = _supercover(points)
    half = len(cells) // 2
    poses = tuple(
        (cx, cy, theta if k < max(half, 1) else theta_end) for k, (cx, cy) in enumerate(cells)
    )
    if poses[-1][2] != theta_end:
        poses = poses[:-1] + ((poses[-1][0], poses[-1][1], theta_end),)
    cost = math.ceil(1000 * _polyline_length(points))
    return MotionPrimitive(theta, theta_end, cost, poses)


def _straight_primitive(num_headings: int, theta: int, multiple: int) -> MotionPrimitive:
    vx, vy = heading_vector(num_headings, theta)
    ex, ey = vx * multiple, vy * multiple
    length = math.hypot(ex, ey)
    points = _line_points(float(ex), float(ey), max(4 * (abs(ex) + abs(ey)), 4))
    poses = tuple((cx, cy, theta) for cx, cy in _supercover(points))
    return MotionPrimitive(theta, theta, math.ceil(1000 * length), poses)


def default_primitive_set(
    num_headings: int = 16,
    min_turn_radius: float = 3.0,
    long_length: float = 8.0,
) -> list[MotionPrimitive]:
    """Per heading: 1-step and ~`long_length`-cell straights, left/right arcs."""
    prims = []
    for theta in range(num_headings):
        unit = math.hypot(*heading_vector(num_headings, theta))
        prims.append(_straight_primitive(num_headings, theta, 1))
        prims.append(
            _straight_primitive(num_headings, theta, max(2, round(long_length / unit)))
        )
        prims.append(_arc_primitive(num_headings, theta, True, min_turn_radius))
        prims.append(_arc_primitive(num_headings, theta, False, min_turn_radius))
    return prims


def save_primitives(prims: Sequence[MotionPrimitive], num_headings: int, path) -> None:
    with open(path, "w") as fh:
        fh.write(f"headings {num_headings} cost_scale 1000\n")
        for p in prims:
            fields = [str(p.theta_start), str(p.theta_end), str(p.cost_milli), str(len(p.poses))]
            for x, y, t in p.poses:
                fields.extend((str(x), str(y), str(t)))
            fh.write(" ".join(fields) + "\n")


def load_primitives(path) -> tuple[list[MotionPrimitive], int]:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[0] != "headings" or header[2] != "cost_scale":
            raise ValueError("bad primitive file header")
        num_headings = int(header[1])
        if int(header[3]) != 1000:
            raise ValueError("only cost_scale 1000 is supported")
        prims = []
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            ts, te, cost, k = int(parts[0]), int(parts[1]), int(parts[2]), int(parts[3])
            vals = [int(v) for v in parts[4:]]
            if len(vals) != 3 * k:
                raise ValueError(f"primitive line expects {3 * k} pose fields")
            poses = tuple((vals[3 * i], vals[3 * i + 1], vals[3 * i + 2]) for i in range(k))
            prims.append(MotionPrimitive(ts, te, cost, poses))
    return prims, num_headings


# -- heuristic fields ---------------------------------------------------------


def clearance_field(grid: OccupancyGrid) -> list[float]:
    """Octile distance (meters) from each cell center to the nearest obstacle
    cell center, with the out-of-bounds ring counting as obstacles."""
    w, h, res = grid.width, grid.height, grid.resolution
    straight = res
    diagonal = res * math.sqrt(2)
    dist = [INF] * (w * h)
    heap = []
    for y in range(h):
        for x in range(w):
            idx = y * w + x
            if grid.cells[idx]:
                dist[idx] = 0.0
                heap.append((0.0, idx))
            elif x == 0 or y == 0 or x == w - 1 or y == h - 1:
                dist[idx] = straight
                heap.append((straight, idx))
    heapq.heapify(heap)
    while heap:
        d, idx = heapq.heappop(heap)
        if d > dist[idx]:
            continue
        x, y = idx % w, idx // w
        for dx, dy in DIRS8:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h:
                nd = d + (diagonal if dx and dy else straight)
                nidx = ny * w + nx
                if nd < dist[nidx]:
                    dist[nidx] = nd
                    heapq.heappush(heap, (nd, nidx))
    return dist


def dijkstra_field(
    grid: OccupancyGrid,
    goal: tuple[int, int],
    block_radius: float = 0.0,
    clearance: Optional[list[float]] = None,
) -> list[float]:
    """Backward 8-connected cost-to-goal field in milli-meters.

    Cells whose obstacle clearance is <= block_radius are treated as blocked
    before the sweep; unreachable cells hold +inf. A blocked goal yields an
    all-inf field with a warning (callers fall back to the metric heuristic).
    """
    w, h, res = grid.width, grid.height, grid.resolution
    if clearance is None:
        clearance = clearance_field(grid)
    blocked = bytearray(w * h)
    for idx in range(w * h):
        if grid.cells[idx] or clearance[idx] <= block_radius:
            blocked[idx] = 1
    field = [INF] * (w * h)
    gx, gy = goal
    if not grid.in_bounds(gx, gy) or blocked[gy * w + gx]:
        warnings.warn(
            f"field goal {goal} blocked at radius {block_radius}; field is all-inf",
            stacklevel=2,
        )
        return field
    straight = 1000.0 * res
    diagonal = straight * math.sqrt(2)
    start_idx = gy * w + gx
    field[start_idx] = 0.0
    heap = [(0.0, start_idx)]
    while heap:
        d, idx = heapq.heappop(heap)
        if d > field[idx]:
            continue
        x, y = idx % w, idx // w
        for dx, dy in DIRS8:
            nx, ny = x + dx, y + dy
            if 0 <= nx < w and 0 <= ny < h:
                nidx = ny * w + nx
                if not blocked[nidx]:
                    nd = d + (diagonal if dx and dy else straight)
                    if nd < field[nidx]:
                        field[nidx] = nd
                        heapq.heappush(heap, (nd, nidx))
    return field


# -- the domain ----------------------------------------------------------------


def load_scenario(path) -> tuple[tuple[int, int, int], tuple[int, int, Optional[int]]]:
    """Two lines: start `x y theta`, goal `x y [theta]`."""
    poses = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                poses.append([int(v) for v in line.split()])
    if len(poses) != 2 or len(poses[0]) != 3 or len(poses[1]) not in (2, 3):
        raise ValueError("scenario must be a start `x y theta` and a goal `x y [theta]`")
    gx, gy = poses[1][0], poses[1][1]
    gt = poses[1][2] if len(poses[1]) == 3 else None
    return (poses[0][0], poses[0][1], poses[0][2]), (gx, gy, gt)


class LatticeDomain(SearchDomain):
    """Motion-primitive navigation domain with a four-heuristic ensemble.

    Heuristic 0: euclidean distance to the goal cell, scaled to edge-cost
    units. Heuristics 1..3: Dijkstra cost-to-goal fields over the grid with
    passages blocked at radius 0 (zero-size robot), the footprint's inscribed
    radius and its circumscribed radius; +inf field cells fall back to the
    euclidean value (fallbacks are counted in `fallback_lookups`).
    """

    num_inadmissible = 3

    def __init__(
        self,
        grid: OccupancyGrid,
        start_pose: tuple[int, int, int],
        goal: tuple[int, int, Optional[int]] | tuple[int, int],
        primitives: Optional[Sequence[MotionPrimitive]] = None,
        num_headings: int = 16,
        footprint: Optional[RobotFootprint] = None,
    ) -> None:
        self.grid = grid
        self.num_headings = num_headings
        if primitives is None:
            primitives = default_primitive_set(num_headings)
        self.primitives = list(primitives)
        if not self.primitives:
            raise ValueError("no motion primitives loaded")
        self.footprint = footprint or RobotFootprint.rectangle(1.2, 0.8)
        self._masks = [
            footprint_cell_mask(self.footprint, grid.resolution, num_headings, t)
            for t in range(num_headings)
        ]
        self._by_heading: list[list[tuple[MotionPrimitive, int, tuple[tuple[int, int], ...]]]] = [
            [] for _ in range(num_headings)
        ]
        for p in self.primitives:
            if not (0 <= p.theta_start < num_headings and 0 <= p.theta_end < num_headings):
                raise ValueError("primitive heading outside the configured fan")
            cost = math.ceil(p.cost_milli * grid.resolution)
            swept: set[tuple[int, int]] = set()
            for px, py, pt in p.poses:
                for mx, my in self._masks[pt]:
                    swept.add((px + mx, py + my))
            self._by_heading[p.theta_start].append((p, cost, tuple(sorted(swept))))
        gx, gy = goal[0], goal[1]
        self.goal_cell = (gx, gy)
        self.goal_theta: Optional[int] = goal[2] if len(goal) == 3 else None
        if not grid.in_bounds(gx, gy) or grid.is_obstacle(gx, gy):
            raise ValueError(f"goal cell {self.goal_cell} is out of bounds or an obstacle")
        sx, sy, st = start_pose
        if not (0 <= st < num_headings):
            raise ValueError("start heading outside the configured fan")
        if self._pose_collides(sx, sy, st):
            raise ValueError(f"start pose {start_pose} is in collision")
        self.clearance = clearance_field(grid)
        radii = (0.0, self.footprint.inscribed_radius, self.footprint.circumscribed_radius)
        self.block_radii = radii
        self.fields = [
            dijkstra_field(grid, self.goal_cell, r, clearance=self.clearance) for r in radii
        ]
        self.fallback_lookups = 0
        self._w = grid.width
        self._start_sid = self._intern(sx, sy, st)
        self._succ: dict[int, tuple[tuple[int, int], ...]] = {}

    def _intern(self, x: int, y: int, t: int) -> int:
        # Arithmetic state id: a bijection, so re-interning is trivially stable.
        return (y * self._w + x) * self.num_headings + t

    def pose_of(self, sid: int) -> tuple[int, int, int]:
        t = sid % self.num_headings
        xy = sid // self.num_headings
        return (xy % self._w, xy // self._w, t)

    def _pose_collides(self, x: int, y: int, t: int) -> bool:
        grid = self.grid
        for dx, dy in self._masks[t]:
            if grid.is_obstacle(x + dx, y + dy):
                return True
        return False

    def start(self) -> int:
        return self._start_sid

    def is_goal(self, sid: int) -> bool:
        x, y, t = self.pose_of(sid)
        if (x, y) != self.goal_cell:
            return False
        return self.goal_theta is None or t == self.goal_theta

    def successors(self, sid: int) -> tuple[tuple[int, int], ...]:
        cached = self._succ.get(sid)
        if cached is not None:
            return cached
        x, y, t = self.pose_of(sid)
        grid = self.grid
        out = []
        for prim, cost, swept in self._by_heading[t]:
            ex, ey, et = prim.end
            nx, ny = x + ex, y + ey
            if not grid.in_bounds(nx, ny):
                continue
            hit = False
            for ox, oy in swept:
                if grid.is_obstacle(x + ox, y + oy):
                    hit = True
                    break
            if not hit:
                out.append((self._intern(nx, ny, et), cost))
        result = tuple(out)
        self._succ[sid] = result
        return result

    def euclidean_h(self, sid: int) -> float:
        x, y, _ = self.pose_of(sid)
        gx, gy = self.goal_cell
        return math.hypot(x - gx, y - gy) * self.grid.resolution * 1000.0

    def heuristic(self, sid: int, i: int) -> float:
        if i == 0:
            return self.euclidean_h(sid)
        x, y, _ = self.pose_of(sid)
        value = self.fields[i - 1][y * self._w + x]
        if value == INF:
            self.fallback_lookups += 1
            return self.euclidean_h(sid)
        return value

    def primitive_between(self, sid_a: int, sid_b: int) -> Optional[MotionPrimitive]:
        """A loaded primitive realizing the edge a->b, if any (for replay checks)."""
        xa, ya, ta = self.pose_of(sid_a)
        xb, yb, tb = self.pose_of(sid_b)
        for prim, _, _ in self._by_heading[ta]:
            ex, ey, et = prim.end
            if (xa + ex, ya + ey, et) == (xb, yb, tb):
                return prim
        return None
