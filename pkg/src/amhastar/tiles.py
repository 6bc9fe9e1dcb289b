"""Sliding-tile puzzle domain.

Boards are width x height permutations of 0..n-1 with 0 as the blank. The
goal convention is the identity arrangement: blank at index 0 and tile v at
cell v, so tile v's goal cell is just v. The anchor heuristic is Manhattan
distance plus linear conflict; the inadmissible heuristics are seeded-random
nonnegative combinations of misplaced tiles, Manhattan distance and linear
conflict.
"""
from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .domain import SearchDomain, StateInterner


@dataclass(frozen=True)
class TileBoard:
    width: int
    height: int
    tiles: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.width < 2 or self.height < 2:
            raise ValueError("board must be at least 2x2")
        n = self.width * self.height
        if len(self.tiles) != n or sorted(self.tiles) != list(range(n)):
            raise ValueError("tiles must be a permutation of 0..n-1")

    @property
    def blank_index(self) -> int:
        return self.tiles.index(0)

    def is_goal(self) -> bool:
        return self.tiles == goal_board(self.width, self.height).tiles


@functools.lru_cache(maxsize=None)
def goal_board(width: int, height: int) -> TileBoard:
    return TileBoard(width, height, tuple(range(width * height)))


@functools.lru_cache(maxsize=None)
def _blank_moves(width: int, height: int) -> tuple[tuple[int, ...], ...]:
    """For each blank cell, the cells a tile can slide in from."""
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
    return tuple(moves)


def tile_successors(board: TileBoard) -> list[tuple[TileBoard, int]]:
    """All one-move neighbors (blank swapped with an adjacent tile), cost 1."""
    tiles = board.tiles
    z = tiles.index(0)
    out = []
    for j in _blank_moves(board.width, board.height)[z]:
        lst = list(tiles)
        lst[z], lst[j] = lst[j], lst[z]
        out.append((TileBoard(board.width, board.height, tuple(lst)), 1))
    return out


def manhattan_distance(board: TileBoard) -> int:
    w = board.width
    total = 0
    for idx, v in enumerate(board.tiles):
        if v:
            total += abs(idx // w - v // w) + abs(idx % w - v % w)
    return total


def misplaced_tiles(board: TileBoard) -> int:
    return sum(1 for idx, v in enumerate(board.tiles) if v and v != idx)


def _line_removals(goal_offsets: list[int]) -> int:
    """Minimum tiles to drop from a line so the rest sit in goal order.

    Equals line length minus the longest strictly increasing subsequence of
    the goal offsets; keeping an increasing subsequence is exactly keeping a
    conflict-free set.
    """
    best: list[int] = []
    for x in goal_offsets:
        lengths = [l for v, l in zip(goal_offsets, best) if v < x]
        best.append(max(lengths, default=0) + 1)
    return len(goal_offsets) - max(best, default=0)


def linear_conflict(board: TileBoard) -> int:
    """Twice the minimum number of tiles that must leave their goal line."""
    w, h = board.width, board.height
    tiles = board.tiles
    removals = 0
    for r in range(h):
        row = [v % w for v in tiles[r * w:(r + 1) * w] if v and v // w == r]
        removals += _line_removals(row)
    for c in range(w):
        col = [v // w for v in tiles[c::w] if v and v % w == c]
        removals += _line_removals(col)
    return 2 * removals


def heuristic_triple(board: TileBoard) -> tuple[int, int, int]:
    """(misplaced, manhattan, linear_conflict) in one pass over the board."""
    w, h = board.width, board.height
    tiles = board.tiles
    mt = 0
    md = 0
    rows: list[list[int]] = [[] for _ in range(h)]
    cols: list[list[int]] = [[] for _ in range(w)]
    for idx, v in enumerate(tiles):
        if not v:
            continue
        r, c = idx // w, idx % w
        gr, gc = v // w, v % w
        if v != idx:
            mt += 1
            md += abs(r - gr) + abs(c - gc)
        if gr == r:
            rows[r].append(gc)
        if gc == c:
            cols[c].append(gr)
    removals = 0
    for line in rows:
        if len(line) > 1:
            removals += _line_removals(line)
    for line in cols:
        if len(line) > 1:
            removals += _line_removals(line)
    return mt, md, 2 * removals


def is_solvable(board: TileBoard) -> bool:
    """Reachability of the goal arrangement.

    Each move transposes the blank with a tile, flipping both the permutation
    parity and the parity of the blank's taxicab distance to its goal corner;
    a board is reachable exactly when the two parities agree.
    """
    tiles = list(board.tiles)
    inversions = 0
    n = len(tiles)
    for i in range(n):
        for j in range(i + 1, n):
            if tiles[i] > tiles[j]:
                inversions += 1
    z = board.blank_index
    blank_taxicab = z // board.width + z % board.width
    return inversions % 2 == blank_taxicab % 2


def random_solvable_board(width: int, height: int, seed: int) -> TileBoard:
    """Uniform random permutation, parity-fixed by one non-blank transposition."""
    rng = random.Random(seed)
    tiles = list(range(width * height))
    rng.shuffle(tiles)
    board = TileBoard(width, height, tuple(tiles))
    if not is_solvable(board):
        i, j = [k for k in range(len(tiles)) if tiles[k] != 0][:2]
        tiles[i], tiles[j] = tiles[j], tiles[i]
        board = TileBoard(width, height, tuple(tiles))
    return board


def parse_instance_line(line: str) -> TileBoard:
    """`width height t0 t1 ...` with tiles in row-major order."""
    parts = line.split()
    if len(parts) < 6:
        raise ValueError(f"malformed tile instance line: {line!r}")
    w, h = int(parts[0]), int(parts[1])
    tiles = tuple(int(p) for p in parts[2:])
    if len(tiles) != w * h:
        raise ValueError(f"expected {w * h} tiles, got {len(tiles)}")
    return TileBoard(w, h, tiles)


def format_instance_line(board: TileBoard) -> str:
    return f"{board.width} {board.height} " + " ".join(str(v) for v in board.tiles)


def load_instances(path) -> list[TileBoard]:
    boards = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                boards.append(parse_instance_line(line))
    return boards


def draw_weights(
    n: int, seed: int, lo: float = 0.0, hi: float = 5.0
) -> tuple[tuple[float, float, float], ...]:
    """One (misplaced, manhattan, conflict) weight triple per inadmissible heuristic."""
    rng = random.Random(seed)
    return tuple(
        (rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)) for _ in range(n)
    )


class TilePuzzleDomain(SearchDomain):
    """Interned tile-puzzle search domain.

    Heuristic 0 is Manhattan + linear conflict. Heuristics 1..N are weighted
    sums of (misplaced, manhattan, conflict); the weights are drawn once at
    construction from the given seed and recorded on the instance.
    """

    def __init__(
        self,
        board: TileBoard,
        num_inadmissible: int = 2,
        weight_seed: int = 0,
        weight_range: tuple[float, float] = (0.0, 5.0),
        weights: Optional[Sequence[tuple[float, float, float]]] = None,
    ) -> None:
        if num_inadmissible < 0:
            raise ValueError("num_inadmissible must be >= 0")
        if not is_solvable(board):
            raise ValueError("board is not solvable for the fixed goal arrangement")
        self.num_inadmissible = num_inadmissible
        if weights is not None:
            if len(weights) != num_inadmissible:
                raise ValueError("need one weight triple per inadmissible heuristic")
            self.weights = tuple(tuple(float(x) for x in t) for t in weights)
        else:
            lo, hi = weight_range
            self.weights = draw_weights(num_inadmissible, weight_seed, lo, hi)
        self._interner = StateInterner()
        self._width = board.width
        self._height = board.height
        self._moves = _blank_moves(board.width, board.height)
        self._start = self._interner.intern(bytes(board.tiles))
        self._goal = self._interner.intern(bytes(goal_board(board.width, board.height).tiles))
        self._triples: dict[int, tuple[int, int, int]] = {}
        self._succ: dict[int, tuple[tuple[int, int], ...]] = {}

    def board_of(self, sid: int) -> TileBoard:
        return TileBoard(self._width, self._height, tuple(self._interner.key_of(sid)))

    def start(self) -> int:
        return self._start

    def is_goal(self, sid: int) -> bool:
        return sid == self._goal

    def successors(self, sid: int) -> tuple[tuple[int, int], ...]:
        cached = self._succ.get(sid)
        if cached is not None:
            return cached
        tiles = self._interner.key_of(sid)
        z = tiles.index(0)
        out = []
        for j in self._moves[z]:
            lst = bytearray(tiles)
            lst[z], lst[j] = lst[j], lst[z]
            out.append((self._interner.intern(bytes(lst)), 1))
        result = tuple(out)
        self._succ[sid] = result
        return result

    def heuristic(self, sid: int, i: int) -> float:
        triple = self._triples.get(sid)
        if triple is None:
            triple = heuristic_triple(
                TileBoard(self._width, self._height, tuple(self._interner.key_of(sid)))
            )
            self._triples[sid] = triple
        mt, md, lc = triple
        if i == 0:
            return md + lc
        a, b, c = self.weights[i - 1]
        return a * mt + b * md + c * lc
