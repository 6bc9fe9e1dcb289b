"""Anytime multi-heuristic best-first search with bounded suboptimality.

The planner runs one admissible "anchor" queue (index 0) and N inadmissible
queues side by side. Each round it offers every inadmissible queue one
expansion, allowed only while that queue's min key stays within w2 times the
anchor's min key; otherwise the anchor expands. A state whose cost improves
after it was anchor-expanded is parked in an INCONS set and re-queued at the
next weight decrement, so work carries over between iterations. Published
solutions are w1*w2-suboptimal and per-iteration re-expansion is capped at
two (inadmissible then anchor).

Four baselines share the machinery: `ara` (single queue, anytime on w1),
`mha` (one-shot, stops after the first publish), `wastar` (single queue,
one-shot) and `astar` (wastar at weight 1).
"""
from __future__ import annotations

import enum
import math
import time
from dataclasses import dataclass, replace
from typing import Callable, Optional

from .domain import SearchDomain
from .heap import AddressableHeap

INF = math.inf

MODES = ("amha", "mha", "ara", "wastar", "astar")
SINGLE_QUEUE_MODES = ("ara", "wastar", "astar")
ONE_SHOT_MODES = ("mha", "wastar", "astar")
# Textbook weighted A* reopens a closed state when its cost improves; the
# anytime modes instead park it in INCONS until the next iteration.
REOPENING_MODES = ("wastar", "astar")


class Outcome(enum.Enum):
    GOAL_BOUND_PROVEN = "goal_bound_proven"
    EXHAUSTED = "exhausted"
    TIMED_OUT = "timed_out"


@dataclass(frozen=True)
class PlannerConfig:
    """Planner knobs.

    w1 inflates heuristics inside queue keys, w2 gates inadmissible
    expansions relative to the anchor; both anneal by dw1/dw2 per iteration
    down to 1. time_budget is in clock seconds ('wall' monotonic seconds, or
    deterministic virtual seconds advancing by `tick` per expansion).
    termination_check 'per_expansion' re-tests the exit condition before
    every expansion; 'per_round' only between rounds, as in the one-test-per-
    round formulation.
    """

    w1_init: float = 1.0
    w2_init: float = 1.0
    dw1: float = 1.0
    dw2: float = 1.0
    time_budget: float = INF
    mode: str = "amha"
    termination_check: str = "per_expansion"
    clock: str = "wall"
    tick: float = 1e-4
    record_expansions: bool = False
    check_invariants: bool = False
    tie_break: str = "high-g-low-id"

    def __post_init__(self) -> None:
        if self.w1_init < 1 or self.w2_init < 1:
            raise ValueError("w1_init and w2_init must be >= 1")
        if self.dw1 <= 0 or self.dw2 <= 0:
            raise ValueError("dw1 and dw2 must be > 0")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.termination_check not in ("per_expansion", "per_round"):
            raise ValueError(f"unknown termination_check {self.termination_check!r}")
        if self.clock not in ("wall", "virtual"):
            raise ValueError(f"unknown clock {self.clock!r}")
        if self.tick <= 0:
            raise ValueError("tick must be > 0")
        if self.tie_break != "high-g-low-id":
            raise ValueError(f"unsupported tie_break {self.tie_break!r}")


@dataclass(frozen=True)
class SolutionRecord:
    """One published solution: path, its cost, and the bound it carries."""

    path: tuple[int, ...]
    cost: int
    bound: float
    elapsed: float
    expansions_total: int
    expansions_iteration: int


class _WallClock:
    __slots__ = ("_t0",)

    def start(self) -> None:
        self._t0 = time.perf_counter()

    def now(self) -> float:
        return time.perf_counter() - self._t0

    def on_expansion(self) -> None:
        pass

    def on_publish(self) -> None:
        pass


class _VirtualClock:
    """Deterministic clock: advances one tick per expansion and per publish."""

    __slots__ = ("_tick", "_n")

    def __init__(self, tick: float) -> None:
        self._tick = tick
        self._n = 0

    def start(self) -> None:
        self._n = 0

    def now(self) -> float:
        return self._n * self._tick

    def on_expansion(self) -> None:
        self._n += 1

    def on_publish(self) -> None:
        self._n += 1


class OpenQueueSet:
    """N+1 addressable open queues; queue 0 is the anchor."""

    __slots__ = ("queues",)

    def __init__(self, n_inadmissible: int) -> None:
        self.queues = [AddressableHeap() for _ in range(n_inadmissible + 1)]

    def __getitem__(self, i: int) -> AddressableHeap:
        return self.queues[i]

    def __len__(self) -> int:
        return len(self.queues)

    def remove_everywhere(self, sid: int) -> None:
        for q in self.queues:
            q.discard(sid)


class Planner:
    """Drives one search over one domain instance; not reusable or shareable.

    The public stepping methods (initialize / key / expand / improve_path /
    reconcile_queues / extract_path) mirror the phases of run() so each phase
    can be exercised on its own.
    """

    def __init__(
        self,
        domain: SearchDomain,
        config: Optional[PlannerConfig] = None,
        observer: Optional[Callable[[SolutionRecord], None]] = None,
    ) -> None:
        self._domain = domain
        self._cfg = config or PlannerConfig()
        self._observer = observer
        self._n = 0 if self._cfg.mode in SINGLE_QUEUE_MODES else domain.num_inadmissible
        self._reopen = self._cfg.mode in REOPENING_MODES
        self._clock = (
            _VirtualClock(self._cfg.tick) if self._cfg.clock == "virtual" else _WallClock()
        )
        self._g: list[float] = []
        self._parent: list[int] = []
        self._open = OpenQueueSet(self._n)
        self._closed_anch: set[int] = set()
        self._closed_inad: set[int] = set()
        self._incons: set[int] = set()
        self._records: list[SolutionRecord] = []
        self.expansion_log: list[list[tuple[int, int]]] = []
        self.expansions_total = 0
        self.expansions_iteration = 0
        self.no_solution = False
        self.timed_out = False

    # -- read-only views ---------------------------------------------------

    @property
    def w1(self) -> float:
        return self._w1

    @property
    def w2(self) -> float:
        return self._w2

    @property
    def records(self) -> list[SolutionRecord]:
        return self._records

    @property
    def open_queues(self) -> OpenQueueSet:
        return self._open

    @property
    def closed_anchor(self) -> set[int]:
        return self._closed_anch

    @property
    def closed_inadmissible(self) -> set[int]:
        return self._closed_inad

    @property
    def incons(self) -> set[int]:
        return self._incons

    def g(self, sid: int) -> float:
        return self._g[sid] if sid < len(self._g) else INF

    def parent(self, sid: int) -> int:
        return self._parent[sid] if sid < len(self._parent) else -1

    # -- search phases -----------------------------------------------------

    def initialize(self) -> None:
        """Set weights, seed g(start)=0 / goal cost +inf, queue the start."""
        cfg = self._cfg
        self._w1 = 1.0 if cfg.mode == "astar" else float(cfg.w1_init)
        self._w2 = 1.0 if cfg.mode in SINGLE_QUEUE_MODES else float(cfg.w2_init)
        start = self._domain.start()
        self._start = start
        self._ensure(start)
        self._g[start] = 0
        self._parent[start] = -1
        self._goal_sid = -1
        self._goal_g: float = INF
        if self._domain.is_goal(start):
            self._goal_sid = start
            self._goal_g = 0
        for i in range(self._n + 1):
            self._open[i].insert_or_update(start, self.key(start, i), 0)
        self._clock.start()

    def key(self, sid: int, i: int) -> float:
        """Queue priority g(s) + w1 * h_i(s); +inf for unreached states."""
        g = self._g[sid] if sid < len(self._g) else INF
        if g == INF:
            return INF
        return g + self._w1 * self._domain.heuristic(sid, i)

    def expand(self, sid: int, qi: int) -> None:
        """Pop a state from every queue and relax its outgoing edges."""
        self._open.remove_everywhere(sid)
        self.expansions_total += 1
        self.expansions_iteration += 1
        self._clock.on_expansion()
        if self._cfg.record_expansions:
            self.expansion_log[-1].append((sid, qi))
        g_s = self._g[sid]
        for s2, c in self._domain.successors(sid):
            new_g = g_s + c
            if new_g < self.g(s2):
                self._relax(s2, sid, new_g)
        if self._cfg.check_invariants:
            self._assert_invariants()

    def improve_path(self) -> Outcome:
        """Expand until g(goal) is within w2 of the anchor min, or give up.

        Expects the closed sets and INCONS cleared by the caller and the
        queues carrying either the start state or reconciled content.
        """
        w2 = self._w2
        open0 = self._open[0]
        n = self._n
        per_exp = self._cfg.termination_check == "per_expansion"
        budget = self._cfg.time_budget
        clock = self._clock
        if self._cfg.record_expansions:
            self.expansion_log.append([])
        if clock.now() > budget:
            return Outcome.TIMED_OUT
        while self._goal_g > w2 * open0.min_key():
            for i in range(1, n + 1) if n > 0 else (0,):
                if per_exp and self._goal_g <= w2 * open0.min_key():
                    break
                if not open0:
                    break
                if clock.now() > budget:
                    return Outcome.TIMED_OUT
                if i >= 1 and self._open[i].min_key() <= w2 * open0.min_key():
                    sid = self._open[i].top()
                    if self._cfg.check_invariants:
                        self._assert_guard(sid, i)
                    self._closed_inad.add(sid)
                    self.expand(sid, i)
                else:
                    sid = open0.top()
                    self._closed_anch.add(sid)
                    self.expand(sid, 0)
        if self._goal_g < INF:
            return Outcome.GOAL_BOUND_PROVEN
        return Outcome.EXHAUSTED

    def reconcile_queues(self) -> None:
        """Fold INCONS into the anchor, mirror it everywhere, re-key at new w1."""
        members = sorted(set(self._open[0].members()) | self._incons)
        self._incons.clear()
        for i in range(self._n + 1):
            self._open[i].rebuild(
                (sid, self._g[sid] + self._w1 * self._domain.heuristic(sid, i), self._g[sid])
                for sid in members
            )

    def extract_path(self, sid: Optional[int] = None) -> list[int]:
        """Back-pointer walk from a reached state to the start, reversed."""
        if sid is None:
            sid = self._goal_sid
        if sid < 0 or self.g(sid) == INF:
            raise ValueError("extract_path requires a reached state")
        chain = []
        limit = len(self._parent) + 1
        cur = sid
        while cur != -1:
            chain.append(cur)
            if len(chain) > limit:
                raise RuntimeError("cycle in parent chain")
            cur = self._parent[cur]
        chain.reverse()
        return chain

    def run(self) -> list[SolutionRecord]:
        """Full anytime loop; returns the published records in order."""
        self.initialize()
        cfg = self._cfg
        one_shot = cfg.mode in ONE_SHOT_MODES
        while self._w1 >= 1 and self._w2 >= 1:
            self._closed_anch.clear()
            self._closed_inad.clear()
            self._incons.clear()
            self.expansions_iteration = 0
            outcome = self.improve_path()
            if outcome is Outcome.TIMED_OUT:
                self.timed_out = True
                break
            if outcome is Outcome.EXHAUSTED:
                self.no_solution = True
                break
            self._publish()
            if self._w1 == 1 and self._w2 == 1:
                break
            if one_shot:
                break
            self._w1 = max(self._w1 - cfg.dw1, 1.0)
            self._w2 = max(self._w2 - cfg.dw2, 1.0)
            self.reconcile_queues()
        return self._records

    # -- internals -----------------------------------------------------------

    def _ensure(self, sid: int) -> None:
        g = self._g
        while len(g) <= sid:
            g.append(INF)
            self._parent.append(-1)

    def _relax(self, sid: int, parent: int, new_g: float) -> None:
        """Apply an improving edge: update g/parent and queue per the rules."""
        self._ensure(sid)
        self._g[sid] = new_g
        self._parent[sid] = parent
        if new_g < self._goal_g and self._domain.is_goal(sid):
            self._goal_g = new_g
            self._goal_sid = sid
        if sid in self._closed_anch:
            if not self._reopen:
                self._incons.add(sid)
                return
            self._closed_anch.discard(sid)
        k0 = new_g + self._w1 * self._domain.heuristic(sid, 0)
        self._open[0].insert_or_update(sid, k0, new_g)
        if sid not in self._closed_inad:
            w2k0 = self._w2 * k0
            for j in range(1, self._n + 1):
                kj = new_g + self._w1 * self._domain.heuristic(sid, j)
                if kj <= w2k0:
                    self._open[j].insert_or_update(sid, kj, new_g)

    def _tighten_goal_chain(self) -> None:
        """Re-relax the goal's parent chain so g(goal) equals its edge sum.

        Stale links appear when a chain node's g improved after it relaxed
        its child; replaying the chain edges start-to-goal through _relax
        restores exact prefix sums without touching any other invariant.
        """
        chain = self.extract_path(self._goal_sid)
        for a, b in zip(chain, chain[1:]):
            c = min(cost for s2, cost in self._domain.successors(a) if s2 == b)
            if self._g[a] + c < self._g[b]:
                self._relax(b, a, self._g[a] + c)

    def _publish(self) -> None:
        self._tighten_goal_chain()
        path = tuple(self.extract_path(self._goal_sid))
        self._clock.on_publish()
        rec = SolutionRecord(
            path=path,
            cost=int(self._g[self._goal_sid]),
            bound=self._w1 * self._w2,
            elapsed=self._clock.now(),
            expansions_total=self.expansions_total,
            expansions_iteration=self.expansions_iteration,
        )
        self._records.append(rec)
        if self._observer is not None:
            self._observer(rec)

    def _assert_guard(self, sid: int, i: int) -> None:
        stored = self._open[i].key_of(sid)
        assert stored <= self._w2 * self._open[0].min_key() + 1e-9
        # Stored inadmissible keys may be stale-high when the insertion
        # filter rejected an update, never stale-low.
        assert self.key(sid, i) <= stored + 1e-9

    def _assert_invariants(self) -> None:
        m0 = set(self._open[0].members())
        for i in range(1, self._n + 1):
            mi = set(self._open[i].members())
            assert mi <= m0, f"queue {i} not contained in anchor"
            assert not (mi & self._closed_inad), f"inadmissible-closed state in queue {i}"
        for q in self._open.queues:
            assert not (set(q.members()) & self._closed_anch), "anchor-closed state queued"


def _run(domain: SearchDomain, config: Optional[PlannerConfig], observer, mode: str,
         **overrides) -> list[SolutionRecord]:
    cfg = config or PlannerConfig()
    cfg = replace(cfg, mode=mode, **overrides)
    return Planner(domain, cfg, observer).run()


def run_anytime(domain: SearchDomain, config: Optional[PlannerConfig] = None,
                observer=None, **overrides) -> list[SolutionRecord]:
    """Anytime multi-heuristic search: publish, anneal weights, repeat."""
    return _run(domain, config, observer, "amha", **overrides)


def run_mha_oneshot(domain: SearchDomain, config: Optional[PlannerConfig] = None,
                    observer=None, **overrides) -> list[SolutionRecord]:
    """Multi-heuristic search truncated after its first publish."""
    return _run(domain, config, observer, "mha", **overrides)


def run_ara(domain: SearchDomain, config: Optional[PlannerConfig] = None,
            observer=None, **overrides) -> list[SolutionRecord]:
    """Anytime repairing search: single queue, weight schedule on w1 only."""
    return _run(domain, config, observer, "ara", **overrides)


def run_wastar(domain: SearchDomain, config: Optional[PlannerConfig] = None,
               observer=None, **overrides) -> list[SolutionRecord]:
    """One-shot weighted A* at w1_init."""
    return _run(domain, config, observer, "wastar", **overrides)


def run_astar(domain: SearchDomain, config: Optional[PlannerConfig] = None,
              observer=None, **overrides) -> list[SolutionRecord]:
    """Plain A* (weights pinned to 1)."""
    return _run(domain, config, observer, "astar", **overrides)
