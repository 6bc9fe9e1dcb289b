"""Benchmark harness: manifests, run matrices, and metric CSVs.

A RunManifest pins everything needed to replay one run: domain instance,
algorithm, weight schedule, seed, clock and budget. run_matrix executes an
algorithms x instances grid from a key=value config file and writes

  summary.csv   one row per run plus one aggregate row per algorithm,
                columns: instance,algo,success,t_initial_s,t_final_s,
                eps_initial,eps_final,cost_initial,cost_final,expansions
  curves/<run-id>.csv   the anytime curve, columns: t_s,cost,bound
  manifests/<run-id>.txt   the replayable manifest
  verdicts.txt  per-run guarantee checks, when an oracle is configured

Replays are byte-identical when the manifest uses the virtual clock; wall
clock timings vary by nature.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .domain import SearchDomain
from .grid import LatticeDomain, OccupancyGrid, RobotFootprint, load_primitives
from .oracle import uniform_cost_optimal
from .planner import Planner, PlannerConfig, SolutionRecord
from .tiles import TilePuzzleDomain, parse_instance_line
from .verify import Verdict, verify_run

SUMMARY_COLUMNS = (
    "instance,algo,success,t_initial_s,t_final_s,eps_initial,eps_final,"
    "cost_initial,cost_final,expansions"
)
CURVE_COLUMNS = "t_s,cost,bound"
AGGREGATE_INSTANCE = "__mean__"


@dataclass
class RunManifest:
    """Replayable description of one run."""

    algo: str = "amha"
    domain: str = "tiles"
    w1: float = 1.0
    w2: float = 1.0
    dw1: float = 1.0
    dw2: float = 1.0
    time_limit: float = math.inf
    clock: str = "wall"
    tick: float = 1e-4
    termination: str = "per_expansion"
    tie_break: str = "high-g-low-id"
    seed: int = 0
    # tiles
    board: str = ""
    n_heur: int = 2
    weight_lo: float = 0.0
    weight_hi: float = 5.0
    weights: str = ""
    # grid
    map: str = ""
    start: str = ""
    goal: str = ""
    footprint: str = "rect:1.2x0.8"
    primitives: str = "builtin16"

    def to_text(self) -> str:
        lines = ["manifest_version = 1"]
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {getattr(self, f.name)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunManifest":
        values = parse_kv(text)
        values.pop("manifest_version", None)
        kwargs = {}
        for f in dataclasses.fields(cls):
            if f.name in values:
                raw = values.pop(f.name)
                if f.type in ("float", float):
                    kwargs[f.name] = float(raw)
                elif f.type in ("int", int):
                    kwargs[f.name] = int(raw)
                else:
                    kwargs[f.name] = raw
        if values:
            raise ValueError(f"unknown manifest keys: {sorted(values)}")
        return cls(**kwargs)

    def build_domain(self) -> SearchDomain:
        if self.domain == "tiles":
            board = parse_instance_line(self.board)
            # Recorded draws take precedence so a saved manifest replays the
            # exact run even if the drawing scheme ever changes.
            recorded = None
            if self.weights:
                recorded = [
                    tuple(float(x) for x in triple.split(":"))
                    for triple in self.weights.split(",")
                ]
                if len(recorded) != self.n_heur:
                    raise ValueError("manifest weights do not match n_heur")
            dom = TilePuzzleDomain(
                board,
                num_inadmissible=self.n_heur,
                weight_seed=self.seed,
                weight_range=(self.weight_lo, self.weight_hi),
                weights=recorded,
            )
            self.weights = ",".join(
                ":".join(repr(x) for x in triple) for triple in dom.weights
            )
            return dom
        if self.domain == "grid":
            grid = OccupancyGrid.load(self.map)
            start = tuple(int(v) for v in self.start.split())
            gparts = [int(v) for v in self.goal.split()]
            goal = (gparts[0], gparts[1], gparts[2] if len(gparts) == 3 else None)
            if self.primitives == "builtin16":
                prims, num_headings = None, 16
            else:
                prims, num_headings = load_primitives(self.primitives)
            return LatticeDomain(
                grid,
                start,  # type: ignore[arg-type]
                goal,
                primitives=prims,
                num_headings=num_headings,
                footprint=parse_footprint(self.footprint),
            )
        raise ValueError(f"unknown domain {self.domain!r}")

    def build_config(self, record_expansions: bool = False,
                     check_invariants: bool = False) -> PlannerConfig:
        return PlannerConfig(
            w1_init=self.w1,
            w2_init=self.w2,
            dw1=self.dw1,
            dw2=self.dw2,
            time_budget=self.time_limit,
            mode=self.algo,
            termination_check=self.termination,
            clock=self.clock,
            tick=self.tick,
            tie_break=self.tie_break,
            record_expansions=record_expansions,
            check_invariants=check_invariants,
        )


def parse_kv(text: str) -> dict[str, str]:
    """Line-oriented `key = value` with '#' comments."""
    values: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected key = value, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def parse_footprint(text: str) -> RobotFootprint:
    if text.startswith("rect:"):
        length, width = text[5:].split("x")
        return RobotFootprint.rectangle(float(length), float(width))
    raise ValueError(f"unsupported footprint {text!r} (use rect:LxW)")


def run_from_manifest(
    manifest: RunManifest,
    record_expansions: bool = False,
    observer=None,
) -> tuple[list[SolutionRecord], Planner, SearchDomain]:
    domain = manifest.build_domain()
    planner = Planner(domain, manifest.build_config(record_expansions), observer)
    records = planner.run()
    return records, planner, domain


@dataclass
class MetricsRow:
    instance: str
    algo: str
    success: bool
    t_initial: Optional[float] = None
    t_final: Optional[float] = None
    eps_initial: Optional[float] = None
    eps_final: Optional[float] = None
    cost_initial: Optional[int] = None
    cost_final: Optional[int] = None
    expansions: int = 0
    curve: tuple[tuple[float, int, float], ...] = ()

    @classmethod
    def from_records(cls, instance: str, algo: str, records, expansions: int) -> "MetricsRow":
        if not records:
            return cls(instance, algo, False, expansions=expansions)
        first, last = records[0], records[-1]
        return cls(
            instance,
            algo,
            True,
            t_initial=first.elapsed,
            t_final=last.elapsed,
            eps_initial=first.bound,
            eps_final=last.bound,
            cost_initial=first.cost,
            cost_final=last.cost,
            expansions=expansions,
            curve=tuple((r.elapsed, r.cost, r.bound) for r in records),
        )

    def to_csv(self) -> str:
        if not self.success:
            return f"{self.instance},{self.algo},0,,,,,,,{self.expansions}"
        return ",".join(
            (
                self.instance,
                self.algo,
                "1",
                _fmt_t(self.t_initial),
                _fmt_t(self.t_final),
                _fmt_eps(self.eps_initial),
                _fmt_eps(self.eps_final),
                str(self.cost_initial),
                str(self.cost_final),
                str(self.expansions),
            )
        )


def _fmt_t(x: float) -> str:
    return f"{x:.6f}"


def _fmt_eps(x: float) -> str:
    return f"{x:.6g}"


def aggregate_row(algo: str, rows: list[MetricsRow]) -> str:
    """Mean metrics over successful rows; success rate in % over all rows."""
    done = [r for r in rows if r.success]
    rate = 100.0 * len(done) / len(rows) if rows else 0.0
    if not done:
        return f"{AGGREGATE_INSTANCE},{algo},{rate:.2f},,,,,,,"
    n = len(done)
    mean = lambda vals: sum(vals) / n
    return ",".join(
        (
            AGGREGATE_INSTANCE,
            algo,
            f"{rate:.2f}",
            _fmt_t(mean([r.t_initial for r in done])),
            _fmt_t(mean([r.t_final for r in done])),
            _fmt_eps(mean([r.eps_initial for r in done])),
            _fmt_eps(mean([r.eps_final for r in done])),
            f"{mean([r.cost_initial for r in done]):.2f}",
            f"{mean([r.cost_final for r in done]):.2f}",
            f"{mean([r.expansions for r in done]):.1f}",
        )
    )


def curve_csv(row: MetricsRow) -> str:
    lines = [CURVE_COLUMNS]
    for t, cost, bound in row.curve:
        lines.append(f"{_fmt_t(t)},{cost},{_fmt_eps(bound)}")
    return "\n".join(lines) + "\n"


def _build_manifests(values: dict[str, str], config_dir: Path) -> list[tuple[str, RunManifest]]:
    algos = [a.strip() for a in values.get("algos", "amha").split(",") if a.strip()]
    base = dict(
        w1=float(values.get("w1", "1")),
        w2=float(values.get("w2", "1")),
        dw1=float(values.get("dw1", "1")),
        dw2=float(values.get("dw2", "1")),
        time_limit=float(values.get("time_limit", "inf")),
        clock=values.get("clock", "wall"),
        tick=float(values.get("tick", "1e-4")),
        termination=values.get("termination", "per_expansion"),
        seed=int(values.get("seed", "0")),
    )
    domain = values.get("domain", "tiles")
    instances: list[tuple[str, dict]] = []
    if domain == "tiles":
        extra = dict(
            n_heur=int(values.get("n_heur", "2")),
            weight_lo=float(values.get("weight_lo", "0")),
            weight_hi=float(values.get("weight_hi", "5")),
        )
        path = config_dir / values["instances"]
        with open(path) as fh:
            boards = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        for k, line in enumerate(boards):
            instances.append((f"i{k:03d}", dict(domain="tiles", board=line, **extra)))
    elif domain == "grid":
        map_path = str((config_dir / values["map"]).resolve())
        extra = dict(
            map=map_path,
            footprint=values.get("footprint", "rect:1.2x0.8"),
            primitives=values.get("primitives", "builtin16"),
        )
        with open(config_dir / values["scenarios"]) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
        for k, line in enumerate(lines):
            parts = line.split()
            if len(parts) not in (5, 6):
                raise ValueError(f"scenario line needs 5 or 6 ints: {line!r}")
            start = " ".join(parts[:3])
            goal = " ".join(parts[3:])
            instances.append(
                (f"i{k:03d}", dict(domain="grid", start=start, goal=goal, **extra))
            )
    else:
        raise ValueError(f"unknown domain {domain!r}")
    out = []
    for algo in algos:
        for iid, inst in instances:
            out.append((f"{algo}--{iid}", RunManifest(algo=algo, **base, **inst)))
    return out


def run_matrix(config_path, out_dir=None) -> Path:
    """Execute the full algorithms x instances grid described by a config file.

    Returns the output directory. A crash in one run degrades to a failed
    row; it never aborts the rest of the matrix.
    """
    config_path = Path(config_path)
    values = parse_kv(config_path.read_text())
    out = Path(out_dir) if out_dir is not None else Path(values.get("out", "bench-out"))
    out.mkdir(parents=True, exist_ok=True)
    (out / "curves").mkdir(exist_ok=True)
    (out / "manifests").mkdir(exist_ok=True)
    use_oracle = values.get("oracle", "off") == "on"
    oracle_cap = int(values.get("oracle_cap", "2000000"))
    record = use_oracle
    manifests = _build_manifests(values, config_path.parent)
    rows: list[MetricsRow] = []
    verdict_lines: list[str] = []
    algo_order: list[str] = []
    for run_id, manifest in manifests:
        algo = manifest.algo
        if algo not in algo_order:
            algo_order.append(algo)
        instance_id = run_id.split("--", 1)[1]
        try:
            records, planner, domain = run_from_manifest(manifest, record_expansions=record)
        except Exception as exc:  # noqa: BLE001 - isolate per-run crashes
            rows.append(MetricsRow(instance_id, algo, False))
            verdict_lines.append(f"{run_id} ERROR {exc}")
            (out / "manifests" / f"{run_id}.txt").write_text(manifest.to_text())
            continue
        # written after the run so recorded draws (tile weights) are included
        (out / "manifests" / f"{run_id}.txt").write_text(manifest.to_text())
        row = MetricsRow.from_records(instance_id, algo, records, planner.expansions_total)
        rows.append(row)
        (out / "curves" / f"{run_id}.csv").write_text(curve_csv(row))
        if use_oracle:
            optimal = uniform_cost_optimal(manifest.build_domain(), state_cap=oracle_cap)
            verdict = verify_run(records, optimal, planner.expansion_log)
            verdict_lines.append(f"{run_id} {'PASS' if verdict.passed else 'FAIL'}")
            verdict_lines.extend("  " + f for f in verdict.failures)
    lines = [SUMMARY_COLUMNS]
    lines.extend(r.to_csv() for r in rows)
    for algo in algo_order:
        lines.append(aggregate_row(algo, [r for r in rows if r.algo == algo]))
    (out / "summary.csv").write_text("\n".join(lines) + "\n")
    if verdict_lines:
        (out / "verdicts.txt").write_text("\n".join(verdict_lines) + "\n")
    return out


def oracle_optimal(domain: SearchDomain, state_cap: int = 2_000_000) -> Optional[float]:
    """Exhaustive optimal cost; None when the instance exceeds the cap."""
    return uniform_cost_optimal(domain, state_cap=state_cap)


def verify_manifest(manifest: RunManifest, oracle_cap: int = 2_000_000) -> Verdict:
    """Replay a manifest with logging and check it against the oracle."""
    records, planner, _ = run_from_manifest(manifest, record_expansions=True)
    optimal = uniform_cost_optimal(manifest.build_domain(), state_cap=oracle_cap)
    return verify_run(records, optimal, planner.expansion_log)
