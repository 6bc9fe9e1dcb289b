"""Command-line front end: solve single instances, run matrices, verify runs."""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import bench
from .bench import MetricsRow, RunManifest, curve_csv, run_from_manifest
from .grid import load_scenario
from .tiles import format_instance_line, random_solvable_board
from .verify import verify_run


def _add_planner_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algo", default="amha",
                   choices=("amha", "mha", "ara", "wastar", "astar"))
    p.add_argument("--w1", type=float, default=3.0)
    p.add_argument("--w2", type=float, default=2.0)
    p.add_argument("--dw1", type=float, default=1.0)
    p.add_argument("--dw2", type=float, default=1.0)
    p.add_argument("--time-limit", type=float, default=math.inf)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--clock", default="wall", choices=("wall", "virtual"))
    p.add_argument("--tick", type=float, default=1e-4)
    p.add_argument("--out", default=None, help="directory for curve + manifest output")
    p.add_argument("--print-path", action="store_true")


def _manifest_from_args(args: argparse.Namespace) -> RunManifest:
    return RunManifest(
        algo=args.algo,
        w1=args.w1,
        w2=args.w2,
        dw1=args.dw1,
        dw2=args.dw2,
        time_limit=args.time_limit,
        seed=args.seed,
        clock=args.clock,
        tick=args.tick,
    )


def _report(args, manifest: RunManifest, describe_path) -> int:
    records, planner, domain = run_from_manifest(manifest)
    for rec in records:
        print(
            f"t={rec.elapsed:.6f}s cost={rec.cost} bound={rec.bound:g} "
            f"expansions={rec.expansions_total}"
        )
    if planner.timed_out:
        print("time limit reached")
    if not records:
        print("no solution" if planner.no_solution else "no solution published")
        return 2
    if args.print_path:
        for line in describe_path(domain, records[-1].path):
            print(line)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "manifest.txt").write_text(manifest.to_text())
        row = MetricsRow.from_records("i000", args.algo, records, planner.expansions_total)
        (out / "curve.csv").write_text(curve_csv(row))
    return 0


def _cmd_solve_tiles(args: argparse.Namespace) -> int:
    if args.board:
        board_line = args.board
    else:
        board = random_solvable_board(args.width, args.height, args.seed)
        board_line = format_instance_line(board)
        print(f"instance: {board_line}")
    manifest = _manifest_from_args(args)
    manifest.domain = "tiles"
    manifest.board = board_line
    manifest.n_heur = args.n_heur
    manifest.weight_lo, manifest.weight_hi = args.weight_range

    def describe(domain, path):
        for sid in path:
            yield format_instance_line(domain.board_of(sid))

    return _report(args, manifest, describe)


def _cmd_solve_grid(args: argparse.Namespace) -> int:
    manifest = _manifest_from_args(args)
    manifest.domain = "grid"
    manifest.map = args.map
    if args.scenario:
        start, goal = load_scenario(args.scenario)
        manifest.start = " ".join(str(v) for v in start)
        manifest.goal = " ".join(str(v) for v in goal if v is not None)
    else:
        if not (args.start and args.goal):
            print("need --scenario or both --start and --goal", file=sys.stderr)
            return 2
        manifest.start = args.start
        manifest.goal = args.goal
    manifest.footprint = args.footprint
    if args.primitives:
        manifest.primitives = args.primitives

    def describe(domain, path):
        for sid in path:
            x, y, t = domain.pose_of(sid)
            yield f"{x} {y} {t}"

    return _report(args, manifest, describe)


def _cmd_bench(args: argparse.Namespace) -> int:
    out = bench.run_matrix(args.config, args.out)
    print(f"wrote {out / 'summary.csv'}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    manifest = RunManifest.from_text(Path(args.manifest).read_text())
    records, planner, _ = run_from_manifest(manifest, record_expansions=True)
    optimal = bench.oracle_optimal(manifest.build_domain(), state_cap=args.oracle_cap)
    if optimal is None:
        print("oracle unavailable (state cap exceeded); bound checks skipped")
    verdict = verify_run(records, optimal, planner.expansion_log)
    print(f"records: {len(records)}  expansions: {planner.expansions_total}")
    print(verdict)
    return 0 if verdict.passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="amhastar",
        description="Anytime multi-heuristic search benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-tiles", help="solve one sliding-tile instance")
    _add_planner_flags(p)
    p.add_argument("--board", default=None, help="instance line: `w h t0 t1 ...`")
    p.add_argument("--width", type=int, default=3)
    p.add_argument("--height", type=int, default=3)
    p.add_argument("--n-heur", type=int, default=2)
    p.add_argument("--weight-range", type=float, nargs=2, default=(0.0, 5.0))
    p.set_defaults(func=_cmd_solve_tiles)

    p = sub.add_parser("solve-grid", help="solve one lattice navigation instance")
    _add_planner_flags(p)
    p.add_argument("--map", required=True)
    p.add_argument("--scenario", default=None)
    p.add_argument("--start", default=None, help="`x y theta`")
    p.add_argument("--goal", default=None, help="`x y [theta]`")
    p.add_argument("--footprint", default="rect:1.2x0.8")
    p.add_argument("--primitives", default=None)
    p.set_defaults(func=_cmd_solve_grid)

    p = sub.add_parser("bench", help="run an algorithms x instances matrix")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("verify", help="replay a manifest and check its guarantees")
    p.add_argument("--manifest", required=True)
    p.add_argument("--oracle-cap", type=int, default=2_000_000)
    p.set_defaults(func=_cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
