"""
Command line front end.

    python -m app run MANIFEST [--record]
    python -m app sweep --pattern I,II --method proposed,no-move --d-a-range 1:30:1
    python -m app oracle --pattern I --d-a 15 --pair C,D
    python -m app show results/I_proposed.csv results/I_no-move.csv
    python -m app serve
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from app.config import settings
from app.exceptions import ManifestError, PositioningError
from app.schemas.enums import BetaSchedule, Method, RateMode, Solver
from app.schemas.grid import StrategyGrid
from app.schemas.manifest import RunManifest
from app.schemas.sap import SapConfig
from app.schemas.scenario import MovingPair
from app.services import report_service, scenario_service, sweep_service
from app.services.optimizer_service import derive_seed
from app.services.oracle_service import OracleService
from app.services.sap_service import SapService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 2


def parse_d_a_range(text: str) -> List[float]:
    """``START:STOP:STEP`` (inclusive) or a comma list of distances."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"invalid d_A range {text!r}; use START:STOP[:STEP]")
        try:
            start, stop = float(parts[0]), float(parts[1])
            step = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid d_A range {text!r}")
        if step <= 0 or stop < start:
            raise argparse.ArgumentTypeError(f"invalid d_A range {text!r}")
        count = int((stop - start) / step + 1e-9) + 1
        return [round(start + i * step, 9) for i in range(count)]
    try:
        return [float(value) for value in text.split(",") if value.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid d_A list {text!r}")


def _comma_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _add_solver_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", default="default", help="default | oracle | coarse | D0:D1:DSTEP/ASTEP")
    parser.add_argument("--mode", choices=[m.value for m in RateMode], default=RateMode.EXACT.value)
    parser.add_argument("--steps", type=int, default=settings.DEFAULT_SAP_STEPS, help="SAP steps per pair run")
    parser.add_argument("--beta-schedule", choices=[b.value for b in BetaSchedule], default=BetaSchedule.LINEAR.value)
    parser.add_argument("--beta-scale", type=float, default=1.0)
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_MASTER_SEED, help="master seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="python -m app", description="Wi-Fi user positioning game simulator")
    parser.add_argument("--log-level", default=settings.LOG_LEVEL)
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a manifest file")
    run.add_argument("manifest", type=Path)
    run.add_argument("--record", action="store_true", help="store the rows in the run database")
    run.add_argument("--out", default=None, help="override the manifest output directory")

    sweep = commands.add_parser("sweep", help="sweep d_A for patterns and methods")
    sweep.add_argument("--pattern", type=_comma_list, default=["I"], help="comma list of pattern ids")
    sweep.add_argument(
        "--method",
        type=_comma_list,
        default=[Method.PROPOSED.value, Method.NO_MOVE.value],
        help="comma list of: " + ", ".join(m.value for m in Method),
    )
    sweep.add_argument("--d-a-range", type=parse_d_a_range, default=parse_d_a_range("1:30:1"))
    sweep.add_argument("--psi-a", type=float, default=90.0)
    sweep.add_argument("--solver", choices=[s.value for s in Solver], default=Solver.SAP.value)
    sweep.add_argument("--out", default=settings.OUTPUT_DIR)
    sweep.add_argument("--workers", type=int, default=settings.MAX_WORKERS)
    sweep.add_argument("--name", default="sweep")
    sweep.add_argument("--record", action="store_true")
    sweep.add_argument("--export-traces", action="store_true")
    _add_solver_options(sweep)

    oracle = commands.add_parser("oracle", help="exhaustive pair search and SAP comparison")
    source = oracle.add_mutually_exclusive_group(required=True)
    source.add_argument("--pattern")
    source.add_argument("--scenario", type=Path)
    oracle.add_argument("--d-a", type=float, default=15.0)
    oracle.add_argument("--psi-a", type=float, default=None)
    oracle.add_argument("--pair", type=_comma_list, default=["C", "D"])
    oracle.add_argument("--sap-seeds", type=int, default=10, help="SAP runs compared against the oracle (0 to skip)")
    _add_solver_options(oracle)
    oracle.set_defaults(grid="oracle")

    show = commands.add_parser("show", help="summarize sweep CSV files")
    show.add_argument("csv", nargs="+", type=Path)

    serve = commands.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    return parser


def _sap_config(args: argparse.Namespace) -> SapConfig:
    return SapConfig(max_steps=args.steps, beta_schedule=args.beta_schedule, beta_scale=args.beta_scale)


def _print_run(artifacts: sweep_service.RunArtifacts) -> None:
    print(report_service.summarize(artifacts.rows))
    print(f"\n{len(artifacts.files)} files written to {artifacts.output_dir}")
    if artifacts.run_id is not None:
        print(f"recorded as run {artifacts.run_id}")


def cmd_run(args: argparse.Namespace) -> int:
    manifest = scenario_service.load_manifest(args.manifest)
    updates = {}
    if args.record:
        updates["record"] = True
    if args.out:
        updates["output_dir"] = args.out
    if updates:
        manifest = manifest.model_copy(update=updates)
    _print_run(sweep_service.run_manifest(manifest))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        manifest = RunManifest(
            name=args.name,
            patterns=[scenario_service.normalize_pattern_id(p) for p in args.pattern],
            methods=args.method,
            d_a_values=args.d_a_range,
            psi_a_deg=args.psi_a,
            grid=args.grid,
            sap=_sap_config(args),
            solver=args.solver,
            mode=args.mode,
            master_seed=args.seed,
            output_dir=args.out,
            workers=args.workers,
            record=args.record,
            export_traces=args.export_traces,
        )
    except ValidationError as e:
        raise ManifestError("; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())) from e
    _print_run(sweep_service.run_manifest(manifest))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.scenario:
        scenario = scenario_service.load_scenario(args.scenario)
    else:
        scenario = scenario_service.make_pattern(args.pattern, args.d_a, args.psi_a)
    if len(args.pair) != 2:
        raise ManifestError(f"--pair needs two user ids, got {args.pair}")
    try:
        grid = StrategyGrid.from_spec(args.grid)
        pair = MovingPair(first=args.pair[0], second=args.pair[1])
    except (ValueError, ValidationError) as e:
        raise ManifestError(str(e)) from e
    mode = RateMode(args.mode)

    oracle = OracleService(scenario, grid, pair, mode)
    report = oracle.brute_force_best()
    print(report.model_dump_json(indent=2, by_alias=True))

    if args.sap_seeds <= 0:
        return EXIT_OK

    sap = SapService(scenario, grid, pair, mode)
    base = _sap_config(args)
    best_theta, nash_passes = None, 0
    for counter in range(args.sap_seeds):
        outcome = sap.run(base.model_copy(update={"rng_seed": derive_seed(args.seed, counter), "record_trace": False}))
        if outcome.profile is None:
            continue
        if oracle.verify_nash(outcome.profile):
            nash_passes += 1
        if best_theta is None or outcome.theta > best_theta:
            best_theta = outcome.theta

    if best_theta is None:
        print("\nSAP found no feasible profile")
    else:
        print(f"\nSAP best of {args.sap_seeds} seeds: theta = {best_theta:.6g} b/s")
        print(f"  ratio to oracle    {best_theta / report.best_theta:.6f}")
    print(f"  Nash certificates  {nash_passes}/{args.sap_seeds}")
    return EXIT_OK


def cmd_show(args: argparse.Namespace) -> int:
    rows = []
    for path in args.csv:
        try:
            rows.extend(report_service.read_sweep_csv(path))
        except (OSError, ValueError, KeyError) as e:
            raise ManifestError(f"{path}: cannot read sweep rows ({e})") from e
    print(report_service.summarize(rows))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "oracle": cmd_oracle,
    "show": cmd_show,
    "serve": cmd_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args)
    except PositioningError as e:
        logger.error(f"❌ {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
