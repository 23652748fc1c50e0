"""
Sweep Service - runs methods across a d_A sweep and writes the run artifacts.

Every sweep point gets its own seed derived from the master seed, so points
can be dispatched to worker processes and still reproduce row for row.
Results are collected in point order before anything is written.
"""

import json
import logging
import platform
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from app import __version__
from app.exceptions import ManifestError
from app.schemas.enums import Method, RateMode, Solver
from app.schemas.grid import StrategyGrid
from app.schemas.manifest import RunManifest
from app.schemas.result import OptimizationResult, SweepRow
from app.schemas.sap import SapConfig, SapTrace
from app.schemas.scenario import Scenario
from app.services import report_service, scenario_service
from app.services.optimizer_service import OptimizerService, derive_seed

logger = logging.getLogger(__name__)


class PointTask(NamedTuple):
    pattern: str
    index: int
    scenario: Scenario
    d_a_m: float
    psi_a_deg: float
    methods: Tuple[Method, ...]
    grid: StrategyGrid
    sap_config: SapConfig
    solver: Solver
    mode: RateMode
    seed: int


class PointResult(NamedTuple):
    rows: List[SweepRow]
    traces: Dict[Method, SapTrace]


class RunArtifacts(NamedTuple):
    output_dir: Path
    rows: List[SweepRow]
    files: List[Path]
    run_id: Optional[int] = None


def _row(task: PointTask, result: OptimizationResult) -> SweepRow:
    return SweepRow(
        pattern=task.pattern,
        method=result.method,
        d_a_m=task.d_a_m,
        psi_a_deg=task.psi_a_deg,
        theta_bps=result.theta,
        delta_theta=result.delta_theta,
        user_positions=dict(result.profile.positions),
        seed=task.seed,
    )


def run_point(task: PointTask) -> PointResult:
    """Evaluate every requested method at one sweep point (top level so worker processes can import it)."""
    config = task.sap_config.model_copy(update={"rng_seed": task.seed})
    optimizer = OptimizerService(task.scenario, task.grid, task.mode)

    rows, traces = [], {}
    for method in task.methods:
        result = optimizer.run_method(method, config, task.solver)
        rows.append(_row(task, result))
        if result.trace is not None and result.trace.steps:
            traces[method] = result.trace
    return PointResult(rows, traces)


def _pattern_tasks(
    pattern: str,
    pattern_number: int,
    methods: Sequence[Method],
    d_a_values: Sequence[float],
    psi_a: float,
    grid: StrategyGrid,
    sap_config: SapConfig,
    solver: Solver,
    mode: RateMode,
    master_seed: int,
) -> List[PointTask]:
    key = scenario_service.normalize_pattern_id(pattern)
    return [
        PointTask(
            pattern=key,
            index=index,
            scenario=scenario_service.make_pattern(key, d_a, psi_a),
            d_a_m=float(d_a),
            psi_a_deg=float(psi_a),
            methods=tuple(methods),
            grid=grid,
            sap_config=sap_config,
            solver=solver,
            mode=mode,
            seed=derive_seed(master_seed, pattern_number, index),
        )
        for index, d_a in enumerate(d_a_values)
    ]


def _scenario_task(
    scenario: Scenario,
    label: str,
    methods: Sequence[Method],
    grid: StrategyGrid,
    sap_config: SapConfig,
    solver: Solver,
    mode: RateMode,
    master_seed: int,
) -> PointTask:
    # A file scenario is a single point; its first user stands in for the swept user
    first = scenario.users[0]
    return PointTask(
        pattern=label,
        index=0,
        scenario=scenario,
        d_a_m=first.distance_m,
        psi_a_deg=first.angle_deg,
        methods=tuple(methods),
        grid=grid,
        sap_config=sap_config,
        solver=solver,
        mode=mode,
        seed=derive_seed(master_seed, 0, 0),
    )


def _execute(tasks: List[PointTask], workers: int) -> List[PointResult]:
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            # map keeps submission order, so rows come back in sweep order
            return list(executor.map(run_point, tasks))
    return [run_point(task) for task in tasks]


def run_sweep(
    pattern: str,
    methods: Sequence[Method],
    d_a_values: Sequence[float],
    psi_a: float = 90.0,
    grid: Optional[StrategyGrid] = None,
    sap_config: Optional[SapConfig] = None,
    mode: RateMode = RateMode.EXACT,
    master_seed: int = 0,
    workers: int = 1,
    solver: Solver = Solver.SAP,
) -> List[SweepRow]:
    key = scenario_service.normalize_pattern_id(pattern)
    tasks = _pattern_tasks(
        key,
        scenario_service.PATTERN_IDS.index(key) + 1,
        methods,
        d_a_values,
        psi_a,
        grid or StrategyGrid.default(),
        sap_config or SapConfig(),
        solver,
        mode,
        master_seed,
    )
    return [row for result in _execute(tasks, workers) for row in result.rows]


def _provenance(manifest: RunManifest, grid: StrategyGrid, tasks: List[PointTask], files: List[Path]) -> dict:
    return {
        "created_at": datetime.utcnow().isoformat(timespec="seconds") + "Z",
        "manifest": manifest.model_dump(mode="json"),
        "grid": grid.model_dump(mode="json"),
        "points": [
            {"pattern": task.pattern, "index": task.index, "d_A_m": task.d_a_m, "psi_A_deg": task.psi_a_deg, "seed": task.seed}
            for task in tasks
        ],
        "files": [file.name for file in files],
        "versions": {
            "app": __version__,
            "python": platform.python_version(),
            "numpy": np.__version__,
            "pandas": pd.__version__,
        },
    }


def run_manifest(manifest: RunManifest) -> RunArtifacts:
    """Run a manifest end to end: sweep CSVs per (pattern, method), summary.csv and provenance.json."""
    try:
        grid = StrategyGrid.from_spec(manifest.grid)
    except ValueError as e:
        raise ManifestError(str(e)) from e

    args = (manifest.methods, grid, manifest.sap, manifest.solver, manifest.mode, manifest.master_seed)
    if manifest.scenario_path:
        scenario = scenario_service.load_scenario(manifest.scenario_path)
        label = scenario.name or Path(manifest.scenario_path).stem
        tasks = [_scenario_task(scenario, label, *args)]
    else:
        tasks = []
        for pattern in manifest.patterns:
            key = scenario_service.normalize_pattern_id(pattern)
            tasks.extend(
                _pattern_tasks(
                    key,
                    scenario_service.PATTERN_IDS.index(key) + 1,
                    manifest.methods,
                    manifest.d_a_values,
                    manifest.psi_a_deg,
                    grid,
                    manifest.sap,
                    manifest.solver,
                    manifest.mode,
                    manifest.master_seed,
                )
            )

    logger.info(f"🚀 Run '{manifest.name}': {len(tasks)} sweep points x {len(manifest.methods)} methods")
    results = _execute(tasks, manifest.workers)
    rows = [row for result in results for row in result.rows]

    output_dir = Path(manifest.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    files: List[Path] = []

    by_file: Dict[Tuple[str, Method], List[SweepRow]] = {}
    for row in rows:
        by_file.setdefault((row.pattern, row.method), []).append(row)
    for (pattern, method), group in by_file.items():
        files.append(report_service.write_sweep_csv(group, output_dir / f"{pattern}_{method.value}.csv"))
    files.append(report_service.write_summary_csv(rows, output_dir / "summary.csv"))

    if manifest.export_traces:
        for task, result in zip(tasks, results):
            for method, trace in result.traces.items():
                name = f"{task.pattern}_{method.value}_dA{task.d_a_m:g}.csv"
                files.append(report_service.write_trace_csv(trace, output_dir / "traces" / name))

    provenance_path = output_dir / "provenance.json"
    provenance = _provenance(manifest, grid, tasks, files)
    provenance_path.write_text(json.dumps(provenance, indent=2), encoding="utf-8")
    files.append(provenance_path)

    run_id = None
    if manifest.record:
        run_id = _record(manifest, rows)

    logger.info(f"✅ Run '{manifest.name}' wrote {len(files)} files to {output_dir}")
    return RunArtifacts(output_dir, rows, files, run_id)


def _record(manifest: RunManifest, rows: List[SweepRow]) -> int:
    from app.database import SessionLocal, init_db
    from app.services.run_store_service import record_run

    init_db()
    db = SessionLocal()
    try:
        run = record_run(db, manifest, rows)
        return run.id
    finally:
        db.close()
