import json

import pytest

from app.schemas.enums import Method
from app.schemas.grid import StrategyGrid
from app.schemas.manifest import RunManifest
from app.schemas.sap import SapConfig
from app.services import game_service, report_service, sweep_service
from app.services.scenario_service import make_pattern, save_scenario

FAST_SAP = SapConfig(max_steps=5)


def _manifest(tmp_path, **overrides) -> RunManifest:
    values = dict(
        name="test",
        patterns=["I"],
        d_a_values=[5.0, 15.0],
        grid="oracle",
        sap=FAST_SAP,
        master_seed=99,
        output_dir=str(tmp_path),
    )
    values.update(overrides)
    return RunManifest(**values)


def test_run_sweep_rows(oracle_grid):
    rows = sweep_service.run_sweep(
        "I", [Method.PROPOSED, Method.NO_MOVE], [5.0, 15.0], grid=oracle_grid, sap_config=FAST_SAP, master_seed=1
    )
    assert [(row.method, row.d_a_m) for row in rows] == [
        (Method.PROPOSED, 5.0),
        (Method.NO_MOVE, 5.0),
        (Method.PROPOSED, 15.0),
        (Method.NO_MOVE, 15.0),
    ]
    assert all(row.pattern == "I" for row in rows)
    assert rows[0].seed == rows[1].seed != rows[2].seed


def test_delta_theta_matches_no_move_row(oracle_grid):
    rows = sweep_service.run_sweep(
        "II", [Method.PROPOSED, Method.NO_MOVE, Method.GREEDY], [10.0], grid=oracle_grid, sap_config=FAST_SAP
    )
    no_move = next(row for row in rows if row.method == Method.NO_MOVE)
    assert no_move.delta_theta == 1.0
    for row in rows:
        expected = game_service.improvement_ratio(row.theta_bps, no_move.theta_bps)
        assert row.delta_theta == pytest.approx(expected, rel=1e-9)


def test_full_default_sweep_row_count(tmp_path):
    manifest = _manifest(tmp_path, d_a_values=[float(d) for d in range(1, 31)], sap=SapConfig(max_steps=2))
    artifacts = sweep_service.run_manifest(manifest)
    assert len(artifacts.rows) == 60
    assert len(report_service.read_sweep_csv(tmp_path / "I_proposed.csv")) == 30
    assert len(report_service.read_sweep_csv(tmp_path / "I_no-move.csv")) == 30


def test_run_manifest_writes_artifacts(tmp_path):
    artifacts = sweep_service.run_manifest(_manifest(tmp_path, export_traces=True))
    names = {path.name for path in artifacts.files}
    assert {"I_proposed.csv", "I_no-move.csv", "summary.csv", "provenance.json"} <= names
    assert (tmp_path / "traces" / "I_proposed_dA5.csv").exists()

    provenance = json.loads((tmp_path / "provenance.json").read_text())
    assert provenance["manifest"]["master_seed"] == 99
    # Two points, each shared by both method rows
    assert [point["seed"] for point in provenance["points"]] == [artifacts.rows[0].seed, artifacts.rows[2].seed]
    assert "numpy" in provenance["versions"]


def test_same_seed_gives_byte_identical_csvs(tmp_path):
    first = sweep_service.run_manifest(_manifest(tmp_path / "a"))
    second = sweep_service.run_manifest(_manifest(tmp_path / "b"))
    for path in first.files:
        if path.suffix != ".csv":
            continue
        assert path.read_bytes() == (second.output_dir / path.name).read_bytes()


def test_worker_processes_give_the_same_rows(tmp_path):
    serial = sweep_service.run_manifest(_manifest(tmp_path / "serial"))
    pooled = sweep_service.run_manifest(_manifest(tmp_path / "pooled", workers=2))
    assert pooled.rows == serial.rows


def test_scenario_file_manifest(tmp_path):
    save_scenario(make_pattern("II", 20, 90), tmp_path / "s.json")
    manifest = _manifest(tmp_path, patterns=[], scenario_path=str(tmp_path / "s.json"))
    artifacts = sweep_service.run_manifest(manifest)
    assert [row.pattern for row in artifacts.rows] == ["pattern-II", "pattern-II"]
    assert artifacts.rows[0].d_a_m == 20.0


def test_recorded_run(tmp_path):
    artifacts = sweep_service.run_manifest(_manifest(tmp_path, record=True))
    assert artifacts.run_id is not None


def test_custom_grid_spec(tmp_path):
    artifacts = sweep_service.run_manifest(_manifest(tmp_path, grid="5:30:5/90", d_a_values=[5.0]))
    positions = artifacts.rows[0].user_positions
    grid = StrategyGrid.from_spec("5:30:5/90")
    for position in positions.values():
        assert position.angle_deg in grid.angles_deg
