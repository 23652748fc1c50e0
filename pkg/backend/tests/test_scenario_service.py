import json

import pytest

from app.exceptions import ManifestError, ScenarioParseError, ScenarioValidationError, UnknownPatternError
from app.schemas.enums import Method, UserLabel
from app.schemas.grid import StrategyGrid
from app.schemas.scenario import Position
from app.services import scenario_service
from app.services.scenario_service import load_manifest, load_scenario, make_pattern, save_scenario


@pytest.mark.parametrize("pattern_id,d_a,ring", [("I", 5, 5.0), ("II", 30, 15.0), ("III", 30, 30.0)])
def test_balanced_patterns(pattern_id, d_a, ring):
    scenario = make_pattern(pattern_id, d_a, 90)
    assert scenario.user_ids == ["A", "B", "C", "D"]
    assert scenario.user("A").distance_m == d_a
    assert scenario.user("A").angle_deg == 90.0
    assert [scenario.user(uid).distance_m for uid in "BCD"] == [ring] * 3
    assert [scenario.user(uid).angle_deg for uid in "BCD"] == [0.0, 180.0, 270.0]


def test_pattern_labels():
    scenario = make_pattern("II", 10, 90)
    assert scenario.users_with_label(UserLabel.EXISTING) == ["A", "B"]
    assert scenario.users_with_label(UserLabel.NEW) == ["C", "D"]


def test_pattern_id_aliases():
    assert scenario_service.normalize_pattern_id("iii") == "III"
    assert scenario_service.normalize_pattern_id(2) == "II"
    with pytest.raises(UnknownPatternError):
        scenario_service.normalize_pattern_id("VII")


def test_mixed_patterns_are_marked_approximate():
    for pattern_id in ("IV", "V", "VI"):
        spec = scenario_service.pattern_spec(pattern_id)
        assert spec.approximate
        make_pattern(pattern_id, 24, 90)
    assert not scenario_service.pattern_spec("I").approximate


def test_pattern_six_supports_diagonal_sweep():
    scenario = make_pattern("VI", 24, 135)
    assert scenario.user("A").angle_deg == 135.0


def test_user_a_outside_arena_is_rejected():
    with pytest.raises(ScenarioValidationError) as exc:
        make_pattern("I", 40, 0)
    assert "'A'" in str(exc.value)


def test_save_then_load_gives_equal_scenario(tmp_path):
    scenario = make_pattern("I", 5, 90)
    path = save_scenario(scenario, tmp_path / "pattern.json")
    assert load_scenario(path) == scenario

    written = json.loads(path.read_text())
    assert written["users"][0] == {"d": 5.0, "psi": 90.0, "id": "A", "label": "existing"}
    assert written["arena"]["ap"] == [30.0, 30.0]


def _write(tmp_path, payload, name="scenario.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return path


def test_user_outside_arena_in_file_is_named(tmp_path):
    path = _write(tmp_path, {"users": [{"id": "A", "d": 5, "psi": 0}, {"id": "far", "d": 50, "psi": 0}]})
    with pytest.raises(ScenarioValidationError) as exc:
        load_scenario(path)
    assert "'far'" in str(exc.value)
    assert str(path) in str(exc.value)


def test_single_user_file_is_rejected(tmp_path):
    path = _write(tmp_path, {"users": [{"id": "A", "d": 5, "psi": 0}]})
    with pytest.raises(ScenarioValidationError) as exc:
        load_scenario(path)
    assert "at least 2 users" in str(exc.value)


def test_bad_field_location_is_reported(tmp_path):
    path = _write(tmp_path, {"users": [{"id": "A", "d": -1, "psi": 0}, {"id": "B", "d": 5}]})
    with pytest.raises(ScenarioValidationError) as exc:
        load_scenario(path)
    assert "users.0.d" in str(exc.value)


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{ users: ")
    with pytest.raises(ScenarioParseError):
        load_scenario(path)


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioParseError):
        load_scenario(tmp_path / "missing.json")


def test_negative_angles_are_normalized(tmp_path):
    path = _write(tmp_path, {"users": [{"id": "A", "d": 5, "psi": -90}, {"id": "B", "d": 5, "psi": 0}]})
    assert load_scenario(path).user("A").angle_deg == 270.0


def test_load_manifest_resolves_scenario_next_to_manifest(tmp_path):
    save_scenario(make_pattern("I", 5, 90), tmp_path / "inputs" / "s.json")
    path = _write(tmp_path, {"name": "file-run", "scenario_path": "inputs/s.json", "methods": ["proposed"]}, "run.json")
    manifest = load_manifest(path)
    assert manifest.scenario_path == str(tmp_path / "inputs" / "s.json")
    assert manifest.methods == [Method.PROPOSED]


def test_manifest_defaults():
    manifest = scenario_service.RunManifest(patterns=["I"])
    assert manifest.d_a_values == [float(d) for d in range(1, 31)]
    assert manifest.methods == [Method.PROPOSED, Method.NO_MOVE]
    assert manifest.psi_a_deg == 90.0


@pytest.mark.parametrize(
    "payload",
    [
        {"patterns": ["I"], "scenario_path": "s.json"},
        {},
        {"patterns": ["I"], "methods": ["teleport"]},
        {"patterns": ["I"], "methods": []},
    ],
)
def test_invalid_manifests(tmp_path, payload):
    with pytest.raises(ManifestError):
        load_manifest(_write(tmp_path, payload, "run.json"))


def test_manifest_with_unknown_pattern(tmp_path):
    with pytest.raises(UnknownPatternError):
        load_manifest(_write(tmp_path, {"patterns": ["IX"]}, "run.json"))


def test_grid_presets_and_custom_spec():
    assert StrategyGrid.default().size == 30 * 36
    assert StrategyGrid.oracle().size == 48
    assert StrategyGrid.coarse().size == 40
    custom = StrategyGrid.from_spec("5:30:5/90")
    assert custom.distances_m == [5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
    assert custom.angles_deg == [0.0, 90.0, 180.0, 270.0]
    with pytest.raises(ValueError):
        StrategyGrid.from_spec("bogus")


def test_grid_snap_prefers_nearest_point(pattern_one):
    grid = StrategyGrid.oracle()
    index = grid.snap(Position(distance_m=6.0, angle_deg=2.0), pattern_one.arena)
    assert grid.position(index) == Position(distance_m=5.0, angle_deg=0.0)
