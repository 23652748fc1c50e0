"""
Scenario Service - experimental patterns and scenario/manifest files.

Patterns place user A on a sweep (d_A, psi_A) while users B, C and D sit at
fixed positions from the bundled table. A and B are existing users, C and D
are new users.
"""

import json
import logging
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Union

from pydantic import ValidationError

from app.exceptions import ManifestError, ScenarioParseError, ScenarioValidationError, UnknownPatternError
from app.schemas.enums import UserLabel
from app.schemas.manifest import RunManifest
from app.schemas.radio import RadioParams
from app.schemas.scenario import Arena, PatternSpec, Position, Scenario, UserSpec

logger = logging.getLogger(__name__)

PATTERN_TABLE = Path(__file__).parent.parent / "data" / "patterns.json"
PATTERN_IDS = ["I", "II", "III", "IV", "V", "VI"]

_ALIASES = {str(number): roman for number, roman in enumerate(PATTERN_IDS, start=1)}

PathLike = Union[str, Path]


def normalize_pattern_id(pattern_id: Union[str, int]) -> str:
    key = str(pattern_id).strip().upper()
    key = _ALIASES.get(key, key)
    if key not in PATTERN_IDS:
        raise UnknownPatternError(f"Unknown pattern {pattern_id!r}; expected one of {', '.join(PATTERN_IDS)}")
    return key


@lru_cache(maxsize=4)
def _load_table(path: str) -> Dict[str, PatternSpec]:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return {
        pattern_id: PatternSpec(
            pattern_id=pattern_id,
            fixed={uid: Position(**pos) for uid, pos in entry["fixed"].items()},
            psi_a_deg=entry.get("psi_a_deg", 90.0),
            approximate=entry.get("approximate", False),
            note=entry.get("note"),
        )
        for pattern_id, entry in raw["patterns"].items()
    }


def pattern_spec(pattern_id: Union[str, int], table: Optional[PathLike] = None) -> PatternSpec:
    key = normalize_pattern_id(pattern_id)
    specs = _load_table(str(table or PATTERN_TABLE))
    if key not in specs:
        raise UnknownPatternError(f"Pattern {key} is missing from {table or PATTERN_TABLE}")
    return specs[key]


def _validation_messages(error: ValidationError, source: str) -> List[str]:
    messages = []
    for item in error.errors():
        location = ".".join(str(part) for part in item["loc"]) or "<root>"
        messages.append(f"{source}: {location}: {item['msg']}")
    return messages


def make_pattern(
    pattern_id: Union[str, int],
    d_a: float,
    psi_a: Optional[float] = None,
    radio: Optional[RadioParams] = None,
    arena: Optional[Arena] = None,
    table: Optional[PathLike] = None,
) -> Scenario:
    spec = pattern_spec(pattern_id, table)
    psi = spec.psi_a_deg if psi_a is None else psi_a

    users = [UserSpec(id="A", distance_m=d_a, angle_deg=psi, label=UserLabel.EXISTING)]
    for uid, label in (("B", UserLabel.EXISTING), ("C", UserLabel.NEW), ("D", UserLabel.NEW)):
        fixed = spec.fixed[uid]
        users.append(UserSpec(id=uid, distance_m=fixed.distance_m, angle_deg=fixed.angle_deg, label=label))

    try:
        return Scenario(
            name=f"pattern-{spec.pattern_id}",
            arena=arena or Arena(),
            radio=radio or RadioParams(),
            users=users,
        )
    except ValidationError as e:
        raise ScenarioValidationError(_validation_messages(e, f"pattern {spec.pattern_id}")) from e


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(f"{source}: line {e.lineno} column {e.colno}: {e.msg}") from e

    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        raise ScenarioValidationError(_validation_messages(e, source)) from e


def load_scenario(path: PathLike) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioParseError(f"{path}: {e.strerror or e}") from e
    scenario = parse_scenario(text, str(path))
    logger.info(f"📄 Loaded scenario {scenario.name or path.name} with {len(scenario.users)} users")
    return scenario


def dump_scenario(scenario: Scenario) -> str:
    return scenario.model_dump_json(by_alias=True, indent=2)


def save_scenario(scenario: Scenario, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_scenario(scenario), encoding="utf-8")
    return path


def load_manifest(path: PathLike) -> RunManifest:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ManifestError(f"{path}: {e.strerror or e}") from e
    except json.JSONDecodeError as e:
        raise ManifestError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e

    try:
        manifest = RunManifest.model_validate(data)
    except ValidationError as e:
        raise ManifestError("; ".join(_validation_messages(e, str(path)))) from e

    for pattern_id in manifest.patterns:
        normalize_pattern_id(pattern_id)
    if manifest.scenario_path and not Path(manifest.scenario_path).is_absolute():
        # Scenario files are resolved next to the manifest
        manifest = manifest.model_copy(update={"scenario_path": str(path.parent / manifest.scenario_path)})
    return manifest
