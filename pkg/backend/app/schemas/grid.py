import re
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator

from app.schemas.scenario import Arena, Position

_CUSTOM_SPEC = re.compile(
    r"^\s*(?P<d0>\d+(\.\d+)?)\s*:\s*(?P<d1>\d+(\.\d+)?)\s*:\s*(?P<ds>\d+(\.\d+)?)\s*/\s*(?P<astep>\d+(\.\d+)?)\s*$"
)


def _frange(start: float, stop: float, step: float) -> List[float]:
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [float(round(start + i * step, 9)) for i in range(max(count, 0))]


class StrategyGrid(BaseModel):
    """Discretized strategy space shared by both movers.

    Strategy index s maps to (distances_m[s // len(angles_deg)], angles_deg[s % len(angles_deg)]).
    """

    distances_m: List[float] = Field(..., min_length=1)
    angles_deg: List[float] = Field(..., min_length=1)

    class Config:
        frozen = True

    @field_validator("distances_m")
    @classmethod
    def check_distances(cls, values: List[float]) -> List[float]:
        if any(d < 0 for d in values):
            raise ValueError("grid distances must be non-negative")
        return sorted(float(d) for d in values)

    @field_validator("angles_deg")
    @classmethod
    def check_angles(cls, values: List[float]) -> List[float]:
        return sorted({float(a) % 360.0 for a in values})

    # Presets

    @classmethod
    def default(cls) -> "StrategyGrid":
        return cls(distances_m=_frange(1, 30, 1), angles_deg=_frange(0, 350, 10))

    @classmethod
    def oracle(cls) -> "StrategyGrid":
        return cls(distances_m=_frange(5, 30, 5), angles_deg=_frange(0, 315, 45))

    @classmethod
    def coarse(cls) -> "StrategyGrid":
        return cls(distances_m=_frange(6, 30, 6), angles_deg=_frange(0, 315, 45))

    @classmethod
    def from_spec(cls, spec: str) -> "StrategyGrid":
        """Build a grid from a preset name or a ``D0:D1:DSTEP/ASTEP`` string."""
        presets = {"default": cls.default, "oracle": cls.oracle, "coarse": cls.coarse}
        name = spec.strip().lower()
        if name in presets:
            return presets[name]()

        match = _CUSTOM_SPEC.match(spec)
        if not match:
            raise ValueError(f"Unknown grid spec {spec!r}; use one of {sorted(presets)} or D0:D1:DSTEP/ASTEP")
        d0, d1, ds = float(match["d0"]), float(match["d1"]), float(match["ds"])
        astep = float(match["astep"])
        if ds <= 0 or astep <= 0 or d1 < d0:
            raise ValueError(f"Invalid grid spec {spec!r}")
        return cls(distances_m=_frange(d0, d1, ds), angles_deg=_frange(0, 360 - 1e-9, astep))

    # Flattened views

    @property
    def size(self) -> int:
        return len(self.distances_m) * len(self.angles_deg)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        """Per-strategy (distance, angle) arrays in index order"""
        d, a = np.meshgrid(np.asarray(self.distances_m), np.asarray(self.angles_deg), indexing="ij")
        return d.ravel(), a.ravel()

    def position(self, index: int) -> Position:
        n_angles = len(self.angles_deg)
        return Position(distance_m=self.distances_m[index // n_angles], angle_deg=self.angles_deg[index % n_angles])

    def feasible_mask(self, arena: Arena) -> np.ndarray:
        d, a = self.arrays()
        return arena.contains_polar(d, a)

    def offsets(self) -> Tuple[np.ndarray, np.ndarray]:
        d, a = self.arrays()
        rad = np.radians(a)
        return d * np.cos(rad), d * np.sin(rad)

    def snap(self, position: Position, arena: Arena) -> int:
        """Index of the arena-feasible grid point nearest to ``position`` (ties toward smaller distance)."""
        mask = self.feasible_mask(arena)
        if not mask.any():
            raise ValueError("strategy grid has no point inside the arena")
        x, y = self.offsets()
        px, py = position.offset()
        gap = np.hypot(x - px, y - py)
        d, _ = self.arrays()
        candidates = np.flatnonzero(mask)
        # lexsort uses the last key as primary; index order breaks remaining ties
        order = np.lexsort((candidates, d[candidates], np.round(gap[candidates], 9)))
        return int(candidates[order[0]])
