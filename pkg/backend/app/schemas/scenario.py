import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.schemas.enums import UserLabel
from app.schemas.radio import RadioParams

# Boundary tolerance in meters; users may stand on the arena edge
ARENA_TOLERANCE_M = 1e-9


class Position(BaseModel):
    """Polar position relative to the AP: distance (m) and angle (deg) from its horizontal axis."""

    distance_m: float = Field(..., ge=0, alias="d")
    angle_deg: float = Field(0.0, alias="psi")

    class Config:
        frozen = True
        populate_by_name = True

    @field_validator("angle_deg")
    @classmethod
    def normalize_angle(cls, value: float) -> float:
        angle = float(value) % 360.0
        # -1e-17 % 360 rounds to 360.0
        return 0.0 if angle >= 360.0 else angle

    def offset(self) -> Tuple[float, float]:
        """Cartesian offset from the AP"""
        rad = math.radians(self.angle_deg)
        return self.distance_m * math.cos(rad), self.distance_m * math.sin(rad)

    def to_xy(self, arena: "Arena") -> Tuple[float, float]:
        dx, dy = self.offset()
        return arena.ap_position[0] + dx, arena.ap_position[1] + dy


class Arena(BaseModel):
    width_m: float = Field(60.0, gt=0, alias="width")
    height_m: float = Field(60.0, gt=0, alias="height")
    ap_position: Tuple[float, float] = Field((30.0, 30.0), alias="ap")

    class Config:
        frozen = True
        populate_by_name = True

    @model_validator(mode="after")
    def check_ap_inside(self):
        x, y = self.ap_position
        if not (0.0 < x < self.width_m and 0.0 < y < self.height_m):
            raise ValueError(f"AP at ({x}, {y}) must lie strictly inside the {self.width_m}x{self.height_m} m arena")
        return self

    def contains_xy(self, x, y):
        """Inclusive bounds check; accepts scalars or numpy arrays."""
        inside = (
            (x >= -ARENA_TOLERANCE_M)
            & (x <= self.width_m + ARENA_TOLERANCE_M)
            & (y >= -ARENA_TOLERANCE_M)
            & (y <= self.height_m + ARENA_TOLERANCE_M)
        )
        return bool(inside) if np.ndim(inside) == 0 else inside

    def contains(self, position: Position) -> bool:
        return self.contains_xy(*position.to_xy(self))

    def contains_polar(self, distances_m: np.ndarray, angles_deg: np.ndarray) -> np.ndarray:
        rad = np.radians(angles_deg)
        x = self.ap_position[0] + distances_m * np.cos(rad)
        y = self.ap_position[1] + distances_m * np.sin(rad)
        return self.contains_xy(x, y)


class UserSpec(Position):
    id: str = Field(..., min_length=1)
    label: Optional[UserLabel] = None

    @property
    def position(self) -> Position:
        return Position(distance_m=self.distance_m, angle_deg=self.angle_deg)


class Scenario(BaseModel):
    name: Optional[str] = None
    arena: Arena = Field(default_factory=Arena)
    radio: RadioParams = Field(default_factory=RadioParams)
    users: List[UserSpec]

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_users(self):
        if len(self.users) < 2:
            raise ValueError(f"at least 2 users are required, got {len(self.users)}")

        seen = set()
        for user in self.users:
            if user.id in seen:
                raise ValueError(f"duplicate user id {user.id!r}")
            seen.add(user.id)

        outside = [
            f"user {user.id!r} at (d={user.distance_m}, psi={user.angle_deg}) lies outside the arena"
            for user in self.users
            if not self.arena.contains(user)
        ]
        if outside:
            raise ValueError("; ".join(outside))
        return self

    @property
    def user_ids(self) -> List[str]:
        return [user.id for user in self.users]

    def index_of(self, user_id: str) -> int:
        for index, user in enumerate(self.users):
            if user.id == user_id:
                return index
        raise KeyError(user_id)

    def user(self, user_id: str) -> UserSpec:
        return self.users[self.index_of(user_id)]

    def users_with_label(self, label: UserLabel) -> List[str]:
        return [user.id for user in self.users if user.label == label]

    def initial_profile(self) -> "PositionProfile":
        return PositionProfile(positions={user.id: user.position for user in self.users})

    def initial_distances(self) -> np.ndarray:
        return np.array([user.distance_m for user in self.users], dtype=float)


class MovingPair(BaseModel):
    first: str
    second: str

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_distinct(self):
        if self.first == self.second:
            raise ValueError(f"moving pair needs two different users, got {self.first!r} twice")
        return self

    @property
    def members(self) -> Tuple[str, str]:
        return self.first, self.second

    @property
    def key(self) -> str:
        return f"{self.first}-{self.second}"

    def other(self, player: str) -> str:
        if player == self.first:
            return self.second
        if player == self.second:
            return self.first
        raise KeyError(player)


class PositionProfile(BaseModel):
    positions: Dict[str, Position]

    class Config:
        frozen = True

    def get(self, user_id: str) -> Position:
        return self.positions[user_id]

    def with_positions(self, updates: Dict[str, Position]) -> "PositionProfile":
        merged = dict(self.positions)
        merged.update(updates)
        return PositionProfile(positions=merged)


class PatternSpec(BaseModel):
    pattern_id: str
    fixed: Dict[str, Position]
    d_a_values: List[float] = Field(default_factory=lambda: [float(d) for d in range(1, 31)])
    psi_a_deg: float = 90.0
    approximate: bool = False
    note: Optional[str] = None
