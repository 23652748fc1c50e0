"""
Game Service - utilities and throughput of the all-user movement game.

Every user's rate depends on the complete position profile, so the moving
pair shares one common-interest utility:

    hat_u = -sum(1 / R_x)      utility = -1 / hat_u      theta = L * utility
"""

import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.exceptions import InfeasibleProfileError, ScenarioValidationError
from app.schemas.enums import RateMode
from app.schemas.grid import StrategyGrid
from app.schemas.scenario import MovingPair, Position, PositionProfile, Scenario
from app.services.radio_service import rates_from_distances

logger = logging.getLogger(__name__)


# Rate arithmetic


def hat_utility_from_rates(rates: Sequence[float]) -> float:
    return -float(np.sum(1.0 / np.asarray(rates, dtype=float)))


def utility_from_rates(rates: Sequence[float]) -> float:
    return -1.0 / hat_utility_from_rates(rates)


def throughput_from_rates(rates: Sequence[float]) -> float:
    return len(rates) * utility_from_rates(rates)


def batch_hat_utility(distances_m: np.ndarray, scenario: Scenario, mode: RateMode) -> Tuple[np.ndarray, np.ndarray]:
    """hat_u for each row of an (S, L) distance matrix, plus capture feasibility per row."""
    rates, captured = rates_from_distances(distances_m, scenario.radio, mode)
    hat = -np.sum(1.0 / rates, axis=-1)
    return hat, np.all(captured, axis=-1)


# Profile-level operations


def profile_distances(scenario: Scenario, profile: PositionProfile) -> np.ndarray:
    missing = [uid for uid in scenario.user_ids if uid not in profile.positions]
    if missing:
        raise ScenarioValidationError([f"profile has no position for user {uid!r}" for uid in missing])

    outside = [uid for uid in scenario.user_ids if not scenario.arena.contains(profile.positions[uid])]
    if outside:
        raise InfeasibleProfileError(outside, reason="arena")

    return np.array([profile.positions[uid].distance_m for uid in scenario.user_ids], dtype=float)


def per_user_rates(
    scenario: Scenario,
    profile: PositionProfile,
    mode: RateMode = RateMode.EXACT,
) -> List[Tuple[str, float]]:
    distances = profile_distances(scenario, profile)
    rates, captured = rates_from_distances(distances, scenario.radio, mode)
    if not np.all(captured):
        failing = [uid for uid, ok in zip(scenario.user_ids, captured) if not ok]
        raise InfeasibleProfileError(failing)
    return [(uid, float(rate)) for uid, rate in zip(scenario.user_ids, rates)]


def hat_utility(scenario: Scenario, profile: PositionProfile, mode: RateMode = RateMode.EXACT) -> float:
    return hat_utility_from_rates([rate for _, rate in per_user_rates(scenario, profile, mode)])


def utility(scenario: Scenario, profile: PositionProfile, mode: RateMode = RateMode.EXACT) -> float:
    return -1.0 / hat_utility(scenario, profile, mode)


def system_throughput(scenario: Scenario, profile: PositionProfile, mode: RateMode = RateMode.EXACT) -> float:
    return len(scenario.users) * utility(scenario, profile, mode)


def improvement_ratio(theta_pro: float, theta_non_move: float) -> float:
    if not theta_non_move > 0:
        raise ValueError(f"no-move throughput must be positive, got {theta_non_move}")
    return theta_pro / theta_non_move


def player_utility(
    scenario: Scenario,
    pair: MovingPair,
    player: str,
    own: Position,
    opponent: Position,
    mode: RateMode = RateMode.EXACT,
) -> float:
    """hat_u of ``player`` when it stands at ``own`` and the other mover at ``opponent``."""
    profile = scenario.initial_profile().with_positions({player: own, pair.other(player): opponent})
    return hat_utility(scenario, profile, mode)


def displacement(scenario: Scenario, profile: PositionProfile) -> float:
    """Total Euclidean distance between the profile and the initial positions."""
    total = 0.0
    for user in scenario.users:
        x0, y0 = user.offset()
        x1, y1 = profile.positions[user.id].offset()
        total += math.hypot(x1 - x0, y1 - y0)
    return total


def require_pair(scenario: Scenario, pair: MovingPair) -> None:
    unknown = [uid for uid in pair.members if uid not in scenario.user_ids]
    if unknown:
        raise ScenarioValidationError([f"moving user {uid!r} is not in the scenario" for uid in unknown])


class PairGame:
    """
    The finite game played by one moving pair on a strategy grid.

    Non-movers stay at their initial positions; each mover picks a grid
    strategy. Utility vectors are evaluated in batches over the whole grid and
    cached per (player slot, opponent strategy). Infeasible strategies (outside
    the arena, or breaking capture for any user) carry -inf.
    """

    def __init__(self, scenario: Scenario, grid: StrategyGrid, pair: MovingPair, mode: RateMode = RateMode.EXACT):
        require_pair(scenario, pair)
        self.scenario = scenario
        self.grid = grid
        self.pair = pair
        self.mode = mode
        self.n_users = len(scenario.users)
        self.slots = (scenario.index_of(pair.first), scenario.index_of(pair.second))

        self.grid_d, self.grid_a = grid.arrays()
        self.grid_x, self.grid_y = grid.offsets()
        self.arena_mask = grid.feasible_mask(scenario.arena)
        self._base = scenario.initial_distances()
        self._cache: Dict[Tuple[int, int], np.ndarray] = {}

        # Per-slot displacement of every grid point from the mover's initial position
        self._displacement = []
        for uid in pair.members:
            x0, y0 = scenario.user(uid).offset()
            self._displacement.append(np.hypot(self.grid_x - x0, self.grid_y - y0))

    @property
    def size(self) -> int:
        return self.grid.size

    def player(self, slot: int) -> str:
        return self.pair.members[slot]

    def initial_strategies(self) -> List[int]:
        """Initial mover positions snapped to the grid"""
        return [self.grid.snap(self.scenario.user(uid).position, self.scenario.arena) for uid in self.pair.members]

    def utilities(self, slot: int, opponent_strategy: int) -> np.ndarray:
        key = (slot, opponent_strategy)
        cached = self._cache.get(key)
        if cached is None:
            cached = self._evaluate(slot, self.grid_d[opponent_strategy])
            if not self.arena_mask[opponent_strategy]:
                cached = np.full(self.size, -np.inf)
            self._cache[key] = cached
        return cached

    def utilities_against(self, slot: int, opponent_distance_m: float) -> np.ndarray:
        """Uncached variant for an arbitrary (possibly off-grid) opponent distance."""
        return self._evaluate(slot, opponent_distance_m)

    def _evaluate(self, slot: int, opponent_distance_m: float) -> np.ndarray:
        distances = np.tile(self._base, (self.size, 1))
        distances[:, self.slots[slot]] = self.grid_d
        distances[:, self.slots[1 - slot]] = opponent_distance_m
        hat, feasible = batch_hat_utility(distances, self.scenario, self.mode)
        return np.where(feasible & self.arena_mask, hat, -np.inf)

    def joint_hat(self, strategies: Sequence[int]) -> float:
        return float(self.utilities(0, strategies[1])[strategies[0]])

    def raw_hat(self, strategies: Sequence[int]) -> float:
        """hat_u ignoring capture feasibility; used only for scaling."""
        distances = self._base.copy()
        distances[self.slots[0]] = self.grid_d[strategies[0]]
        distances[self.slots[1]] = self.grid_d[strategies[1]]
        hat, _ = batch_hat_utility(distances[None, :], self.scenario, self.mode)
        return float(hat[0])

    def theta(self, hat: float) -> float:
        return -self.n_users / hat

    def theta_vector(self, hats: np.ndarray) -> np.ndarray:
        return -self.n_users / hats

    def displacement(self, strategies: Sequence[int]) -> float:
        return float(self._displacement[0][strategies[0]] + self._displacement[1][strategies[1]])

    def displacement_vector(self, slot: int) -> np.ndarray:
        return self._displacement[slot]

    def nearest(self, candidates: np.ndarray, strategy: int) -> int:
        """Candidate closest to ``strategy`` in the plane; ties toward smaller distance then index."""
        gap = np.hypot(self.grid_x[candidates] - self.grid_x[strategy], self.grid_y[candidates] - self.grid_y[strategy])
        order = np.lexsort((candidates, self.grid_d[candidates], np.round(gap, 9)))
        return int(candidates[order[0]])

    def profile(self, strategies: Sequence[int]) -> PositionProfile:
        updates = {uid: self.grid.position(int(s)) for uid, s in zip(self.pair.members, strategies)}
        return self.scenario.initial_profile().with_positions(updates)

    def index_of(self, position: Position) -> int:
        return self.grid.snap(position, self.scenario.arena)


def selection_key(theta: float, moved: float, label: str = "") -> Tuple[float, float, str]:
    """Sort key (ascending = preferred): higher theta, then less displacement, then label order."""
    return -theta, moved, label


def best_of(candidates: List[Tuple[float, float, str, object]]) -> Optional[object]:
    """Pick the payload with the preferred (theta, displacement, label)."""
    if not candidates:
        return None
    return min(candidates, key=lambda item: selection_key(item[0], item[1], item[2]))[3]
