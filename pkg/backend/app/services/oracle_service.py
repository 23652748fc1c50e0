"""
Oracle Service - exhaustive search over a pair's joint strategy grid.

Ground truth for the stochastic solver and a Nash-equilibrium checker.
"""

import logging
from typing import Optional

import numpy as np

from app.config import settings
from app.exceptions import NoFeasibleStrategyError, OracleBudgetExceededError
from app.schemas.enums import RateMode
from app.schemas.grid import StrategyGrid
from app.schemas.result import OracleReport
from app.schemas.scenario import MovingPair, PositionProfile, Scenario
from app.services.game_service import PairGame

logger = logging.getLogger(__name__)

# Relative slack before a deviation counts as a strict improvement
NASH_TOLERANCE = 1e-12


class OracleService:
    def __init__(
        self,
        scenario: Scenario,
        grid: StrategyGrid,
        pair: MovingPair,
        mode: RateMode = RateMode.EXACT,
        max_profiles: Optional[int] = None,
    ):
        self.game = PairGame(scenario, grid, pair, mode)
        self.max_profiles = settings.ORACLE_MAX_PROFILES if max_profiles is None else max_profiles

    def brute_force_best(self) -> OracleReport:
        game = self.game
        first_candidates = np.flatnonzero(game.arena_mask)
        total = int(first_candidates.size) ** 2
        if total > self.max_profiles:
            raise OracleBudgetExceededError(total, self.max_profiles)

        feasible_count = 0
        best = None  # (theta, moved, first, second)
        second_moved = game.displacement_vector(1)
        for first in first_candidates:
            # Utilities of the second mover over the grid with the first fixed
            utilities = game.utilities(1, int(first))
            feasible = np.isfinite(utilities)
            count = int(feasible.sum())
            if count == 0:
                continue
            feasible_count += count

            thetas = np.where(feasible, game.theta_vector(utilities), -np.inf)
            top = thetas.max()
            tied = np.flatnonzero(thetas == top)
            moved = game.displacement_vector(0)[first] + second_moved[tied]
            pick = int(tied[np.argmin(moved)])  # argmin keeps the lowest index on ties
            candidate = (float(top), float(moved.min()), int(first), pick)
            if best is None or (-candidate[0], candidate[1]) < (-best[0], best[1]):
                best = candidate

        if best is None:
            raise NoFeasibleStrategyError(game.pair.key, "no feasible joint profile on the grid")

        strategies = [best[2], best[3]]
        profile = game.profile(strategies)
        report = OracleReport(
            grid=game.grid,
            pair=game.pair,
            best_theta=best[0],
            best_profile=profile,
            feasible_profiles=feasible_count,
            total_profiles=total,
            nash_certificate=self._is_nash(strategies),
        )
        logger.info(
            f"🔎 Oracle {game.pair.key}: {feasible_count}/{total} feasible profiles, "
            f"max theta {best[0]:.6g} b/s"
        )
        return report

    def verify_nash(self, profile: PositionProfile) -> bool:
        strategies = [self.game.index_of(profile.get(uid)) for uid in self.game.pair.members]
        return self._is_nash(strategies)

    def _is_nash(self, strategies) -> bool:
        for slot in (0, 1):
            utilities = self.game.utilities(slot, strategies[1 - slot])
            current = utilities[strategies[slot]]
            if not np.isfinite(current):
                return False
            if utilities.max() > current + NASH_TOLERANCE * abs(current):
                return False
        return True


def brute_force_best(
    scenario: Scenario,
    pair: MovingPair,
    grid: StrategyGrid,
    mode: RateMode = RateMode.EXACT,
    max_profiles: Optional[int] = None,
) -> OracleReport:
    return OracleService(scenario, grid, pair, mode, max_profiles).brute_force_best()


def verify_nash(
    scenario: Scenario,
    pair: MovingPair,
    grid: StrategyGrid,
    profile: PositionProfile,
    mode: RateMode = RateMode.EXACT,
) -> bool:
    return OracleService(scenario, grid, pair, mode).verify_nash(profile)
