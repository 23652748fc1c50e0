"""
SAP Service - Spatial Adaptive Play for one moving pair.

Each step picks one of the two movers uniformly at random and resamples its
grid position from the logit (softmax) distribution over its feasible
strategies, with inverse temperature beta(k). The best profile visited is
returned; the starting (snapped) profile counts as visited when feasible.
When neither mover has a feasible reply, the pair restarts at its best
feasible joint profile.
"""

import logging
from typing import List, NamedTuple, Optional

import numpy as np

from app.exceptions import NoFeasibleStrategyError
from app.schemas.enums import RateMode, UtilityScale
from app.schemas.grid import StrategyGrid
from app.schemas.sap import SapConfig, SapStep, SapTrace
from app.schemas.scenario import MovingPair, Position, PositionProfile, Scenario
from app.services.game_service import PairGame, selection_key

logger = logging.getLogger(__name__)


class LogitDistribution(NamedTuple):
    strategies: np.ndarray  # feasible grid indices
    probabilities: np.ndarray
    utilities: np.ndarray


class SapOutcome(NamedTuple):
    profile: Optional[PositionProfile]
    theta: Optional[float]
    trace: SapTrace


def logit_probabilities(utilities: np.ndarray, beta: float) -> np.ndarray:
    """Softmax of beta * utilities with max-shift."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    z = beta * np.asarray(utilities, dtype=float)
    z = z - z.max()
    weights = np.exp(z)
    return weights / weights.sum()


def logit_distribution(
    scenario: Scenario,
    grid: StrategyGrid,
    pair: MovingPair,
    player: str,
    opponent_position: Position,
    beta: float,
    mode: RateMode = RateMode.EXACT,
    utility_scale: float = 1.0,
) -> LogitDistribution:
    game = PairGame(scenario, grid, pair, mode)
    slot = pair.members.index(player)
    utilities = game.utilities_against(slot, opponent_position.distance_m)
    return _distribution(utilities, beta, utility_scale, player)


def _distribution(utilities: np.ndarray, beta: float, scale: float, player: str) -> LogitDistribution:
    feasible = np.flatnonzero(np.isfinite(utilities))
    if feasible.size == 0:
        raise NoFeasibleStrategyError(player, "every grid strategy breaks the arena or capture constraint")
    values = utilities[feasible]
    return LogitDistribution(feasible, logit_probabilities(values / scale, beta), values)


class SapService:
    def __init__(
        self,
        scenario: Scenario,
        grid: StrategyGrid,
        pair: MovingPair,
        mode: RateMode = RateMode.EXACT,
    ):
        self.game = PairGame(scenario, grid, pair, mode)

    def _feasible_restart(self) -> List[int]:
        """Joint profile with the highest potential; raises when the pair has none."""
        game = self.game
        best = None  # (hat, first, second)
        for first in np.flatnonzero(game.arena_mask):
            utilities = game.utilities(1, int(first))
            second = int(np.argmax(utilities))
            if not np.isfinite(utilities[second]):
                continue
            if best is None or utilities[second] > best[0]:
                best = (float(utilities[second]), int(first), second)
        if best is None:
            raise NoFeasibleStrategyError(game.pair.key, "no feasible joint profile on the grid")
        return [best[1], best[2]]

    def run(self, config: SapConfig) -> SapOutcome:
        game = self.game
        rng = np.random.default_rng(config.rng_seed)
        current: List[int] = game.initial_strategies()

        scale = 1.0
        if config.utility_scale == UtilityScale.RELATIVE:
            scale = abs(game.raw_hat(current))

        best_strategies: Optional[List[int]] = None
        best_theta: Optional[float] = None
        best_moved = 0.0
        best_step: Optional[int] = None

        start_hat = game.joint_hat(current)
        if np.isfinite(start_hat):
            best_strategies = list(current)
            best_theta = game.theta(start_hat)
            best_moved = game.displacement(current)
            best_step = 0

        steps: List[SapStep] = []
        for k in range(1, config.max_steps + 1):
            slot = int(rng.integers(2))
            beta = config.beta(k)
            utilities = game.utilities(slot, current[1 - slot])
            if not np.isfinite(utilities).any():
                # Only reachable from an infeasible start: let the other mover go first
                slot = 1 - slot
                utilities = game.utilities(slot, current[1 - slot])
            if not np.isfinite(utilities).any():
                current = self._feasible_restart()
                hat = game.joint_hat(current)
                theta, moved = game.theta(hat), game.displacement(current)
                if best_theta is None or selection_key(theta, moved) < selection_key(best_theta, best_moved):
                    best_strategies, best_theta, best_moved, best_step = list(current), theta, moved, k
                logger.info(f"🔁 SAP {game.pair.key}: both movers blocked, restarted at the best joint profile")
                utilities = game.utilities(slot, current[1 - slot])
            dist = _distribution(utilities, beta, scale, game.player(slot))

            choice = int(dist.strategies[rng.choice(dist.strategies.size, p=dist.probabilities)])

            # Equal maximal utility: stay as close as possible to the current position
            top = dist.utilities.max()
            if utilities[choice] == top:
                tied = dist.strategies[dist.utilities == top]
                if tied.size > 1:
                    choice = game.nearest(tied, current[slot])

            current[slot] = choice
            hat = float(utilities[choice])
            theta = game.theta(hat)
            moved = game.displacement(current)

            if best_theta is None or selection_key(theta, moved) < selection_key(best_theta, best_moved):
                best_strategies = list(current)
                best_theta = theta
                best_moved = moved
                best_step = k

            if config.record_trace:
                position = game.grid.position(choice)
                steps.append(
                    SapStep(
                        step=k,
                        player=game.player(slot),
                        distance_m=position.distance_m,
                        angle_deg=position.angle_deg,
                        hat_utility=hat,
                        theta=theta,
                        best_theta=best_theta,
                    )
                )
            logger.debug(f"SAP k={k} player={game.player(slot)} s={choice} theta={theta:.6g}")

        best_profile = game.profile(best_strategies) if best_strategies is not None else None
        trace = SapTrace(
            steps=steps,
            best_theta=best_theta,
            best_step=best_step,
            best_profile=best_profile,
            utility_scale=scale,
        )
        logger.info(
            f"✅ SAP {game.pair.key}: best theta {best_theta:.6g} b/s at step {best_step} "
            f"after {config.max_steps} steps"
        )
        return SapOutcome(best_profile, best_theta, trace)


def run_sap(
    scenario: Scenario,
    grid: StrategyGrid,
    pair: MovingPair,
    config: SapConfig,
    mode: RateMode = RateMode.EXACT,
) -> SapOutcome:
    return SapService(scenario, grid, pair, mode).run(config)
