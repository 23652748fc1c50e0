"""
Optimizer Service - the all-user movement search and its baselines.

Methods:
- proposed: every unordered mover pair plays the game (two seeded runs per
  pair, one per mover order); the best profile over all pairs wins
- no-move: users keep their initial positions
- greedy: new users walk toward the AP along their own bearing, ignoring
  interference, stopping at the first position the AP can still capture
- new-users-game: only the two new users play the game
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations
from typing import List, NamedTuple, Optional

import numpy as np

from app.exceptions import InfeasibleProfileError, NoFeasibleStrategyError, ScenarioValidationError
from app.schemas.enums import Method, RateMode, Solver, UserLabel
from app.schemas.grid import StrategyGrid
from app.schemas.result import OptimizationResult
from app.schemas.sap import SapConfig, SapTrace
from app.schemas.scenario import MovingPair, Position, PositionProfile, Scenario
from app.services import game_service
from app.services.oracle_service import OracleService
from app.services.sap_service import SapService

logger = logging.getLogger(__name__)


def derive_seed(master_seed: int, *counters: int) -> int:
    """Independent 63-bit seed for run ``counters`` under ``master_seed`` (fits a signed SQL integer)."""
    state = np.random.SeedSequence([master_seed, *counters]).generate_state(1, dtype=np.uint64)
    return int(state[0]) >> 1


class PairRun(NamedTuple):
    pair: MovingPair
    seed: int
    profile: PositionProfile
    theta: float
    moved: float
    trace: Optional[SapTrace]


class OptimizerService:
    def __init__(
        self,
        scenario: Scenario,
        grid: Optional[StrategyGrid] = None,
        mode: RateMode = RateMode.EXACT,
        workers: int = 1,
    ):
        self.scenario = scenario
        self.grid = grid or StrategyGrid.default()
        self.mode = mode
        self.workers = workers

    # Shared helpers

    def _evaluate(self, profile: PositionProfile):
        """(theta, rates) of a profile, or (None, {}) when it is not capture-feasible."""
        try:
            rates = game_service.per_user_rates(self.scenario, profile, self.mode)
        except InfeasibleProfileError as e:
            logger.debug(f"Profile infeasible for users {e.user_ids} ({e.reason})")
            return None, {}
        theta = game_service.throughput_from_rates([rate for _, rate in rates])
        return theta, dict(rates)

    def _result(
        self,
        method: Method,
        profile: PositionProfile,
        started: float,
        pair: Optional[MovingPair] = None,
        seeds: Optional[List[int]] = None,
        pair_thetas: Optional[dict] = None,
        trace: Optional[SapTrace] = None,
        theta_no_move: Optional[float] = None,
    ) -> OptimizationResult:
        theta, rates = self._evaluate(profile)
        delta = None
        if theta is not None and theta_no_move is not None:
            delta = game_service.improvement_ratio(theta, theta_no_move)
        moved = [
            user.id
            for user in self.scenario.users
            if profile.get(user.id) != user.position
        ]
        return OptimizationResult(
            method=method,
            pair=pair,
            profile=profile,
            rates=rates,
            theta=theta,
            theta_no_move=theta_no_move,
            delta_theta=delta,
            seeds=seeds or [],
            wall_time_s=time.perf_counter() - started,
            pair_thetas=pair_thetas or {},
            moved_users=moved,
            trace=trace,
        )

    def _no_move_theta(self) -> Optional[float]:
        theta, _ = self._evaluate(self.scenario.initial_profile())
        return theta

    def _solve_pair(self, pair: MovingPair, config: SapConfig, solver: Solver) -> Optional[PairRun]:
        try:
            if solver == Solver.ORACLE:
                report = OracleService(self.scenario, self.grid, pair, self.mode).brute_force_best()
                profile, trace = report.best_profile, None
            else:
                outcome = SapService(self.scenario, self.grid, pair, self.mode).run(config)
                profile, trace = outcome.profile, outcome.trace
        except NoFeasibleStrategyError as e:
            logger.warning(f"⚠️ Skipping pair {pair.key}: {e}")
            return None

        if profile is None:
            return None
        # Re-derive theta from the stored profile so every comparison uses one expression
        theta, _ = self._evaluate(profile)
        if theta is None:
            return None
        moved = game_service.displacement(self.scenario, profile)
        return PairRun(pair, config.rng_seed, profile, theta, moved, trace)

    def _run_all(self, jobs) -> List[Optional[PairRun]]:
        if self.workers > 1 and len(jobs) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                return list(executor.map(lambda job: self._solve_pair(*job), jobs))
        return [self._solve_pair(*job) for job in jobs]

    # Methods

    def optimize_all_pairs(self, sap_config: Optional[SapConfig] = None, solver: Solver = Solver.SAP) -> OptimizationResult:
        started = time.perf_counter()
        sap_config = sap_config or SapConfig()
        ids = self.scenario.user_ids

        jobs = []
        counter = 0
        for first, second in combinations(ids, 2):
            if solver == Solver.ORACLE:
                # Exhaustive search does not depend on mover order
                jobs.append((MovingPair(first=first, second=second), sap_config, solver))
                continue
            for ordered in ((first, second), (second, first)):
                config = sap_config.model_copy(update={"rng_seed": derive_seed(sap_config.rng_seed, counter)})
                jobs.append((MovingPair(first=ordered[0], second=ordered[1]), config, solver))
                counter += 1

        logger.info(f"🚀 All-pairs search over {len(jobs)} runs ({solver.value}) for {len(ids)} users")
        runs = [run for run in self._run_all(jobs) if run is not None]
        theta_no_move = self._no_move_theta()
        if not runs:
            logger.warning("⚠️ No pair produced a feasible profile; keeping initial positions")
            return self._result(Method.PROPOSED, self.scenario.initial_profile(), started, theta_no_move=theta_no_move)

        best = game_service.best_of([(run.theta, run.moved, run.pair.key, run) for run in runs])
        return self._result(
            Method.PROPOSED,
            best.profile,
            started,
            pair=best.pair,
            seeds=[run.seed for run in runs],
            pair_thetas={run.pair.key: run.theta for run in runs},
            trace=best.trace,
            theta_no_move=theta_no_move,
        )

    def baseline_no_move(self) -> OptimizationResult:
        started = time.perf_counter()
        theta = self._no_move_theta()
        if theta is None:
            logger.warning("⚠️ Initial positions break the capture constraint; no-move throughput undefined")
        return self._result(Method.NO_MOVE, self.scenario.initial_profile(), started, theta_no_move=theta)

    def _new_users(self) -> List[str]:
        new_users = self.scenario.users_with_label(UserLabel.NEW)
        if not new_users:
            raise ScenarioValidationError(["scenario has no users labeled 'new'"])
        return new_users

    def baseline_greedy_new_users(self) -> OptimizationResult:
        started = time.perf_counter()
        profile = self.scenario.initial_profile()
        distances = sorted(self.grid.distances_m)

        for uid in self._new_users():
            bearing = self._nearest_grid_angle(self.scenario.user(uid).angle_deg)
            chosen = None
            # Interference-blind own rate grows as the user nears the AP
            for d in distances:
                candidate = Position(distance_m=d, angle_deg=bearing)
                if not self.scenario.arena.contains(candidate):
                    continue
                trial = profile.with_positions({uid: candidate})
                theta, _ = self._evaluate(trial)
                if theta is not None:
                    chosen = candidate
                    break
            if chosen is None:
                logger.warning(f"⚠️ Greedy: no capture-feasible position for {uid} on bearing {bearing}")
                continue
            profile = profile.with_positions({uid: chosen})

        return self._result(Method.GREEDY, profile, started, theta_no_move=self._no_move_theta())

    def _nearest_grid_angle(self, angle_deg: float) -> float:
        angles = np.asarray(self.grid.angles_deg)
        gap = np.abs((angles - angle_deg + 180.0) % 360.0 - 180.0)
        return float(angles[np.argmin(np.round(gap, 9))])

    def baseline_new_users_game(self, sap_config: Optional[SapConfig] = None, solver: Solver = Solver.SAP) -> OptimizationResult:
        started = time.perf_counter()
        sap_config = sap_config or SapConfig()
        new_users = self._new_users()
        if len(new_users) != 2:
            raise ScenarioValidationError([f"new-users game needs exactly 2 new users, got {len(new_users)}"])

        pair = MovingPair(first=new_users[0], second=new_users[1])
        config = sap_config.model_copy(update={"rng_seed": derive_seed(sap_config.rng_seed, 0)})
        run = self._solve_pair(pair, config, solver)
        theta_no_move = self._no_move_theta()
        if run is None:
            return self._result(Method.NEW_USERS_GAME, self.scenario.initial_profile(), started, theta_no_move=theta_no_move)
        return self._result(
            Method.NEW_USERS_GAME,
            run.profile,
            started,
            pair=pair,
            seeds=[run.seed],
            pair_thetas={pair.key: run.theta},
            trace=run.trace,
            theta_no_move=theta_no_move,
        )

    def run_method(self, method: Method, sap_config: Optional[SapConfig] = None, solver: Solver = Solver.SAP) -> OptimizationResult:
        if method == Method.PROPOSED:
            return self.optimize_all_pairs(sap_config, solver)
        if method == Method.NO_MOVE:
            return self.baseline_no_move()
        if method == Method.GREEDY:
            return self.baseline_greedy_new_users()
        return self.baseline_new_users_game(sap_config, solver)


def optimize_all_pairs(scenario, grid, sap_config, mode=RateMode.EXACT, solver=Solver.SAP) -> OptimizationResult:
    return OptimizerService(scenario, grid, mode).optimize_all_pairs(sap_config, solver)


def baseline_no_move(scenario, mode=RateMode.EXACT) -> OptimizationResult:
    return OptimizerService(scenario, mode=mode).baseline_no_move()


def baseline_greedy_new_users(scenario, grid, mode=RateMode.EXACT) -> OptimizationResult:
    return OptimizerService(scenario, grid, mode).baseline_greedy_new_users()


def baseline_new_users_game(scenario, grid, sap_config, mode=RateMode.EXACT, solver=Solver.SAP) -> OptimizationResult:
    return OptimizerService(scenario, grid, mode).baseline_new_users_game(sap_config, solver)
