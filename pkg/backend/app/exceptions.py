"""Domain errors raised by the positioning services."""

from typing import Iterable, List


class PositioningError(Exception):
    """Base class for every error the simulator reports to callers"""


class InfeasibleProfileError(PositioningError):
    """A profile violates the capture constraint or leaves the arena."""

    def __init__(self, user_ids: Iterable[str], reason: str = "capture"):
        self.user_ids: List[str] = list(user_ids)
        self.reason = reason
        super().__init__(f"Infeasible profile ({reason}) for users: {', '.join(self.user_ids)}")


class NoFeasibleStrategyError(PositioningError):
    def __init__(self, player: str, context: str = ""):
        self.player = player
        message = f"No feasible strategy for player {player}"
        if context:
            message = f"{message} ({context})"
        super().__init__(message)


class OracleBudgetExceededError(PositioningError):
    def __init__(self, profile_count: int, budget: int):
        self.profile_count = profile_count
        self.budget = budget
        super().__init__(f"Oracle needs {profile_count} joint profiles, budget is {budget}")


class ScenarioParseError(PositioningError):
    pass


class ScenarioValidationError(PositioningError):
    def __init__(self, messages: Iterable[str]):
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))


class UnknownPatternError(PositioningError):
    pass


class ManifestError(PositioningError):
    pass
