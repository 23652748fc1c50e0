import enum


class RateMode(str, enum.Enum):
    EXACT = "exact"
    APPROXIMATE = "approx"


class UserLabel(str, enum.Enum):
    EXISTING = "existing"
    NEW = "new"


class Method(str, enum.Enum):
    PROPOSED = "proposed"
    NO_MOVE = "no-move"
    GREEDY = "greedy"
    NEW_USERS_GAME = "new-users-game"


class Solver(str, enum.Enum):
    SAP = "sap"
    ORACLE = "oracle"


class BetaSchedule(str, enum.Enum):
    LINEAR = "linear"  # beta = scale * k
    LOG = "log"  # beta = scale * ln(1 + k)
    CONSTANT = "constant"  # beta = scale


class UtilityScale(str, enum.Enum):
    RELATIVE = "relative"  # utilities divided by |potential| at the starting profile
    RAW = "raw"  # utilities in 1/(bit/s)
