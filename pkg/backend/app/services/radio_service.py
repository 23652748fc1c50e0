"""
Radio Service - path-loss, SNR/SINR and effective rate model for uplinks to one AP.

All signals are measured at the AP: a user's own received power and the
interference it causes to others both use that user's distance to the AP.
Functions accept scalars or numpy arrays; the trailing axis of a distance
array indexes users.
"""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Union

import numpy as np

from app.exceptions import InfeasibleProfileError

if TYPE_CHECKING:
    from app.schemas.enums import RateMode
    from app.schemas.radio import RadioParams
    from app.schemas.scenario import PositionProfile

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

_LN2 = np.log(2.0)


def _as_output(value: np.ndarray, like) -> ArrayLike:
    return float(value) if np.ndim(like) == 0 else value


def dbm_to_watts(p: float) -> float:
    return 10.0 ** ((p - 30.0) / 10.0)


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def received_power(distance_m: ArrayLike, params: RadioParams) -> ArrayLike:
    """g * P_send / d^alpha with d clamped to ``min_distance_m``."""
    d = np.maximum(np.asarray(distance_m, dtype=float), params.min_distance_m)
    power = params.antenna_gain * params.tx_power_w / d ** params.path_loss_exp
    return _as_output(power, distance_m)


def snr(distance_m: ArrayLike, params: RadioParams) -> ArrayLike:
    ratio = np.asarray(received_power(distance_m, params)) / params.noise_w
    return _as_output(ratio, distance_m)


def sinr_from_distances(distances_m: np.ndarray, params: RadioParams) -> np.ndarray:
    """SINR of every user; ``distances_m`` has shape (..., L)."""
    power = np.asarray(received_power(np.asarray(distances_m, dtype=float), params))
    interference = power.sum(axis=-1, keepdims=True) - power
    # Exact zero for a lone user; cancellation can leave a tiny negative residue otherwise
    interference = np.maximum(interference, 0.0)
    return power / (interference + params.noise_w)


def sinr(target_index: str, profile: PositionProfile, params: RadioParams) -> float:
    user_ids = list(profile.positions)
    distances = np.array([profile.positions[uid].distance_m for uid in user_ids])
    return float(sinr_from_distances(distances, params)[user_ids.index(target_index)])


def capture_ok(sinr_linear: ArrayLike, params: RadioParams):
    """Capture succeeds when SINR reaches the threshold (inclusive)."""
    ok = np.asarray(sinr_linear) >= params.sinr_threshold
    return bool(ok) if np.ndim(ok) == 0 else ok


def rate_from_ratios(
    snr_linear: ArrayLike,
    sinr_linear: ArrayLike,
    params: RadioParams,
    mode: RateMode,
) -> ArrayLike:
    """Collision-weighted Shannon rate, or the log2(SINR) approximation where SINR > 1."""
    # Local import keeps this module free of schema imports at load time
    from app.schemas.enums import RateMode

    snr_arr = np.asarray(snr_linear, dtype=float)
    sinr_arr = np.asarray(sinr_linear, dtype=float)
    w = params.bandwidth_hz

    exact = (
        params.p_non_collision * w * np.log1p(snr_arr) / _LN2
        + params.p_collision * w * np.log1p(sinr_arr) / _LN2
    )
    if mode == RateMode.EXACT:
        return _as_output(exact, sinr_linear)

    with np.errstate(divide="ignore"):
        approx = w * np.log2(sinr_arr)
    return _as_output(np.where(sinr_arr > 1.0, approx, exact), sinr_linear)


def rates_from_distances(distances_m: np.ndarray, params: RadioParams, mode: RateMode):
    """Rates and per-user capture flags for distance arrays of shape (..., L)."""
    distances = np.asarray(distances_m, dtype=float)
    sinr_values = sinr_from_distances(distances, params)
    snr_values = np.asarray(snr(distances, params))
    rates = rate_from_ratios(snr_values, sinr_values, params, mode)
    return np.asarray(rates), capture_ok(sinr_values, params)


def effective_rate(
    target_index: str,
    profile: PositionProfile,
    params: RadioParams,
    mode: RateMode,
) -> float:
    user_ids = list(profile.positions)
    distances = np.array([profile.positions[uid].distance_m for uid in user_ids])
    rates, captured = rates_from_distances(distances, params, mode)
    index = user_ids.index(target_index)
    if not captured[index]:
        raise InfeasibleProfileError([target_index])
    return float(rates[index])
