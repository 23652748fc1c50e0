import numpy as np
import pytest
from pydantic import ValidationError

from app.exceptions import InfeasibleProfileError
from app.schemas.enums import RateMode
from app.schemas.radio import RadioParams
from app.schemas.scenario import Position, PositionProfile
from app.services import radio_service


def test_unit_conversions():
    assert radio_service.dbm_to_watts(32.0) == pytest.approx(1.584893, rel=1e-6)
    assert radio_service.dbm_to_watts(30.0) == pytest.approx(1.0)
    assert radio_service.db_to_linear(-20.0) == pytest.approx(0.01)


def test_radio_params_derive_linear_values(radio):
    assert radio.tx_power_w == pytest.approx(1.584893, rel=1e-6)
    assert radio.sinr_threshold == pytest.approx(0.01)


def test_radio_params_reject_inconsistent_probabilities():
    with pytest.raises(ValidationError):
        RadioParams(p_collision=0.9, p_non_collision=0.2)


def test_radio_params_reject_path_loss_exponent_at_two():
    with pytest.raises(ValidationError):
        RadioParams(path_loss_exp=2.0)


def test_received_power_at_five_meters(radio):
    power = radio_service.received_power(5.0, radio)
    assert power == pytest.approx(5 * 10**0.2 / 5**2.1, rel=1e-12)
    assert round(power, 4) == 0.2699


def test_received_power_clamps_below_min_distance(radio):
    assert radio_service.received_power(0.0, radio) == radio_service.received_power(1.0, radio)
    assert radio_service.received_power(0.5, radio) == radio_service.received_power(1.0, radio)


def test_received_power_decreases_with_distance(radio):
    powers = radio_service.received_power(np.arange(1.0, 31.0), radio)
    assert np.all(np.diff(powers) < 0)


def test_lone_user_sinr_equals_snr(radio):
    sinr = radio_service.sinr_from_distances(np.array([7.0]), radio)[0]
    assert sinr == pytest.approx(radio_service.snr(7.0, radio), rel=1e-12)


def test_equal_distances_give_sinr_just_below_one(radio):
    sinr = radio_service.sinr_from_distances(np.array([5.0, 5.0]), radio)
    assert sinr[0] == sinr[1]
    assert 0.99 < sinr[0] < 1.0


def test_capture_threshold_is_inclusive(radio):
    assert radio_service.capture_ok(radio.sinr_threshold, radio)
    assert not radio_service.capture_ok(radio.sinr_threshold * (1 - 1e-9), radio)


def test_two_users_at_five_meters_rate(radio):
    rates, captured = radio_service.rates_from_distances(np.array([5.0, 5.0]), radio, RateMode.EXACT)
    assert captured.all()
    assert rates[0] == pytest.approx(44.18e6, rel=1e-3)


def test_approximate_rate_uses_log2_sinr_above_one(radio):
    snr = radio_service.snr(5.0, radio)
    approx = radio_service.rate_from_ratios(snr, 4.0, radio, RateMode.APPROXIMATE)
    assert approx == pytest.approx(2 * radio.bandwidth_hz)


def test_approximate_rate_falls_back_to_exact_at_or_below_one(radio):
    snr = radio_service.snr(5.0, radio)
    for sinr in (0.5, 1.0):
        exact = radio_service.rate_from_ratios(snr, sinr, radio, RateMode.EXACT)
        approx = radio_service.rate_from_ratios(snr, sinr, radio, RateMode.APPROXIMATE)
        assert approx == exact


def test_rate_is_vectorized_over_profiles(radio):
    distances = np.array([[5.0, 5.0], [5.0, 10.0], [10.0, 10.0]])
    rates, captured = radio_service.rates_from_distances(distances, radio, RateMode.EXACT)
    assert rates.shape == (3, 2)
    assert captured.shape == (3, 2)
    single, _ = radio_service.rates_from_distances(distances[1], radio, RateMode.EXACT)
    np.testing.assert_allclose(rates[1], single, rtol=1e-14)


def test_sinr_by_user_id(radio):
    profile = PositionProfile(
        positions={"A": Position(distance_m=5, angle_deg=0), "B": Position(distance_m=10, angle_deg=180)}
    )
    near = radio_service.sinr("A", profile, radio)
    far = radio_service.sinr("B", profile, radio)
    assert near > 1.0 > far


def test_effective_rate_rejects_uncaptured_user(radio):
    profile = PositionProfile(
        positions={"A": Position(distance_m=1, angle_deg=0), "B": Position(distance_m=30, angle_deg=180)}
    )
    assert radio_service.effective_rate("A", profile, radio, RateMode.EXACT) > 0
    with pytest.raises(InfeasibleProfileError) as exc:
        radio_service.effective_rate("B", profile, radio, RateMode.EXACT)
    assert exc.value.user_ids == ["B"]
