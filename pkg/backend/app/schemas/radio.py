from pydantic import BaseModel, Field, PrivateAttr, model_validator

from app.services.radio_service import db_to_linear, dbm_to_watts


class RadioParams(BaseModel):
    """Physical-layer constants. Defaults are the 802.11g single-AP parameter set."""

    bandwidth_hz: float = Field(20e6, gt=0)
    noise_w: float = Field(1e-13, gt=0)
    tx_power_dbm: float = 32.0
    antenna_gain: float = Field(5.0, gt=0)
    path_loss_exp: float = Field(2.1, gt=2.0, le=4.0)
    p_collision: float = Field(0.97, ge=0.0, le=1.0)
    p_non_collision: float = Field(0.03, ge=0.0, le=1.0)
    sinr_threshold_db: float = -20.0
    min_distance_m: float = Field(1.0, gt=0)

    _tx_power_w: float = PrivateAttr(default=0.0)
    _sinr_threshold: float = PrivateAttr(default=0.0)

    class Config:
        frozen = True
        extra = "forbid"

    @model_validator(mode="after")
    def check_probabilities(self):
        if abs(self.p_collision + self.p_non_collision - 1.0) > 1e-12:
            raise ValueError(
                f"p_collision + p_non_collision must equal 1 "
                f"(got {self.p_collision} + {self.p_non_collision})"
            )
        return self

    def model_post_init(self, __context) -> None:
        # Linear values are derived once; the rate model only consumes watts
        self._tx_power_w = dbm_to_watts(self.tx_power_dbm)
        self._sinr_threshold = db_to_linear(self.sinr_threshold_db)

    @property
    def tx_power_w(self) -> float:
        return self._tx_power_w

    @property
    def sinr_threshold(self) -> float:
        """Capture threshold as a linear ratio"""
        return self._sinr_threshold
