import pandas as pd
import pytest

from app.schemas.enums import Method
from app.schemas.result import SWEEP_COLUMNS, SweepRow
from app.schemas.sap import SapStep, SapTrace
from app.schemas.scenario import Position
from app.services import report_service


def _row(method: Method, d_a: float, theta, delta=None, pattern: str = "I") -> SweepRow:
    return SweepRow(
        pattern=pattern,
        method=method,
        d_a_m=d_a,
        psi_a_deg=90.0,
        theta_bps=theta,
        delta_theta=delta,
        user_positions={"A": Position(distance_m=d_a, angle_deg=90), "B": Position(distance_m=5, angle_deg=0)},
        seed=7,
    )


def test_csv_has_exact_columns_and_reads_back(tmp_path):
    rows = [
        _row(Method.PROPOSED, 5.0, 45e6, 1.02),
        _row(Method.NO_MOVE, 5.0, 44e6, 1.0),
        _row(Method.GREEDY, 5.0, None, None),
    ]
    path = report_service.write_sweep_csv(rows, tmp_path / "out" / "I_mixed.csv")

    header = path.read_text().splitlines()[0]
    assert header == ",".join(SWEEP_COLUMNS)
    assert report_service.read_sweep_csv(path) == rows


def test_positions_column_is_compact_json():
    record = _row(Method.PROPOSED, 5.0, 45e6, 1.02).to_record()
    assert record["user_positions_json"] == '{"A":[5.0,90.0],"B":[5.0,0.0]}'


def test_read_rejects_foreign_csv(tmp_path):
    path = tmp_path / "other.csv"
    pd.DataFrame({"x": [1]}).to_csv(path, index=False)
    with pytest.raises(ValueError):
        report_service.read_sweep_csv(path)


def test_trace_csv(tmp_path):
    trace = SapTrace(
        steps=[
            SapStep(step=1, player="C", distance_m=5, angle_deg=0, hat_utility=-1e-7, theta=4e7, best_theta=4e7),
            SapStep(step=2, player="D", distance_m=10, angle_deg=90, hat_utility=-2e-7, theta=2e7, best_theta=4e7),
        ]
    )
    path = report_service.write_trace_csv(trace, tmp_path / "trace.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == report_service.TRACE_COLUMNS
    assert frame["player"].tolist() == ["C", "D"]


def test_summarize_single_row_echoes_it():
    text = report_service.summarize([_row(Method.PROPOSED, 12.0, 4.5e7, 1.05)])
    assert "Pattern I (1 rows)" in text
    assert "d_A = 12 m" in text
    assert "proposed" in text
    assert "4.5e+07" in text


def test_summarize_reports_peak_improvement():
    rows = [
        _row(Method.PROPOSED, 5.0, 45e6, 1.01),
        _row(Method.NO_MOVE, 5.0, 44.5e6, 1.0),
        _row(Method.PROPOSED, 25.0, 40e6, 1.06),
        _row(Method.NO_MOVE, 25.0, 37.7e6, 1.0),
    ]
    text = report_service.summarize(rows)
    assert "1.060000 at d_A = 25 m (proposed)" in text
    assert "proposed > no-move" in text


def test_summarize_declares_ties():
    rows = [_row(Method.PROPOSED, 5.0, 44e6, 1.0), _row(Method.NO_MOVE, 5.0, 44e6, 1.0)]
    assert "tied" in report_service.summarize(rows)


def test_summary_frame_ratios():
    rows = [
        _row(Method.PROPOSED, 10.0, 42e6, 1.02),
        _row(Method.GREEDY, 10.0, 40e6, 0.97),
        _row(Method.NEW_USERS_GAME, 10.0, 42e6, 1.02),
        _row(Method.PROPOSED, 30.0, 33e6, 1.1),
        _row(Method.GREEDY, 30.0, 30e6, 1.0),
        _row(Method.NEW_USERS_GAME, 30.0, 31e6, 1.03),
    ]
    summary = report_service.summary_frame(rows).iloc[0]
    assert summary["max_proposed_over_greedy"] == pytest.approx(1.1)
    assert summary["argmax_proposed_over_greedy_d_A_m"] == 30.0
    assert summary["max_proposed_over_new_users_game"] == pytest.approx(33 / 31)


def test_summary_groups_patterns_in_order():
    rows = [_row(Method.PROPOSED, 5.0, 1e7, 1.0, pattern="II"), _row(Method.PROPOSED, 5.0, 1e7, 1.0, pattern="I")]
    assert report_service.summary_frame(rows)["pattern"].tolist() == ["II", "I"]


def test_summarize_needs_rows():
    with pytest.raises(ValueError):
        report_service.summarize([])
