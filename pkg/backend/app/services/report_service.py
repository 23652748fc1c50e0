"""
Report Service - sweep tables, CSV artifacts and text summaries.
"""

import logging
from pathlib import Path
from typing import Iterable, List, Union

import numpy as np
import pandas as pd

from app.schemas.enums import Method
from app.schemas.result import SWEEP_COLUMNS, SweepRow
from app.schemas.sap import SapTrace

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

TRACE_COLUMNS = ["step", "player", "distance_m", "angle_deg", "hat_utility", "theta", "best_theta"]

# Relative spread under which mean throughputs count as tied
TIE_TOLERANCE = 1e-12


def rows_to_frame(rows: Iterable[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([row.to_record() for row in rows], columns=SWEEP_COLUMNS)


def write_sweep_csv(rows: Iterable[SweepRow], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = rows_to_frame(rows)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info(f"💾 Wrote {len(frame)} sweep rows to {path}")
    return path


def read_sweep_csv(path: PathLike) -> List[SweepRow]:
    # Cells stay text; SweepRow parses them, with empty cells as missing values
    frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    missing = [column for column in SWEEP_COLUMNS if column not in frame.columns]
    if missing:
        raise ValueError(f"{path}: missing columns {', '.join(missing)}")
    return [SweepRow.from_record(record) for record in frame.to_dict(orient="records")]


def write_trace_csv(trace: SapTrace, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([step.model_dump() for step in trace.steps], columns=TRACE_COLUMNS)
    frame.to_csv(path, index=False, lineterminator="\n")
    return path


def _ratio_peak(group: pd.DataFrame, numerator: Method, denominator: Method):
    """Max of theta(numerator)/theta(denominator) over the d_A points where both ran."""
    table = group.pivot_table(index="d_A_m", columns="method", values="theta_bps", aggfunc="first")
    if numerator.value not in table.columns or denominator.value not in table.columns:
        return None, None
    ratio = (table[numerator.value] / table[denominator.value]).dropna()
    if ratio.empty:
        return None, None
    return float(ratio.max()), float(ratio.idxmax())


def _ranking(group: pd.DataFrame) -> str:
    means = group.groupby("method", sort=False)["theta_bps"].mean().dropna()
    if means.empty:
        return "n/a"
    if len(means) > 1 and np.allclose(means.to_numpy(), means.iloc[0], rtol=TIE_TOLERANCE, atol=0.0):
        return "tied (" + " = ".join(means.index) + ")"
    ordered = means.sort_values(ascending=False, kind="stable")
    return " > ".join(ordered.index)


def summary_frame(rows: Iterable[SweepRow]) -> pd.DataFrame:
    frame = rows_to_frame(rows)
    frame["theta_bps"] = pd.to_numeric(frame["theta_bps"])
    frame["delta_theta"] = pd.to_numeric(frame["delta_theta"])

    records = []
    for pattern, group in frame.groupby("pattern", sort=False):
        delta = group["delta_theta"].dropna()
        max_delta, argmax_d_a, argmax_method = None, None, None
        if not delta.empty:
            top = delta.idxmax()
            max_delta = float(delta.max())
            argmax_d_a = float(group.loc[top, "d_A_m"])
            argmax_method = group.loc[top, "method"]

        vs_greedy, vs_greedy_d_a = _ratio_peak(group, Method.PROPOSED, Method.GREEDY)
        vs_game, vs_game_d_a = _ratio_peak(group, Method.PROPOSED, Method.NEW_USERS_GAME)
        records.append(
            {
                "pattern": pattern,
                "rows": len(group),
                "max_delta_theta": max_delta,
                "argmax_d_A_m": argmax_d_a,
                "argmax_method": argmax_method,
                "ranking_by_mean_theta": _ranking(group),
                "max_proposed_over_greedy": vs_greedy,
                "argmax_proposed_over_greedy_d_A_m": vs_greedy_d_a,
                "max_proposed_over_new_users_game": vs_game,
                "argmax_proposed_over_new_users_game_d_A_m": vs_game_d_a,
            }
        )
    return pd.DataFrame(records)


def summarize(rows: Iterable[SweepRow]) -> str:
    """Text summary: per-pattern peak improvement ratio, its d_A and method ranking by mean theta."""
    rows = list(rows)
    if not rows:
        raise ValueError("nothing to summarize: no sweep rows")

    summary = summary_frame(rows)
    lines = []
    for record in summary.to_dict(orient="records"):
        lines.append(f"Pattern {record['pattern']} ({record['rows']} rows)")
        if record["max_delta_theta"] is not None and not pd.isna(record["max_delta_theta"]):
            lines.append(
                f"  max delta_theta   {record['max_delta_theta']:.6f} at d_A = {record['argmax_d_A_m']:g} m "
                f"({record['argmax_method']})"
            )
        lines.append(f"  ranking           {record['ranking_by_mean_theta']}")
        for label, key in (("proposed/greedy", "proposed_over_greedy"), ("proposed/new-users", "proposed_over_new_users_game")):
            peak = record[f"max_{key}"]
            if peak is not None and not pd.isna(peak):
                lines.append(f"  {label:<18}{peak:.6f} at d_A = {record[f'argmax_{key}_d_A_m']:g} m")

    if len(rows) == 1:
        row = rows[0]
        theta = "n/a" if row.theta_bps is None else f"{row.theta_bps:.6g} b/s"
        lines.append(f"  {row.method.value} d_A = {row.d_a_m:g} m psi_A = {row.psi_a_deg:g} deg theta = {theta}")
    return "\n".join(lines)


def write_summary_csv(rows: Iterable[SweepRow], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    summary_frame(rows).to_csv(path, index=False, lineterminator="\n")
    return path
