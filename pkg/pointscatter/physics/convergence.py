"""Deviation ladders between the relativistic and Schrödinger spectra, with an OLS trend."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np
import pandas as pd
import statsmodels.api as sm
from statsmodels.tools.sm_exceptions import ValueWarning

from ..config import ScanSpec
from .nonrel_limit import ConsistencyStatus, nonrel_consistency_check
from .special_cases import SpecialCaseId

logger = logging.getLogger(__name__)

LADDER_COLUMNS = ["strength", "abs_strength", "eps_rel", "eps_nr", "deviation", "status", "trend"]


@dataclass(slots=True)
class TrendResult:
    frame: pd.DataFrame
    model_summary: str | None
    slope: float | None
    intercept: float | None


def build_deviation_ladder(
    case: SpecialCaseId,
    strengths: Iterable[float],
    m: float,
    l: float,
    *,
    scan: ScanSpec | None = None,
) -> pd.DataFrame:
    """Return one consistency row per strength, in the order given."""
    rows = []
    for g in strengths:
        report = nonrel_consistency_check(case, float(g), m, l, scan=scan)
        rows.append(
            {
                "strength": report.strength,
                "abs_strength": abs(report.strength),
                "eps_rel": report.eps_rel if report.eps_rel is not None else np.nan,
                "eps_nr": report.eps_nr if report.eps_nr is not None else np.nan,
                "deviation": report.deviation if report.deviation is not None else np.nan,
                "status": report.status.value,
            }
        )
    frame = pd.DataFrame(rows, columns=LADDER_COLUMNS[:-1])
    frame["trend"] = np.nan
    return frame


def fit_deviation_trend(ladder: pd.DataFrame) -> TrendResult:
    """
    Fit ``log(deviation)`` against ``log|strength|`` with OLS.

    Only rows with status ``compared`` and a positive deviation enter the fit.
    The fitted deviation is written back into the ``trend`` column.
    """

    frame = ladder.copy()
    if "trend" not in frame.columns:
        frame["trend"] = np.nan
    usable = frame[
        (frame["status"] == ConsistencyStatus.COMPARED.value)
        & (frame["deviation"] > 0)
        & (frame["abs_strength"] > 0)
    ]
    if len(usable) < 3:
        logger.info("Deviation ladder has %d usable rows; trend skipped", len(usable))
        return TrendResult(frame=frame, model_summary=None, slope=None, intercept=None)

    X = sm.add_constant(np.log(usable["abs_strength"].to_numpy()))
    y = np.log(usable["deviation"].to_numpy())
    model = sm.OLS(y, X).fit()
    frame.loc[usable.index, "trend"] = np.exp(model.predict(X))
    with warnings.catch_warnings():
        # normality tests need more rows than a short ladder has
        warnings.simplefilter("ignore", ValueWarning)
        warnings.simplefilter("ignore", UserWarning)
        model_summary = model.summary().as_text()
    slope = float(model.params[1])
    intercept = float(model.params[0])
    logger.info("Deviation trend: slope %.4f over %d rows", slope, len(usable))
    return TrendResult(frame=frame, model_summary=model_summary, slope=slope, intercept=intercept)
