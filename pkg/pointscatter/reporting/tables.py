"""DataFrame builders for every task output."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
import pandas as pd

from ..physics.lambda_algebra import Arrangement, LambdaParams, PhysicalStrengths
from ..physics.resonance import BoxSpectrum, LocusCurve, ResonancePole
from ..physics.spectra import SpectrumReport
from ..physics.transfer_core import ParityClass, ScatteringAmplitudes

BOUND_STATE_COLUMNS = ["energy", "energy_over_m", "residual", "branch"]
THRESHOLD_COLUMNS = ["kind", "energy", "detected", "residual"]
POLE_COLUMNS = ["E_R", "gamma", "im_E", "residual", "iterations", "below_threshold", "seed_re", "seed_im"]
SCATTER_COLUMNS = ["E", "r_re", "r_im", "t_re", "t_im", "R", "T", "unitarity_defect"]
LOCUS_COLUMNS = ["case", "branch", "curve", "point", "re_E", "im_E"]
BOX_COLUMNS = ["energy", "energy_over_m", "region", "side"]
CONVERT_COLUMNS = ["point", "B", "A0", "A1", "W", "phi", "a", "b", "c", "d", "permeable"]
LIMIT_COLUMNS = ["row", "col", "re", "im"]


def bound_state_frame(report: SpectrumReport, arr: Arrangement) -> pd.DataFrame:
    rows = [
        {
            "energy": state.energy,
            "energy_over_m": state.energy / arr.mass,
            "residual": state.residual,
            "branch": state.branch or "",
        }
        for state in report.bound_states
    ]
    return pd.DataFrame(rows, columns=BOUND_STATE_COLUMNS)


def threshold_frame(report: SpectrumReport, arr: Arrangement) -> pd.DataFrame:
    rows = [
        {
            "kind": "critical",
            "energy": arr.mass,
            "detected": report.critical.detected,
            "residual": report.critical.residual,
        },
        {
            "kind": "supercritical",
            "energy": -arr.mass,
            "detected": report.supercritical.detected,
            "residual": report.supercritical.residual,
        },
    ]
    return pd.DataFrame(rows, columns=THRESHOLD_COLUMNS)


def pole_frame(poles: Sequence[ResonancePole]) -> pd.DataFrame:
    rows = [
        {
            "E_R": pole.E_R,
            "gamma": pole.gamma,
            "im_E": -pole.gamma / 2.0,
            "residual": pole.residual,
            "iterations": pole.iterations,
            "below_threshold": pole.below_threshold,
            "seed_re": pole.seed.real,
            "seed_im": pole.seed.imag,
        }
        for pole in poles
    ]
    return pd.DataFrame(rows, columns=POLE_COLUMNS)


def scatter_frame(amplitudes: ScatteringAmplitudes) -> pd.DataFrame:
    return pd.DataFrame(
        {
            "E": amplitudes.energy,
            "r_re": amplitudes.r.real,
            "r_im": amplitudes.r.imag,
            "t_re": amplitudes.t.real,
            "t_im": amplitudes.t.imag,
            "R": amplitudes.reflectance,
            "T": amplitudes.transmittance,
            "unitarity_defect": amplitudes.unitarity_defect,
        },
        columns=SCATTER_COLUMNS,
    )


def locus_frame(curves: Iterable[LocusCurve]) -> pd.DataFrame:
    frames = []
    for index, curve in enumerate(curves):
        points = np.asarray(curve.points, dtype=complex)
        frames.append(
            pd.DataFrame(
                {
                    "case": curve.case_tag,
                    "branch": curve.branch,
                    "curve": index,
                    "point": np.arange(points.size),
                    "re_E": points.real,
                    "im_E": points.imag,
                }
            )
        )
    if not frames:
        return pd.DataFrame(columns=LOCUS_COLUMNS)
    return pd.concat(frames, ignore_index=True)[LOCUS_COLUMNS]


def box_frame(spectrum: BoxSpectrum, m: float) -> pd.DataFrame:
    rows = [
        {"energy": s.energy, "energy_over_m": s.energy / m, "region": s.region, "side": s.side}
        for s in spectrum.states
    ]
    return pd.DataFrame(rows, columns=BOX_COLUMNS)


def conversion_frame(
    pairs: Sequence[tuple[PhysicalStrengths | None, LambdaParams | None, bool]],
) -> pd.DataFrame:
    """One row per support point; missing representations are left empty."""
    rows = []
    for index, (strengths, lam, permeable) in enumerate(pairs, start=1):
        row: dict[str, object] = {"point": index, "permeable": permeable}
        if strengths is not None:
            row.update(dict(zip(("B", "A0", "A1", "W"), strengths.as_tuple())))
        if lam is not None:
            row.update(dict(zip(("phi", "a", "b", "c", "d"), lam.as_tuple())))
        rows.append(row)
    return pd.DataFrame(rows, columns=CONVERT_COLUMNS)


def limit_frame(matrix: np.ndarray, parity_class: ParityClass) -> pd.DataFrame:
    rows = [
        {"row": i + 1, "col": j + 1, "re": matrix[i, j].real, "im": matrix[i, j].imag}
        for i in range(2)
        for j in range(2)
    ]
    frame = pd.DataFrame(rows, columns=LIMIT_COLUMNS)
    frame["parity_class"] = parity_class.value
    return frame
