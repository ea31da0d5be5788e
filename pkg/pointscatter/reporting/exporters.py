"""Writers for task outputs: CSV, JSON and optional Excel workbooks."""

from __future__ import annotations

import io
import logging
from pathlib import Path
from typing import Mapping

import pandas as pd

try:  # Optional dependency for workbook output
    import xlsxwriter  # noqa: F401

    _XLSXWRITER_AVAILABLE = True
except ImportError:  # pragma: no cover - optional dependency
    _XLSXWRITER_AVAILABLE = False

logger = logging.getLogger(__name__)

CSV_FLOAT_FORMAT = "%.17g"


def frame_to_csv(frame: pd.DataFrame) -> str:
    """Fixed formatting: 17 significant digits, ``.`` decimals and LF line endings."""
    return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")


def to_json_text(frame: pd.DataFrame) -> str:
    """One object per row; NaN becomes ``null`` and floats keep 15 significant digits."""
    return frame.to_json(orient="records", indent=2, double_precision=15) + "\n"


def write_csv(frame: pd.DataFrame, path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(frame_to_csv(frame), encoding="utf-8", newline="")
    return target


def write_json(frame: pd.DataFrame, path: str | Path) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(to_json_text(frame), encoding="utf-8", newline="")
    return target


def export_workbook(
    datasets: Mapping[str, pd.DataFrame],
    *,
    path: str | Path | None = None,
) -> bytes | Path:
    """
    Build an Excel workbook with one sheet per dataset.

    If ``path`` is provided, the workbook is written to disk and the path is returned.
    Otherwise the bytes object is returned.
    """
    if not _XLSXWRITER_AVAILABLE:  # pragma: no cover - optional dependency
        raise ImportError("xlsxwriter is required for workbook export. Install it via `pip install xlsxwriter`.")

    buffer = io.BytesIO()
    with pd.ExcelWriter(buffer, engine="xlsxwriter") as writer:  # type: ignore[arg-type]
        for name, frame in datasets.items():
            frame.to_excel(writer, sheet_name=name[:31], index=False)

    buffer.seek(0)
    if path is None:
        return buffer.getvalue()

    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_bytes(buffer.read())
    return target


def write_datasets(
    datasets: Mapping[str, pd.DataFrame],
    out: str | Path,
    fmt: str,
    *,
    stem: str = "",
) -> list[Path]:
    """
    Write named datasets below ``out``.

    ``csv`` and ``json`` produce one file per dataset named ``<stem>_<name>``;
    ``xlsx`` produces a single workbook ``<stem>.xlsx`` (or ``out`` itself when
    it already carries the suffix).
    """
    target = Path(out)
    if fmt == "xlsx":
        book = target if target.suffix == ".xlsx" else target / f"{stem or 'datasets'}.xlsx"
        return [export_workbook(datasets, path=book)]  # type: ignore[list-item]

    written = []
    for name, frame in datasets.items():
        filename = f"{stem}_{name}" if stem else name
        if fmt == "csv":
            written.append(write_csv(frame, target / f"{filename}.csv"))
        else:
            written.append(write_json(frame, target / f"{filename}.json"))
    logger.info("Wrote %d %s files to %s", len(written), fmt, target)
    return written
