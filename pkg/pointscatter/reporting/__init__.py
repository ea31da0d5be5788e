"""Tables, exporters and figure datasets for the point-interaction toolkit."""

from .exporters import export_workbook, frame_to_csv, to_json_text, write_csv, write_datasets, write_json
from .figures import FIGURES, FigureDataset, generate_figure
from .tables import (
    bound_state_frame,
    box_frame,
    conversion_frame,
    limit_frame,
    locus_frame,
    pole_frame,
    scatter_frame,
    threshold_frame,
)

__all__ = [
    "export_workbook",
    "frame_to_csv",
    "to_json_text",
    "write_csv",
    "write_datasets",
    "write_json",
    "FIGURES",
    "FigureDataset",
    "generate_figure",
    "bound_state_frame",
    "box_frame",
    "conversion_frame",
    "limit_frame",
    "locus_frame",
    "pole_frame",
    "scatter_frame",
    "threshold_frame",
]
