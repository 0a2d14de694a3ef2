"""
Serialisation of reports: JSON for structured results, two-column TSV for plot data.
"""
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Type

import pandas as pd
from pydantic import BaseModel

from ..core.exceptions import ReportGenerationError
from ..core.models import (
    EnsembleValidityReport,
    MiscoverageCurve,
    OutletReport,
    PlausibilityReport,
    PredictReport,
    SimulationReport,
    ValidityReport,
)


logger = logging.getLogger(__name__)

# One JSON schema is exported per entry.
REPORT_MODELS: Dict[str, Type[BaseModel]] = {
    "predict": PredictReport,
    "plausibility": PlausibilityReport,
    "validity": ValidityReport,
    "ensemble_validity": EnsembleValidityReport,
    "simulation": SimulationReport,
    "outlets": OutletReport,
}

TSV_FLOAT_FORMAT = "%.12g"


def to_json(report: BaseModel) -> str:
    return report.model_dump_json(indent=2, by_alias=True)


def to_tsv(frame: pd.DataFrame) -> str:
    return frame.to_csv(sep="\t", index=False, float_format=TSV_FLOAT_FORMAT, lineterminator="\n")


def curve_frame(curve: MiscoverageCurve) -> pd.DataFrame:
    """(pi, G) columns of a miscoverage curve."""
    return pd.DataFrame(list(curve.points), columns=["pi", "G"])


def write_output(text: str, out: Optional[Path]) -> None:
    """
    Write text to a file.

    Raises:
        ReportGenerationError: If the file cannot be written.
    """
    if out is None:
        return
    try:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ReportGenerationError(f"Error writing report to {out}: {str(e)}")
    logger.info("Report written to %s", out)


def export_schemas(directory: Path) -> List[Path]:
    """
    Write the JSON schema of every report model to `directory`.

    Returns:
        The paths written, in a fixed order.
    """
    paths = []
    for name, model in REPORT_MODELS.items():
        schema = model.model_json_schema(by_alias=True, mode="serialization")
        path = directory / f"{name}.schema.json"
        write_output(json.dumps(schema, indent=2, sort_keys=True) + "\n", path)
        paths.append(path)
    return paths
