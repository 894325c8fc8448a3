import json
import os
from typing import Any, Dict, Optional

from loguru import logger

from blochlab import __version__
from blochlab.analyzer import AnalysisReport
from blochlab.constants import REPORT_SCHEMA_VERSION
from blochlab.errors import ReportWriteError
from blochlab.operators import LadderResult, RatioSeries


def _scalar(value: Optional[float], tol: float) -> Optional[Dict[str, float]]:
    if value is None:
        return None
    return {"value": value, "tol": tol}


def _ladder(result: LadderResult, tol: float) -> Dict[str, Any]:
    return {
        "value": result.value,
        "tol": tol,
        "truncated": result.truncated,
        "short_circuit": result.short_circuit,
        "radius_cap": _scalar(result.radius_cap, tol),
        "ladder": [list(rung) for rung in result.ladder],
    }


def _rows(series: RatioSeries) -> list:
    return [[n, r] for n, r in series.rows()]


def _measured(value: Any, tol: float) -> Any:
    """
    Attach ``tol`` to every measured number in a diagnostics tree.

    Floats and lists of floats become ``{"value", "tol"}`` objects; counts,
    flags and labels are left as they are.
    """
    if isinstance(value, dict):
        return {key: _measured(item, tol) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        if value and all(isinstance(item, float) for item in value):
            return {"value": list(value), "tol": tol}
        return [_measured(item, tol) for item in value]
    if isinstance(value, float):
        return {"value": value, "tol": tol}
    return value


def report_to_dict(report: AnalysisReport) -> Dict[str, Any]:
    """
    Versioned, timestamp-free report structure.

    Args:
        report: Finished analysis

    Returns:
        A dict whose JSON dump is identical for identical inputs
    """
    tol = report.settings.tol
    band = report.band
    series = {
        "tol": tol,
        "J": _rows(report.j_series),
        "I": _rows(report.i_series),
        "trends": {"J": report.j_series.trend.value, "I": report.i_series.trend.value},
        "tail": {
            "J": _scalar(report.j_series.tail_estimate, tol),
            "I": _scalar(report.i_series.tail_estimate, tol),
        },
    }
    if report.primed:
        j_primed, i_primed = report.primed
        series["J'"] = _rows(j_primed)
        series["I'"] = _rows(i_primed)
        series["bridge"] = _scalar(report.bridge_disagreement, 10.0 * tol)

    growth = report.direct.growth_target
    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "version": __version__,
        "space": report.space,
        "pair": {
            "u": report.pair.u.text,
            "phi": report.pair.phi.text,
            "phi_sup": _scalar(report.pair.phi_sup, tol),
        },
        "verdict": report.verdict.value,
        "Q": _scalar(band.Q if band else None, tol),
        "compact": band.compact if band else None,
        "band": {
            "Q": _scalar(band.Q, tol),
            "scale": _scalar(band.scale, tol),
            "threshold": band.threshold,
            "interpretation": "essential norm in [Q/K, K*Q] for an unknown constant K",
        } if band else None,
        "series": series,
        "direct": {
            "upper": _ladder(report.direct.upper, tol),
            "lowerJ": _ladder(report.direct.lower_j, tol),
            "lowerI": _ladder(report.direct.lower_i, tol),
            "growth_target": {"value": growth.tail_estimate, "tol": tol, "trend": growth.trend.value},
        },
        "nmax": report.settings.nmax,
        "grid": str(report.settings.grid),
        "tol": tol,
        "diagnostics": _measured(report.diagnostics, tol),
    }


def dumps(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2) + "\n"


class JsonReportWriter:

    def __init__(self, path: Optional[str] = None):
        """
        Initialize the writer.

        Args:
            path: Destination file; None writes nothing and only renders
        """
        self.path = path

    def render(self, report: AnalysisReport) -> str:
        return dumps(report_to_dict(report))

    def write(self, report: AnalysisReport) -> str:
        """
        Render the report and write it to ``path`` when one is set.

        Returns:
            The rendered JSON text
        """
        text = self.render(report)
        if self.path:
            write_text(self.path, text)
            logger.info(f"Report written to {self.path}")
        return text


def write_text(path: str, text: str) -> None:
    """Write a text artifact, creating parent directories."""
    try:
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(path, "w", newline="") as f:
            f.write(text)
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise ReportWriteError(path, str(e)) from e
