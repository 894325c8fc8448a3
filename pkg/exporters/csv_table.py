import csv
import io
from typing import Optional

from loguru import logger

from blochlab.operators import RatioSeries

from .json_report import write_text

COLUMNS = ("n", "j_ratio", "i_ratio")


def _fmt(value: float) -> str:
    # full double precision
    return format(value, ".17g")


class CsvTableWriter:

    def __init__(self, path: Optional[str] = None):
        """
        Initialize the writer.

        Args:
            path: Destination file; None only renders
        """
        self.path = path

    def render(self, j_series: RatioSeries, i_series: RatioSeries) -> str:
        """
        Ratio table with one row per sampled n.

        Args:
            j_series: J-ratio series
            i_series: I-ratio series sampled at the same n

        Returns:
            CSV text with header n, j_ratio, i_ratio
        """
        if j_series.n_values != i_series.n_values:
            raise ValueError("J and I series are sampled at different n")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(COLUMNS)
        for n, j, i in zip(j_series.n_values, j_series.ratios, i_series.ratios):
            writer.writerow((n, _fmt(j), _fmt(i)))
        return buffer.getvalue()

    def write(self, j_series: RatioSeries, i_series: RatioSeries) -> str:
        text = self.render(j_series, i_series)
        if self.path:
            write_text(self.path, text)
            logger.info(f"Ratio table written to {self.path} ({len(j_series.n_values)} rows)")
        return text
