from .json_report import JsonReportWriter, report_to_dict
from .csv_table import CsvTableWriter
from .console import ConsoleTable

__all__ = [
  'JsonReportWriter',
  'report_to_dict',
  'CsvTableWriter',
  'ConsoleTable'
]
