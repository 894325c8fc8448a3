__version__ = "0.1.0"

from .constants import AnalysisSettings, GridSpec, SeriesKind, Trend, Verdict
from .analytic import AnalyticExpr, SymbolPair, make_pair, parse
from .weights import Weight, associated_weight, get_weight
from .analyzer import AnalysisReport, analyze, analyze_pair
from .zygmund import cphi_analysis

__all__ = [
    '__version__',
    'AnalysisSettings',
    'GridSpec',
    'SeriesKind',
    'Trend',
    'Verdict',
    'AnalyticExpr',
    'SymbolPair',
    'make_pair',
    'parse',
    'Weight',
    'associated_weight',
    'get_weight',
    'AnalysisReport',
    'analyze',
    'analyze_pair',
    'cphi_analysis'
]
