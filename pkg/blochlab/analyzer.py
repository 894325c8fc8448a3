"""
End-to-end analysis of a symbol pair: series, verdict, band and boundary quantities.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple, Union

from loguru import logger

from .analytic import AnalyticExpr, SymbolPair, make_pair
from .constants import AnalysisSettings, Verdict
from .operators import (
    DirectQuantities,
    EssentialNormBand,
    RatioSeries,
    assess_continuity,
    band_from_series,
    direct_quantities,
)


@dataclass(frozen=True)
class AnalysisReport:
    """
    Everything computed for one pair.

    Attributes:
        pair: Validated symbols
        space: ``log-bloch`` for W_{u,phi}, ``zygmund-log`` for C_phi
        verdict: Continuity verdict
        band: Essential-norm band; None when the verdict is divergent
        j_series: J-ratio series up to nmax
        i_series: I-ratio series up to nmax
        direct: Boundary-limsup quantities
        settings: Settings the run used
        diagnostics: Fit slopes, stability data and solver flags
        primed: Primed (J', I') series for C_phi runs
        bridge_disagreement: Largest relative gap between primed and unprimed series
    """
    pair: SymbolPair
    space: str
    verdict: Verdict
    band: Optional[EssentialNormBand]
    j_series: RatioSeries
    i_series: RatioSeries
    direct: DirectQuantities
    settings: AnalysisSettings
    diagnostics: Dict[str, Any] = field(default_factory=dict)
    primed: Optional[Tuple[RatioSeries, RatioSeries]] = None
    bridge_disagreement: Optional[float] = None

    @property
    def compact(self) -> Optional[bool]:
        return self.band.compact if self.band else None

    def with_primed(self, j_primed: RatioSeries, i_primed: RatioSeries, disagreement: float) -> "AnalysisReport":
        return replace(self, primed=(j_primed, i_primed), bridge_disagreement=disagreement)


def analyze_pair(pair: SymbolPair, settings: Optional[AnalysisSettings] = None,
                 space: str = "log-bloch") -> AnalysisReport:
    """
    Run every operator-level computation for a validated pair.

    A divergent verdict still produces a report, without a band.

    Args:
        pair: Validated symbols
        settings: Run settings
        space: Label recorded in the report

    Returns:
        The report
    """
    settings = settings or AnalysisSettings()
    logger.info(f"Analysing u = {pair.u.text}, phi = {pair.phi.text} "
                f"(nmax {settings.nmax}, grid {settings.grid})")

    assessment = assess_continuity(pair, settings.nmax, settings.grid, settings.threads)
    band = None
    if assessment.verdict is not Verdict.DIVERGENT:
        band = band_from_series(assessment.j_series, assessment.i_series)
        logger.info(f"Q = {band.Q:.9g}, compact = {band.compact}")
    else:
        logger.warning("Operator judged divergent; no essential-norm band")

    direct = direct_quantities(pair, settings)
    diagnostics = {
        "phi_sup": pair.phi_sup,
        "phi_sup_witness": [pair.witness.real, pair.witness.imag],
        "touches_boundary": pair.touches_boundary,
        "schedule_points": len(assessment.j_series.n_values),
        "fits": {
            s.kind.value: {"slope": s.slope, "stderr": s.stderr, "trend": s.trend.value}
            for s in (assessment.j_series, assessment.i_series)
        },
        "stability": {
            "nmax": settings.nmax,
            "extended_nmax": assessment.j_extended.nmax,
            "J": [assessment.j_series.running_max, assessment.j_extended.running_max],
            "I": [assessment.i_series.running_max, assessment.i_extended.running_max],
            "extended_trends": [assessment.j_extended.trend.value, assessment.i_extended.trend.value],
        },
        "ladder_truncated": direct.upper.truncated or direct.lower_j.truncated or direct.lower_i.truncated,
    }
    return AnalysisReport(
        pair=pair,
        space=space,
        verdict=assessment.verdict,
        band=band,
        j_series=assessment.j_series,
        i_series=assessment.i_series,
        direct=direct,
        settings=settings,
        diagnostics=diagnostics,
    )


def analyze(u: Union[str, AnalyticExpr], phi: Union[str, AnalyticExpr],
            settings: Optional[AnalysisSettings] = None) -> AnalysisReport:
    """Parse, validate and analyse a pair."""
    settings = settings or AnalysisSettings()
    return analyze_pair(make_pair(u, phi, settings.grid), settings)
