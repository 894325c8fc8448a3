"""
Trend classification for ratio sequences and the continuity verdict rule.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from loguru import logger
from scipy.stats import linregress

from .constants import (
    COMPACT_REL_THRESHOLD,
    STABILITY_REL_CHANGE,
    TREND_CONFIDENCE,
    TREND_SLOPE,
    Trend,
    Verdict,
)


def tail_window(n_values: Sequence[int]) -> np.ndarray:
    """Boolean mask of the entries with n in [ceil(N/2), N], N the largest n."""
    n = np.asarray(n_values)
    if n.size == 0:
        return np.zeros(0, dtype=bool)
    top = int(n.max())
    return n >= math.ceil(top / 2)


@dataclass(frozen=True)
class TrendFit:
    """Log-log regression of a sequence tail."""
    trend: Trend
    slope: Optional[float] = None
    stderr: Optional[float] = None


def classify_trend(n_values: Sequence[int], ratios: Sequence[float], scale: Optional[float] = None) -> TrendFit:
    """
    Classify the tail of a ratio sequence.

    The sequence counts as decaying to zero when its tail has fallen below the
    compactness threshold relative to ``scale`` (default: the largest ratio).
    Otherwise log(ratio) is regressed on log(n) over the tail and the slope,
    with its standard error, decides between growing, decaying and bounded.

    Args:
        n_values: Sequence indices, increasing
        ratios: Non-negative values
        scale: Reference magnitude

    Returns:
        The trend with the fitted slope when a fit was made
    """
    n = np.asarray(n_values, dtype=float)
    values = np.asarray(ratios, dtype=float)
    mask = tail_window(n_values)
    if scale is None:
        scale = float(values.max()) if values.size else 0.0

    tail = values[mask]
    if scale <= 0.0 or tail.size == 0 or float(tail.max()) <= COMPACT_REL_THRESHOLD * scale:
        return TrendFit(Trend.DECAYING)
    if np.any(tail <= 0.0) or tail.size < 3:
        return TrendFit(Trend.INCONCLUSIVE)

    fit = linregress(np.log(n[mask]), np.log(tail))
    slope, stderr = float(fit.slope), float(fit.stderr)
    if slope - TREND_CONFIDENCE * stderr > TREND_SLOPE:
        trend = Trend.GROWING
    elif slope + TREND_CONFIDENCE * stderr < -TREND_SLOPE:
        trend = Trend.DECAYING
    elif abs(slope) <= TREND_SLOPE:
        trend = Trend.BOUNDED
    else:
        trend = Trend.INCONCLUSIVE
    return TrendFit(trend, slope, stderr)


def running_max_stable(prefix_max: float, full_max: float, rel_change: float = STABILITY_REL_CHANGE) -> bool:
    """Running max over n <= N against n <= 2N: changed by at most ``rel_change``."""
    if full_max <= 0.0:
        return True
    return full_max <= prefix_max * (1.0 + rel_change)


def decide_verdict(trends: List[Trend], prefix_maxima: List[float], full_maxima: List[float]) -> Verdict:
    """
    Combine per-series evidence into a continuity verdict.

    Args:
        trends: Trend of every series (at N and at 2N)
        prefix_maxima: Running max of each series over n <= N
        full_maxima: Running max of each series over n <= 2N

    Returns:
        Divergent if any series grows; bounded if every series is flat or
        decaying and every running max is stable when N doubles;
        inconclusive otherwise
    """
    if Trend.GROWING in trends:
        return Verdict.DIVERGENT

    settled = all(t in (Trend.DECAYING, Trend.BOUNDED) for t in trends)
    stable = all(running_max_stable(a, b) for a, b in zip(prefix_maxima, full_maxima))
    if settled and stable:
        return Verdict.BOUNDED

    logger.debug(f"Inconclusive: trends={[t.value for t in trends]}, stable={stable}")
    return Verdict.INCONCLUSIVE
