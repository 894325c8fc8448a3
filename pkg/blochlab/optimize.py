"""
One-dimensional golden-section search and boundary-clustered grids.
"""

import math
from typing import Callable, Tuple

import numpy as np

from .constants import RADIUS_CLAMP, REFINE_XTOL

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0


def golden_section_max(func: Callable[[float], float], a: float, b: float,
                       xtol: float = REFINE_XTOL) -> Tuple[float, float]:
    """
    Maximise a unimodal function on [a, b] by golden-section search.

    Args:
        func: Objective, evaluated at scalar points
        a: Left end of the bracket
        b: Right end of the bracket
        xtol: Bracket width at which the search stops

    Returns:
        (x, func(x)) for the best point visited
    """
    if b < a:
        a, b = b, a
    dist = b - a
    if dist <= xtol:
        x = 0.5 * (a + b)
        return x, func(x)

    steps = int(math.ceil(math.log(xtol / dist) / math.log(INV_PHI)))

    c = a + INV_PHI_SQ * dist
    d = a + INV_PHI * dist
    yc = func(c)
    yd = func(d)

    for _ in range(steps - 1):
        if yc > yd:
            b, d, yd = d, c, yc
            dist *= INV_PHI
            c = a + INV_PHI_SQ * dist
            yc = func(c)
        else:
            a, c, yc = c, d, yd
            dist *= INV_PHI
            d = a + INV_PHI * dist
            yd = func(d)

    if yc > yd:
        return c, yc
    return d, yd


def boundary_distances(count: int, clamp: float = RADIUS_CLAMP) -> np.ndarray:
    """
    Distances t = 1 - r to the unit circle, geometric from 1 down to ``clamp``.

    The first node is the centre (t = 1) and the last sits on the clamp ring.
    """
    if count < 2:
        raise ValueError(f"need at least two radial nodes, got {count}")
    exponents = np.arange(count, dtype=float) / (count - 1)
    return clamp ** exponents


def boundary_clustered_radii(count: int, clamp: float = RADIUS_CLAMP) -> np.ndarray:
    """Radii in [0, 1 - clamp], increasing, clustered at the boundary."""
    return 1.0 - boundary_distances(count, clamp)


def radial_sup(profile: Callable[[np.ndarray], np.ndarray], count: int,
               clamp: float = RADIUS_CLAMP, xtol: float = REFINE_XTOL) -> Tuple[float, float]:
    """
    Sup of a radial profile over [0, 1 - clamp].

    A boundary-clustered scan brackets the best node, then golden-section
    search polishes in s = log(1 - r).

    Args:
        profile: Vectorised map r -> non-negative value
        count: Scan nodes
        clamp: Closest approach to r = 1
        xtol: Tolerance in s

    Returns:
        (sup value, radius attaining it)
    """
    t = boundary_distances(count, clamp)
    values = np.asarray(profile(1.0 - t), dtype=float)
    k = int(np.argmax(values))
    best, best_r = float(values[k]), float(1.0 - t[k])
    if best <= 0.0:
        return best, best_r

    s_lo = math.log(t[min(k + 1, count - 1)])
    s_hi = math.log(t[max(k - 1, 0)])

    def along(s: float) -> float:
        return float(profile(np.array([1.0 - math.exp(s)]))[0])

    s, value = golden_section_max(along, s_lo, s_hi, xtol)
    if value > best:
        return value, 1.0 - math.exp(s)
    return best, best_r
