"""
Test-function families f and h anchored at a point a of the disk.

With L(z) = log log(4 / (1 - conj(a) z)) and a_n = log log(4 / (1 - |a|^2)):

    f(z) = (3 / a_n) L^2 - (2 / a_n^2) L^3
    h(z) = L^3 / (conj(a) a_n^2) - L^2 / (conj(a) a_n)

so that f(a) = a_n, f'(a) = 0, h(a) = 0 and
h'(a) = 1 / ((1 - |a|^2) log(4 / (1 - |a|^2))).
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from loguru import logger
from scipy.stats import linregress

from .analytic import AnalyticExpr, Z, derivative
from .constants import GridSpec, TREND_SLOPE, TWO_OVER_E
from .errors import InvalidArgumentError
from .norms import bloch_norm
from .optimize import golden_section_max
from .weights import weight_vlog

TWO_PI = 2.0 * math.pi


class FamilyKind(Enum):
    F = "f"
    H = "h"


@dataclass(frozen=True)
class TestFunctionFamily:
    """
    One member of a test-function family.

    Attributes:
        kind: f or h
        anchor: Point a with |a| < 1
        a_n: log log(4 / (1 - |a|^2))
        expr: The member itself
        expr_deriv: Closed-form derivative of the member
    """
    __test__ = False

    kind: FamilyKind
    anchor: complex
    a_n: float
    expr: AnalyticExpr = field(repr=False)
    expr_deriv: AnalyticExpr = field(repr=False)

    @property
    def symbolic_deriv(self) -> AnalyticExpr:
        return derivative(self.expr)


def _one_minus_abs_sq(a: complex) -> float:
    # same operation order as 1 - conj(a) z at z = a, so L(a) == a_n to the ulp
    return 1.0 - (a.real * a.real + a.imag * a.imag)


def anchor_log_weight(a: complex) -> float:
    """a_n = log log(4 / (1 - |a|^2)); positive for every |a| < 1."""
    return math.log(math.log(4.0 / _one_minus_abs_sq(a)))


def _checked_anchor(anchor) -> complex:
    a = complex(anchor)
    if not abs(a) < 1.0:
        raise InvalidArgumentError(f"anchor must lie inside the disk, got |a| = {abs(a)}")
    return a


def _exact(x: float) -> sp.Float:
    # 17 digits so generated code reproduces the double exactly
    return sp.Float(x, 17)


def _sym_complex(value: complex) -> sp.Expr:
    if value.imag == 0.0:
        return _exact(value.real)
    return _exact(value.real) + _exact(value.imag) * sp.I


def _pieces(a: complex) -> Tuple[sp.Expr, sp.Expr, sp.Expr, sp.Expr]:
    abar = _sym_complex(a.conjugate())
    one_minus = 1 - abar * Z
    inner = sp.log(4 / one_minus)
    return abar, one_minus, inner, sp.log(inner)


def build_f(anchor) -> TestFunctionFamily:
    """
    f member anchored at ``anchor``.

    Raises:
        InvalidArgumentError: |anchor| >= 1
    """
    a = _checked_anchor(anchor)
    a_n = anchor_log_weight(a)
    abar, one_minus, inner, L = _pieces(a)
    an = _exact(a_n)

    expr = 3 / an * L ** 2 - 2 / an ** 2 * L ** 3
    deriv = (6 * abar / an * L - 6 * abar / an ** 2 * L ** 2) / (one_minus * inner)
    return TestFunctionFamily(FamilyKind.F, a, a_n, AnalyticExpr(expr), AnalyticExpr(deriv))


def build_h(anchor) -> TestFunctionFamily:
    """
    h member anchored at ``anchor``.

    Raises:
        InvalidArgumentError: anchor = 0 (the formula divides by conj(a)) or |anchor| >= 1
    """
    a = _checked_anchor(anchor)
    if a == 0:
        raise InvalidArgumentError("h is undefined for anchor 0")
    a_n = anchor_log_weight(a)
    abar, one_minus, inner, L = _pieces(a)
    an = _exact(a_n)

    expr = L ** 3 / (abar * an ** 2) - L ** 2 / (abar * an)
    deriv = (3 / an ** 2 * L ** 2 - 2 / an * L) / (one_minus * inner)
    return TestFunctionFamily(FamilyKind.H, a, a_n, AnalyticExpr(expr), AnalyticExpr(deriv))


BUILDERS = {FamilyKind.F: build_f, FamilyKind.H: build_h}


def build_family(kind: FamilyKind, anchor) -> TestFunctionFamily:
    return BUILDERS[FamilyKind(kind)](anchor)


def h_prime_at_anchor(anchor) -> float:
    """1 / ((1 - |a|^2) log(4 / (1 - |a|^2)))."""
    d = _one_minus_abs_sq(_checked_anchor(anchor))
    return 1.0 / (d * math.log(4.0 / d))


def geometric_anchors(count: int) -> List[float]:
    """1 - 2^-k for k = 1..count."""
    if count < 1:
        raise InvalidArgumentError(f"anchor count must be >= 1, got {count}")
    return [1.0 - 2.0 ** -k for k in range(1, count + 1)]


def parse_anchor_spec(text: str) -> List[complex]:
    """
    Anchors from ``geometric:K`` or a comma separated list of numbers.

    Args:
        text: e.g. ``geometric:20`` or ``0.5,0.9,0.99``

    Returns:
        The anchors
    """
    text = text.strip()
    if text.startswith("geometric:"):
        count = text.split(":", 1)[1]
        if not count.isdigit():
            raise InvalidArgumentError(f"bad anchor spec {text!r}")
        return [complex(a) for a in geometric_anchors(int(count))]
    try:
        return [complex(part.strip().replace("i", "j")) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InvalidArgumentError(f"bad anchor spec {text!r}") from None


@dataclass(frozen=True)
class BoundScan:
    """
    Bloch norms of one family along an anchor list.

    Attributes:
        kind: Family scanned
        anchors: Anchors, in scan order
        norms: ||member||_{B^{v_log}} per anchor
        slope: Slope of log(norm) against anchor index over the second half
        bounded: Norms are finite and the slope shows no growth
    """
    kind: FamilyKind
    anchors: Tuple[complex, ...]
    norms: Tuple[float, ...]
    slope: float
    bounded: bool

    @property
    def max_norm(self) -> float:
        return max(self.norms)


def uniform_bound_scan(kind: FamilyKind, anchors: Sequence[complex],
                       grid: Optional[GridSpec] = None) -> BoundScan:
    """
    Measure the Bloch norms of a family as the anchor approaches the circle.

    Args:
        kind: f or h
        anchors: Anchors with |a| increasing towards 1
        grid: Sup-solver grid

    Returns:
        The scan; the bound itself is measured, never assumed
    """
    kind = FamilyKind(kind)
    if not anchors:
        raise InvalidArgumentError("anchor list is empty")
    v_log = weight_vlog()
    norms = [bloch_norm(v_log, build_family(kind, a).expr, grid).value for a in anchors]

    half = len(norms) // 2
    tail = np.log(np.asarray(norms[half:]))
    slope = float(linregress(np.arange(tail.size), tail).slope) if tail.size >= 3 else 0.0
    bounded = bool(np.all(np.isfinite(norms))) and slope <= TREND_SLOPE
    logger.info(f"{kind.value}-family over {len(anchors)} anchors: max Bloch norm {max(norms):.6g}, "
                f"tail slope {slope:.3g}")
    return BoundScan(kind, tuple(complex(a) for a in anchors), tuple(norms), slope, bounded)


def compact_sup(family: TestFunctionFamily, radius: float = 0.5, nodes: int = 4096) -> float:
    """max |member| over |z| <= radius, read on the circle |z| = radius."""
    if not 0.0 < radius < 1.0:
        raise InvalidArgumentError(f"radius must lie in (0, 1), got {radius}")
    theta = TWO_PI * np.arange(nodes) / nodes
    return float(family.expr.modulus(radius * np.exp(1j * theta)).max())


def branch_margin(anchor, points: np.ndarray) -> float:
    """
    Smallest distance from 4 / (1 - conj(a) z) to the cut (-inf, 0] over ``points``.
    """
    a = _checked_anchor(anchor)
    z = np.asarray(points, dtype=np.complex128)
    w = 4.0 / (1.0 - np.conj(a) * z)
    distance = np.where(w.real > 0.0, np.abs(w), np.abs(w.imag))
    return float(distance.min())


def branch_limit_check(x: float) -> float:
    """
    sqrt(log^2(sqrt(log^2(4/x) + 4 pi^2)) + 4 pi^2) / log log(2/x).

    Tends to 1 as x -> 0+, loglog-slowly.
    """
    if not 0.0 < x < TWO_OVER_E:
        raise InvalidArgumentError(f"x must lie in (0, 2/e), got {x}")
    inner = math.hypot(math.log(4.0 / x), TWO_PI)
    return math.hypot(math.log(inner), TWO_PI) / math.log(math.log(2.0 / x))


def branch_limit_quotient_log(s: float) -> float:
    """The same quotient at x = exp(-s); usable for s far beyond double-precision x."""
    if not s > -math.log(TWO_OVER_E):
        raise InvalidArgumentError(f"s must exceed log(e/2), got {s}")
    inner = math.hypot(math.log(4.0) + s, TWO_PI)
    return math.hypot(math.log(inner), TWO_PI) / math.log(math.log(2.0) + s)


def h2(t):
    """h_2(t) = t log(2 / t)."""
    return t * np.log(2.0 / t)


@dataclass(frozen=True)
class MonotonicityCheck:
    passed: bool
    maximizer: float
    witness: Optional[Tuple[float, float]] = None


def h2_monotonicity_check(points: int = 10_000) -> MonotonicityCheck:
    """
    Check that h_2 increases strictly on (0, 2/e) and peaks at 2/e.

    Returns:
        Outcome, the numerically located maximizer on (0, 1], and the first
        decreasing pair (t1, t2) when the check fails
    """
    t = np.linspace(1e-6, TWO_OVER_E - 1e-6, points)
    values = h2(t)
    drops = np.flatnonzero(np.diff(values) <= 0.0)
    witness = (float(t[drops[0]]), float(t[drops[0] + 1])) if drops.size else None
    maximizer, _ = golden_section_max(lambda x: float(h2(x)), 1e-9, 1.0, 1e-12)
    if witness is not None:
        logger.warning(f"h_2 fails to increase between t = {witness[0]} and t = {witness[1]}")
    return MonotonicityCheck(passed=witness is None, maximizer=maximizer, witness=witness)
