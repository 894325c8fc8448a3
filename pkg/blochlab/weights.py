"""
Radial weights on the unit disk and their associated-weight estimates.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple, Union

import numpy as np
from loguru import logger

from .constants import RADIUS_CLAMP
from .errors import InvalidArgumentError
from .optimize import boundary_clustered_radii

ArrayLike = Union[float, np.ndarray]

# Bisection steps when locating the radius an associated-weight estimate resolves
RESOLVED_RADIUS_STEPS = 60

# Fixed grid for the flag self-test
_SELF_TEST_RADII = boundary_clustered_radii(2048)


def _clamped(r: ArrayLike) -> np.ndarray:
    return np.minimum(np.asarray(r, dtype=float), 1.0 - RADIUS_CLAMP)


@dataclass(frozen=True)
class Weight:
    """
    Positive radial weight v(r) on [0, 1).

    Attributes:
        name: Identifier used in reports and caches
        func: Vectorised map r -> v(r), called with clamped radii
        radial: Depends on |z| only
        typical: Vanishes (possibly slowly) as r -> 1
        decreasing: Non-increasing in r
    """
    name: str
    func: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)
    radial: bool = True
    typical: bool = True
    decreasing: bool = False

    def eval(self, r: ArrayLike) -> np.ndarray:
        return self.func(_clamped(r))

    def __call__(self, r: ArrayLike) -> np.ndarray:
        return self.eval(r)


def _vlog(r: np.ndarray) -> np.ndarray:
    t = 1.0 - r
    return t * np.log(2.0 / t)


def _wlog(r: np.ndarray) -> np.ndarray:
    # 1 - r^2 factored to keep precision near the boundary
    one_minus_sq = (1.0 - r) * (1.0 + r)
    return 1.0 / np.log(np.log(4.0 / one_minus_sq))


def _v3(r: np.ndarray) -> np.ndarray:
    t = 1.0 - r
    return t * np.log(3.0 / t)


def _ve(r: np.ndarray) -> np.ndarray:
    t = 1.0 - r
    return t * np.log(2.0 * math.e / t)


def weight_vlog() -> Weight:
    """v_log(r) = (1 - r) log(2 / (1 - r))."""
    return Weight("vlog", _vlog, radial=True, typical=True, decreasing=False)


def weight_wlog() -> Weight:
    """w_log(r) = 1 / log log(4 / (1 - r^2))."""
    return Weight("wlog", _wlog, radial=True, typical=True, decreasing=True)


def weight_v3() -> Weight:
    """v_3(r) = (1 - r) log(3 / (1 - r))."""
    return Weight("v3", _v3, radial=True, typical=True, decreasing=True)


def weight_ve() -> Weight:
    """v_e(r) = (1 - r) log(2e / (1 - r))."""
    return Weight("ve", _ve, radial=True, typical=True, decreasing=True)


def weight_unit() -> Weight:
    """Constant weight 1; turns weighted sups into plain sups of |f|."""
    return Weight("one", lambda r: np.ones_like(r), radial=True, typical=False, decreasing=True)


def weight_from_formula(name: str, text: str, typical: bool = False, decreasing: bool = False) -> Weight:
    """
    Radial weight from a formula in the expression grammar, with z standing for r.

    Args:
        name: Identifier for the new weight
        text: Formula, e.g. ``(1 - z)^2``
        typical: Declared typical flag
        decreasing: Declared decreasing flag

    Returns:
        The weight; its flags are checked against a grid before it is returned
    """
    from .analytic import parse

    expr = parse(text)

    def func(r: np.ndarray) -> np.ndarray:
        return np.real(expr.evaluate(np.asarray(r, dtype=np.complex128)))

    weight = Weight(name, func, radial=True, typical=typical, decreasing=decreasing)
    violations = verify_weight_flags(weight)
    if violations:
        raise InvalidArgumentError(f"weight {name!r} from {text!r}: " + "; ".join(violations))
    return weight


def verify_weight_flags(weight: Weight) -> List[str]:
    """
    Check a weight's declared properties on a fixed radial grid.

    Args:
        weight: Weight to check

    Returns:
        Violations found; empty when every declared flag holds
    """
    violations = []
    values = weight.eval(_SELF_TEST_RADII)
    if not np.all(np.isfinite(values)) or not np.all(values > 0.0):
        violations.append("not finite and positive on [0, 1)")
        return violations

    if weight.decreasing and np.any(np.diff(values) > 1e-12 * np.abs(values[:-1])):
        violations.append("declared decreasing but increases somewhere")

    if weight.typical:
        ladder = weight.eval(1.0 - 10.0 ** -np.arange(4, 13, dtype=float))
        if np.any(np.diff(ladder) >= 0.0) or ladder[-1] >= values[0]:
            violations.append("declared typical but does not decay towards the boundary")

    return violations


WEIGHTS: Dict[str, Callable[[], Weight]] = {
    "vlog": weight_vlog,
    "wlog": weight_wlog,
    "v3": weight_v3,
    "ve": weight_ve,
}


def get_weight(weight_id: str) -> Weight:
    """
    Look up a named weight and run its flag self-test.

    Args:
        weight_id: One of ``vlog``, ``wlog``, ``v3``, ``ve``

    Returns:
        The weight
    """
    try:
        weight = WEIGHTS[weight_id]()
    except KeyError:
        raise InvalidArgumentError(f"unknown weight {weight_id!r}; expected one of {sorted(WEIGHTS)}") from None

    for violation in verify_weight_flags(weight):
        logger.warning(f"Weight {weight_id}: {violation}")
    return weight


@dataclass(frozen=True)
class AssociatedWeightEstimate:
    """
    Monomial-family estimate of the associated weight of a radial base weight.

    eval(r) = (max_{0<=n<=nmax} r^n / ||g_n||)^-1, which can only overestimate
    the true associated weight since the sup runs over a sub-family.

    Attributes:
        base: Weight being estimated
        nmax: Largest monomial degree in the family
        norms: ||g_n|| in the growth space of ``base``, n = 0..nmax
    """
    base: Weight
    nmax: int
    norms: Tuple[float, ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"assoc({self.base.name},{self.nmax})"

    def _peak(self, r: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
        radii = _clamped(r)
        best = np.zeros_like(radii, dtype=float)
        degree = np.zeros(radii.shape, dtype=int)
        for n, norm in enumerate(self.norms):
            value = np.power(radii, n) / norm
            better = value > best
            best = np.where(better, value, best)
            degree = np.where(better, n, degree)
        return best, degree

    def eval(self, r: ArrayLike) -> np.ndarray:
        return 1.0 / self._peak(r)[0]

    def peak_degree(self, r: ArrayLike) -> np.ndarray:
        """Degree n attaining max r^n / ||g_n|| at each radius."""
        return self._peak(r)[1]

    def resolved_radius(self) -> float:
        """
        Largest radius whose peak degree is still below nmax.

        Past it the family is cut off before its maximum and eval(r) runs
        away from the associated weight.
        """
        lo, hi = 0.0, 1.0 - RADIUS_CLAMP
        if self.peak_degree(hi) < self.nmax:
            return hi
        for _ in range(RESOLVED_RADIUS_STEPS):
            mid = 0.5 * (lo + hi)
            if self.peak_degree(mid) < self.nmax:
                lo = mid
            else:
                hi = mid
        return lo

    def __call__(self, r: ArrayLike) -> np.ndarray:
        return self.eval(r)


def associated_weight(base: Weight, nmax: int = 400) -> AssociatedWeightEstimate:
    """
    Estimate the associated weight of ``base`` from the monomials g_0..g_nmax.

    Args:
        base: Radial weight
        nmax: Largest monomial degree

    Returns:
        The estimate
    """
    from .norms import monomial_growth_norm

    if not base.radial:
        raise InvalidArgumentError(f"associated weight needs a radial base, {base.name} is not")
    if nmax < 1:
        raise InvalidArgumentError(f"nmax must be >= 1, got {nmax}")
    if not np.isfinite(base.eval(0.0)):
        raise InvalidArgumentError(f"{base.name} is undefined at r = 0")

    norms = tuple(monomial_growth_norm(base, n) for n in range(nmax + 1))
    logger.debug(f"Associated weight of {base.name} built from {nmax + 1} monomials")
    return AssociatedWeightEstimate(base=base, nmax=nmax, norms=norms)


def weight_equivalence_band(a: Union[Weight, AssociatedWeightEstimate],
                            b: Union[Weight, AssociatedWeightEstimate],
                            grid: ArrayLike) -> Tuple[float, float]:
    """
    Min and max of a(r) / b(r) over a radius grid.

    Args:
        a: Numerator weight
        b: Denominator weight
        grid: Radii in [0, 1)

    Returns:
        (lower, upper)
    """
    radii = np.asarray(grid, dtype=float)
    if radii.size == 0 or np.any(radii < 0.0) or np.any(radii >= 1.0):
        raise InvalidArgumentError("equivalence grid must be non-empty and lie in [0, 1)")
    ratio = a.eval(radii) / b.eval(radii)
    if not np.all(np.isfinite(ratio)) or not np.all(ratio > 0.0):
        raise InvalidArgumentError(f"{a.name} / {b.name} is not finite and positive on the grid")
    return float(np.min(ratio)), float(np.max(ratio))
