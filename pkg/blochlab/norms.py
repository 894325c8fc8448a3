"""
Weighted sup-norms over the unit disk and the norms built on them.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Optional, Protocol, Tuple

import numpy as np
from loguru import logger

from .analytic import AnalyticExpr, SymbolPair, derivative
from .constants import (
    GridSpec,
    LOGLOG_2,
    RADIAL_SCAN_NODES,
    REFINE_SWEEPS,
    REFINE_XTOL,
    Space,
)
from .errors import InvalidArgumentError, SingularityError
from .optimize import boundary_distances, golden_section_max, radial_sup
from .weights import Weight

Modulus = Callable[[np.ndarray], np.ndarray]


class RadialProfile(Protocol):
    """Anything with a vectorised ``eval(r)``: weights and associated-weight estimates."""

    name: str

    def eval(self, r) -> np.ndarray: ...


@dataclass(frozen=True)
class PolarGrid:
    """Boundary-clustered polar grid over the clamped disk."""
    spec: GridSpec
    t: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)


@lru_cache(maxsize=16)
def polar_grid(spec: GridSpec) -> PolarGrid:
    """
    Build (and cache) the polar grid for a spec.

    Radial nodes have geometric distances to the circle, from the centre out
    to the clamp ring; angular nodes are uniform and include theta = 0.
    """
    t = boundary_distances(spec.radial, spec.clamp)
    r = 1.0 - t
    theta = 2.0 * np.pi * np.arange(spec.angular) / spec.angular
    points = r[:, None] * np.exp(1j * theta)[None, :]
    for array in (t, r, theta, points):
        array.setflags(write=False)
    return PolarGrid(spec=spec, t=t, r=r, theta=theta, points=points)


@dataclass(frozen=True)
class SupResult:
    """
    Outcome of a weighted sup over the disk.

    Attributes:
        value: Best objective value found
        argmax: Point attaining it
        grid_spec: Grid used for the initial pass
        refined: Whether golden-section polishing improved on the grid
        on_clamp: Argmax sits on the clamp ring (sup may only be approached at r -> 1)
    """
    value: float
    argmax: complex
    grid_spec: GridSpec
    refined: bool = False
    on_clamp: bool = False


def _checked(values: np.ndarray, points: np.ndarray) -> np.ndarray:
    bad = ~np.isfinite(values)
    if bad.any():
        where = np.flatnonzero(bad.ravel())[0]
        raise SingularityError("objective is not finite", points.ravel()[where])
    return values


def sup_modulus(v: RadialProfile, modulus: Modulus, grid: Optional[GridSpec] = None,
                refine: bool = True) -> SupResult:
    """
    sup over the clamped disk of v(|z|) * modulus(z).

    A full polar-grid pass picks the best node; golden-section sweeps then
    polish in s = log(1 - r) along the best angle and in theta along the
    best radius.

    Args:
        v: Radial weight
        modulus: Vectorised map z -> |f(z)|
        grid: Grid resolution
        refine: Polish the grid maximum

    Returns:
        The sup estimate
    """
    spec = grid or GridSpec()
    mesh = polar_grid(spec)
    with np.errstate(all="ignore"):
        values = v.eval(mesh.r)[:, None] * modulus(mesh.points)
    values = _checked(np.asarray(values, dtype=float), mesh.points)

    k, j = np.unravel_index(int(np.argmax(values)), values.shape)
    best = float(values[k, j])
    argmax = complex(mesh.points[k, j])
    if best <= 0.0 or not refine:
        return SupResult(best, argmax, spec, on_clamp=bool(k == spec.radial - 1))

    def objective(s: float, theta: float) -> float:
        r = 1.0 - math.exp(s)
        z = np.array([r * complex(math.cos(theta), math.sin(theta))])
        with np.errstate(all="ignore"):
            value = float(v.eval(r) * modulus(z)[0])
        return value if math.isfinite(value) else -math.inf

    s_lo = math.log(mesh.t[min(k + 1, spec.radial - 1)])
    s_hi = math.log(mesh.t[max(k - 1, 0)])
    d_theta = 2.0 * np.pi / spec.angular
    theta_lo = float(mesh.theta[j]) - d_theta
    theta_hi = float(mesh.theta[j]) + d_theta

    s_best, theta_best, refined_value = math.log(mesh.t[k]), float(mesh.theta[j]), best
    for _ in range(REFINE_SWEEPS):
        previous = refined_value
        s_try, value = golden_section_max(lambda s: objective(s, theta_best), s_lo, s_hi)
        if value > refined_value:
            s_best, refined_value = s_try, value
        theta_try, value = golden_section_max(lambda th: objective(s_best, th), theta_lo, theta_hi)
        # a sweep only moves the point when it improves on it
        if value > refined_value:
            theta_best, refined_value = theta_try, value
        if refined_value <= previous * (1.0 + 1e-14):
            break

    if refined_value > best:
        r = 1.0 - math.exp(s_best)
        argmax = r * complex(math.cos(theta_best), math.sin(theta_best))
        on_clamp = s_best <= math.log(spec.clamp) + REFINE_XTOL
        if on_clamp:
            logger.warning(f"Sup argmax {argmax:.6g} sits on the clamp ring; value may only be approached")
        return SupResult(refined_value, argmax, spec, refined=True, on_clamp=on_clamp)
    return SupResult(best, argmax, spec, on_clamp=bool(k == spec.radial - 1))


def weighted_sup(v: RadialProfile, f: AnalyticExpr, grid: Optional[GridSpec] = None) -> SupResult:
    """sup_z v(|z|) |f(z)| over the clamped disk."""
    if f.is_zero:
        return SupResult(0.0, 0j, grid or GridSpec())
    return sup_modulus(v, f.modulus, grid)


@dataclass(frozen=True)
class NormValue:
    """
    A space norm together with its constituent terms.

    Attributes:
        space: Which norm
        weight: Weight id
        parts: Terms whose sum is the norm (``f0``, ``df0``, ``sup``)
        tol: Declared relative tolerance
    """
    space: Space
    weight: str
    parts: Dict[str, float]
    tol: float = 1e-6

    @property
    def value(self) -> float:
        return sum(self.parts.values())

    def to_dict(self) -> dict:
        return {
            "space": self.space.value,
            "weight": self.weight,
            "value": self.value,
            "parts": dict(self.parts),
            "tol": self.tol,
        }


def _at_origin(f: AnalyticExpr) -> float:
    return float(abs(complex(f.evaluate(0j))))


def growth_norm(v: Weight, f: AnalyticExpr, grid: Optional[GridSpec] = None) -> NormValue:
    """||f|| in H_v^inf."""
    return NormValue(Space.GROWTH, v.name, {"sup": weighted_sup(v, f, grid).value})


def bloch_seminorm(v: Weight, f: AnalyticExpr, grid: Optional[GridSpec] = None) -> NormValue:
    """sup v |f'|."""
    return NormValue(Space.BLOCH_SEMINORM, v.name, {"sup": weighted_sup(v, derivative(f), grid).value})


def bloch_norm(v: Weight, f: AnalyticExpr, grid: Optional[GridSpec] = None) -> NormValue:
    """|f(0)| + sup v |f'|."""
    seminorm = bloch_seminorm(v, f, grid)
    return NormValue(Space.BLOCH, v.name, {"f0": _at_origin(f), "sup": seminorm.parts["sup"]})


# (weight name, weight function, n) -> sup_r r^n v(r); values are deterministic
# so concurrent writers store the same number. Names alone are not unique:
# formula weights may reuse a built-in name.
_MONOMIAL_CACHE: Dict[Tuple[str, Callable, int], float] = {}


def monomial_growth_norm(v: Weight, n: int) -> float:
    """
    ||g_n|| in H_v^inf for a radial weight: sup over r of r^n v(r).

    Args:
        v: Radial weight
        n: Monomial degree, n >= 0

    Returns:
        The norm (memoized per weight and degree)
    """
    if n < 0:
        raise InvalidArgumentError(f"monomial degree must be >= 0, got {n}")
    if not v.radial:
        raise InvalidArgumentError(f"{v.name} is not radial")
    key = (v.name, v.func, n)
    cached = _MONOMIAL_CACHE.get(key)
    if cached is not None:
        return cached

    value, _ = radial_sup(lambda r: np.power(r, n) * v.eval(r), RADIAL_SCAN_NODES)
    _MONOMIAL_CACHE[key] = value
    return value


def monomial_bloch_norm(v: Weight, n: int) -> float:
    """||g_n|| in B^v = n ||g_{n-1}|| in H_v^inf (and 1 for g_0)."""
    if n == 0:
        return 1.0
    return n * monomial_growth_norm(v, n - 1)


def monomial_zygmund_norm(v: Weight, n: int) -> float:
    """||g_n|| in Z^v = n (n - 1) ||g_{n-2}|| in H_v^inf for n >= 2."""
    if n == 0:
        return 1.0
    if n == 1:
        return 1.0
    return n * (n - 1) * monomial_growth_norm(v, n - 2)


def clear_monomial_cache() -> None:
    _MONOMIAL_CACHE.clear()


@dataclass(frozen=True)
class RestrictedSup:
    """sup over the part of the grid where |phi(z)| > r."""
    value: float
    empty: bool
    argmax: Optional[complex] = None


def restricted_objective(v: RadialProfile, w: RadialProfile, pair: SymbolPair, g: AnalyticExpr,
                         grid: Optional[GridSpec] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    v(|z|) |g(z)| / w(|phi(z)|) and |phi(z)| on every grid node.

    Returns:
        (objective, |phi|) arrays shaped like the grid
    """
    mesh = polar_grid(grid or GridSpec())
    phi_abs = np.abs(pair.phi.evaluate(mesh.points))
    if g.is_zero:
        return np.zeros(mesh.points.shape), phi_abs
    with np.errstate(all="ignore"):
        objective = v.eval(mesh.r)[:, None] * g.modulus(mesh.points) / w.eval(phi_abs)
    return _checked(np.asarray(objective, dtype=float), mesh.points), phi_abs


def restricted_sup(v: RadialProfile, w: RadialProfile, pair: SymbolPair, g: AnalyticExpr, r: float,
                   grid: Optional[GridSpec] = None) -> RestrictedSup:
    """
    sup of v(|z|) |g(z)| / w(|phi(z)|) over grid points with |phi(z)| > r.

    Args:
        v: Weight on the domain side
        w: Weight (or estimate) on the image side
        pair: Validated symbols
        g: Function in the numerator
        r: Threshold, 0 <= r < 1
        grid: Grid resolution

    Returns:
        The sup, or 0 flagged ``empty`` when no grid point qualifies
    """
    if not 0.0 <= r < 1.0:
        raise InvalidArgumentError(f"threshold must lie in [0, 1), got {r}")
    objective, phi_abs = restricted_objective(v, w, pair, g, grid)
    mask = phi_abs > r
    if not mask.any():
        return RestrictedSup(0.0, empty=True)
    masked = np.where(mask, objective, -np.inf)
    index = int(np.argmax(masked))
    mesh = polar_grid(grid or GridSpec())
    return RestrictedSup(float(masked.ravel()[index]), empty=False, argmax=complex(mesh.points.ravel()[index]))


def growth_bound_factor(z: np.ndarray) -> np.ndarray:
    """1 + log log(2 / (1 - |z|)) - log log 2."""
    t = 1.0 - np.abs(z)
    return 1.0 + np.log(np.log(2.0 / t)) - LOGLOG_2


@dataclass(frozen=True)
class GrowthBoundCheck:
    """
    Pointwise check of |f(z)| <= factor(z) * ||f|| in B^{v_log}.

    Attributes:
        holds: No sample point violates the bound
        norm: Bloch norm used on the right-hand side
        min_slack: Smallest bound - |f(z)| over the sample
        witness: First violating point, if any
    """
    holds: bool
    norm: float
    min_slack: float
    witness: Optional[complex] = None


def growth_bound_check(v_log: Weight, f: AnalyticExpr, sample: np.ndarray,
                       norm: Optional[NormValue] = None, grid: Optional[GridSpec] = None,
                       rel_tol: float = 1e-6) -> GrowthBoundCheck:
    """
    Verify the point-evaluation bound for B^{v_log} at sample points.

    Args:
        v_log: The logarithmic Bloch weight
        f: Function to test
        sample: Interior points
        norm: Precomputed Bloch norm of f; computed when omitted
        grid: Grid for the norm
        rel_tol: Slack granted to the numerically computed norm

    Returns:
        The check outcome
    """
    points = np.asarray(sample, dtype=np.complex128).ravel()
    norm = norm or bloch_norm(v_log, f, grid)
    bound = growth_bound_factor(points) * norm.value * (1.0 + rel_tol)
    slack = bound - np.abs(f.evaluate(points))
    bad = np.flatnonzero(slack < 0.0)
    witness = complex(points[bad[0]]) if bad.size else None
    if witness is not None:
        logger.warning(f"Growth bound fails for {f.text} at z = {witness:.6g}")
    return GrowthBoundCheck(
        holds=witness is None,
        norm=norm.value,
        min_slack=float(slack.min()) if slack.size else math.inf,
        witness=witness,
    )


def random_disk_points(count: int, radius: float = 0.999, seed: int = 0) -> np.ndarray:
    """Uniformly distributed points of the disk |z| <= radius, reproducible by seed."""
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    theta = 2.0 * np.pi * rng.random(count)
    return r * np.exp(1j * theta)
