"""
Operator-level quantities for weighted composition operators on B^{v_log}.

Norms of the functionals J_u and I_u never go through quadrature: both vanish
at the origin and their derivatives are f u' and f' u, so every Bloch norm is
a weighted sup of a product of known functions.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from loguru import logger

from .analytic import AnalyticExpr, SymbolPair, derivative, power, product
from .constants import (
    AnalysisSettings,
    COMPACT_REL_THRESHOLD,
    DENSE_SCHEDULE_MAX,
    GridSpec,
    MIN_NMAX,
    SCALE_PROXY_NMAX,
    SeriesKind,
    Trend,
    Verdict,
)
from .errors import DivergentOperatorError, InvalidArgumentError
from .norms import (
    RadialProfile,
    monomial_bloch_norm,
    monomial_growth_norm,
    restricted_objective,
    sup_modulus,
    weighted_sup,
)
from .verdicts import classify_trend, decide_verdict, tail_window
from .weights import Weight, associated_weight, weight_v3, weight_vlog, weight_wlog

Modulus = Callable[[np.ndarray], np.ndarray]


def worker_count(threads: Optional[int] = None) -> Optional[int]:
    """Explicit setting, else BLOCHLAB_THREADS, else the executor default."""
    if threads is not None:
        return max(1, int(threads))
    env = os.getenv("BLOCHLAB_THREADS")
    if env and env.strip().isdigit() and int(env) > 0:
        return int(env)
    return None


def n_schedule(nmax: int) -> List[int]:
    """
    Sample points 1..nmax: every n up to 64, then 2^k * {1, 5/4, 25/16}.

    The last entry is always ``nmax``.
    """
    if nmax < 1:
        raise InvalidArgumentError(f"nmax must be >= 1, got {nmax}")
    values = set(range(1, min(nmax, DENSE_SCHEDULE_MAX) + 1))
    base = DENSE_SCHEDULE_MAX
    while base <= nmax:
        for step in (base, base * 5 // 4, base * 25 // 16):
            if step <= nmax:
                values.add(step)
        base *= 2
    values.add(nmax)
    return sorted(values)


@dataclass(frozen=True)
class SymbolFields:
    """u, u', phi and phi' of a pair, ready for repeated grid evaluation."""
    u: AnalyticExpr
    du: AnalyticExpr
    phi: AnalyticExpr
    dphi: AnalyticExpr

    @classmethod
    def of(cls, pair: SymbolPair) -> "SymbolFields":
        return cls(u=pair.u, du=derivative(pair.u), phi=pair.phi, dphi=derivative(pair.phi))

    def j_modulus(self, n: int) -> Optional[Modulus]:
        """|u'(z)| |phi(z)|^n, or None when u' vanishes."""
        if self.du.is_zero:
            return None
        return lambda z: self.du.modulus(z) * self.phi.modulus(z) ** n

    def i_modulus(self, n: int) -> Optional[Modulus]:
        """n |u(z)| |phi'(z)| |phi(z)|^(n-1), or None when it vanishes."""
        if n == 0 or self.u.is_zero or self.dphi.is_zero:
            return None
        return lambda z: n * self.u.modulus(z) * self.dphi.modulus(z) * self.phi.modulus(z) ** (n - 1)

    def growth_modulus(self, n: int) -> Optional[Modulus]:
        """|u(z)| |phi(z)|^n."""
        if self.u.is_zero:
            return None
        return lambda z: self.u.modulus(z) * self.phi.modulus(z) ** n


def modulus_sup(v: Weight, modulus: Optional[Modulus], grid: Optional[GridSpec]) -> float:
    if modulus is None:
        return 0.0
    return sup_modulus(v, modulus, grid).value


def j_functional_bloch_norm(pair: SymbolPair, n: int, grid: Optional[GridSpec] = None) -> float:
    """
    ||J_u(phi^n)|| in B^{v_log}.

    (J_u f)(0) = 0 and (J_u f)' = f u', so the norm is sup v_log |u' phi^n|.
    """
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    integrand = product(derivative(pair.u), power(pair.phi, n))
    return weighted_sup(weight_vlog(), integrand, grid).value


def i_functional_bloch_norm(pair: SymbolPair, n: int, grid: Optional[GridSpec] = None) -> float:
    """
    ||I_u(phi^n)|| in B^{v_log} = sup v_log |n phi^(n-1) phi' u|.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    integrand = product(AnalyticExpr(n * derivative(pair.phi).sym), power(pair.phi, n - 1), pair.u)
    return weighted_sup(weight_vlog(), integrand, grid).value


@dataclass(frozen=True)
class RatioSeries:
    """
    Per-n values of one ratio sequence.

    Attributes:
        kind: Which sequence
        n_values: Sampled indices, increasing
        ratios: Values at those indices
        trend: Classified tail behaviour
        slope: Tail log-log slope, when a regression was made
        stderr: Standard error of the slope
    """
    kind: SeriesKind
    n_values: Tuple[int, ...]
    ratios: Tuple[float, ...]
    trend: Trend = Trend.INCONCLUSIVE
    slope: Optional[float] = None
    stderr: Optional[float] = None

    @property
    def nmax(self) -> int:
        return self.n_values[-1] if self.n_values else 0

    @property
    def tail_estimate(self) -> float:
        """max of the ratios over [ceil(N/2), N]."""
        if not self.ratios:
            return 0.0
        mask = tail_window(self.n_values)
        return float(np.max(np.asarray(self.ratios)[mask]))

    @property
    def running_max(self) -> float:
        return max(self.ratios, default=0.0)

    def scale(self, nmax: int = SCALE_PROXY_NMAX) -> float:
        """Operator-norm proxy: max ratio over n <= nmax."""
        return max((r for n, r in zip(self.n_values, self.ratios) if n <= nmax), default=0.0)

    def prefix(self, nmax: int, scale: Optional[float] = None) -> "RatioSeries":
        """The entries with n <= nmax, re-classified."""
        rows = [(n, r) for n, r in zip(self.n_values, self.ratios) if n <= nmax]
        return classified(self.kind, [n for n, _ in rows], [r for _, r in rows], scale)

    def rows(self) -> List[Tuple[int, float]]:
        return list(zip(self.n_values, self.ratios))


def classified(kind: SeriesKind, n_values: List[int], ratios: List[float],
               scale: Optional[float] = None) -> RatioSeries:
    """Build a RatioSeries and classify its tail."""
    fit = classify_trend(n_values, ratios, scale)
    return RatioSeries(kind, tuple(n_values), tuple(float(r) for r in ratios), fit.trend, fit.slope, fit.stderr)


def parallel_map(func: Callable[[int], float], values: List[int], threads: Optional[int]) -> List[float]:
    workers = worker_count(threads)
    if workers == 1:
        return [func(n) for n in values]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, values))


def ratio_series(pair: SymbolPair, nmax: int, grid: Optional[GridSpec] = None,
                 threads: Optional[int] = None,
                 schedule: Optional[List[int]] = None) -> Tuple[RatioSeries, RatioSeries]:
    """
    The J- and I-ratio sequences of a pair.

    J-ratio(n) = (n+1) ||J_u(phi^n)|| / ||g_{n+1}||_{B^{w_log}}
    I-ratio(n) = ||I_u(phi^n)|| / ||g_n||_{B^{v_log}}

    Args:
        pair: Validated symbols
        nmax: Largest n, at least 8
        grid: Sup-solver grid
        threads: Worker cap for the per-n sups
        schedule: Explicit n values; defaults to the schedule up to nmax

    Returns:
        (J series, I series)
    """
    if nmax < MIN_NMAX:
        raise InvalidArgumentError(f"nmax must be >= {MIN_NMAX}, got {nmax}")
    v_log, w_log = weight_vlog(), weight_wlog()
    fields = SymbolFields.of(pair)
    schedule = schedule or n_schedule(nmax)

    def j_ratio(n: int) -> float:
        numerator = modulus_sup(v_log, fields.j_modulus(n), grid)
        return (n + 1) * numerator / monomial_bloch_norm(w_log, n + 1)

    def i_ratio(n: int) -> float:
        numerator = modulus_sup(v_log, fields.i_modulus(n), grid)
        return numerator / monomial_bloch_norm(v_log, n)

    j_values = parallel_map(j_ratio, schedule, threads)
    i_values = parallel_map(i_ratio, schedule, threads)
    j_series = classified(SeriesKind.J, schedule, j_values)
    i_series = classified(SeriesKind.I, schedule, i_values)
    logger.info(f"Ratio series to n = {nmax}: J tail {j_series.tail_estimate:.6g} ({j_series.trend.value}), "
                f"I tail {i_series.tail_estimate:.6g} ({i_series.trend.value})")
    return j_series, i_series


@dataclass(frozen=True)
class EssentialNormBand:
    """
    Essential norm known up to an unknown constant K: it lies in [Q/K, K Q].

    Attributes:
        Q: max of the two tail estimates
        scale: Operator-norm proxy from n <= 10
        compact: Q <= 1e-6 * scale
    """
    Q: float
    scale: float
    compact: bool
    threshold: float = COMPACT_REL_THRESHOLD


def band_from_series(j_series: RatioSeries, i_series: RatioSeries) -> EssentialNormBand:
    q = max(j_series.tail_estimate, i_series.tail_estimate)
    scale = max(j_series.scale(), i_series.scale())
    return EssentialNormBand(Q=q, scale=scale, compact=q <= COMPACT_REL_THRESHOLD * scale)


@dataclass(frozen=True)
class ContinuityAssessment:
    """Verdict with the series it was read from (computed to 2N, reported to N)."""
    verdict: Verdict
    j_series: RatioSeries
    i_series: RatioSeries
    j_extended: RatioSeries
    i_extended: RatioSeries


def assess_continuity(pair: SymbolPair, nmax: int, grid: Optional[GridSpec] = None,
                      threads: Optional[int] = None) -> ContinuityAssessment:
    """
    Compute both series to 2N and read the continuity verdict from them.

    Returns:
        The verdict and the series at N and 2N
    """
    schedule = sorted(set(n_schedule(nmax)) | set(n_schedule(2 * nmax)))
    j_full, i_full = ratio_series(pair, 2 * nmax, grid, threads, schedule)
    j_series = j_full.prefix(nmax)
    i_series = i_full.prefix(nmax)
    verdict = decide_verdict(
        trends=[j_series.trend, i_series.trend, j_full.trend, i_full.trend],
        prefix_maxima=[j_series.running_max, i_series.running_max],
        full_maxima=[j_full.running_max, i_full.running_max],
    )
    logger.info(f"Continuity verdict for u = {pair.u.text}, phi = {pair.phi.text}: {verdict.value}")
    return ContinuityAssessment(verdict, j_series, i_series, j_full, i_full)


def continuity_verdict(pair: SymbolPair, nmax: int, grid: Optional[GridSpec] = None,
                       threads: Optional[int] = None) -> Verdict:
    """Bounded, divergent or inconclusive, from the ratio tails at N and 2N."""
    return assess_continuity(pair, nmax, grid, threads).verdict


def essential_norm_band(pair: SymbolPair, nmax: int, grid: Optional[GridSpec] = None,
                        threads: Optional[int] = None) -> EssentialNormBand:
    """
    Q = max of the J and I tail estimates, with the compactness flag.

    Raises:
        DivergentOperatorError: the operator is judged not continuous
    """
    assessment = assess_continuity(pair, nmax, grid, threads)
    if assessment.verdict is Verdict.DIVERGENT:
        raise DivergentOperatorError(
            f"W(u = {pair.u.text}, phi = {pair.phi.text}) is not continuous on B^vlog; no essential norm")
    return band_from_series(assessment.j_series, assessment.i_series)


@dataclass(frozen=True)
class LadderResult:
    """
    A boundary quantity read along r_k = 1 - 2^-k.

    Attributes:
        value: Last resolvable ladder value (the limit estimate)
        ladder: (k, r_k, value) for every resolvable rung
        truncated: The ladder stopped before k_max, either because the grid
            no longer resolves {|phi| > r_k} or because r_k reached radius_cap
        short_circuit: phi stays inside a smaller disk, limit is 0
        radius_cap: Largest |phi| the image-side weight is trusted at, if any
    """
    value: float
    ladder: Tuple[Tuple[int, float, float], ...] = field(default=())
    truncated: bool = False
    short_circuit: bool = False
    radius_cap: Optional[float] = None


def boundary_ladder(v: RadialProfile, w: RadialProfile, pair: SymbolPair, g: AnalyticExpr,
                    kmax: int = 30, grid: Optional[GridSpec] = None,
                    radius_cap: Optional[float] = None) -> LadderResult:
    """
    sup over {|phi| > r_k} of v(|z|) |g(z)| / w(|phi(z)|) for r_k = 1 - 2^-k, k = 1..kmax.

    The objective is evaluated once on the grid and masked per rung, so the
    ladder is non-increasing. With ``radius_cap`` the rungs read the annulus
    r_k < |phi| <= radius_cap and the ladder stops once r_k reaches the cap.
    """
    if not pair.touches_boundary:
        return LadderResult(0.0, short_circuit=True)

    objective, phi_abs = restricted_objective(v, w, pair, g, grid)
    trusted = np.ones(phi_abs.shape, dtype=bool) if radius_cap is None else phi_abs <= radius_cap
    rungs = []
    truncated = False
    for k in range(1, kmax + 1):
        r = 1.0 - 2.0 ** -k
        if radius_cap is not None and r >= radius_cap:
            truncated = True
            logger.warning(f"Ladder truncated at k = {k}: {w.name} is only resolved up to |phi| = {radius_cap:.12g}")
            break
        mask = (phi_abs > r) & trusted
        if not mask.any():
            truncated = True
            logger.warning(f"Ladder truncated at k = {k}: grid no longer resolves |phi| > {r:.12g}")
            break
        rungs.append((k, r, float(objective[mask].max())))

    value = rungs[-1][2] if rungs else 0.0
    return LadderResult(value, tuple(rungs), truncated=truncated, radius_cap=radius_cap)


def boundary_limsup_upper(pair: SymbolPair, kmax: int = 30, grid: Optional[GridSpec] = None) -> LadderResult:
    """lim sup_{|phi(z)| > r} v_log(z) |u(z)| / w_log(phi(z)) as r -> 1."""
    return boundary_ladder(weight_vlog(), weight_wlog(), pair, pair.u, kmax, grid)


def boundary_limsup_lower_J(pair: SymbolPair, kmax: int = 30, grid: Optional[GridSpec] = None,
                            assoc_nmax: int = 400) -> LadderResult:
    """lim sup v_log(z) |u'(z)| / w~_log(phi(z)) with the monomial associated-weight estimate."""
    if not pair.touches_boundary:
        return LadderResult(0.0, short_circuit=True)
    estimate = associated_weight(weight_wlog(), assoc_nmax)
    return boundary_ladder(weight_vlog(), estimate, pair, derivative(pair.u), kmax, grid,
                           radius_cap=estimate.resolved_radius())


def boundary_limsup_lower_I(pair: SymbolPair, kmax: int = 30, grid: Optional[GridSpec] = None,
                            assoc_nmax: int = 400) -> LadderResult:
    """lim sup v_3(z) |u(z) phi'(z)| / v~_3(phi(z))."""
    if not pair.touches_boundary:
        return LadderResult(0.0, short_circuit=True)
    v3 = weight_v3()
    estimate = associated_weight(v3, assoc_nmax)
    return boundary_ladder(v3, estimate, pair, product(pair.u, derivative(pair.phi)), kmax, grid,
                           radius_cap=estimate.resolved_radius())


def growth_target_series(pair: SymbolPair, nmax: int, grid: Optional[GridSpec] = None,
                         threads: Optional[int] = None) -> RatioSeries:
    """||u phi^n||_{H_{v_log}} / ||g_n||_{H_{w_log}} over the n schedule."""
    v_log, w_log = weight_vlog(), weight_wlog()
    fields = SymbolFields.of(pair)
    schedule = n_schedule(nmax)

    def ratio(n: int) -> float:
        return modulus_sup(v_log, fields.growth_modulus(n), grid) / monomial_growth_norm(w_log, n)

    return classified(SeriesKind.GROWTH, schedule, parallel_map(ratio, schedule, threads))


def growth_target_essential_norm(pair: SymbolPair, nmax: int, grid: Optional[GridSpec] = None,
                                 threads: Optional[int] = None) -> float:
    """Tail estimate of the growth-target sequence (B^{v_log} into H^inf_{v_log})."""
    return growth_target_series(pair, nmax, grid, threads).tail_estimate


@dataclass(frozen=True)
class DirectQuantities:
    """Boundary-limsup forms computed straight from the symbols."""
    upper: LadderResult
    lower_j: LadderResult
    lower_i: LadderResult
    growth_target: RatioSeries


def direct_quantities(pair: SymbolPair, settings: AnalysisSettings) -> DirectQuantities:
    grid = settings.grid
    return DirectQuantities(
        upper=boundary_limsup_upper(pair, settings.ladder_kmax, grid),
        lower_j=boundary_limsup_lower_J(pair, settings.ladder_kmax, grid, settings.assoc_nmax),
        lower_i=boundary_limsup_lower_I(pair, settings.ladder_kmax, grid, settings.assoc_nmax),
        growth_target=growth_target_series(pair, settings.nmax, grid, settings.threads),
    )
