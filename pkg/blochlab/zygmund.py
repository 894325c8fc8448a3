"""
Zygmund-type norms and composition operators on Z^{v_log}.

C_phi on Z^{v_log} has the essential norm of W_{phi', phi} on B^{v_log}. The
primed functionals J'_u and I'_u vanish at 0 together with their first
derivatives, and their second derivatives are f u' and f' u, so their
Zygmund norms are again weighted sups.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from loguru import logger

from .analytic import AnalyticExpr, SymbolPair, derivative, make_pair, parse, power, product
from .constants import AnalysisSettings, GridSpec, SeriesKind, Space
from .errors import InvalidArgumentError
from .norms import NormValue, bloch_seminorm, monomial_zygmund_norm, weighted_sup
from .operators import RatioSeries, classified, n_schedule, parallel_map
from .weights import Weight, weight_vlog, weight_wlog


@dataclass(frozen=True)
class ZygmundNormValue(NormValue):
    """|f(0)| + |f'(0)| + sup v |f''|."""

    @property
    def seminorm(self) -> float:
        return self.parts["sup"]


def _at_origin(f: AnalyticExpr) -> float:
    return float(abs(complex(f.evaluate(0j))))


def zygmund_seminorm(v: Weight, f: AnalyticExpr, grid: Optional[GridSpec] = None) -> NormValue:
    """sup v |f''|; equal to the Bloch seminorm of f'."""
    second = derivative(derivative(f))
    return NormValue(Space.ZYGMUND_SEMINORM, v.name, {"sup": weighted_sup(v, second, grid).value})


def zygmund_norm(v: Weight, f: AnalyticExpr, grid: Optional[GridSpec] = None) -> ZygmundNormValue:
    """
    ||f|| in Z^v.

    Args:
        v: Weight
        f: Function
        grid: Sup-solver grid

    Returns:
        Norm with parts ``f0``, ``df0`` and ``sup``
    """
    first = derivative(f)
    seminorm = zygmund_seminorm(v, f, grid)
    return ZygmundNormValue(Space.ZYGMUND, v.name, {
        "f0": _at_origin(f),
        "df0": _at_origin(first),
        "sup": seminorm.parts["sup"],
    })


def seminorm_bridge(v: Weight, f: AnalyticExpr, grid: Optional[GridSpec] = None) -> Tuple[float, float]:
    """(Zygmund seminorm of f, Bloch seminorm of f'), which agree."""
    return zygmund_seminorm(v, f, grid).value, bloch_seminorm(v, derivative(f), grid).value


def _as_expr(phi: Union[str, AnalyticExpr, SymbolPair]) -> AnalyticExpr:
    if isinstance(phi, SymbolPair):
        return phi.phi
    return parse(phi) if isinstance(phi, str) else phi


def _j_primed(phi: AnalyticExpr, second: AnalyticExpr, n: int, grid: Optional[GridSpec]) -> float:
    numerator = weighted_sup(weight_vlog(), product(power(phi, n), second), grid).value
    return (n + 1) * numerator / (monomial_zygmund_norm(weight_wlog(), n + 2) / (n + 2))


def _i_primed(phi: AnalyticExpr, first: AnalyticExpr, n: int, grid: Optional[GridSpec]) -> float:
    integrand = product(AnalyticExpr(n * first.sym), power(phi, n - 1), first)
    numerator = weighted_sup(weight_vlog(), integrand, grid).value
    return numerator / (monomial_zygmund_norm(weight_vlog(), n + 1) / (n + 1))


def primed_j_ratio(phi: Union[AnalyticExpr, SymbolPair], n: int, grid: Optional[GridSpec] = None) -> float:
    """
    (n+1) ||J'_{phi'}(phi^n)||_{Z^{v_log}} / (||g_{n+2}||_{Z^{w_log}} / (n+2)).

    The numerator norm is sup v_log |phi^n phi''|.
    """
    if n < 0:
        raise InvalidArgumentError(f"n must be >= 0, got {n}")
    phi = _as_expr(phi)
    return _j_primed(phi, derivative(derivative(phi)), n, grid)


def primed_i_ratio(phi: Union[AnalyticExpr, SymbolPair], n: int, grid: Optional[GridSpec] = None) -> float:
    """
    ||I'_{phi'}(phi^n)||_{Z^{v_log}} / (||g_{n+1}||_{Z^{v_log}} / (n+1)).

    The numerator norm is sup v_log |n phi^(n-1) phi'^2|.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    phi = _as_expr(phi)
    return _i_primed(phi, derivative(phi), n, grid)


def primed_series(pair: SymbolPair, nmax: int, grid: Optional[GridSpec] = None,
                  threads: Optional[int] = None) -> Tuple[RatioSeries, RatioSeries]:
    """
    J' and I' ratio sequences of C_phi, for a pair whose u is phi'.

    The numerators are built symbolically from phi, phi' and phi'' and never
    reuse the unprimed pair's modulus fields, so the two series check each other.

    Returns:
        (J' series, I' series)
    """
    phi = pair.phi
    first = derivative(phi)
    second = derivative(first)
    schedule = n_schedule(nmax)
    j_ratios = parallel_map(lambda n: _j_primed(phi, second, n, grid), schedule, threads)
    i_ratios = parallel_map(lambda n: _i_primed(phi, first, n, grid), schedule, threads)
    return (classified(SeriesKind.J_PRIMED, schedule, j_ratios),
            classified(SeriesKind.I_PRIMED, schedule, i_ratios))


def series_disagreement(a: RatioSeries, b: RatioSeries) -> float:
    """Largest relative difference between two series sampled at the same n."""
    if a.n_values != b.n_values:
        raise InvalidArgumentError("series are sampled at different n")
    worst = 0.0
    for x, y in zip(a.ratios, b.ratios):
        scale = max(abs(x), abs(y))
        if scale > 0.0:
            worst = max(worst, abs(x - y) / scale)
    return worst


def cphi_pair(phi: Union[str, AnalyticExpr], grid: Optional[GridSpec] = None) -> SymbolPair:
    """The pair (phi', phi) whose weighted composition operator carries C_phi's essential norm."""
    phi = parse(phi) if isinstance(phi, str) else phi
    return make_pair(derivative(phi), phi, grid)


def cphi_analysis(phi: Union[str, AnalyticExpr], settings: Optional[AnalysisSettings] = None):
    """
    Analyse C_phi on Z^{v_log} through W_{phi', phi} on B^{v_log}.

    The primed ratio series are computed alongside as a cross-check; the
    verdict always comes from the unprimed pair.

    Args:
        phi: Self-map (text or expression)
        settings: Run settings

    Returns:
        An AnalysisReport with space ``zygmund-log`` and the primed series attached
    """
    from .analyzer import analyze_pair

    settings = settings or AnalysisSettings()
    pair = cphi_pair(phi, settings.grid)
    report = analyze_pair(pair, settings, space="zygmund-log")

    j_primed, i_primed = primed_series(pair, settings.nmax, settings.grid, settings.threads)
    disagreement = max(series_disagreement(j_primed, report.j_series),
                       series_disagreement(i_primed, report.i_series))
    if disagreement > 10.0 * settings.tol:
        logger.warning(f"Primed and unprimed ratios disagree by {disagreement:.3g} (relative)")
    else:
        logger.info(f"Primed and unprimed ratios agree to {disagreement:.3g}")
    return report.with_primed(j_primed, i_primed, disagreement)
