"""
Built-in verification suites: closed forms, identities and fixture checks.

Each check returns ``(passed, detail)``; a check that raises is recorded as a
failure with the error text.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from .analytic import make_pair, monomial, parse
from .constants import AnalysisSettings, COMPACT_REL_THRESHOLD, TWO_OVER_E, Verdict
from .norms import (
    bloch_norm,
    growth_bound_check,
    monomial_growth_norm,
    random_disk_points,
    weighted_sup,
)
from .operators import (
    assess_continuity,
    band_from_series,
    boundary_limsup_upper,
    i_functional_bloch_norm,
    j_functional_bloch_norm,
    ratio_series,
)
from .optimize import boundary_clustered_radii
from .testfns import (
    FamilyKind,
    branch_limit_check,
    build_f,
    build_h,
    compact_sup,
    geometric_anchors,
    h2_monotonicity_check,
    h_prime_at_anchor,
    uniform_bound_scan,
)
from .weights import (
    WEIGHTS,
    associated_weight,
    get_weight,
    verify_weight_flags,
    weight_equivalence_band,
    weight_ve,
    weight_vlog,
    weight_v3,
    weight_wlog,
)
from .zygmund import cphi_analysis, cphi_pair, primed_i_ratio, primed_j_ratio, zygmund_seminorm

Check = Callable[[], Tuple[bool, str]]

# Pairs exercised by the reduction identities
IDENTITY_BATTERY = (
    ("1 + z^2", "z"),
    ("z", "(z + 0.5)/(1 + 0.5*z)"),
    ("exp(z)", "z/2"),
    ("2 - z", "(z - 0.3i)/(1 + 0.3i*z)"),
)

# Self-maps for the primed/unprimed bridge
MOBIUS_BATTERY = ("(z + 0.3)/(1 + 0.3*z)", "(z - 0.5)/(1 - 0.5*z)", "z*(z + 0.2)/(1 + 0.2*z)")

IDENTITY_NS = (1, 2, 5, 10, 50, 100, 200)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    detail: str


def _rel(a: complex, b: complex) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0.0 else 0.0


def run_checks(suite: str, checks: Sequence[Tuple[str, Check]]) -> List[CheckResult]:
    results = []
    for name, check in checks:
        try:
            passed, detail = check()
        except Exception as e:
            logger.error(f"{suite}/{name} raised: {e}")
            passed, detail = False, f"error: {e}"
        if not passed:
            logger.warning(f"{suite}/{name} failed: {detail}")
        results.append(CheckResult(suite, name, bool(passed), detail))
    return results


def weight_checks(settings: AnalysisSettings) -> List[Tuple[str, Check]]:
    v_log = weight_vlog()

    def flags():
        bad = {w: verify_weight_flags(factory()) for w, factory in WEIGHTS.items()}
        bad = {w: v for w, v in bad.items() if v}
        return not bad, "all declared flags hold" if not bad else str(bad)

    def closed_forms():
        got = [float(get_weight(w).eval(0.0)) for w in ("vlog", "wlog", "v3", "ve")]
        want = [math.log(2.0), 1.0 / math.log(math.log(4.0)), math.log(3.0), 1.0 + math.log(2.0)]
        worst = max(_rel(g, w) for g, w in zip(got, want))
        return worst <= 1e-12, f"max rel error {worst:.2e}"

    def vlog_peak():
        value = monomial_growth_norm(v_log, 0)
        argmax = weighted_sup(v_log, monomial(0), settings.grid).argmax
        ok = abs(value - TWO_OVER_E) <= 1e-6 and abs(abs(argmax) - (1.0 - TWO_OVER_E)) <= 1e-4
        return ok, f"sup {value:.10f} at r = {abs(argmax):.6f}"

    def equivalences():
        radii = boundary_clustered_radii(10_000)
        lo, hi = weight_equivalence_band(v_log, weight_v3(), radii)
        lo_e, hi_e = weight_equivalence_band(weight_ve(), v_log, radii)
        ok = (lo >= math.log(2.0) / math.log(3.0) - 1e-3 and hi <= 1.0 + 1e-3
              and lo_e >= 1.0 - 1e-12 and hi_e <= 1.0 + 1.0 / math.log(2.0) + 1e-12)
        return ok, f"vlog/v3 in [{lo:.4f}, {hi:.4f}], ve/vlog in [{lo_e:.4f}, {hi_e:.4f}]"

    def associated():
        w_log = weight_wlog()
        radii = np.array([0.0, 0.5, 0.9, 0.99, 0.999])
        small, large = associated_weight(w_log, 200), associated_weight(w_log, 400)
        band_small = weight_equivalence_band(small, w_log, radii)
        band_large = weight_equivalence_band(large, w_log, radii)
        stable = all(_rel(a, b) <= 5e-3 for a, b in zip(band_small, band_large))
        at_zero = _rel(float(large.eval(0.0)), float(w_log.eval(0.0))) <= 1e-9
        refines = bool(np.all(large.eval(radii) <= small.eval(radii) * (1.0 + 1e-12)))
        return stable and at_zero and refines, f"band {band_large[0]:.4f}..{band_large[1]:.4f}"

    return [
        ("flag self-test", flags),
        ("values at r = 0", closed_forms),
        ("vlog peak 2/e", vlog_peak),
        ("equivalence bands", equivalences),
        ("associated wlog", associated),
    ]


def testfn_checks(settings: AnalysisSettings, anchors: Sequence[complex]) -> List[Tuple[str, Check]]:

    def f_identities():
        worst = 0.0
        for a in anchors:
            member = build_f(a)
            worst = max(worst, abs(complex(member.expr(a)) - member.a_n), abs(complex(member.expr_deriv(a))))
        return worst <= 1e-8, f"max deviation {worst:.2e} over {len(anchors)} anchors"

    def h_identities():
        worst_value, worst_deriv = 0.0, 0.0
        for a in anchors:
            member = build_h(a)
            worst_value = max(worst_value, abs(complex(member.expr(a))))
            worst_deriv = max(worst_deriv, _rel(complex(member.expr_deriv(a)), h_prime_at_anchor(a)))
        ok = worst_value <= 1e-8 and worst_deriv <= 1e-8
        return ok, f"|h(a)| <= {worst_value:.2e}, h'(a) rel error {worst_deriv:.2e}"

    def bounded(kind: FamilyKind) -> Check:
        def check():
            scan = uniform_bound_scan(kind, anchors, settings.grid)
            return scan.bounded, f"max norm {scan.max_norm:.6g}, tail slope {scan.slope:.3g}"
        return check

    def compacta():
        near, far = compact_sup(build_f(1.0 - 2.0 ** -10)), compact_sup(build_f(1.0 - 2.0 ** -20))
        return far < near, f"max |f| on |z| <= 1/2: {near:.4f} -> {far:.4f}"

    def branch_limit():
        values = [branch_limit_check(x) for x in (1e-3, 1e-6, 1e-9, 1e-12)]
        ok = all(q >= 1.0 for q in values) and all(b < a for a, b in zip(values, values[1:]))
        return ok, "quotients " + ", ".join(f"{q:.4f}" for q in values)

    def h2_peak():
        check = h2_monotonicity_check()
        argmax = weighted_sup(weight_vlog(), monomial(0), settings.grid).argmax
        consistent = abs((1.0 - abs(argmax)) - check.maximizer) <= 1e-4
        ok = check.passed and abs(check.maximizer - TWO_OVER_E) <= 1e-6 and consistent
        return ok, f"maximizer {check.maximizer:.8f}"

    return [
        ("f(a) = a_n, f'(a) = 0", f_identities),
        ("h(a) = 0, h'(a) closed form", h_identities),
        ("f-family bounded", bounded(FamilyKind.F)),
        ("h-family bounded", bounded(FamilyKind.H)),
        ("f-family vanishes on compacta", compacta),
        ("branch limit approach", branch_limit),
        ("h2 increasing to 2/e", h2_peak),
    ]


def identity_checks(settings: AnalysisSettings) -> List[Tuple[str, Check]]:
    grid = settings.grid
    v_log, w_log = weight_vlog(), weight_wlog()

    def bloch_monomials():
        worst = 0.0
        for v in (v_log, w_log):
            for n in range(1, 201):
                worst = max(worst, _rel(bloch_norm(v, monomial(n), grid).value, n * monomial_growth_norm(v, n - 1)))
        return worst <= 1e-9, f"max rel error {worst:.2e}"

    def reductions():
        worst = 0.0
        for u, phi in IDENTITY_BATTERY:
            pair = make_pair(u, phi, grid)
            j_series, i_series = ratio_series(pair, 8, grid, schedule=list(IDENTITY_NS))
            for n, j, i in zip(j_series.n_values, j_series.ratios, i_series.ratios):
                worst = max(worst, _rel(j, j_functional_bloch_norm(pair, n, grid) / monomial_growth_norm(w_log, n)))
                worst = max(worst, _rel(i, i_functional_bloch_norm(pair, n, grid) / (n * monomial_growth_norm(v_log, n - 1))))
        return worst <= 1e-6, f"max rel error {worst:.2e} over {len(IDENTITY_BATTERY)} pairs"

    def identity_operator():
        assessment = assess_continuity(make_pair("1", "z", grid), 64, grid, settings.threads)
        band = band_from_series(assessment.j_series, assessment.i_series)
        i_error = max(abs(r - 1.0) for r in assessment.i_series.ratios)
        ok = (assessment.verdict is Verdict.BOUNDED and i_error <= 1e-6
              and max(assessment.j_series.ratios) == 0.0 and abs(band.Q - 1.0) <= 1e-6 and not band.compact)
        return ok, f"Q = {band.Q:.9f}, max |I - 1| = {i_error:.2e}"

    def contraction():
        pair = make_pair("1", "z/2", grid)
        assessment = assess_continuity(pair, 64, grid, settings.threads)
        band = band_from_series(assessment.j_series, assessment.i_series)
        late = [r for n, r in assessment.i_series.rows() if n >= 30]
        upper = boundary_limsup_upper(pair, settings.ladder_kmax, grid)
        ok = max(late) <= COMPACT_REL_THRESHOLD and band.compact and upper.short_circuit and upper.value == 0.0
        return ok, f"Q = {band.Q:.3e}, compact = {band.compact}"

    def growth_bound():
        points = random_disk_points(1000, seed=7)
        failures = []
        for text in ("z", "z^5", "exp(z)", "(z + 0.5)/(1 + 0.5*z)"):
            if not growth_bound_check(v_log, parse(text), points, grid=grid).holds:
                failures.append(text)
        return not failures, "no violations" if not failures else f"violated for {failures}"

    def zygmund_monomials():
        worst = 0.0
        for v in (v_log, w_log):
            for n in (0, 1, 5, 20, 100):
                seminorm = zygmund_seminorm(v, monomial(n + 2), grid).value
                worst = max(worst, _rel(seminorm, (n + 2) * (n + 1) * monomial_growth_norm(v, n)))
        return worst <= 1e-9, f"max rel error {worst:.2e}"

    def primed_bridge():
        worst = 0.0
        for text in MOBIUS_BATTERY:
            phi = parse(text)
            j_series, i_series = ratio_series(cphi_pair(phi, grid), 8, grid, schedule=list(IDENTITY_NS))
            for n, j, i in zip(j_series.n_values, j_series.ratios, i_series.ratios):
                worst = max(worst, _rel(primed_j_ratio(phi, n, grid), j), _rel(primed_i_ratio(phi, n, grid), i))
        return worst <= 1e-6, f"max rel error {worst:.2e} over {len(MOBIUS_BATTERY)} maps"

    def cphi_reports():
        small = AnalysisSettings(nmax=48, grid=grid, tol=settings.tol, threads=settings.threads,
                                 ladder_kmax=settings.ladder_kmax, assoc_nmax=100)
        identity = cphi_analysis("z", small)
        contraction_report = cphi_analysis("z/2", small)
        ok = (identity.band is not None and abs(identity.band.Q - 1.0) <= 1e-6 and not identity.band.compact
              and contraction_report.band is not None and contraction_report.band.compact)
        return ok, f"Q(id) = {identity.band.Q if identity.band else float('nan'):.9f}"

    return [
        ("Bloch monomial identity", bloch_monomials),
        ("J/I reduction identities", reductions),
        ("identity operator", identity_operator),
        ("contraction z/2", contraction),
        ("point-evaluation growth bound", growth_bound),
        ("Zygmund monomial identity", zygmund_monomials),
        ("primed/unprimed bridge", primed_bridge),
        ("C_phi reports", cphi_reports),
    ]


SUITES = ("weights", "testfns", "identities")


def run_suite(name: str, settings: Optional[AnalysisSettings] = None,
              anchors: Optional[Sequence[complex]] = None) -> List[CheckResult]:
    """
    Run one suite, or all of them for ``all``.

    Args:
        name: weights, testfns, identities or all
        settings: Numerical settings
        anchors: Anchors for the test-function suite (default 1 - 2^-k, k = 1..20)

    Returns:
        Results in suite order
    """
    settings = settings or AnalysisSettings()
    anchors = list(anchors) if anchors else [complex(a) for a in geometric_anchors(20)]
    builders: Dict[str, Callable[[], List[Tuple[str, Check]]]] = {
        "weights": lambda: weight_checks(settings),
        "testfns": lambda: testfn_checks(settings, anchors),
        "identities": lambda: identity_checks(settings),
    }
    names = SUITES if name == "all" else (name,)
    results = []
    for suite in names:
        if suite not in builders:
            raise ValueError(f"unknown suite {suite!r}")
        logger.info(f"Running {suite} suite")
        results.extend(run_checks(suite, builders[suite]()))
    return results
