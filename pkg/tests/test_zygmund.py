from dataclasses import replace

import numpy as np
import pytest

from blochlab.analytic import monomial, parse
from blochlab.constants import TWO_OVER_E, Verdict
from blochlab.errors import InvalidArgumentError
from blochlab.norms import monomial_growth_norm, monomial_zygmund_norm
from blochlab.operators import ratio_series
from blochlab.zygmund import (
    cphi_analysis,
    cphi_pair,
    primed_i_ratio,
    primed_j_ratio,
    primed_series,
    seminorm_bridge,
    series_disagreement,
    zygmund_norm,
    zygmund_seminorm,
)

MOBIUS = ["(z + 0.3)/(1 + 0.3*z)", "(z - 0.5)/(1 - 0.5*z)", "z*(z + 0.2)/(1 + 0.2*z)", "z/2"]


def random_mobius(count, seed):
    """Disk automorphisms, some scaled into a smaller disk."""
    rng = np.random.default_rng(seed)
    maps = []
    for index in range(count):
        a = complex(*rng.uniform(-0.6, 0.6, size=2))
        s = 1.0 if index % 2 == 0 else round(rng.uniform(0.5, 1.0), 3)
        maps.append(f"{s:.3f}*(z - ({a.real:.3f} + {a.imag:.3f}i))/(1 - ({a.real:.3f} - {a.imag:.3f}i)*z)")
    return maps


def test_zygmund_norm_of_low_monomials(grid, v_log):
    square = zygmund_norm(v_log, monomial(2), grid)
    assert square.value == pytest.approx(2 * TWO_OVER_E, rel=1e-10)
    assert square.seminorm == square.value
    identity = zygmund_norm(v_log, monomial(1), grid)
    assert identity.parts == {"f0": 0.0, "df0": 1.0, "sup": 0.0}
    assert identity.value == 1.0


@pytest.mark.parametrize("n", [2, 3, 10, 40])
def test_zygmund_seminorm_of_monomials(grid, v_log, n):
    expected = n * (n - 1) * monomial_growth_norm(v_log, n - 2)
    assert zygmund_seminorm(v_log, monomial(n), grid).value == pytest.approx(expected, rel=1e-8)
    assert monomial_zygmund_norm(v_log, n) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("text", ["exp(z)", "z^5 - z", "log(1 - 0.5*z)"])
def test_zygmund_seminorm_is_bloch_seminorm_of_derivative(grid, v_log, text):
    zygmund, bloch = seminorm_bridge(v_log, parse(text), grid)
    assert zygmund == pytest.approx(bloch, rel=1e-12)


def test_primed_ratios_for_identity(grid):
    phi = parse("z")
    for n in (1, 4, 20):
        assert primed_i_ratio(phi, n, grid) == pytest.approx(1.0, rel=1e-6)
        assert primed_j_ratio(phi, n, grid) == 0.0


@pytest.mark.parametrize("n", [1, 3, 8])
def test_primed_i_ratio_for_contraction(grid, n):
    assert primed_i_ratio(parse("z/2"), n, grid) == pytest.approx(2.0 ** (-n - 1), rel=1e-6)


def test_primed_ratio_ranges(grid):
    with pytest.raises(InvalidArgumentError):
        primed_j_ratio(parse("z"), -1, grid)
    with pytest.raises(InvalidArgumentError):
        primed_i_ratio(parse("z"), 0, grid)


@pytest.mark.parametrize("phi", MOBIUS)
def test_primed_series_match_unprimed(grid, phi):
    pair = cphi_pair(phi, grid)
    primed = primed_series(pair, 16, grid, threads=1)
    unprimed = ratio_series(pair, 16, grid, threads=1)
    for a, b in zip(primed, unprimed):
        assert series_disagreement(a, b) <= 1e-6
    j_rows, i_rows = (dict(series.rows()) for series in primed)
    for n in (1, 5, 16):
        assert j_rows[n] == primed_j_ratio(pair.phi, n, grid)
        assert i_rows[n] == primed_i_ratio(pair.phi, n, grid)


@pytest.mark.slow
@pytest.mark.parametrize("phi", random_mobius(10, seed=5))
def test_primed_ratios_match_unprimed_on_random_mobius(grid, phi):
    schedule = [1, 2, 5, 10, 50, 100, 200]
    pair = cphi_pair(phi, grid)
    j_series, i_series = ratio_series(pair, 8, grid, threads=1, schedule=schedule)
    for n, j_ratio, i_ratio in zip(schedule, j_series.ratios, i_series.ratios):
        assert primed_j_ratio(pair.phi, n, grid) == pytest.approx(j_ratio, rel=1e-6)
        assert primed_i_ratio(pair.phi, n, grid) == pytest.approx(i_ratio, rel=1e-6)

def test_primed_series_do_not_reuse_unprimed_fields(grid, monkeypatch):
    pair = cphi_pair(MOBIUS[0], grid)
    unprimed = ratio_series(pair, 16, grid, threads=1)

    def unavailable(*args):
        raise AssertionError("primed series must be built from phi alone")

    monkeypatch.setattr("blochlab.operators.SymbolFields.of", unavailable)
    j_primed, i_primed = primed_series(pair, 16, grid, threads=2)
    assert j_primed.n_values == unprimed[0].n_values
    assert series_disagreement(i_primed, unprimed[1]) <= 1e-6


def test_series_disagreement_needs_same_schedule(grid, identity_pair):
    j_series, _ = ratio_series(identity_pair, 16, grid)
    shorter, _ = ratio_series(identity_pair, 12, grid)
    with pytest.raises(InvalidArgumentError):
        series_disagreement(j_series, shorter)
    assert series_disagreement(j_series, j_series) == 0.0


def test_cphi_pair_uses_derivative(grid):
    pair = cphi_pair("z^2/2", grid)
    z = np.array([0.1, 0.5j])
    np.testing.assert_allclose(pair.u(z), z, rtol=1e-14)


def test_cphi_analysis_of_identity(settings):
    report = cphi_analysis("z", settings)
    assert report.space == "zygmund-log"
    assert report.verdict is Verdict.BOUNDED
    assert report.band.Q == pytest.approx(1.0, rel=1e-6)
    assert not report.compact
    assert report.primed is not None
    assert report.bridge_disagreement <= 1e-6


def test_cphi_analysis_of_contraction(settings):
    report = cphi_analysis("z/2", replace(settings, nmax=48))
    assert report.verdict is Verdict.BOUNDED
    assert report.compact
