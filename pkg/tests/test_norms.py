import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blochlab.analytic import constant, make_pair, monomial, parse
from blochlab.constants import GridSpec, Space, TWO_OVER_E
from blochlab.errors import InvalidArgumentError
from blochlab.norms import (
    NormValue,
    bloch_norm,
    bloch_seminorm,
    clear_monomial_cache,
    growth_bound_check,
    growth_norm,
    monomial_bloch_norm,
    monomial_growth_norm,
    monomial_zygmund_norm,
    polar_grid,
    random_disk_points,
    restricted_objective,
    restricted_sup,
    weighted_sup,
)
from blochlab.weights import associated_weight, weight_from_formula, weight_unit, weight_vlog, weight_wlog

GRID = GridSpec(radial=64, angular=32)
FINE_GRID = GridSpec(radial=128, angular=64)


def dense_radial_max(profile, count=1_000_000):
    r = np.linspace(0.0, 1.0 - 1e-12, count)
    return float(np.max(profile(r)))


def test_vlog_peak(v_log):
    result = weighted_sup(v_log, constant(1), GRID)
    assert result.value == pytest.approx(TWO_OVER_E, rel=1e-10)
    assert 1.0 - abs(result.argmax) == pytest.approx(TWO_OVER_E, abs=1e-4)


def test_zero_function_has_zero_sup(v_log):
    assert weighted_sup(v_log, constant(0), GRID).value == 0.0


def test_identity_against_radial_oracle(v_log):
    oracle = dense_radial_max(lambda r: r * (1 - r) * np.log(2 / (1 - r)))
    assert weighted_sup(v_log, monomial(1), GRID).value == pytest.approx(oracle, rel=1e-6)


def test_bloch_norm_of_z(v_log):
    norm = bloch_norm(v_log, monomial(1), GRID)
    assert norm.value == pytest.approx(TWO_OVER_E, rel=1e-10)
    assert norm.parts["f0"] == 0.0


def test_bloch_norm_of_constant(v_log):
    norm = bloch_norm(v_log, constant(1), GRID)
    assert norm.value == 1.0
    assert norm.parts == {"f0": 1.0, "sup": 0.0}


@pytest.mark.parametrize("text", ["exp(z)", "1 + z^2", "(z + 0.5)/(1 + 0.5*z)"])
def test_norm_is_sum_of_parts(v_log, text):
    f = parse(text)
    norm = bloch_norm(v_log, f, GRID)
    assert norm.value == sum(norm.parts.values())
    assert norm.value >= bloch_seminorm(v_log, f, GRID).value
    assert norm.space is Space.BLOCH


@pytest.mark.parametrize("weight", [weight_vlog(), weight_wlog()], ids=lambda w: w.name)
def test_bloch_norm_of_monomials(weight):
    for n in range(1, 201):
        expected = n * monomial_growth_norm(weight, n - 1)
        assert bloch_norm(weight, monomial(n), GRID).value == pytest.approx(expected, rel=1e-9)
        assert monomial_bloch_norm(weight, n) == expected


def test_monomial_growth_norm_closed_forms(v_log, w_log):
    assert monomial_growth_norm(v_log, 0) == pytest.approx(TWO_OVER_E, rel=1e-10)
    assert monomial_growth_norm(w_log, 0) == w_log(0.0)


def test_monomial_cache_is_transparent(v_log):
    cached = monomial_growth_norm(v_log, 25)
    clear_monomial_cache()
    assert monomial_growth_norm(v_log, 25) == cached


def test_monomial_cache_tells_apart_weights_sharing_a_name(v_log):
    assert monomial_growth_norm(v_log, 0) == pytest.approx(TWO_OVER_E, rel=1e-10)
    impostor = weight_from_formula("vlog", "5", decreasing=True)
    assert monomial_growth_norm(impostor, 0) == pytest.approx(5.0)
    assert associated_weight(impostor, 10)(0.0) == pytest.approx(5.0)
    assert monomial_growth_norm(weight_vlog(), 0) == pytest.approx(TWO_OVER_E, rel=1e-10)


def test_monomial_growth_norm_against_oracle(v_log):
    oracle = dense_radial_max(lambda r: r ** 10 * (1 - r) * np.log(2 / (1 - r)))
    assert monomial_growth_norm(v_log, 10) == pytest.approx(oracle, rel=1e-8)


@pytest.mark.parametrize("n", [0, 3, 17, 60])
def test_radial_reduction(v_log, n):
    assert weighted_sup(v_log, monomial(n), GRID).value == pytest.approx(monomial_growth_norm(v_log, n), rel=1e-8)


def test_low_order_monomial_norms(v_log):
    assert monomial_bloch_norm(v_log, 0) == 1.0
    assert monomial_zygmund_norm(v_log, 0) == 1.0
    assert monomial_zygmund_norm(v_log, 1) == 1.0
    assert monomial_zygmund_norm(v_log, 4) == 12 * monomial_growth_norm(v_log, 2)
    with pytest.raises(InvalidArgumentError):
        monomial_growth_norm(v_log, -1)


@given(
    re=st.floats(-3.0, 3.0),
    im=st.floats(-3.0, 3.0),
    text=st.sampled_from(["z", "z^4", "exp(z)", "(z + 0.5)/(1 + 0.5*z)"]),
)
def test_sup_is_homogeneous(re, im, text):
    c = complex(re, im)
    v = weight_vlog()
    f = parse(text)
    base = weighted_sup(v, f, GRID).value
    scaled = weighted_sup(v, constant(c) * f, GRID).value
    assert scaled == pytest.approx(abs(c) * base, rel=1e-10, abs=1e-300)


@pytest.mark.parametrize("text", ["z", "z^7", "exp(z)", "(z + 0.5)/(1 + 0.5*z)"])
def test_sup_stable_under_grid_refinement(v_log, text):
    f = parse(text)
    coarse = weighted_sup(v_log, f, GRID).value
    fine = weighted_sup(v_log, f, FINE_GRID).value
    assert coarse == pytest.approx(fine, rel=1e-6)


def test_argmax_on_clamp_ring_is_flagged():
    result = weighted_sup(weight_unit(), monomial(1), GRID)
    assert result.on_clamp
    assert result.value == pytest.approx(1.0, abs=1e-9)


def test_growth_norm(v_log):
    assert growth_norm(v_log, constant(2)).value == pytest.approx(2 * TWO_OVER_E, rel=1e-10)


def test_restricted_sup_empty_region(v_log, w_log, contraction_pair):
    result = restricted_sup(v_log, w_log, contraction_pair, contraction_pair.u, 0.6, GRID)
    assert result.empty
    assert result.value == 0.0


def test_restricted_sup_matches_grid_scan(v_log, w_log, identity_pair):
    result = restricted_sup(v_log, w_log, identity_pair, identity_pair.u, 0.0, GRID)
    r = polar_grid(GRID).r
    on_grid = np.max(v_log(r[1:]) / w_log(r[1:]))
    assert result.value == pytest.approx(on_grid, rel=1e-12)
    oracle = dense_radial_max(lambda x: v_log(x) / w_log(x))
    assert result.value == pytest.approx(oracle, rel=3e-2)


@given(a=st.floats(0.0, 0.999), b=st.floats(0.0, 0.999))
def test_restricted_sup_non_increasing_in_threshold(a, b):
    pair = make_pair("1 + z", "z", GRID)
    v, w = weight_vlog(), weight_wlog()
    lo, hi = min(a, b), max(a, b)
    assert restricted_sup(v, w, pair, pair.u, hi, GRID).value <= restricted_sup(v, w, pair, pair.u, lo, GRID).value


def test_restricted_objective_shapes(v_log, w_log, identity_pair):
    objective, phi_abs = restricted_objective(v_log, w_log, identity_pair, constant(0), GRID)
    assert objective.shape == phi_abs.shape == (GRID.radial, GRID.angular)
    assert not objective.any()


def test_restricted_sup_threshold_range(v_log, w_log, identity_pair):
    with pytest.raises(InvalidArgumentError):
        restricted_sup(v_log, w_log, identity_pair, identity_pair.u, 1.0, GRID)


@pytest.mark.parametrize("text", ["z", "z^5", "0.7", "exp(z) - 1", "log(1 - 0.9*z)"])
def test_growth_bound_holds(v_log, text):
    check = growth_bound_check(v_log, parse(text), random_disk_points(1000), grid=GRID)
    assert check.holds
    assert check.min_slack >= 0.0
    assert check.witness is None


def test_growth_bound_detects_understated_norm(v_log):
    wrong = NormValue(Space.BLOCH, "vlog", {"sup": 1e-3})
    check = growth_bound_check(v_log, monomial(1), random_disk_points(100), norm=wrong)
    assert not check.holds
    assert check.witness is not None


def test_random_disk_points_reproducible():
    a = random_disk_points(50, seed=3)
    np.testing.assert_array_equal(a, random_disk_points(50, seed=3))
    assert np.all(np.abs(a) <= 0.999)


def test_polar_grid_layout():
    mesh = polar_grid(GRID)
    assert mesh.r[0] == 0.0
    assert mesh.r[-1] == pytest.approx(1.0 - GRID.clamp, abs=1e-15)
    assert mesh.theta[0] == 0.0
    assert not mesh.points.flags.writeable
    assert math.isclose(abs(mesh.points[-1, 0]), 1.0 - GRID.clamp, abs_tol=1e-15)
