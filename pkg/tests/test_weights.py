import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from blochlab.constants import TWO_OVER_E
from blochlab.errors import InvalidArgumentError
from blochlab.optimize import boundary_clustered_radii
from blochlab.weights import (
    Weight,
    associated_weight,
    get_weight,
    verify_weight_flags,
    weight_equivalence_band,
    weight_from_formula,
    weight_unit,
    weight_v3,
    weight_ve,
    weight_vlog,
    weight_wlog,
)

RADII = boundary_clustered_radii(2000)


def test_closed_forms_at_origin(v_log, w_log, v3, ve):
    assert v_log(0.0) == pytest.approx(math.log(2.0), rel=1e-14)
    assert w_log(0.0) == pytest.approx(1.0 / math.log(math.log(4.0)), rel=1e-14)
    assert v3(0.0) == pytest.approx(math.log(3.0), rel=1e-14)
    assert ve(0.0) == pytest.approx(1.0 + math.log(2.0), rel=1e-14)


def test_vlog_peak_value(v_log):
    assert v_log(1.0 - TWO_OVER_E) == pytest.approx(TWO_OVER_E, rel=1e-12)


def test_vlog_near_boundary(v_log):
    t = 1e-8
    assert v_log(1.0 - t) == pytest.approx(t * math.log(2.0 / t), rel=1e-6)


def test_wlog_near_boundary(w_log):
    r = 1.0 - 1e-6
    expected = 1.0 / math.log(math.log(4.0 / ((1.0 - r) * (1.0 + r))))
    assert w_log(r) == pytest.approx(expected, rel=1e-12)
    assert w_log(r) == pytest.approx(0.37387, rel=1e-4)


def test_declared_flags():
    assert not weight_vlog().decreasing
    assert weight_wlog().decreasing
    assert weight_v3().decreasing
    assert weight_ve().decreasing
    for weight in (weight_vlog(), weight_wlog(), weight_v3(), weight_ve()):
        assert weight.radial and weight.typical
        assert verify_weight_flags(weight) == []


@pytest.mark.parametrize("factory", [weight_wlog, weight_v3, weight_ve])
@given(a=st.floats(0.0, 1.0 - 1e-12), b=st.floats(0.0, 1.0 - 1e-12))
def test_decreasing_weights_are_monotone(factory, a, b):
    lo, hi = min(a, b), max(a, b)
    weight = factory()
    assert weight(lo) >= weight(hi) * (1.0 - 1e-12)


@pytest.mark.parametrize("factory", [weight_vlog, weight_v3, weight_ve])
@pytest.mark.parametrize("k", range(4, 13))
def test_vanishes_at_boundary(factory, k):
    assert factory()(1.0 - 10.0 ** -k) < 10.0 ** (-k + 2)


@pytest.mark.parametrize("factory", [weight_vlog, weight_wlog, weight_v3, weight_ve])
def test_finite_and_positive_on_closed_range(factory):
    values = factory()(np.array([0.0, 0.5, 1.0 - 1e-12]))
    assert np.all(np.isfinite(values))
    assert np.all(values > 0.0)


def test_radius_is_clamped(v_log):
    assert v_log(1.0) == v_log(1.0 - 1e-12)


def test_v3_vlog_band(v_log, v3):
    lower, upper = weight_equivalence_band(v_log, v3, RADII)
    assert lower == pytest.approx(math.log(2.0) / math.log(3.0), rel=1e-12)
    assert upper <= 1.0
    assert lower >= 1.0 / 1.586


def test_self_band_is_unit(v_log):
    assert weight_equivalence_band(v_log, v_log, RADII) == (1.0, 1.0)


def test_ve_vlog_band(v_log, ve):
    lower, upper = weight_equivalence_band(ve, v_log, RADII)
    assert lower >= 1.0
    assert upper == pytest.approx(1.0 + 1.0 / math.log(2.0), rel=1e-12)


def test_band_stable_under_refinement(v_log, v3):
    coarse = weight_equivalence_band(v_log, v3, boundary_clustered_radii(1000))
    fine = weight_equivalence_band(v_log, v3, boundary_clustered_radii(100_000))
    assert coarse == pytest.approx(fine, rel=1e-3)


def test_band_rejects_radii_outside_disk(v_log, v3):
    with pytest.raises(InvalidArgumentError):
        weight_equivalence_band(v_log, v3, [0.5, 1.0])
    with pytest.raises(InvalidArgumentError):
        weight_equivalence_band(v_log, v3, [])


def test_get_weight():
    assert get_weight("wlog").name == "wlog"
    with pytest.raises(InvalidArgumentError):
        get_weight("nope")


def test_weight_from_formula():
    weight = weight_from_formula("sq", "(1 - z)^2", typical=True, decreasing=True)
    assert weight(0.5) == pytest.approx(0.25)


def test_weight_from_formula_rejects_false_flags():
    with pytest.raises(InvalidArgumentError):
        weight_from_formula("grows", "1 + z", decreasing=True)


def test_flag_violations_are_reported():
    increasing = Weight("up", lambda r: 1.0 + r, typical=False, decreasing=True)
    assert verify_weight_flags(increasing)
    flat = Weight("flat", lambda r: np.ones_like(r), typical=True)
    assert verify_weight_flags(flat)
    assert verify_weight_flags(weight_unit()) == []


def test_associated_weight_at_origin(w_log):
    estimate = associated_weight(w_log, 200)
    assert estimate(0.0) == pytest.approx(w_log(0.0), rel=1e-12)


def test_associated_weight_refines_with_more_monomials(w_log):
    coarse = associated_weight(w_log, 100)
    fine = associated_weight(w_log, 400)
    radii = np.array([0.5, 0.9, 0.99, 0.999])
    assert np.all(fine(radii) <= coarse(radii))


def test_associated_weight_dominates_base(w_log):
    estimate = associated_weight(w_log, 400)
    lower, upper = weight_equivalence_band(estimate, w_log, [0.0, 0.5, 0.9, 0.99, 0.999])
    assert lower >= 1.0 - 1e-9
    assert upper < 10.0


def test_associated_weight_rejects_bad_input(w_log):
    with pytest.raises(InvalidArgumentError):
        associated_weight(w_log, 0)
    with pytest.raises(InvalidArgumentError):
        associated_weight(Weight("angular", lambda r: r + 1.0, radial=False), 10)


def test_associated_weight_resolved_radius(v3):
    estimate = associated_weight(v3, 400)
    radius = estimate.resolved_radius()
    assert 0.99 < radius < 0.999
    assert estimate.peak_degree(0.0) == 0
    assert estimate.peak_degree(radius) < 400
    assert estimate.peak_degree(radius + 1e-6) == 400
    assert estimate(radius) == pytest.approx(v3(radius), rel=0.05)
