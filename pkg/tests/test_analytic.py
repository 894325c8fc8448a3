import cmath

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings, strategies as st

from blochlab.analytic import (
    compose,
    constant,
    derivative,
    dilate,
    make_pair,
    monomial,
    parse,
    power,
    validate_self_map,
)
from blochlab.constants import GridSpec
from blochlab.errors import (
    ExpressionSyntaxError,
    InvalidArgumentError,
    NonIntegerExponentError,
    SelfMapViolation,
    SingularityError,
    UnknownIdentifierError,
)

GRID = GridSpec(radial=64, angular=32)

EXPRESSIONS = [
    "z^3 - 2*z + 1",
    "exp(z)",
    "log(1 - 0.5*z)",
    "(z + 0.5)/(1 + 0.5*z)",
    "sin(z)*cos(2*z)",
    "sqrt(1 + z/2)",
    "exp(0.3i*z)*(1 + z)^4",
    "1/(2 - z)^2",
]

disk_points = st.builds(
    lambda r, theta: r * cmath.exp(1j * theta),
    st.floats(0.0, 0.9),
    st.floats(0.0, 2.0 * np.pi),
)

# Each wrapper maps the unit disk into itself, so every generated expression
# stays analytic on |z| <= 0.9 without meeting a pole or branch cut
BOUNDED_WRAPPERS = ["exp({})/3", "sin({})/2", "log(2 + {})/2", "1/(2 + {})", "sqrt(2 + {})/2"]


def _extend(children):
    pairs = st.tuples(children, children)
    return st.one_of(
        pairs.map(lambda ab: f"({ab[0]} + {ab[1]})/2"),
        pairs.map(lambda ab: f"({ab[0]})*({ab[1]})"),
        st.tuples(st.sampled_from(BOUNDED_WRAPPERS), children).map(lambda wa: wa[0].format(wa[1])),
    )


generated_expressions = st.recursive(st.sampled_from(["z", "0.5", "0.7", "0.3i"]), _extend, max_leaves=8)


def test_parse_polynomial():
    f = parse("z^2 + 1")
    assert complex(f(0.5j)) == pytest.approx(0.75)


def test_parse_mobius():
    assert complex(parse("(z + 0.5)/(1 + 0.5*z)")(0.5)) == pytest.approx(0.8)


def test_parse_complex_literal_and_constants():
    assert complex(parse("0.5i*z")(1.0)) == pytest.approx(0.5j)
    assert complex(parse("i^2")(0.3)) == pytest.approx(-1.0)
    assert complex(parse("e^2 + pi")(0.0)) == pytest.approx(np.e ** 2 + np.pi)


def test_parse_unicode_minus():
    assert complex(parse("1 − z")(0.25)) == pytest.approx(0.75)


def test_syntax_error_reports_column():
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse("z^^2")
    assert excinfo.value.line == 1
    assert excinfo.value.column == 3


def test_syntax_error_reports_line():
    with pytest.raises(ExpressionSyntaxError) as excinfo:
        parse("z +\n  ^")
    assert (excinfo.value.line, excinfo.value.column) == (2, 3)


@pytest.mark.parametrize("text", ["(z + 1", "z +", "", "2 z)", "z $ 1"])
def test_malformed_texts_rejected(text):
    with pytest.raises(ExpressionSyntaxError):
        parse(text)


def test_non_integer_exponent():
    with pytest.raises(NonIntegerExponentError):
        parse("z^1.5")


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as excinfo:
        parse("foo(z)")
    assert excinfo.value.column == 1


@pytest.mark.parametrize("text", EXPRESSIONS)
def test_canonical_text_parses_back(text):
    f = parse(text)
    g = parse(f.text)
    points = np.array([0.0, 0.3 + 0.4j, -0.7j, 0.85])
    np.testing.assert_allclose(g(points), f(points), rtol=1e-12)


def test_derivative_closed_forms():
    z = np.array([0.2 + 0.1j, -0.6, 0.5j])
    np.testing.assert_allclose(derivative(parse("z^3"))(z), 3 * z ** 2, rtol=1e-14)
    np.testing.assert_allclose(derivative(parse("log(1 - 0.5*z)"))(z), -0.5 / (1 - 0.5 * z), rtol=1e-14)
    assert derivative(constant(3)).is_zero


@pytest.mark.parametrize("text", EXPRESSIONS)
@given(z=disk_points)
def test_derivative_matches_central_difference(text, z):
    f = parse(text)
    h = 1e-5
    exact = complex(derivative(f)(z))
    estimate = (complex(f(z + h)) - complex(f(z - h))) / (2 * h)
    assert abs(exact - estimate) <= 1e-6 * (1.0 + abs(exact))


@hypothesis_settings(max_examples=100)
@given(text=generated_expressions, z=disk_points)
def test_derivative_matches_central_difference_on_generated_grammar(text, z):
    f = parse(f"z*({text})")
    h = 1e-5
    exact = complex(derivative(f)(z))
    estimate = (complex(f(z + h)) - complex(f(z - h))) / (2 * h)
    assert abs(exact - estimate) <= 1e-6 * (1.0 + abs(exact))


def test_power_values():
    assert complex(power(monomial(1), 5)(0.5)) == pytest.approx(0.03125)
    assert complex(power(parse("exp(z)"), 0)(0.7)) == 1.0


def test_power_chain_rule():
    phi = parse("(z + 0.5)/(1 + 0.5*z)")
    z = 0.3 + 0.2j
    n = 7
    expected = n * complex(phi(z)) ** (n - 1) * complex(derivative(phi)(z))
    assert complex(derivative(power(phi, n))(z)) == pytest.approx(expected, rel=1e-10)


@given(m=st.integers(0, 30), n=st.integers(0, 30), z=disk_points)
def test_power_is_additive(m, n, z):
    phi = parse("(z - 0.3i)/(1 + 0.3i*z)")
    lhs = complex(power(phi, m + n)(z))
    rhs = complex(power(phi, m)(z)) * complex(power(phi, n)(z))
    assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-300)


def test_negative_power_rejected():
    with pytest.raises(InvalidArgumentError):
        power(monomial(1), -1)


def test_dilation():
    assert complex(dilate(parse("z^2"), 1 - 1e-9)(0.5)) == pytest.approx(0.25, rel=1e-8)
    assert complex(dilate(parse("z^2"), 0.5)(1 - 1e-9)) == pytest.approx(0.25, rel=1e-8)
    assert complex(dilate(constant(1), 0.5)(0.9)) == 1.0
    f = parse("exp(z)")
    z = 0.9 * np.exp(1j * np.linspace(0.0, 2.0 * np.pi, 64))
    assert np.max(np.abs(dilate(f, 1 - 1e-4)(z) - f(z))) < 1e-3


@pytest.mark.parametrize("r", [0.0, 1.0, 1.5])
def test_dilation_radius_range(r):
    with pytest.raises(InvalidArgumentError):
        dilate(parse("z"), r)


def test_identity_is_a_self_map():
    check = validate_self_map(parse("z"), GRID)
    assert check.phi_sup == pytest.approx(1.0, abs=1e-9)


def test_contraction_is_a_self_map():
    check = validate_self_map(parse("z/2"), GRID)
    assert check.phi_sup == pytest.approx(0.5, abs=1e-9)


def test_polynomial_self_map_matches_boundary_max():
    phi = parse("0.3*z^2 + 0.5*z + 0.1")
    check = validate_self_map(phi, GRID)
    circle = (1 - 1e-10) * np.exp(2j * np.pi * np.arange(4096) / 4096)
    assert check.phi_sup == pytest.approx(np.max(np.abs(phi(circle))), rel=1e-6)


def test_expanding_map_refused():
    with pytest.raises(SelfMapViolation) as excinfo:
        validate_self_map(parse("2*z"), GRID)
    assert excinfo.value.modulus == pytest.approx(2.0, rel=1e-6)
    assert abs(excinfo.value.witness) > 0.99


def test_unimodular_constant_refused():
    with pytest.raises(SelfMapViolation):
        validate_self_map(parse("1"), GRID)
    assert validate_self_map(parse("0.5"), GRID).phi_sup == pytest.approx(0.5)


def test_interior_pole_refused():
    with pytest.raises(SingularityError) as refused:
        validate_self_map(parse("1/(z - 0.5)"), GRID)
    assert refused.value.location == pytest.approx(0.5)
    with pytest.raises(SingularityError) as refused:
        make_pair("1/(1 - 2*z)", "z", GRID)
    assert refused.value.location == pytest.approx(0.5)
    assert "pole inside the disk" in str(refused.value)


def test_make_pair_accepts_boundary_singularity():
    pair = make_pair("log(1 - z)", "z", GRID)
    assert pair.touches_boundary


def test_touches_boundary():
    assert make_pair("1", "z", GRID).touches_boundary
    assert not make_pair("1", "z/2", GRID).touches_boundary


def test_compose():
    f = compose(parse("exp(z)"), parse("(z + 0.5)/(1 + 0.5*z)"))
    z = 0.3 - 0.4j
    assert complex(f(z)) == pytest.approx(cmath.exp((z + 0.5) / (1 + 0.5 * z)), rel=1e-12)
