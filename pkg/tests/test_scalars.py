"""Exact scalar layer: arithmetic, parsing, rendering."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phaseforge import scalars
from phaseforge.scalars import GaussianRational


def gr(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


def test_basic_arithmetic_stays_exact():
    a = gr("1/2", "3/4")
    b = gr(-2, "1/3")
    assert isinstance(a + b, GaussianRational)
    assert a + b == gr("-3/2", "13/12")
    assert a * b == gr("-5/4", "-4/3")
    assert (a - a) == gr(0)
    assert -a == gr("-1/2", "-3/4")


def test_division_is_exact_and_inverts():
    a = gr(3, 4)
    b = gr("1/2", "-1/5")
    assert (a / b) * b == a
    with pytest.raises(ZeroDivisionError):
        a / gr(0)


def test_mixing_with_floats_demotes_to_complex():
    a = gr(1, 2)
    out = a + 0.5
    assert isinstance(out, complex)
    assert out == complex(1.5, 2.0)
    assert isinstance(a * 2, GaussianRational)
    assert isinstance(2 * a, GaussianRational)
    assert isinstance(a * (1 + 0j), complex)


def test_conjugate_and_modulus():
    a = gr("3/5", "4/5")
    assert a.conjugate() == gr("3/5", "-4/5")
    assert a.modulus_squared() == Fraction(1)
    assert scalars.unit_modulus(a)
    assert not scalars.unit_modulus(gr(2))


@pytest.mark.parametrize(
    "text,expected",
    [
        ("3", gr(3)),
        ("-2/5", gr("-2/5")),
        ("i", gr(0, 1)),
        ("-i", gr(0, -1)),
        ("1+2i", gr(1, 2)),
        ("1/2-3/4i", gr("1/2", "-3/4")),
        ("2i", gr(0, 2)),
        ("3/5+4/5i", gr("3/5", "4/5")),
    ],
)
def test_parse_exact_forms(text, expected):
    assert scalars.parse_scalar(text) == expected


@pytest.mark.parametrize(
    "text,expected",
    [
        ("2.5", complex(2.5, 0.0)),
        ("1.5-0.5i", complex(1.5, -0.5)),
        ("1e-3", complex(1e-3, 0.0)),
        ("2.5e+1i", complex(0.0, 25.0)),
    ],
)
def test_parse_decimal_forms_are_float(text, expected):
    out = scalars.parse_scalar(text)
    assert isinstance(out, complex)
    assert out == expected


def test_parse_real_rejects_imaginary():
    assert scalars.parse_real("3/4") == Fraction(3, 4)
    with pytest.raises(ValueError):
        scalars.parse_real("1+2i")


def test_render_roundtrip_exact():
    v = gr("7/3", "-1/6")
    assert scalars.scalar_from_json(scalars.render(v)) == v
    assert scalars.render(v) == {"re": "7/3", "im": "-1/6"}


def test_render_roundtrip_float():
    v = complex(0.125, -2.0)
    obj = scalars.render(v)
    assert obj == {"re": 0.125, "im": -2.0}
    assert scalars.scalar_from_json(obj) == v


small_fractions = st.fractions(
    min_value=-5, max_value=5, max_denominator=7
)


@settings(max_examples=60, deadline=None)
@given(small_fractions, small_fractions, small_fractions, small_fractions)
def test_modulus_is_multiplicative(ar, ai, br, bi):
    a, b = GaussianRational(ar, ai), GaussianRational(br, bi)
    assert (a * b).modulus_squared() == a.modulus_squared() * b.modulus_squared()


@settings(max_examples=60, deadline=None)
@given(small_fractions, small_fractions)
def test_format_parse_roundtrip(re, im):
    v = GaussianRational(re, im)
    assert scalars.parse_scalar(scalars.format_scalar(v)) == v


def test_coords_close_exact_vs_float():
    assert scalars.coords_close((Fraction(1, 3),), (Fraction(1, 3),))
    assert not scalars.coords_close((Fraction(1, 3),), (Fraction(1, 2),))
    assert scalars.coords_close((0.1,), (0.1 + 1e-15,))
