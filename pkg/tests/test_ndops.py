from __future__ import annotations

from math import gamma, sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fracvar import (
    AxisSubset,
    Box,
    Function1D,
    Interval,
    ScalarField,
    dt_alpha_integral,
    frac_line_integral_2d,
    frac_multi_integral,
    frac_partial,
    frac_partial_field,
    frac_surface_integral_3d,
    frac_volume_integral,
    jumarie_derivative,
)
from fracvar.errors import DimensionError

M = ScalarField.monomial
U2, U3 = Box.unit(2), Box.unit(3)


def test_partial_of_field_constant_along_axis():
    f = M((0, 3))
    assert frac_partial(f, U2, 1, (0.4, 0.7), 0.5) == 0.0


@pytest.mark.parametrize("x,y", [(0.3, 0.9), (1.0, 0.5)])
def test_partial_of_xy(x, y):
    expect = y * x**0.5 / gamma(1.5)
    assert frac_partial(M((1, 1)), U2, 1, (x, y), 0.5) == pytest.approx(expect, rel=1e-10)


def test_partial_classical():
    f = M((2, 1)) + M((0, 3))
    assert frac_partial(f, U2, 2, (0.3, 0.6), 1.0) == pytest.approx(0.09 + 3 * 0.36, rel=1e-13)


def test_partial_many_points():
    pts = U2.grid((3, 4), interior=True)
    out = frac_partial(M((1, 1)), U2, 1, pts, 0.75)
    assert out.shape == (3, 4)
    assert np.allclose(out, pts[1] * pts[0] ** 0.25 / gamma(1.25), rtol=1e-10)


def test_surrogate_and_canonical_routes_agree():
    f = M((3, 1)) + M((1, 2))
    p = (0.6, 0.3)
    for alpha in (0.25, 0.5, 0.9):
        a = frac_partial(f, U2, 1, p, alpha, method="canonical")
        b = frac_partial(f, U2, 1, p, alpha, method="surrogate")
        assert a == pytest.approx(b, rel=1e-9)


def test_nested_partial_field_matches_closed_form():
    # D^a D^a t = t^(1-2a) / Gamma(2-2a) for the Jumarie derivative
    f = M((0, 1))
    for alpha in (0.25, 0.4):
        inner = frac_partial_field(f, U2, 2, alpha)
        got = frac_partial(inner, U2, 2, (0.5, 0.8), alpha)
        assert got == pytest.approx(0.8 ** (1 - 2 * alpha) / gamma(2 - 2 * alpha), rel=1e-7)


def test_multi_integral_of_one():
    assert frac_multi_integral(ScalarField.constant(2, 1.0), U2, (1, 2), (1.0, 1.0), 0.5) == pytest.approx(1.0, rel=1e-14)


def test_multi_integral_single_axis():
    assert frac_multi_integral(M((1, 0)), U2, AxisSubset((1,)), (1.0, 0.37), 0.5) == pytest.approx(2 / 3, rel=1e-13)


def test_volume_integrals():
    one = ScalarField.constant(3, 1.0)
    assert frac_volume_integral(one, U3, 0.3) == pytest.approx(1.0, rel=1e-13)
    box = Box((0.0, 0.0), (2.0, 3.0))
    assert frac_volume_integral(ScalarField.constant(2, 1.0), box, 0.5) == pytest.approx(sqrt(6.0), rel=1e-13)
    assert frac_volume_integral(M((1, 1)), U2, 0.5) == pytest.approx(4 / 9, rel=1e-13)


def test_line_integral_examples():
    c = ScalarField.constant(2, 2.0)
    assert frac_line_integral_2d(c, U2, 1, 0.5) == 0.0
    assert frac_line_integral_2d(c, U2, 2, 0.5) == 0.0
    y = M((0, 1))
    assert frac_line_integral_2d(y, U2, 1, 0.5) == pytest.approx(-1.0, rel=1e-13)
    assert frac_line_integral_2d(y, U2, 2, 0.5) == 0.0


def test_line_integral_needs_2d():
    with pytest.raises(DimensionError):
        frac_line_integral_2d(ScalarField.constant(3, 1.0), U3, 1, 0.5)


def test_surface_integral_examples():
    z = M((0, 0, 1))
    assert frac_surface_integral_3d(ScalarField.constant(3, 1.5), U3, (1, 3), 0.5) == 0.0
    assert frac_surface_integral_3d(z, U3, (1, 2), 0.5) == pytest.approx(1.0, rel=1e-13)
    assert frac_surface_integral_3d(z, U3, (2, 3), 0.5) == 0.0


def test_surface_integral_bad_pair():
    with pytest.raises(ValueError):
        frac_surface_integral_3d(M((0, 0, 1)), U3, (1, 1), 0.5)


def test_axis_subset_validation():
    with pytest.raises(DimensionError):
        AxisSubset((2, 1))
    with pytest.raises(DimensionError):
        frac_multi_integral(M((1, 0)), U2, (1, 3), (1.0, 1.0), 0.5)


# --- properties -------------------------------------------------------------

small = st.floats(-2.0, 2.0, allow_nan=False)


@settings(max_examples=30, deadline=None)
@given(cu=st.lists(small, min_size=4, max_size=4), cv=st.lists(small, min_size=4, max_size=4), alpha=st.sampled_from((0.25, 0.5, 0.75, 0.9, 1.0)))
def test_separability(cu, cv, alpha):
    box = Box((-0.5, 0.2), (1.0, 2.0))
    f = ScalarField.polynomial(np.outer(cu, cv))
    pu = np.polynomial.Polynomial(cu)
    pv = np.polynomial.Polynomial(cv)
    iu = dt_alpha_integral(pu, Interval(-0.5, 1.0), 1.0, alpha)
    iv = dt_alpha_integral(pv, Interval(0.2, 2.0), 2.0, alpha)
    assert frac_volume_integral(f, box, alpha) == pytest.approx(iu * iv, rel=1e-10, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(c=st.lists(small, min_size=9, max_size=9), alpha=st.sampled_from((0.25, 0.5, 0.9)))
def test_order_independence(c, alpha):
    f = ScalarField.polynomial(np.reshape(c, (3, 3)))
    box = Box((0.0, -1.0), (1.5, 1.0))
    a = frac_volume_integral(f, box, alpha, contract_order=(1, 2))
    b = frac_volume_integral(f, box, alpha, contract_order=(2, 1))
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_classical_limit_integral_and_partial():
    f = M((2, 1, 1))
    assert frac_volume_integral(f, U3, 1.0) == pytest.approx(1 / 12, rel=1e-14)
    assert frac_partial(f, U3, 1, (0.5, 0.5, 0.5), 1.0) == pytest.approx(0.25, rel=1e-14)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 1.0])
def test_one_dimensional_reduction_is_bitwise(alpha):
    c = np.array([0.5, -1.0, 0.0, 2.0])
    f = ScalarField.polynomial(c)
    g = Function1D(lambda t: f(t), lambda t: f.partial(1)(t))
    box = Box((0.0,), (1.0,))
    iv = Interval(0.0, 1.0)
    for x in (0.2, 0.75, 1.0):
        assert frac_partial(f, box, 1, (x,), alpha) == jumarie_derivative(g, iv, x, alpha)
        assert frac_multi_integral(f, box, (1,), (x,), alpha) == dt_alpha_integral(g, iv, x, alpha)
