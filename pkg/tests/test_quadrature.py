from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import beta as beta_fn

from fracvar.errors import QuadratureError
from fracvar.quadrature import build_jacobi_rule, chebyshev_points, grading_exponent


def test_single_node_weight_is_kernel_mass():
    rule = build_jacobi_rule(0.5, 1)
    assert rule.nodes.shape == (1,)
    assert rule.weights.sum() == pytest.approx(2.0, rel=1e-14)


def test_weight_sum_is_one_over_alpha():
    rule = build_jacobi_rule(0.9, 10)
    assert rule.weights.sum() == pytest.approx(1 / 0.9, rel=1e-13)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 0.9, 1.0])
@pytest.mark.parametrize("k", [0, 1, 3, 7])
def test_beta_moments(alpha, k):
    # int_0^1 (1-s)^(alpha-1) s^k ds = B(k+1, alpha)
    rule = build_jacobi_rule(alpha, 12)
    assert rule.integrate(rule.nodes**k) == pytest.approx(beta_fn(k + 1, alpha), rel=1e-13)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 0.9])
def test_graded_rule_integrates_rough_powers(alpha):
    q = grading_exponent(alpha)
    rule = build_jacobi_rule(alpha, 30, q)
    for j in (1, 2):
        gamma = j * (1 - alpha)
        assert rule.integrate(rule.nodes**gamma) == pytest.approx(beta_fn(gamma + 1, alpha), rel=1e-12)


def test_grading_exponents():
    assert [grading_exponent(a) for a in (0.5, 0.25, 0.75, 0.9, 1.0)] == [2, 4, 4, 10, 1]


@pytest.mark.parametrize("bad", [0.0, -0.1, 1.5])
def test_rejects_bad_alpha(bad):
    with pytest.raises(QuadratureError):
        build_jacobi_rule(bad, 5)


def test_rejects_bad_order():
    with pytest.raises(QuadratureError):
        build_jacobi_rule(0.5, 0)


@settings(max_examples=40, deadline=None)
@given(alpha=st.floats(0.05, 1.0), order=st.integers(1, 60))
def test_rule_shape_invariants(alpha, order):
    rule = build_jacobi_rule(alpha, order)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.weights > 0)
    assert 0 < rule.nodes[0] and rule.nodes[-1] < 1
    assert math.isclose(rule.weights.sum(), 1 / alpha, rel_tol=1e-11)


def test_chebyshev_points_are_lobatto():
    c = chebyshev_points(8)
    assert c[0] == 0.0 and c[-1] == 1.0
    assert np.all(np.diff(c) > 0)
