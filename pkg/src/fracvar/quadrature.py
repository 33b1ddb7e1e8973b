r"""Quadrature rules for the singular kernels of the Jumarie calculus.

Every kernel used by the package has the form :math:`(1 - s)^{\beta}` on the
reference interval :math:`[0, 1]` with :math:`-1 < \beta \le 0`:

* :math:`\beta = \alpha - 1` for the :math:`(dt)^\alpha` integral,
* :math:`\beta = -\alpha` for the derivative written against :math:`f'`.

Both are absorbed into Gauss-Jacobi weights so the kernel is never evaluated
at the singular endpoint.

Integrands that behave like :math:`(t - a)^{k(1-\alpha)}` at the *left* end
(fractional derivatives of smooth functions do) are handled by grading: the
substitution :math:`s = u^q` with :math:`q (1 - \alpha)` an integer turns those
powers into polynomials in :math:`u`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import numpy as np
from numpy.polynomial import chebyshev as cheb
from scipy.special import roots_jacobi

from .errors import QuadratureError

DEFAULT_ORDER = 40
DEFAULT_CHEB_DEGREE = 32
MAX_GRADING = 10


@dataclass(frozen=True, eq=False)
class JacobiRule:
    """Nodes and weights for :math:`\\int_0^1 (1-s)^{\\alpha-1} g(s)\\,ds`.

    With ``grading == 1`` this is the Gauss-Jacobi rule.  With ``grading = q``
    the nodes are :math:`u_j^q` for the Gauss-Jacobi nodes :math:`u_j` of the
    substituted integral, and the weights carry the Jacobian, so the rule is
    still applied as ``sum(weights * g(nodes))``.
    """

    alpha: float
    order: int
    nodes: np.ndarray
    weights: np.ndarray
    grading: int = 1

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Contract the last axis of ``values`` (sampled at ``nodes``)."""
        return np.asarray(values) @ self.weights


def grading_exponent(alpha: float) -> int:
    """Smallest ``q <= MAX_GRADING`` with ``q * (1 - alpha)`` (nearly) integral."""
    if alpha >= 1.0:
        return 1
    return Fraction(1.0 - alpha).limit_denominator(MAX_GRADING).denominator


def _check_order(order: int) -> int:
    if int(order) != order or order < 1:
        raise QuadratureError(f"quadrature order must be a positive integer, got {order!r}")
    return int(order)


@lru_cache(maxsize=256)
def _gauss_jacobi01(beta: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    # weight (1-s)^beta on [0,1]
    try:
        x, w = roots_jacobi(order, beta, 0.0)
    except Exception as exc:  # scipy raises on non-convergence / bad parameters
        raise QuadratureError(f"Gauss-Jacobi construction failed for beta={beta}, n={order}") from exc
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
        raise QuadratureError(f"Gauss-Jacobi construction failed for beta={beta}, n={order}")
    s = 0.5 * (x + 1.0)
    w = w / 2.0 ** (beta + 1.0)
    s.setflags(write=False)
    w.setflags(write=False)
    return s, w


def _rho(u: np.ndarray, q: int) -> np.ndarray:
    # (1 - u^q) / (1 - u), smooth and >= 1 on [0, 1]
    return np.polynomial.polynomial.polyval(u, np.ones(q))


@lru_cache(maxsize=256)
def build_jacobi_rule(alpha: float, order: int = DEFAULT_ORDER, grading: int = 1) -> JacobiRule:
    """Rule for the weight :math:`(1-s)^{\\alpha-1}` on :math:`[0, 1]`.

    ``alpha`` may equal 1, in which case the weight is constant and the rule is
    Gauss-Legendre.
    """
    if not 0.0 < alpha <= 1.0:
        raise QuadratureError(f"rule exponent requires 0 < alpha <= 1, got {alpha}")
    order = _check_order(order)
    grading = int(grading)
    if grading < 1:
        raise QuadratureError("grading must be a positive integer")
    u, w = _gauss_jacobi01(alpha - 1.0, order)
    if grading == 1:
        nodes, weights = u, w
    else:
        nodes = u**grading
        weights = w * _rho(u, grading) ** (alpha - 1.0) * grading * u ** (grading - 1)
    if np.any(np.diff(nodes) <= 0) or np.any(weights <= 0) or nodes[0] <= 0 or nodes[-1] >= 1:
        raise QuadratureError("rule violates node ordering or weight positivity")
    nodes = np.array(nodes)
    weights = np.array(weights)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return JacobiRule(float(alpha), order, nodes, weights, grading)


@lru_cache(maxsize=64)
def chebyshev_points(degree: int) -> np.ndarray:
    """Chebyshev-Lobatto points on [0, 1], increasing, endpoints included."""
    k = np.arange(degree + 1)
    pts = 0.5 * (1.0 - np.cos(np.pi * k / degree))
    pts.setflags(write=False)
    return pts


@lru_cache(maxsize=64)
def _interp_derivative_matrix(degree: int, targets: tuple[float, ...]) -> np.ndarray:
    """Matrix taking samples at Chebyshev points to the interpolant's derivative at ``targets``."""
    c = chebyshev_points(degree)
    vander = cheb.chebvander(2.0 * c - 1.0, degree)
    to_coef = np.linalg.inv(vander)
    der = np.stack([cheb.chebder(row) for row in np.eye(degree + 1)], axis=0)  # (deg+1, deg)
    at = cheb.chebvander(2.0 * np.asarray(targets) - 1.0, degree - 1)
    return 2.0 * at @ der.T @ to_coef


@lru_cache(maxsize=256)
def surrogate_derivative_weights(
    alpha: float, degree: int = DEFAULT_CHEB_DEGREE, order: int = DEFAULT_ORDER, grading: int = 1
) -> tuple[np.ndarray, np.ndarray]:
    r"""Linear functional for the Jumarie derivative of a sampled slice.

    Returns ``(positions, v)``.  For a slice :math:`g` on :math:`[a, x]`,

    .. math::

        D^\alpha g(x) \approx \frac{(x-a)^{-\alpha}}{\Gamma(1-\alpha)}
            \sum_k v_k\, g(a + (x-a)\,\mathrm{positions}_k),

    obtained by differentiating the degree-``degree`` Chebyshev interpolant
    of :math:`u \mapsto g(a + (x-a)u^q)` and integrating it against the kernel
    with a Gauss-Jacobi rule.  For ``alpha == 1`` the functional is the plain
    derivative at the right end, scaled by :math:`(x-a)^{-1}`.
    """
    if degree < 1:
        raise QuadratureError("Chebyshev degree must be at least 1")
    c = chebyshev_points(degree)
    if alpha >= 1.0:
        v = _interp_derivative_matrix(degree, (1.0,))[0]
        positions = c
    else:
        u, w = _gauss_jacobi01(-alpha, _check_order(order))
        mat = _interp_derivative_matrix(degree, tuple(u))
        if grading > 1:
            w = w * _rho(u, grading) ** (-alpha)
        v = w @ mat
        positions = c**grading
    v = np.array(v)
    positions = np.array(positions)
    v.setflags(write=False)
    positions.setflags(write=False)
    return positions, v


def gamma_ratio(alpha: float) -> float:
    """``1 / Gamma(1 - alpha)``; zero at ``alpha == 1``."""
    return 0.0 if alpha >= 1.0 else 1.0 / math.gamma(1.0 - alpha)
