r"""One-dimensional Jumarie derivative and :math:`(dt)^\alpha` integral.

Two independent routes are provided for the derivative:

* the *canonical* route, valid for :math:`C^1` functions,

  .. math::

      f^{(\alpha)}(x) = \frac{1}{\Gamma(1-\alpha)} \int_a^x (x-t)^{-\alpha} f'(t)\,dt,

  evaluated with a Gauss-Jacobi rule (or, without :math:`f'`, on a Chebyshev
  surrogate of the slice);
* the *series* route, the fractional finite-difference quotient

  .. math::

      h^{-\alpha} \sum_k (-1)^k \binom{\alpha}{k} \bigl(f(x + (\alpha-k)h) - f(a)\bigr),

  with :math:`f - f(a)` extended by zero to the left of :math:`a`.  It is
  first order in :math:`h`; :func:`jumarie_derivative_extrapolated` removes
  the leading error terms by Richardson extrapolation.

All array arguments broadcast; slice callables receive an array whose last
axis runs over sample points of the slice.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional
import math

import numpy as np

from .errors import DomainError
from .quadrature import (
    DEFAULT_CHEB_DEGREE,
    DEFAULT_ORDER,
    JacobiRule,
    build_jacobi_rule,
    gamma_ratio,
    grading_exponent,
    surrogate_derivative_weights,
)
from .report import ResidualReport

ArrayFn = Callable[[np.ndarray], np.ndarray]


def check_alpha(alpha: float) -> float:
    """Validate a fractional order, ``0 < alpha <= 1``."""
    alpha = float(alpha)
    if not (0.0 < alpha <= 1.0) or not math.isfinite(alpha):
        raise ValueError(f"fractional order must satisfy 0 < alpha <= 1, got {alpha}")
    return alpha


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)) or not self.a < self.b:
            raise DomainError(f"interval requires a < b, got [{self.a}, {self.b}]")

    def check(self, x, what="x"):
        x = np.asarray(x, dtype=float)
        tol = 1e-12 * max(1.0, abs(self.a), abs(self.b))
        if np.any(x < self.a - tol) or np.any(x > self.b + tol):
            raise DomainError(f"{what} outside [{self.a}, {self.b}]")
        return x


@dataclass(frozen=True)
class Function1D:
    """A vectorised real function with an optional analytic derivative.

    ``domain``, when given, is the closed interval outside of which ``eval``
    must not be sampled; the series route checks it.
    """

    eval: ArrayFn
    deriv: Optional[ArrayFn] = None
    domain: Optional[tuple[float, float]] = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.eval(t), dtype=float), t.shape)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(np.asarray(self.deriv(t), dtype=float), t.shape)

    @staticmethod
    def constant(c: float) -> Function1D:
        return Function1D(lambda t: np.full(np.shape(t), float(c)), lambda t: np.zeros(np.shape(t)))

    def __mul__(self, other: Function1D) -> Function1D:
        deriv = None
        if self.deriv is not None and other.deriv is not None:
            deriv = lambda t: self.derivative(t) * other(t) + self(t) * other.derivative(t)  # noqa: E731
        return Function1D(lambda t: self(t) * other(t), deriv, _meet(self.domain, other.domain))

    def __add__(self, other: Function1D) -> Function1D:
        deriv = None
        if self.deriv is not None and other.deriv is not None:
            deriv = lambda t: self.derivative(t) + other.derivative(t)  # noqa: E731
        return Function1D(lambda t: self(t) + other(t), deriv, _meet(self.domain, other.domain))

    def scale(self, lam: float) -> Function1D:
        deriv = None if self.deriv is None else (lambda t: lam * self.derivative(t))
        return Function1D(lambda t: lam * self(t), deriv, self.domain)


def _meet(d1, d2):
    if d1 is None:
        return d2
    if d2 is None:
        return d1
    return (max(d1[0], d2[0]), min(d1[1], d2[1]))


def gamma_factorial(alpha: float) -> float:
    """``alpha! = Gamma(1 + alpha)``."""
    return math.gamma(1.0 + float(alpha))


# --- vectorised slice engine -------------------------------------------------


def slice_integral(g: ArrayFn, a, x, alpha: float, rule: JacobiRule) -> np.ndarray:
    r""":math:`\alpha \int_a^x (x-t)^{\alpha-1} g(t)\,dt` for every entry of ``x``."""
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    span = np.clip(x - a, 0.0, None)
    t = a[..., None] + span[..., None] * rule.nodes
    vals = np.asarray(g(t), dtype=float)
    vals = np.broadcast_to(vals, t.shape)
    return alpha * span**alpha * rule.integrate(vals)


def slice_derivative(
    g: ArrayFn,
    a,
    x,
    alpha: float,
    *,
    dg: Optional[ArrayFn] = None,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
    grading: int = 1,
) -> np.ndarray:
    """Jumarie derivative at ``x`` of the slice ``g`` with lower terminal ``a``.

    With ``dg`` (the classical derivative of ``g``) the canonical Jacobi route
    is used; otherwise ``g`` is replaced by its Chebyshev surrogate on
    ``[a, x]``.  For ``alpha < 1`` returns 0 where ``x == a`` (right limit for
    C^1 slices); for ``alpha == 1`` it returns the one-sided derivative there.
    """
    x = np.asarray(x, dtype=float)
    a = np.asarray(a, dtype=float)
    span = np.clip(x - a, 0.0, None)
    live = span > 0
    safe = np.where(live, span, 1.0)
    if alpha >= 1.0:
        if dg is not None:
            return np.broadcast_to(np.asarray(dg(x[..., None])[..., 0], dtype=float), x.shape).copy()
        pos, v = surrogate_derivative_weights(1.0, cheb_degree)
        vals = np.broadcast_to(np.asarray(g(a[..., None] + safe[..., None] * pos), dtype=float),
                               safe.shape + pos.shape)
        # classical derivative: the near-terminal slope also covers x == a
        return _near_terminal(g, a, span, alpha, (vals @ v) / safe, cheb_degree)
    if dg is not None:
        rule = build_jacobi_rule(1.0 - alpha, order)
        t = a[..., None] + safe[..., None] * rule.nodes
        vals = np.broadcast_to(np.asarray(dg(t), dtype=float), t.shape)
        out = gamma_ratio(alpha) * safe ** (1.0 - alpha) * rule.integrate(vals)
    else:
        pos, v = surrogate_derivative_weights(alpha, cheb_degree, order, grading)
        t = a[..., None] + safe[..., None] * pos
        vals = np.broadcast_to(np.asarray(g(t), dtype=float), t.shape)
        out = gamma_ratio(alpha) * safe ** (-alpha) * (vals @ v)
        if grading == 1:
            out = _near_terminal(g, a, span, alpha, out, cheb_degree)
    return np.where(live, out, 0.0)


SURROGATE_FLOOR = 1e-7
_SLOPE_SPAN = 1e-4
_SLOPE_DEGREE = 8


def _near_terminal(g, a, span, alpha, out, cheb_degree):
    """Replace surrogate values on spans too short to resolve from samples.

    Below ``SURROGATE_FLOOR * max(1, |a|)`` the slice values differ by less
    than their rounding error amplified by ``span^-alpha``; there the leading
    term ``g'(a) span^(1-alpha) / Gamma(2-alpha)`` of a smooth slice is used,
    with ``g'(a)`` read off a low-degree surrogate on a short fixed span.
    """
    scale = np.maximum(1.0, np.abs(a))
    tiny = span < SURROGATE_FLOOR * scale
    if not np.any(tiny):
        return out
    pos, v = surrogate_derivative_weights(1.0, min(cheb_degree, _SLOPE_DEGREE))
    h = np.broadcast_to(_SLOPE_SPAN * scale, span.shape)
    fa = np.broadcast_to(a, span.shape)
    # reflect so the one-sided surrogate derivative (taken at s = 1) lands on a
    vals = np.broadcast_to(np.asarray(g(fa[..., None] + h[..., None] * (1.0 - pos)), dtype=float),
                           span.shape + pos.shape)
    slope = -(vals @ v) / h
    lead = slope * span ** (1.0 - alpha) / math.gamma(2.0 - alpha)
    return np.where(tiny, lead, out)


# --- public 1-D operations ---------------------------------------------------


def build_rule(alpha: float, order: int = DEFAULT_ORDER) -> JacobiRule:
    return build_jacobi_rule(check_alpha(alpha), order)


def dt_alpha_integral(
    f: Function1D | ArrayFn,
    iv: Interval,
    x,
    alpha: float,
    rule: Optional[JacobiRule] = None,
) -> np.ndarray | float:
    r"""The :math:`(dt)^\alpha` integral :math:`\int_a^x f(t)\,(dt)^\alpha`.

    ``rule`` must be built for the same ``alpha``; a graded rule is accepted.
    """
    alpha = check_alpha(alpha)
    x = iv.check(x)
    if rule is None:
        rule = build_jacobi_rule(alpha)
    elif abs(rule.alpha - alpha) > 1e-15:
        raise ValueError(f"rule built for alpha={rule.alpha}, used with alpha={alpha}")
    out = slice_integral(f, iv.a, x, alpha, rule)
    return float(out) if out.ndim == 0 else out


def jumarie_derivative(
    f: Function1D,
    iv: Interval,
    x,
    alpha: float,
    rule: Optional[JacobiRule] = None,
    *,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> np.ndarray | float:
    """Jumarie derivative of ``f`` on ``[iv.a, x]`` evaluated at ``x``.

    Uses ``f.deriv`` when present.  Without it the finite-difference series
    (Richardson-extrapolated) is used instead.  ``rule``, if given, must be
    the kernel rule for exponent ``-alpha`` (i.e. built with ``1 - alpha``).
    """
    alpha = check_alpha(alpha)
    x = iv.check(x)
    if not isinstance(f, Function1D):
        f = Function1D(f)
    if f.deriv is None:
        out = np.vectorize(lambda xx: jumarie_derivative_extrapolated(f, xx, alpha, iv.a))(x)
        return float(out) if np.ndim(out) == 0 else out
    order = DEFAULT_ORDER
    if rule is not None:
        if alpha < 1.0 and abs(rule.alpha - (1.0 - alpha)) > 1e-15:
            raise ValueError("derivative rule must be built for exponent -alpha (alpha' = 1 - alpha)")
        order = rule.order
    out = slice_derivative(f, iv.a, x, alpha, dg=f.derivative, order=order, cheb_degree=cheb_degree)
    return float(out) if out.ndim == 0 else out


def binomial_weights(alpha: float, count: int) -> np.ndarray:
    """``(-1)^k C(alpha, k)`` for ``k < count`` by the stable recurrence."""
    k = np.arange(count - 1, dtype=float)
    om = np.empty(count)
    om[0] = 1.0
    om[1:] = np.cumprod((k - alpha) / (k + 1.0))
    return om


def jumarie_derivative_series(
    f: Function1D | ArrayFn,
    x: float,
    alpha: float,
    h: float,
    a: float,
    kmax: Optional[int] = None,
) -> float:
    """Fractional finite-difference quotient at step ``h``.

    Terms whose sample point falls left of ``a`` vanish (``f - f(a)`` is
    extended by zero), so the sum is finite and needs no tail estimate.
    """
    alpha = check_alpha(alpha)
    if not h > 0:
        raise ValueError("step h must be positive")
    x = float(x)
    if x < a:
        raise DomainError(f"x={x} lies left of the lower terminal a={a}")
    nterms = int(math.floor((x - a) / h + alpha + 1e-12)) + 1
    if kmax is not None:
        nterms = min(nterms, int(kmax) + 1)
    dom = getattr(f, "domain", None)
    if dom is not None and (x + alpha * h > dom[1] + 1e-12 or a < dom[0] - 1e-12):
        raise DomainError(f"series samples up to {x + alpha * h}, outside domain {dom}")
    k = np.arange(nterms)
    pts = x + (alpha - k) * h
    vals = np.asarray(f(pts), dtype=float) - float(np.asarray(f(np.array([a])), dtype=float)[0])
    return float(h ** (-alpha) * np.dot(binomial_weights(alpha, nterms), vals))


def _richardson_exponents(alpha: float, count: int) -> list[float]:
    cand = sorted({float(k) for k in range(1, count + 2)} | {k + alpha for k in range(1, count + 2)})
    out: list[float] = []
    for p in cand:
        if not out or p - out[-1] > 1e-9:
            out.append(p)
    return out[:count]


def richardson(values, steps, exponents) -> float:
    """Eliminate ``c_p h^p`` terms from ``values[j] = D + sum_p c_p steps[j]^p``."""
    steps = np.asarray(steps, dtype=float)
    A = np.column_stack([np.ones_like(steps)] + [steps**p for p in exponents])
    return float(np.linalg.solve(A, np.asarray(values, dtype=float))[0])


def jumarie_derivative_extrapolated(
    f: Function1D | ArrayFn,
    x: float,
    alpha: float,
    a: float,
    base_steps: int = 32,
    levels: int = 7,
) -> float:
    r"""Series route with generalised Richardson extrapolation.

    Steps are :math:`h_j = (x-a) / (N_0 2^j)` so the grid always lands on
    :math:`a`.  Smooth :math:`f` (and :math:`(dt)^\alpha` antiderivatives of
    smooth functions) have error expansions in powers :math:`h^k` and
    :math:`h^{k+\alpha}`; the first ``levels - 1`` of those are removed.
    """
    alpha = check_alpha(alpha)
    if x <= a:
        return 0.0
    steps = [(x - a) / (base_steps * 2**j) for j in range(levels)]
    vals = [jumarie_derivative_series(f, x, alpha, h, a) for h in steps]
    return richardson(vals, steps, _richardson_exponents(alpha, levels - 1))


# --- fundamental theorem and Leibniz checks ----------------------------------


def check_ftc1(f: Function1D, iv: Interval, x: float, alpha: float, order: int = DEFAULT_ORDER) -> ResidualReport:
    r"""Compare :math:`D^\alpha \int_a^{(\cdot)} f\,(dt)^\alpha` at ``x`` with :math:`\alpha! f(x)`.

    The antiderivative has no closed form, so its derivative is taken by the
    extrapolated series route.
    """
    alpha = check_alpha(alpha)
    x = float(iv.check(x))
    if not x > iv.a:
        raise DomainError("check_ftc1 needs a < x")
    rule = build_jacobi_rule(alpha, order)
    antider = Function1D(lambda y: slice_integral(f, iv.a, y, alpha, rule), domain=getattr(f, "domain", None))
    lhs = jumarie_derivative_extrapolated(antider, x, alpha, iv.a)
    rhs = gamma_factorial(alpha) * float(np.asarray(f(np.array(x))))
    return ResidualReport.from_sides(lhs, rhs, f"ftc1 alpha={alpha} x={x} [{iv.a},{iv.b}] order={order}")


def check_ftc2(f: Function1D, iv: Interval, x: float, alpha: float, order: int = DEFAULT_ORDER) -> ResidualReport:
    r"""Compare :math:`\int_a^x f^{(\alpha)}(t)\,(dt)^\alpha` with :math:`\alpha!(f(x) - f(a))`.

    :math:`f^{(\alpha)}` behaves like :math:`(t-a)^{1-\alpha}` near ``a``, so
    the outer integral uses a graded rule.
    """
    alpha = check_alpha(alpha)
    x = float(iv.check(x))
    rule = build_jacobi_rule(alpha, order, grading_exponent(alpha))
    if f.deriv is not None:
        inner = lambda t: slice_derivative(f, iv.a, t, alpha, dg=f.derivative, order=order)  # noqa: E731
    else:
        inner = lambda t: np.vectorize(  # noqa: E731
            lambda tt: jumarie_derivative_extrapolated(f, tt, alpha, iv.a))(t)
    lhs = float(slice_integral(inner, iv.a, x, alpha, rule))
    rhs = gamma_factorial(alpha) * (float(f(np.array(x))) - float(f(np.array(iv.a))))
    return ResidualReport.from_sides(lhs, rhs, f"ftc2 alpha={alpha} x={x} [{iv.a},{iv.b}] order={order}")


def check_leibniz(f: Function1D, g: Function1D, iv: Interval, x: float, alpha: float) -> ResidualReport:
    """Compare ``D(fg)`` with ``D(f) g + f D(g)`` at ``x`` (canonical route throughout)."""
    alpha = check_alpha(alpha)
    x = float(iv.check(x))
    fg = f * g
    lhs = jumarie_derivative(fg, iv, x, alpha)
    rhs = jumarie_derivative(f, iv, x, alpha) * float(g(np.array(x))) + float(f(np.array(x))) * jumarie_derivative(
        g, iv, x, alpha
    )
    return ResidualReport.from_sides(lhs, rhs, f"leibniz alpha={alpha} x={x} [{iv.a},{iv.b}]")
