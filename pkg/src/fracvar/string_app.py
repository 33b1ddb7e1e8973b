"""The fractional vibrating string.

The action on ``R = [0, L] x [t1, t2]`` is

    J(w) = 1/2 I_R (sigma(x) (D_t w)^2 - tau (D_x w)^2)

with the ends fixed (``w = 0`` at ``x = 0`` and ``x = L``) and the shapes at
``t1`` and ``t2`` prescribed.  Its Euler-Lagrange equation is the fractional
wave equation ``tau D_x D_x w = sigma D_t D_t w`` (repeated operators with
the same lower terminal).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .core1d import Function1D, check_alpha
from .errors import DomainError, UsageError
from .fields import Box, ScalarField
from .ndops import frac_partial, frac_partial_field
from .quadrature import DEFAULT_CHEB_DEGREE, DEFAULT_ORDER
from .ritz import RitzAnsatz, RitzObjective, ritz_stationary, sine_modes, transfinite_base
from .variational import Lagrangian2D, VariationalProblem, el_residual, eval_functional

Shape = Union[Callable, Function1D]


@dataclass(frozen=True, eq=False)
class StringProblem:
    """String of length ``length`` over the time window ``[t1, t2]``.

    ``sigma`` is a positive constant or a positive function of ``x``.  The
    shapes may be plain callables or :class:`Function1D` with a derivative;
    with derivatives the boundary-fitting base carries exact partials.
    """

    length: float
    t1: float
    t2: float
    sigma: Union[float, Callable] = 1.0
    tau: float = 1.0
    alpha: float = 1.0
    initial_shape: Shape = lambda x: 0.0 * np.asarray(x)  # noqa: E731
    final_shape: Shape = lambda x: 0.0 * np.asarray(x)  # noqa: E731

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if not self.length > 0:
            raise DomainError("string length must be positive")
        if not self.t1 < self.t2:
            raise DomainError("need t1 < t2")
        if not self.tau > 0:
            raise DomainError("tension must be positive")
        xs = np.linspace(0.0, self.length, 65)
        if not np.all(np.asarray(self.sigma_at(xs)) > 0):
            raise DomainError("mass density must be positive on [0, L]")
        for name in ("initial_shape", "final_shape"):
            fn = getattr(self, name)
            ends = np.array([float(fn(0.0)), float(fn(self.length))])
            if np.any(np.abs(ends) > 1e-12):
                raise DomainError(f"{name} must vanish at both ends, got {ends}")

    @property
    def box(self) -> Box:
        return Box((0.0, self.t1), (self.length, self.t2))

    @property
    def constant_sigma(self) -> bool:
        return np.isscalar(self.sigma)

    def sigma_at(self, x):
        if self.constant_sigma:
            return float(self.sigma) + 0.0 * np.asarray(x, dtype=float)
        return np.asarray(self.sigma(x), dtype=float)

    def with_alpha(self, alpha: float) -> StringProblem:
        return StringProblem(self.length, self.t1, self.t2, self.sigma, self.tau, alpha, self.initial_shape, self.final_shape)

    def lagrangian(self) -> Lagrangian2D:
        tau, sig = float(self.tau), self.sigma_at
        return Lagrangian2D(
            lambda x, t, w, p, q: 0.5 * (sig(x) * q**2 - tau * p**2),
            lambda x, t, w, p, q: 0.0 * np.asarray(w),
            lambda x, t, w, p, q: -tau * np.asarray(p),
            lambda x, t, w, p, q: sig(x) * q,
        )

    def boundary_field(self) -> ScalarField:
        """Linear-in-time blend of the two shapes; equals the boundary data on every edge."""
        t1, span = self.t1, self.t2 - self.t1
        f0, f1 = self.initial_shape, self.final_shape

        def fn(x, t):
            r = (t - t1) / span
            return (1 - r) * f0(x) + r * f1(x)

        parts = None
        d0, d1 = getattr(f0, "deriv", None), getattr(f1, "deriv", None)
        if d0 is not None and d1 is not None:
            parts = (
                lambda x, t: (1 - (t - t1) / span) * d0(x) + (t - t1) / span * d1(x),
                lambda x, t: (f1(x) - f0(x)) / span + 0.0 * t,
            )
        return ScalarField(2, fn, parts, label="shapes")

    def variational_problem(self) -> VariationalProblem:
        phi = self.boundary_field()
        return VariationalProblem(self.lagrangian(), self.box, self.alpha, phi)

    def base(self) -> ScalarField:
        return transfinite_base(self.box, self.boundary_field())

    def ansatz(self, kx: int, kt: int) -> RitzAnsatz:
        return RitzAnsatz(self.base(), sine_modes(self.box, (kx, kt)) if kx and kt else ())


def string_action(
    prob: StringProblem, w: ScalarField, *, order: int = DEFAULT_ORDER, cheb_degree: int = DEFAULT_CHEB_DEGREE
) -> float:
    return eval_functional(prob.variational_problem(), w, order=order, cheb_degree=cheb_degree)


def string_eom_residual(
    prob: StringProblem,
    w: ScalarField,
    point,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
):
    """``tau D_x D_x w - sigma D_t D_t w`` at ``point`` (constant ``sigma`` only)."""
    if not prob.constant_sigma:
        raise UsageError("the displayed equation of motion needs constant sigma; use el_residual instead")
    box, a = prob.box, prob.alpha
    pts = box.check_point(point)
    kw = {"order": order, "cheb_degree": cheb_degree}
    dxx = frac_partial(frac_partial_field(w, box, 1, a, **kw), box, 1, pts, a, **kw)
    dtt = frac_partial(frac_partial_field(w, box, 2, a, **kw), box, 2, pts, a, **kw)
    return prob.tau * np.asarray(dxx) - float(prob.sigma) * np.asarray(dtt)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    value: float
    max_el_residual: float
    coeffs: tuple[float, ...]
    converged: bool
    grad_norm: float
    message: str = ""


def interior_grid(box: Box, n: int) -> np.ndarray:
    return box.grid((n,) * box.dim, interior=True)


def alpha_sweep(
    template: StringProblem,
    alphas: Sequence[float],
    ansatz: RitzAnsatz,
    tol: float = 1e-8,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
    el_points: int = 5,
) -> list[SweepRow]:
    """Stationary Ritz solution of the string action for each ``alpha``.

    Each row carries the action value, the largest Euler-Lagrange residual
    on an ``el_points^2`` interior grid, and the coefficients.  A row that
    fails to reach ``tol`` is kept with ``converged=False``.
    """
    rows = []
    for alpha in alphas:
        prob = template.with_alpha(alpha)
        vp = prob.variational_problem()
        try:
            obj = RitzObjective(vp, ansatz, order=order, cheb_degree=cheb_degree)
            res = ritz_stationary(vp, ansatz, tol, objective=obj)
            w = ansatz.field(res.coeffs)
            el = el_residual(vp, w, interior_grid(vp.box, el_points), order=order, cheb_degree=cheb_degree)
            rows.append(
                SweepRow(
                    float(prob.alpha),
                    float(res.value),
                    float(np.max(np.abs(el))),
                    tuple(float(c) for c in res.coeffs),
                    bool(res.converged),
                    float(res.grad_norm),
                    res.message,
                )
            )
        except (ArithmeticError, np.linalg.LinAlgError) as exc:
            rows.append(SweepRow(float(prob.alpha), float("nan"), float("nan"), (), False, float("nan"), str(exc)))
    return rows


def solution_grid(ansatz: RitzAnsatz, coeffs, box: Box, n: int = 21) -> np.ndarray:
    """``(x, t, w)`` rows of the solution on an ``n x n`` lattice including the boundary."""
    pts = box.grid((n, n))
    w = ansatz.field(coeffs)(*pts)
    return np.stack([pts[0].ravel(), pts[1].ravel(), np.asarray(w).ravel()], axis=1)
