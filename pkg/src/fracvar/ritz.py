"""Direct (Ritz) method for the fractional variational problems.

Trial functions are ``base + sum_m c_m mode_m``.  The values of the base and
of every mode, and of their fractional partials, are computed once on the
problem's quadrature grid; after that ``J(c)`` and its exact gradient
(the Gateaux derivative along each mode) are cheap array reductions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import legendre as leg

from .errors import AdmissibilityError, DimensionError
from .fields import Box, ScalarField
from .quadrature import DEFAULT_CHEB_DEGREE, DEFAULT_ORDER
from .variational import (
    ADMISSIBILITY_TOL,
    Discretization,
    VariationalProblem,
    _boundary_points,
    first_variation_density,
)


# --- trial spaces -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RitzAnsatz:
    """``base + sum c_m modes[m]``.

    Unless ``free_boundary`` is set every mode must vanish on the box
    boundary; :meth:`check` enforces it at sampled boundary points.
    """

    base: ScalarField
    modes: tuple[ScalarField, ...] = ()
    coeffs: Optional[tuple[float, ...]] = None
    free_boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if self.coeffs is None:
            object.__setattr__(self, "coeffs", (0.0,) * len(self.modes))
        else:
            object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if len(self.coeffs) != len(self.modes):
            raise ValueError("need one coefficient per mode")
        if any(m.dim != self.base.dim for m in self.modes):
            raise DimensionError("modes and base must share a dimension")

    def __len__(self):
        return len(self.modes)

    def check(self, box: Box) -> RitzAnsatz:
        if self.free_boundary:
            return self
        pts = _boundary_points(box)
        for k, m in enumerate(self.modes):
            err = np.max(np.abs(m(*pts)))
            if not err <= 1e-12:
                raise AdmissibilityError(f"mode {k} does not vanish on the boundary (max {err:.3g})")
        return self

    def field(self, coeffs: Optional[Sequence[float]] = None) -> ScalarField:
        c = self.coeffs if coeffs is None else tuple(float(v) for v in coeffs)
        out = self.base
        for ck, m in zip(c, self.modes):
            if ck != 0.0:
                out = out + m.scale(ck)
        return out

    def with_coeffs(self, coeffs) -> RitzAnsatz:
        return RitzAnsatz(self.base, self.modes, tuple(coeffs), self.free_boundary)


def _sine(k: int, lo: float, hi: float):
    w = k * np.pi / (hi - lo)
    return (lambda t: np.sin(w * (t - lo))), (lambda t: w * np.cos(w * (t - lo)))


def _tensor(factors) -> ScalarField:
    """Product field ``prod_i u_i(x_i)`` from ``(u_i, du_i)`` pairs."""
    n = len(factors)

    def fn(*x):
        out = 1.0
        for (u, _), xi in zip(factors, x):
            out = out * u(xi)
        return out

    def part(i):
        def d(*x):
            out = 1.0
            for j, ((u, du), xj) in enumerate(zip(factors, x)):
                out = out * (du(xj) if j == i else u(xj))
            return out

        return d

    return ScalarField(n, fn, tuple(part(i) for i in range(n)))


def sine_modes(box: Box, counts: Sequence[int]) -> tuple[ScalarField, ...]:
    """Tensor sine modes ``prod_i sin(k_i pi (x_i - lo_i)/(hi_i - lo_i))``, ``1 <= k_i <= counts[i]``.

    Ordered by increasing ``max(k)`` then lexicographically, so the first
    ``m^dim`` modes are the ``m x ... x m`` block.
    """
    if len(counts) != box.dim:
        raise DimensionError("one mode count per axis")
    idx = np.stack(np.meshgrid(*[np.arange(1, n + 1) for n in counts], indexing="ij")).reshape(box.dim, -1).T
    idx = sorted(map(tuple, idx), key=lambda k: (max(k), k))
    modes = []
    for ks in idx:
        m = _tensor([_sine(k, lo, hi) for k, lo, hi in zip(ks, box.lo, box.hi)])
        modes.append(ScalarField(m.dim, m.fn, m.partials, label="sin" + "".join(str(k) for k in ks)))
    return tuple(modes)


def _legendre(n: int, lo: float, hi: float):
    c = np.zeros(n + 1)
    c[n] = 1.0
    dc = leg.legder(c) * 2.0 / (hi - lo)
    to_ref = lambda t: 2.0 * (np.asarray(t, dtype=float) - lo) / (hi - lo) - 1.0  # noqa: E731
    return (lambda t: leg.legval(to_ref(t), c)), (lambda t: leg.legval(to_ref(t), dc) + 0.0 * np.asarray(t))


def legendre_modes(box: Box, degree: int) -> tuple[ScalarField, ...]:
    """Tensor Legendre polynomials of total degree ``<= degree``; for free-boundary problems."""
    modes = []
    for ks in sorted(
        (k for k in np.ndindex(*(degree + 1,) * box.dim) if sum(k) <= degree), key=lambda k: (sum(k), k)
    ):
        m = _tensor([_legendre(k, lo, hi) for k, lo, hi in zip(ks, box.lo, box.hi)])
        modes.append(ScalarField(m.dim, m.fn, m.partials, label="P" + "".join(str(k) for k in ks)))
    return tuple(modes)


def transfinite_base(box: Box, phi: Callable) -> ScalarField:
    """Bilinear blending (Coons) interpolant of boundary data ``phi`` on a rectangle.

    Matches ``phi`` on all four edges when ``phi`` is continuous at the
    corners.  If ``phi`` is a :class:`ScalarField` with partials, the
    interpolant carries exact partials too.
    """
    if box.dim != 2:
        raise DimensionError("transfinite interpolation is implemented on rectangles")
    (a, c), (b, d) = box.lo, box.hi
    f = phi if isinstance(phi, ScalarField) else ScalarField(2, phi)
    pa, pb, pc, pd = f(a, c), f(b, c), f(a, d), f(b, d)

    def fn(x, y):
        s = (x - a) / (b - a)
        r = (y - c) / (d - c)
        edges = (1 - s) * f(a, y) + s * f(b, y) + (1 - r) * f(x, c) + r * f(x, d)
        corners = (1 - s) * (1 - r) * pa + s * (1 - r) * pb + (1 - s) * r * pc + s * r * pd
        return edges - corners

    parts = None
    if f.partials is not None:
        fx, fy = f.partial(1), f.partial(2)

        def dx(x, y):
            r = (y - c) / (d - c)
            return (
                (f(b, y) - f(a, y)) / (b - a)
                + (1 - r) * fx(x, c)
                + r * fx(x, d)
                - ((1 - r) * (pb - pa) + r * (pd - pc)) / (b - a)
            )

        def dy(x, y):
            s = (x - a) / (b - a)
            return (
                (1 - s) * fy(a, y)
                + s * fy(b, y)
                + (f(x, d) - f(x, c)) / (d - c)
                - ((1 - s) * (pc - pa) + s * (pd - pb)) / (d - c)
            )

        parts = (dx, dy)
    return ScalarField(2, fn, parts, label="coons")


# --- cached objective ---------------------------------------------------------


class RitzObjective:
    """``J(c)`` and its gradient for a fixed problem and ansatz."""

    def __init__(self, prob: VariationalProblem, ansatz: RitzAnsatz, *, order=DEFAULT_ORDER, cheb_degree=DEFAULT_CHEB_DEGREE):
        if ansatz.base.dim != prob.dim:
            raise DimensionError("ansatz and problem dimensions differ")
        prob.check_admissible(ansatz.base, "ansatz base")
        if not prob.free_boundary:
            ansatz.check(prob.box)
        self.prob = prob
        self.ansatz = ansatz
        self.disc = Discretization(prob.box, prob.alpha, order, cheb_degree)
        self.base = np.stack(self.disc.nodal(ansatz.base))
        if len(ansatz):
            self.modes = np.stack([np.stack(self.disc.nodal(m)) for m in ansatz.modes])
        else:
            self.modes = np.zeros((0,) + self.base.shape)
        self.evaluations = 0

    @property
    def size(self) -> int:
        return len(self.ansatz)

    def _vals(self, c):
        c = np.asarray(c, dtype=float)
        return self.base + np.tensordot(c, self.modes, axes=(0, 0))

    def value(self, c) -> float:
        self.evaluations += 1
        return self.disc.integrate(self.prob.lagrangian.l(*self.disc.points, *self._vals(c)))

    def gradient(self, c) -> np.ndarray:
        vals = self._vals(c)
        lag, pts = self.prob.lagrangian, self.disc.points
        dens = [lag.dw(*pts, *vals)] + [d(*pts, *vals) for d in lag.dgrad]
        dens = np.stack([np.broadcast_to(np.asarray(v, dtype=float), vals.shape[1:]) for v in dens])
        # sum over the grid of weights * sum_j dens_j * mode_m_j
        weighted = (dens * self.disc.weights).reshape(-1)
        return self.modes.reshape(self.size, -1) @ weighted

    def mode_gateaux(self, c, m: int) -> float:
        pts = self.disc.points
        return self.disc.integrate(first_variation_density(self.prob.lagrangian, pts, self._vals(c), self.modes[m]))


@dataclass(frozen=True)
class RitzResult:
    coeffs: np.ndarray
    value: float
    grad_norm: float
    iterations: int
    converged: bool
    message: str
    trace: tuple = field(default=(), repr=False)  # rows (iter, J, grad_inf_norm)


def _line_search(obj: RitzObjective, c, f0, g0, d):
    """Secant step on the directional derivative (exact for quadratics), Armijo-safeguarded."""
    slope0 = float(g0 @ d)
    slope1 = float(obj.gradient(c + d) @ d)
    curv = slope1 - slope0
    t = -slope0 / curv if curv > 0 else 1.0
    for _ in range(60):
        trial = c + t * d
        ft = obj.value(trial)
        if np.isfinite(ft) and ft <= f0 + 1e-4 * t * slope0 + 1e-14 * max(1.0, abs(f0)):
            return t, trial, ft
        t *= 0.5
    return 0.0, c, f0


def ritz_minimize(
    prob: VariationalProblem,
    ansatz: RitzAnsatz,
    tol: float = 1e-10,
    max_iters: int = 200,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
    objective: Optional[RitzObjective] = None,
) -> RitzResult:
    """Quasi-Newton (BFGS) minimisation of ``c -> J(base + sum c_m mode_m)``.

    The gradient is the exact first variation along each mode.  Stops when
    its infinity norm drops below ``tol``; otherwise returns the best iterate
    with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    obj = objective or RitzObjective(prob, ansatz, order=order, cheb_degree=cheb_degree)
    n = obj.size
    c = np.asarray(ansatz.coeffs, dtype=float)
    f = obj.value(c)
    if n == 0:
        return RitzResult(c, f, 0.0, 0, True, "empty ansatz", ((0, f, 0.0),))
    g = obj.gradient(c)
    H = np.eye(n)
    trace = [(0, f, float(np.max(np.abs(g))))]
    for it in range(1, max_iters + 1):
        if trace[-1][2] < tol:
            return RitzResult(c, f, trace[-1][2], it - 1, True, "gradient below tolerance", tuple(trace))
        d = -H @ g
        if g @ d >= 0:
            H = np.eye(n)
            d = -g
        t, c_new, f_new = _line_search(obj, c, f, g, d)
        if t == 0.0:
            return RitzResult(c, f, trace[-1][2], it - 1, False, "line search failed", tuple(trace))
        g_new = obj.gradient(c_new)
        s, y = c_new - c, g_new - g
        sy = float(s @ y)
        if sy > 1e-300:
            rho = 1.0 / sy
            V = np.eye(n) - rho * np.outer(s, y)
            H = V @ H @ V.T + rho * np.outer(s, s)
        c, f, g = c_new, f_new, g_new
        trace.append((it, f, float(np.max(np.abs(g)))))
    ok = trace[-1][2] < tol
    return RitzResult(c, f, trace[-1][2], max_iters, ok, "gradient below tolerance" if ok else "iteration cap reached", tuple(trace))


def ritz_stationary(
    prob: VariationalProblem,
    ansatz: RitzAnsatz,
    tol: float = 1e-10,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
    objective: Optional[RitzObjective] = None,
    rcond: float = 1e-10,
) -> RitzResult:
    """Stationary point of a quadratic functional by solving ``grad J(c) = 0``.

    For a quadratic Lagrangian the gradient is affine in ``c``; its matrix is
    assembled from gradient differences and the system solved in the
    least-squares sense, so modes on which the action is degenerate get the
    minimum-norm coefficient.  Saddle points (Hamilton's principle) are found
    as readily as minima.
    """
    obj = objective or RitzObjective(prob, ansatz, order=order, cheb_degree=cheb_degree)
    n = obj.size
    c0 = np.zeros(n)
    if n == 0:
        f = obj.value(c0)
        return RitzResult(c0, f, 0.0, 0, True, "empty ansatz", ((0, f, 0.0),))
    g0 = obj.gradient(c0)
    H = np.stack([obj.gradient(e) - g0 for e in np.eye(n)], axis=1)
    asym = np.max(np.abs(H - H.T)) / max(1.0, np.max(np.abs(H)))
    H = 0.5 * (H + H.T)
    c, *_ = np.linalg.lstsq(H, -g0, rcond=rcond)
    f = obj.value(c)
    g = obj.gradient(c)
    gn = float(np.max(np.abs(g)))
    ok = gn < tol
    msg = "gradient below tolerance" if ok else f"stationarity residual {gn:.3g} (hessian asymmetry {asym:.3g})"
    return RitzResult(c, f, gn, 1, ok, msg, ((0, obj.value(c0), float(np.max(np.abs(g0)))), (1, f, gn)))
