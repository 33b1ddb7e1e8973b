r"""Fractional variational functionals on rectangles and parallelepipeds.

For a 2-D problem the functional is

.. math::

    J(w) = \alpha^2 \int_a^b \int_c^d L(x, y, w, D[1]w, D[2]w)
        (b-x)^{\alpha-1} (d-y)^{\alpha-1}\,dy\,dx,

i.e. the volume operator applied to the composite integrand.  The 3-D case
is the same with one more axis.  Everything here is evaluated on one graded
tensor grid per problem (see :class:`Discretization`), so the functional, its
Gateaux derivative and the Ritz solver all see the same quadrature.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from .core1d import check_alpha
from .errors import AdmissibilityError, DimensionError, LagrangianError, UsageError
from .fields import Box, ScalarField
from .ndops import frac_partial, frac_partial_field, frac_volume_integral
from .quadrature import DEFAULT_CHEB_DEGREE, DEFAULT_ORDER, build_jacobi_rule, grading_exponent
from .report import ResidualReport

ADMISSIBILITY_TOL = 1e-9
_BOUNDARY_SAMPLES = 17


# --- Lagrangians --------------------------------------------------------------


def _fd_check(l, partials, nvars, first, seed, samples=8, rel=1e-6):
    """Compare analytic partials of ``l`` (slots ``first``..) with central differences."""
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        z = rng.uniform(0.0, 1.0, nvars)
        for k, d in enumerate(partials):
            slot = first + k
            step = 1e-5 * max(1.0, abs(z[slot]))
            up, dn = z.copy(), z.copy()
            up[slot] += step
            dn[slot] -= step
            fd = (float(l(*up)) - float(l(*dn))) / (2 * step)
            an = float(d(*z))
            if not np.isfinite(an) or abs(an - fd) > rel * max(1.0, abs(an), abs(fd)):
                raise LagrangianError(
                    f"partial in slot {slot + 1} disagrees with finite differences at {z}: {an} vs {fd}"
                )


@dataclass(frozen=True, eq=False)
class Lagrangian2D:
    """``L(x, y, w, p, q)`` with its partials in slots 3, 4, 5 (``p``, ``q`` are the fractional partials)."""

    l: Callable
    d3: Callable
    d4: Callable
    d5: Callable
    check: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.check:
            _fd_check(self.l, (self.d3, self.d4, self.d5), 5, 2, self.seed)

    dim = 2

    @property
    def dw(self):
        return self.d3

    @property
    def dgrad(self):
        return (self.d4, self.d5)

    def negated(self) -> Lagrangian2D:
        """``-L``; maximising ``J`` is minimising the functional of ``-L``."""
        return Lagrangian2D(*(_neg(c) for c in (self.l, self.d3, self.d4, self.d5)), check=False)


@dataclass(frozen=True, eq=False)
class Lagrangian3D:
    """``L(x, y, z, w, p, q, r)`` with its partials in slots 4..7."""

    l: Callable
    d4: Callable
    d5: Callable
    d6: Callable
    d7: Callable
    check: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.check:
            _fd_check(self.l, (self.d4, self.d5, self.d6, self.d7), 7, 3, self.seed)

    dim = 3

    @property
    def dw(self):
        return self.d4

    @property
    def dgrad(self):
        return (self.d5, self.d6, self.d7)

    def negated(self) -> Lagrangian3D:
        return Lagrangian3D(*(_neg(c) for c in (self.l, self.d4, self.d5, self.d6, self.d7)), check=False)


def _neg(fn):
    return lambda *a: -np.asarray(fn(*a))


# --- problems -----------------------------------------------------------------


def _boundary_points(box: Box, n: int = _BOUNDARY_SAMPLES) -> np.ndarray:
    """Sample points on every face of ``box``, shape ``(dim, m)``."""
    ts = [np.linspace(lo, hi, n) for lo, hi in zip(box.lo, box.hi)]
    pts = []
    for k in range(box.dim):
        for val in (box.lo[k], box.hi[k]):
            mesh = np.meshgrid(*[ts[j] if j != k else np.array([val]) for j in range(box.dim)], indexing="ij")
            pts.append(np.stack([m.ravel() for m in mesh]))
    return np.concatenate(pts, axis=1)


@dataclass(frozen=True, eq=False)
class VariationalProblem:
    """Fixed-boundary problem when ``boundary`` is given, free-boundary otherwise.

    ``boundary`` is a callable of the box coordinates giving the prescribed
    values on the boundary.
    """

    lagrangian: Lagrangian2D | Lagrangian3D
    box: Box
    alpha: float
    boundary: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if self.box.dim != self.lagrangian.dim:
            raise DimensionError(f"{self.lagrangian.dim}-D Lagrangian on a {self.box.dim}-D box")
        if self.boundary is not None:
            self._check_corners()

    @property
    def dim(self) -> int:
        return self.box.dim

    @property
    def free_boundary(self) -> bool:
        return self.boundary is None

    def _check_corners(self):
        # approaching each corner along each of its edges must give one value
        eps = 1e-10
        corners = np.stack(np.meshgrid(*zip(self.box.lo, self.box.hi), indexing="ij")).reshape(self.dim, -1)
        for c in corners.T:
            at = float(self.boundary(*c))
            for k in range(self.dim):
                q = c.copy()
                q[k] += eps if c[k] == self.box.lo[k] else -eps
                near = float(self.boundary(*q))
                if not np.isfinite(at) or abs(near - at) > ADMISSIBILITY_TOL:
                    raise AdmissibilityError(f"boundary data is discontinuous at corner {tuple(c)}")

    def check_admissible(self, w: ScalarField, what: str = "trial function"):
        if w.dim != self.dim:
            raise DimensionError(f"{what} has dimension {w.dim}, problem has {self.dim}")
        if self.boundary is None:
            return
        pts = _boundary_points(self.box)
        err = np.max(np.abs(w(*pts) - np.asarray(self.boundary(*pts), dtype=float)))
        if not err <= ADMISSIBILITY_TOL:
            raise AdmissibilityError(f"{what} misses the boundary data by {err:.3g}")

    def check_variation(self, h: ScalarField):
        """Variations of a fixed-boundary problem must vanish on the boundary."""
        if h.dim != self.dim:
            raise DimensionError(f"variation has dimension {h.dim}, problem has {self.dim}")
        if self.boundary is None:
            return
        err = np.max(np.abs(h(*_boundary_points(self.box))))
        if not err <= ADMISSIBILITY_TOL:
            raise AdmissibilityError(f"variation does not vanish on the boundary (max {err:.3g})")


def VariationalProblem2D(lagrangian: Lagrangian2D, box: Box, alpha: float, boundary=None) -> VariationalProblem:
    if not isinstance(lagrangian, Lagrangian2D):
        raise DimensionError("VariationalProblem2D needs a Lagrangian2D")
    return VariationalProblem(lagrangian, box, alpha, boundary)


def VariationalProblem3D(lagrangian: Lagrangian3D, box: Box, alpha: float, boundary=None) -> VariationalProblem:
    if not isinstance(lagrangian, Lagrangian3D):
        raise DimensionError("VariationalProblem3D needs a Lagrangian3D")
    return VariationalProblem(lagrangian, box, alpha, boundary)


# --- discretisation -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Discretization:
    """Tensor quadrature for the volume operator of a problem's box.

    Every axis is graded, since the fractional partials of ``w`` inside the
    Lagrangian behave like powers of ``x_i - a_i`` along their own axis.
    """

    box: Box
    alpha: float
    order: int = DEFAULT_ORDER
    cheb_degree: int = DEFAULT_CHEB_DEGREE

    @cached_property
    def _grid(self):
        q = grading_exponent(self.alpha)
        rule = build_jacobi_rule(self.alpha, self.order, q)
        axes, weights = [], []
        for lo, hi in zip(self.box.lo, self.box.hi):
            span = hi - lo
            axes.append(lo + span * rule.nodes)
            weights.append(self.alpha * span**self.alpha * rule.weights)
        pts = np.stack(np.meshgrid(*axes, indexing="ij"))
        wts = weights[0]
        for w in weights[1:]:
            wts = np.multiply.outer(wts, w)
        return pts, wts

    @property
    def points(self) -> np.ndarray:
        return self._grid[0]

    @property
    def weights(self) -> np.ndarray:
        return self._grid[1]

    def nodal(self, w: ScalarField) -> tuple[np.ndarray, ...]:
        """Values of ``w`` and its fractional partials at the grid points."""
        pts = self.points
        vals = [w(*pts)]
        for axis in range(1, self.box.dim + 1):
            vals.append(
                np.asarray(
                    frac_partial(w, self.box, axis, pts, self.alpha, order=self.order, cheb_degree=self.cheb_degree, check=False)
                )
            )
        return tuple(vals)

    def integrate(self, values) -> float:
        return float(np.sum(self.weights * values))


def _disc(prob: VariationalProblem, order, cheb_degree) -> Discretization:
    return Discretization(prob.box, prob.alpha, order, cheb_degree)


def eval_functional(
    prob: VariationalProblem, w: ScalarField, *, order: int = DEFAULT_ORDER, cheb_degree: int = DEFAULT_CHEB_DEGREE
) -> float:
    """The functional ``J(w)``; raises :class:`AdmissibilityError` for inadmissible ``w``."""
    prob.check_admissible(w)
    disc = _disc(prob, order, cheb_degree)
    vals = disc.nodal(w)
    return disc.integrate(prob.lagrangian.l(*disc.points, *vals))


def first_variation_density(lag, pts, vals, hvals) -> np.ndarray:
    """``dL/dw h + sum_i dL/dp_i D[i]h`` at the grid points."""
    out = lag.dw(*pts, *vals) * hvals[0]
    for d, hv in zip(lag.dgrad, hvals[1:]):
        out = out + d(*pts, *vals) * hv
    return out


def gateaux_derivative(
    prob: VariationalProblem,
    w: ScalarField,
    h: ScalarField,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> float:
    """First variation of ``J`` at ``w`` in direction ``h``."""
    prob.check_admissible(w)
    prob.check_variation(h)
    disc = _disc(prob, order, cheb_degree)
    return disc.integrate(first_variation_density(prob.lagrangian, disc.points, disc.nodal(w), disc.nodal(h)))


# --- Euler-Lagrange and natural boundary conditions ---------------------------


def _composite(prob: VariationalProblem, w: ScalarField, fn, order, cheb_degree) -> ScalarField:
    """The field ``x -> fn(x, w, D[1]w, ..)``."""
    box, alpha = prob.box, prob.alpha
    kw = {"order": order, "cheb_degree": cheb_degree}
    parts = [frac_partial_field(w, box, i, alpha, **kw) for i in range(1, box.dim + 1)]

    def g(*x):
        return fn(*x, w(*x), *(p(*x) for p in parts))

    rough = frozenset(range(1, box.dim + 1)) if alpha < 1.0 else frozenset()
    return ScalarField(box.dim, g, None, rough)


def el_residual(
    prob: VariationalProblem,
    w: ScalarField,
    point,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
):
    """``dL/dw - sum_i D[i] (dL/dp_i)`` at ``point`` (shape ``(dim,)`` or ``(dim, ...)``).

    The outer derivatives act on the composite maps built from ``w`` and are
    evaluated on Chebyshev surrogates of their slices.
    """
    lag, box = prob.lagrangian, prob.box
    pts = box.check_point(point)
    kw = {"order": order, "cheb_degree": cheb_degree}
    base = _composite(prob, w, lag.dw, order, cheb_degree)
    out = base(*pts)
    for axis, d in enumerate(lag.dgrad, start=1):
        out = out - frac_partial(_composite(prob, w, d, order, cheb_degree), box, axis, pts, prob.alpha, **kw)
    out = np.asarray(out, dtype=float)
    return float(out) if out.ndim == 0 else out


def el_residual_2d(prob: VariationalProblem, w: ScalarField, point, **kw):
    if prob.dim != 2:
        raise DimensionError("el_residual_2d needs a 2-D problem")
    return el_residual(prob, w, point, **kw)


def el_residual_3d(prob: VariationalProblem, w: ScalarField, point, **kw):
    if prob.dim != 3:
        raise DimensionError("el_residual_3d needs a 3-D problem")
    return el_residual(prob, w, point, **kw)


@dataclass(frozen=True)
class NaturalBoundaryTraces:
    """``dL/dp`` on ``x = a`` and ``x = b`` and ``dL/dq`` on ``y = c`` and ``y = d``.

    On the lower edges the fractional partial is taken at its own lower
    terminal, where it is evaluated as the limit from the right (zero for
    smooth ``w``); ``lower_edge_convention`` records this.
    """

    left: np.ndarray
    right: np.ndarray
    bottom: np.ndarray
    top: np.ndarray
    coords: np.ndarray
    lower_edge_convention: str = "right-limit"

    def max_abs(self) -> float:
        return float(max(np.max(np.abs(t)) for t in (self.left, self.right, self.bottom, self.top)))


def natural_boundary_residuals(
    prob: VariationalProblem,
    w: ScalarField,
    samples: int = 11,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> NaturalBoundaryTraces:
    """The four edge conditions of a free-boundary 2-D problem at ``samples`` points per edge."""
    if not prob.free_boundary:
        raise UsageError("natural boundary conditions apply only to problems without boundary data")
    if prob.dim != 2:
        raise DimensionError("natural boundary traces are implemented for 2-D problems")
    if samples < 1:
        raise ValueError("samples must be positive")
    lag, box, alpha = prob.lagrangian, prob.box, prob.alpha
    kw = {"order": order, "cheb_degree": cheb_degree}
    (a, c), (b, d) = box.lo, box.hi
    s = np.linspace(0.0, 1.0, samples)
    ys = c + (d - c) * s
    xs = a + (b - a) * s

    def trace(pts, slot):
        p = frac_partial(w, box, 1, pts, alpha, **kw)
        q = frac_partial(w, box, 2, pts, alpha, **kw)
        fn = lag.d4 if slot == 4 else lag.d5
        return np.asarray(fn(pts[0], pts[1], w(*pts), p, q), dtype=float)

    left = trace(np.stack([np.full_like(ys, a), ys]), 4)
    right = trace(np.stack([np.full_like(ys, b), ys]), 4)
    bottom = trace(np.stack([xs, np.full_like(xs, c)]), 5)
    top = trace(np.stack([xs, np.full_like(xs, d)]), 5)
    return NaturalBoundaryTraces(left, right, bottom, top, s)


# --- integration by parts -----------------------------------------------------


def _vanishes_on_boundary(h: ScalarField, box: Box, name: str):
    err = np.max(np.abs(h(*_boundary_points(box))))
    if not err <= ADMISSIBILITY_TOL:
        raise AdmissibilityError(f"{name} must vanish on the boundary (max {err:.3g})")


def check_lemma1(
    F: ScalarField,
    G: ScalarField,
    h: ScalarField,
    box: Box,
    alpha: float,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> ResidualReport:
    """Weighted double integrals of ``G D[1]h - F D[2]h`` and ``-(D[1]G - D[2]F) h``.

    ``h`` must vanish on the boundary.  The two integrals are computed
    independently with the kernel weights ``(b-x)^(alpha-1) (d-y)^(alpha-1)``.
    """
    alpha = check_alpha(alpha)
    if box.dim != 2:
        raise DimensionError("check_lemma1 needs a 2-D box")
    _vanishes_on_boundary(h, box, "h")
    kw = {"order": order, "cheb_degree": cheb_degree}
    left = G * frac_partial_field(h, box, 1, alpha, **kw) - F * frac_partial_field(h, box, 2, alpha, **kw)
    right = (frac_partial_field(G, box, 1, alpha, **kw) - frac_partial_field(F, box, 2, alpha, **kw)) * h
    scale = alpha**2
    lhs = frac_volume_integral(left, box, alpha, order=order) / scale
    rhs = -frac_volume_integral(right, box, alpha, order=order) / scale
    return ResidualReport.from_sides(lhs, rhs, f"lemma1 alpha={alpha} box={box.lo}-{box.hi}")


def check_lemma2(
    A: ScalarField,
    B: ScalarField,
    C: ScalarField,
    eta: ScalarField,
    box: Box,
    alpha: float,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> ResidualReport:
    """Volume operator of ``A D[1]eta + B D[2]eta + C D[3]eta`` against ``-(D[1]A + D[2]B + D[3]C) eta``."""
    alpha = check_alpha(alpha)
    if box.dim != 3:
        raise DimensionError("check_lemma2 needs a 3-D box")
    _vanishes_on_boundary(eta, box, "eta")
    kw = {"order": order, "cheb_degree": cheb_degree}
    comps = (A, B, C)
    left = sum((c * frac_partial_field(eta, box, i, alpha, **kw) for i, c in enumerate(comps, 1)), ScalarField.constant(3, 0.0))
    div = sum((frac_partial_field(c, box, i, alpha, **kw) for i, c in enumerate(comps, 1)), ScalarField.constant(3, 0.0))
    lhs = frac_volume_integral(left, box, alpha, order=order)
    rhs = -frac_volume_integral(div * eta, box, alpha, order=order)
    return ResidualReport.from_sides(lhs, rhs, f"lemma2 alpha={alpha} box={box.lo}-{box.hi}")

