r"""Fractional partial derivatives and integrals over boxes.

The integral operator along axis ``i`` is

.. math::

    {}_{a_i}I^\alpha_{x_i}[i] f = \alpha \int_{a_i}^{x_i} (x_i - t)^{\alpha-1}
        f(\ldots, t, \ldots)\,dt,

and products of these over a subset of axes are evaluated with tensor
Jacobi rules.  The partial derivative applies the one-dimensional Jumarie
derivative to a coordinate slice with the other coordinates frozen.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core1d import check_alpha, slice_derivative, slice_integral
from .errors import DimensionError, DomainError
from .fields import Box, ScalarField
from .quadrature import DEFAULT_CHEB_DEGREE, DEFAULT_ORDER, build_jacobi_rule, grading_exponent


@dataclass(frozen=True)
class AxisSubset:
    """Ordered nonempty set of axes, numbered from 1."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx or any(b <= a for a, b in zip(idx, idx[1:])) or idx[0] < 1:
            raise DimensionError(f"axis subset must be nonempty and strictly increasing, got {idx}")

    def check(self, box: Box) -> AxisSubset:
        if self.indices[-1] > box.dim:
            raise DimensionError(f"axis subset {self.indices} exceeds box dimension {box.dim}")
        return self


def _slice_fn(f: ScalarField, axis: int, point: np.ndarray):
    """``t -> f(point with coordinate axis replaced by t)``; ``t`` has one extra trailing axis."""

    def g(t, _fn=f):
        coords = [point[j][..., None] for j in range(f.dim)]
        coords[axis - 1] = t
        return _fn(*coords)

    return g


def frac_partial(
    f: ScalarField,
    box: Box,
    axis: int,
    point,
    alpha: float,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
    method: str = "auto",
    check: bool = True,
):
    """Fractional partial derivative along ``axis`` with lower terminal ``box.lo[axis-1]``.

    ``point`` has shape ``(dim,)`` or ``(dim, ...)`` for many points at once.
    ``method``: ``"canonical"`` needs the classical partial, ``"surrogate"``
    samples the slice, ``"auto"`` picks canonical when possible.
    """
    alpha = check_alpha(alpha)
    if f.dim != box.dim:
        raise DimensionError(f"field dimension {f.dim} does not match box dimension {box.dim}")
    axis = box.check_axis(axis)
    p = box.check_point(point) if check else np.asarray(point, dtype=float)
    rough = axis in f.rough
    dpart = f.partial(axis)
    if method == "auto":
        method = "canonical" if (dpart is not None and not rough) else "surrogate"
    if method == "canonical":
        if dpart is None:
            raise ValueError("canonical route needs the classical partial derivative")
        dg = _slice_fn(ScalarField(f.dim, dpart), axis, p)
    elif method == "surrogate":
        dg = None
    else:
        raise ValueError(f"unknown method {method!r}")
    grading = grading_exponent(alpha) if rough else 1
    out = slice_derivative(
        _slice_fn(f, axis, p),
        box.lo[axis - 1],
        p[axis - 1],
        alpha,
        dg=dg,
        order=order,
        cheb_degree=cheb_degree,
        grading=grading,
    )
    return float(out) if out.ndim == 0 else out


def frac_partial_field(
    f: ScalarField,
    box: Box,
    axis: int,
    alpha: float,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> ScalarField:
    """The field ``x -> D^alpha[axis] f(x)``, usable as input to further operators."""
    alpha = check_alpha(alpha)
    axis = box.check_axis(axis)

    def fn(*x):
        pts = np.stack(np.broadcast_arrays(*x))
        return frac_partial(f, box, axis, pts, alpha, order=order, cheb_degree=cheb_degree, check=False)

    rough = f.rough | ({axis} if alpha < 1.0 else set())
    return ScalarField(box.dim, fn, None, rough, f"D{axis}({f.label})")


# --- integrals ---------------------------------------------------------------


def _tensor_integral(
    f: ScalarField,
    point: np.ndarray,
    los: Sequence[float],
    axes: Sequence[int],
    alpha: float,
    order: int,
    contract_order: Optional[Sequence[int]] = None,
) -> float:
    """alpha^s times the iterated kernel integral of ``f`` over ``axes`` up to ``point``."""
    n = f.dim
    grids = []
    weights = []
    scale = 1.0
    for ax, lo in zip(axes, los):
        rule = build_jacobi_rule(alpha, order, grading_exponent(alpha) if ax in f.rough else 1)
        span = point[ax - 1] - lo
        if span <= 0.0:
            return 0.0
        grids.append(lo + span * rule.nodes)
        weights.append(rule.weights)
        scale *= alpha * span**alpha
    mesh = np.meshgrid(*grids, indexing="ij")
    coords = []
    for j in range(n):
        if j + 1 in axes:
            coords.append(mesh[axes.index(j + 1)])
        else:
            coords.append(np.full(mesh[0].shape, point[j]))
    vals = np.asarray(f(*coords), dtype=float)
    order_idx = list(range(len(axes))) if contract_order is None else [axes.index(a) for a in contract_order]
    # contract one axis at a time, tracking where the remaining axes sit
    remaining = list(range(len(axes)))
    for idx in order_idx:
        pos = remaining.index(idx)
        vals = np.tensordot(vals, weights[idx], axes=([pos], [0]))
        remaining.pop(pos)
    return float(scale * vals)


def frac_multi_integral(
    f: ScalarField,
    box: Box,
    subset: AxisSubset | Sequence[int],
    point,
    alpha: float,
    *,
    order: int = DEFAULT_ORDER,
    contract_order: Optional[Sequence[int]] = None,
) -> float:
    """Iterated integral operator over the axes of ``subset``.

    ``point`` carries the upper limits for axes in the subset and the frozen
    coordinates for the others.
    """
    alpha = check_alpha(alpha)
    if not isinstance(subset, AxisSubset):
        subset = AxisSubset(tuple(subset))
    subset.check(box)
    p = box.check_point(point)
    if p.ndim != 1:
        raise DimensionError("frac_multi_integral takes a single point")
    axes = list(subset.indices)
    if len(axes) == 1:
        ax = axes[0]
        rule = build_jacobi_rule(alpha, order, grading_exponent(alpha) if ax in f.rough else 1)
        return float(slice_integral(_slice_fn(f, ax, p), box.lo[ax - 1], p[ax - 1], alpha, rule))
    return _tensor_integral(f, p, [box.lo[a - 1] for a in axes], axes, alpha, order, contract_order)


def frac_volume_integral(f: ScalarField, box: Box, alpha: float, *, order: int = DEFAULT_ORDER, contract_order=None) -> float:
    """Integral operator over the whole box (upper limits at ``box.hi``)."""
    return frac_multi_integral(
        f, box, tuple(range(1, box.dim + 1)), np.array(box.hi), alpha, order=order, contract_order=contract_order
    )


def frac_line_integral_2d(f: ScalarField, box: Box, part: Optional[int], alpha: float, *, order: int = DEFAULT_ORDER) -> float:
    """Boundary operator of a rectangle ``[a,b] x [c,d]``.

    part 1: ``alpha int_a^b [f(t,c) - f(t,d)] (b-t)^(alpha-1) dt``;
    part 2: ``alpha int_c^d [f(b,t) - f(a,t)] (d-t)^(alpha-1) dt``;
    ``None`` sums both.
    """
    alpha = check_alpha(alpha)
    if box.dim != 2 or f.dim != 2:
        raise DimensionError("line integral needs a 2-D box and field")
    if part is None:
        return frac_line_integral_2d(f, box, 1, alpha, order=order) + frac_line_integral_2d(f, box, 2, alpha, order=order)
    (a, c), (b, d) = box.lo, box.hi
    if part == 1:
        rule = build_jacobi_rule(alpha, order, grading_exponent(alpha) if 1 in f.rough else 1)
        return float(slice_integral(lambda t: f(t, c) - f(t, d), a, b, alpha, rule))
    if part == 2:
        rule = build_jacobi_rule(alpha, order, grading_exponent(alpha) if 2 in f.rough else 1)
        return float(slice_integral(lambda t: f(b, t) - f(a, t), c, d, alpha, rule))
    raise ValueError(f"part must be 1, 2 or None, got {part!r}")


_FACE_AXIS = {(1, 2): 3, (1, 3): 2, (2, 3): 1}


def frac_surface_integral_3d(f: ScalarField, box: Box, pair: tuple[int, int], alpha: float, *, order: int = DEFAULT_ORDER) -> float:
    """Face-difference operator of a parallelepiped.

    For ``pair = (i, j)`` with ``k`` the remaining axis, applies the integral
    operators along ``i`` and ``j`` (upper limits ``hi``) to
    ``f|_{x_k = hi_k} - f|_{x_k = lo_k}``.
    """
    alpha = check_alpha(alpha)
    if box.dim != 3 or f.dim != 3:
        raise DimensionError("surface integral needs a 3-D box and field")
    pair = tuple(sorted(int(v) for v in pair))
    if pair not in _FACE_AXIS:
        raise ValueError(f"pair must be one of (1,2), (1,3), (2,3), got {pair}")
    k = _FACE_AXIS[pair]

    def diff(*x):
        hi = list(x)
        lo = list(x)
        hi[k - 1] = np.full(np.shape(x[k - 1]), box.hi[k - 1])
        lo[k - 1] = np.full(np.shape(x[k - 1]), box.lo[k - 1])
        return f(*hi) - f(*lo)

    g = ScalarField(3, diff, None, f.rough - {k})
    p = np.array(box.hi)
    return _tensor_integral(g, p, [box.lo[a - 1] for a in pair], list(pair), alpha, order)
