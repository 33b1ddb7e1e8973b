"""Green, Gauss and planar Stokes theorems for the Jumarie calculus.

Each check computes the two sides independently: the boundary side never
touches a derivative, the volume side integrates fractional partials that
are themselves computed numerically.
"""
from __future__ import annotations

import numpy as np

from .core1d import check_alpha, gamma_factorial
from .errors import DimensionError, UnsupportedSurfaceError
from .fields import Box, ScalarField, restrict
from .ndops import frac_line_integral_2d, frac_partial_field, frac_volume_integral
from .quadrature import DEFAULT_CHEB_DEGREE, DEFAULT_ORDER
from .report import ResidualReport
from .veccalc import VectorField3, div_field, frac_flux


def check_green(
    f: ScalarField,
    g: ScalarField,
    box: Box,
    alpha: float,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> ResidualReport:
    """Line operator of ``(f, g)`` against ``1/alpha!`` times the volume operator of ``D[1]g - D[2]f``."""
    alpha = check_alpha(alpha)
    if box.dim != 2 or f.dim != 2 or g.dim != 2:
        raise DimensionError("Green's theorem needs a 2-D box and 2-D fields")
    lhs = frac_line_integral_2d(f, box, 1, alpha, order=order) + frac_line_integral_2d(g, box, 2, alpha, order=order)
    kw = {"order": order, "cheb_degree": cheb_degree}
    integrand = frac_partial_field(g, box, 1, alpha, **kw) - frac_partial_field(f, box, 2, alpha, **kw)
    rhs = frac_volume_integral(integrand, box, alpha, order=order) / gamma_factorial(alpha)
    return ResidualReport.from_sides(lhs, rhs, f"green alpha={alpha} box={box.lo}-{box.hi} order={order}")


def check_gauss(
    F: VectorField3,
    box: Box,
    alpha: float,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> ResidualReport:
    """Flux of ``F`` against ``1/alpha!`` times the volume operator of its divergence."""
    alpha = check_alpha(alpha)
    if box.dim != 3:
        raise DimensionError("Gauss's theorem needs a 3-D box")
    lhs = frac_flux(F, box, alpha, order=order)
    div = div_field(F, box, alpha, order=order, cheb_degree=cheb_degree)
    rhs = frac_volume_integral(div, box, alpha, order=order) / gamma_factorial(alpha)
    return ResidualReport.from_sides(lhs, rhs, f"gauss alpha={alpha} box={box.lo}-{box.hi} order={order}")


# in-plane axes (p, r) for a patch with normal +e_k, so that (e_p, e_r, e_k) is right-handed
_IN_PLANE = {1: (2, 3), 2: (3, 1), 3: (1, 2)}


def _normal_axis(normal) -> tuple[int, int]:
    """Return ``(axis, sign)`` for a coordinate normal given as an axis number or a vector."""
    if isinstance(normal, (int, np.integer)):
        if normal not in (1, 2, 3):
            raise UnsupportedSurfaceError(f"normal axis must be 1, 2 or 3, got {normal}")
        return int(normal), 1
    n = np.asarray(normal, dtype=float)
    if n.shape != (3,):
        raise UnsupportedSurfaceError("normal must be an axis number or a 3-vector")
    nz = np.flatnonzero(np.abs(n) > 1e-12)
    if len(nz) != 1 or abs(abs(n[nz[0]]) - 1.0) > 1e-12:
        raise UnsupportedSurfaceError("only axis-aligned planar patches are supported")
    return int(nz[0]) + 1, int(np.sign(n[nz[0]]))


def check_stokes_planar(
    F: VectorField3,
    box: Box,
    alpha: float,
    normal=3,
    level: float | None = None,
    *,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> ResidualReport:
    """Stokes formula on the face of ``box`` orthogonal to ``normal``.

    The patch is the rectangle spanned by the two in-plane axes of ``box`` at
    ``x_k = level`` (default: the lower face).  On a flat patch the formula is
    Green's theorem for the in-plane components ``(F_p, F_r)``, taken in the
    order that matches the orientation of ``normal``.
    """
    alpha = check_alpha(alpha)
    if box.dim != 3:
        raise DimensionError("the Stokes check needs a 3-D box")
    k, sign = _normal_axis(normal)
    lvl = box.lo[k - 1] if level is None else float(level)
    if not box.lo[k - 1] <= lvl <= box.hi[k - 1]:
        raise UnsupportedSurfaceError(f"patch level {lvl} lies outside the box on axis {k}")
    p, r = _IN_PLANE[k]
    if sign < 0:
        p, r = r, p
    comps = F.components
    f2 = restrict(comps[p - 1], {k: lvl}, (p, r))
    g2 = restrict(comps[r - 1], {k: lvl}, (p, r))
    rect = Box((box.lo[p - 1], box.lo[r - 1]), (box.hi[p - 1], box.hi[r - 1]))
    rep = check_green(f2, g2, rect, alpha, order=order, cheb_degree=cheb_degree)
    return ResidualReport.from_sides(
        rep.lhs, rep.rhs, f"stokes normal={'+' if sign > 0 else '-'}e{k} level={lvl} alpha={alpha} order={order}"
    )
