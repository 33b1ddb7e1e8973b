"""Fractional gradient, divergence, curl and flux on a 3-D box.

All operators take their lower terminals from the box's lower corner, so the
same field gives different values on boxes with different lower corners.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core1d import check_alpha
from .errors import DimensionError
from .fields import Box, ScalarField
from .ndops import frac_partial, frac_partial_field, frac_surface_integral_3d
from .quadrature import DEFAULT_CHEB_DEGREE, DEFAULT_ORDER
from .report import ResidualReport


class Vec3(NamedTuple):
    x: float | np.ndarray
    y: float | np.ndarray
    z: float | np.ndarray


@dataclass(frozen=True)
class VectorField3:
    fx: ScalarField
    fy: ScalarField
    fz: ScalarField

    def __post_init__(self):
        if not (self.fx.dim == self.fy.dim == self.fz.dim == 3):
            raise DimensionError("vector field components must be 3-D scalar fields")

    @property
    def components(self) -> tuple[ScalarField, ScalarField, ScalarField]:
        return (self.fx, self.fy, self.fz)

    def __call__(self, *x) -> Vec3:
        return Vec3(self.fx(*x), self.fy(*x), self.fz(*x))

    def scaled_by(self, f: ScalarField) -> VectorField3:
        return VectorField3(f * self.fx, f * self.fy, f * self.fz)

    @classmethod
    def constant(cls, c) -> VectorField3:
        return cls(*(ScalarField.constant(3, v) for v in c))


def _opts(order, cheb_degree):
    return {"order": order, "cheb_degree": cheb_degree}


def _check3(box: Box):
    if box.dim != 3:
        raise DimensionError("vector calculus operators need a 3-D box")


def frac_grad(f: ScalarField, box: Box, point, alpha: float, *, order=DEFAULT_ORDER, cheb_degree=DEFAULT_CHEB_DEGREE) -> Vec3:
    _check3(box)
    kw = _opts(order, cheb_degree)
    return Vec3(*(frac_partial(f, box, i, point, alpha, **kw) for i in (1, 2, 3)))


def frac_div(F: VectorField3, box: Box, point, alpha: float, *, order=DEFAULT_ORDER, cheb_degree=DEFAULT_CHEB_DEGREE):
    _check3(box)
    kw = _opts(order, cheb_degree)
    return sum(frac_partial(c, box, i, point, alpha, **kw) for i, c in zip((1, 2, 3), F.components))


def frac_curl(F: VectorField3, box: Box, point, alpha: float, *, order=DEFAULT_ORDER, cheb_degree=DEFAULT_CHEB_DEGREE) -> Vec3:
    _check3(box)
    kw = _opts(order, cheb_degree)

    def d(i, comp):
        return frac_partial(comp, box, i, point, alpha, **kw)

    return Vec3(
        d(2, F.fz) - d(3, F.fy),
        d(3, F.fx) - d(1, F.fz),
        d(1, F.fy) - d(2, F.fx),
    )


# field-valued versions, for composing operators


def grad_field(f: ScalarField, box: Box, alpha: float, **kw) -> VectorField3:
    _check3(box)
    return VectorField3(*(frac_partial_field(f, box, i, alpha, **kw) for i in (1, 2, 3)))


def div_field(F: VectorField3, box: Box, alpha: float, **kw) -> ScalarField:
    _check3(box)
    parts = [frac_partial_field(c, box, i, alpha, **kw) for i, c in zip((1, 2, 3), F.components)]
    return parts[0] + parts[1] + parts[2]


def curl_field(F: VectorField3, box: Box, alpha: float, **kw) -> VectorField3:
    _check3(box)

    def d(i, comp):
        return frac_partial_field(comp, box, i, alpha, **kw)

    return VectorField3(d(2, F.fz) - d(3, F.fy), d(3, F.fx) - d(1, F.fz), d(1, F.fy) - d(2, F.fx))


def frac_flux(F: VectorField3, box: Box, alpha: float, *, order=DEFAULT_ORDER) -> float:
    """Pairing of ``F`` with the three face-difference surface operators."""
    _check3(box)
    return (
        frac_surface_integral_3d(F.fx, box, (2, 3), alpha, order=order)
        + frac_surface_integral_3d(F.fy, box, (1, 3), alpha, order=order)
        + frac_surface_integral_3d(F.fz, box, (1, 2), alpha, order=order)
    )


# --- identities ---------------------------------------------------------------

IDENTITIES = ("i", "ii", "iii", "iv", "v")
# (i) and (iv) rest on the Leibniz rule; their residuals are reported only
ASSERTED_IDENTITIES = ("ii", "iii", "v")


def check_identity(
    which: str,
    box: Box,
    points,
    alpha: float,
    *,
    f: ScalarField | None = None,
    g: ScalarField | None = None,
    F: VectorField3 | None = None,
    order: int = DEFAULT_ORDER,
    cheb_degree: int = DEFAULT_CHEB_DEGREE,
) -> ResidualReport:
    """Evaluate both sides of a vector identity at ``points`` (shape ``(3, ...)``).

    ========  ==========================================  ===========
    which     identity                                    inputs
    ========  ==========================================  ===========
    ``i``     Div(f F) = f Div F + F . Grad f              f, F
    ``ii``    Curl(Grad f) = 0                            f
    ``iii``   Div(Curl F) = 0                             F
    ``iv``    Grad(f g) = g Grad f + f Grad g             f, g
    ``v``     Div(Grad f) = sum_i D[i] D[i] f             f
    ========  ==========================================  ===========

    The report carries the worst point; vector identities are compared
    componentwise.
    """
    alpha = check_alpha(alpha)
    _check3(box)
    pts = box.check_point(points)
    kw = _opts(order, cheb_degree)
    if which not in IDENTITIES:
        raise ValueError(f"unknown identity {which!r}; expected one of {IDENTITIES}")

    def need(**named):
        for name, value in named.items():
            if value is None:
                raise ValueError(f"identity ({which}) needs input {name}")

    if which == "i":
        need(f=f, F=F)
        lhs = frac_div(F.scaled_by(f), box, pts, alpha, **kw)
        grad_f = frac_grad(f, box, pts, alpha, **kw)
        Fv = F(*pts)
        rhs = f(*pts) * frac_div(F, box, pts, alpha, **kw) + sum(a * b for a, b in zip(Fv, grad_f))
    elif which == "ii":
        need(f=f)
        lhs = np.stack(frac_curl(grad_field(f, box, alpha, **kw), box, pts, alpha, **kw))
        rhs = np.zeros_like(lhs)
    elif which == "iii":
        need(F=F)
        lhs = frac_div(curl_field(F, box, alpha, **kw), box, pts, alpha, **kw)
        rhs = np.zeros_like(lhs)
    elif which == "iv":
        need(f=f, g=g)
        lhs = np.stack(frac_grad(f * g, box, pts, alpha, **kw))
        gf = np.stack(frac_grad(f, box, pts, alpha, **kw))
        gg = np.stack(frac_grad(g, box, pts, alpha, **kw))
        rhs = g(*pts) * gf + f(*pts) * gg
    else:
        need(f=f)
        lhs = frac_div(grad_field(f, box, alpha, **kw), box, pts, alpha, **kw)
        rhs = sum(
            frac_partial(frac_partial_field(f, box, i, alpha, **kw), box, i, pts, alpha, **kw) for i in (1, 2, 3)
        )
    return ResidualReport.from_pointwise(lhs, rhs, f"identity ({which}) alpha={alpha} box={box.lo}-{box.hi}")
