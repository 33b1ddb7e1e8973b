"""Boxes and scalar fields on them.

Fields are vectorised: ``f(x1, ..., xn)`` accepts broadcastable arrays.
Axes are numbered from 1, matching the coordinate labels x_1..x_n.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence
import math

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DimensionError, DomainError


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``prod [lo_i, hi_i]`` in 1, 2 or 3 dimensions."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi) or not 1 <= len(lo) <= 3:
            raise DimensionError(f"box needs matching lo/hi of length 1..3, got {lo}, {hi}")
        for a, b in zip(lo, hi):
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                raise DomainError(f"box requires lo < hi on every axis, got {lo}, {hi}")

    @property
    def dim(self) -> int:
        return len(self.lo)

    @classmethod
    def unit(cls, dim: int) -> Box:
        return cls((0.0,) * dim, (1.0,) * dim)

    def check_axis(self, axis: int) -> int:
        if int(axis) != axis or not 1 <= axis <= self.dim:
            raise DimensionError(f"axis must be in 1..{self.dim}, got {axis}")
        return int(axis)

    def check_point(self, point) -> np.ndarray:
        """Return ``point`` as an array of shape ``(dim, ...)`` after a containment check."""
        p = np.asarray(point, dtype=float)
        if p.shape[:1] != (self.dim,):
            raise DimensionError(f"point must have leading dimension {self.dim}, got shape {p.shape}")
        for i in range(self.dim):
            tol = 1e-12 * max(1.0, abs(self.lo[i]), abs(self.hi[i]))
            if np.any(p[i] < self.lo[i] - tol) or np.any(p[i] > self.hi[i] + tol):
                raise DomainError(f"point outside box on axis {i + 1}")
        return p

    def volume(self) -> float:
        return float(np.prod(np.subtract(self.hi, self.lo)))

    def grid(self, counts: Sequence[int], interior: bool = False) -> np.ndarray:
        """Tensor grid of shape ``(dim, *counts)``; ``interior`` drops the faces."""
        axes = []
        for a, b, n in zip(self.lo, self.hi, counts):
            if interior:
                axes.append(np.linspace(a, b, n + 2)[1:-1])
            else:
                axes.append(np.linspace(a, b, n))
        return np.stack(np.meshgrid(*axes, indexing="ij"))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A continuous function of ``dim`` variables.

    ``partials`` holds the classical partial derivatives when known.
    ``rough`` lists the axes along which the field may behave like
    ``(x_i - a_i)^(k (1 - alpha))`` at the lower face; fractional
    derivatives of smooth fields are rough along their own axis, and the
    quadrature and surrogates grade their nodes on those axes.
    """

    dim: int
    fn: Callable[..., np.ndarray]
    partials: Optional[tuple[Callable[..., np.ndarray], ...]] = None
    rough: frozenset = field(default_factory=frozenset)
    label: str = ""

    def __post_init__(self):
        if self.partials is not None and len(self.partials) != self.dim:
            raise DimensionError("need one partial derivative per axis")
        object.__setattr__(self, "rough", frozenset(self.rough))

    def __call__(self, *x):
        if len(x) != self.dim:
            raise DimensionError(f"field of dimension {self.dim} called with {len(x)} coordinates")
        x = [np.asarray(v, dtype=float) for v in x]
        shape = np.broadcast_shapes(*(v.shape for v in x))
        return np.broadcast_to(np.asarray(self.fn(*x), dtype=float), shape)

    def at(self, point) -> np.ndarray:
        """Evaluate at points stacked along the first axis."""
        p = np.asarray(point, dtype=float)
        return self(*p)

    def partial(self, axis: int) -> Optional[Callable[..., np.ndarray]]:
        if self.partials is None:
            return None
        d = self.partials[axis - 1]
        return lambda *x: np.broadcast_to(
            np.asarray(d(*x), dtype=float), np.broadcast_shapes(*(np.shape(v) for v in x))
        )

    # -- algebra (product rule carried through the partials) --

    def __add__(self, other):
        other = _lift(other, self.dim)
        return ScalarField(
            self.dim,
            lambda *x: self(*x) + other(*x),
            _combine(self, other, lambda i: lambda *x: self.partial(i)(*x) + other.partial(i)(*x)),
            self.rough | other.rough,
        )

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-_lift(other, self.dim))

    def __rsub__(self, other):
        return _lift(other, self.dim) - self

    def __mul__(self, other):
        if np.isscalar(other):
            return self.scale(float(other))
        other = _lift(other, self.dim)
        return ScalarField(
            self.dim,
            lambda *x: self(*x) * other(*x),
            _combine(
                self,
                other,
                lambda i: lambda *x: self.partial(i)(*x) * other(*x) + self(*x) * other.partial(i)(*x),
            ),
            self.rough | other.rough,
        )

    __rmul__ = __mul__

    def scale(self, lam: float) -> ScalarField:
        parts = None
        if self.partials is not None:
            parts = tuple((lambda d: (lambda *x: lam * d(*x)))(self.partial(i)) for i in range(1, self.dim + 1))
        return ScalarField(self.dim, lambda *x: lam * self(*x), parts, self.rough, self.label)

    def without_partials(self) -> ScalarField:
        return ScalarField(self.dim, self.fn, None, self.rough, self.label)

    # -- constructors --

    @classmethod
    def constant(cls, dim: int, c: float) -> ScalarField:
        c = float(c)
        zero = lambda *x: 0.0  # noqa: E731
        return cls(dim, lambda *x: c, (zero,) * dim, label=f"{c!r}")

    @classmethod
    def polynomial(cls, coeffs, label: str = "") -> ScalarField:
        """Polynomial ``sum c[i,j,...] x^i y^j ...`` with exact partials."""
        c = np.array(coeffs, dtype=float)
        dim = c.ndim
        if not 1 <= dim <= 3:
            raise DimensionError("polynomial coefficients must be 1-, 2- or 3-dimensional")
        ev = {1: P.polyval, 2: P.polyval2d, 3: P.polyval3d}[dim]

        def make(cc):
            if dim == 1:
                return lambda x: ev(x, cc)
            return lambda *x: ev(*np.broadcast_arrays(*x), cc)

        parts = tuple(make(P.polyder(c, axis=i)) if c.shape[i] > 1 else (lambda *x: 0.0) for i in range(dim))
        return cls(dim, make(c), parts, label=label)

    @classmethod
    def monomial(cls, powers: Sequence[int], coef: float = 1.0) -> ScalarField:
        c = np.zeros([p + 1 for p in powers])
        c[tuple(powers)] = coef
        name = "*".join(f"x{i + 1}^{p}" for i, p in enumerate(powers) if p) or "1"
        return cls.polynomial(c, label=name if coef == 1.0 else f"{coef}*{name}")


def _lift(other, dim) -> ScalarField:
    if isinstance(other, ScalarField):
        if other.dim != dim:
            raise DimensionError("cannot combine fields of different dimension")
        return other
    return ScalarField.constant(dim, float(other))


def _combine(f: ScalarField, g: ScalarField, rule) -> Optional[tuple]:
    if f.partials is None or g.partials is None:
        return None
    return tuple(rule(i) for i in range(1, f.dim + 1))


def restrict(f: ScalarField, fixed: dict[int, float], order: Sequence[int]) -> ScalarField:
    """Field of the free coordinates ``order`` with the axes in ``fixed`` frozen.

    Axis numbers are those of ``f``; the result's axis ``k`` is ``order[k-1]``.
    """
    n = f.dim

    def embed(*y):
        coords = [None] * n
        for ax, val in fixed.items():
            coords[ax - 1] = np.asarray(val, dtype=float)
        for k, ax in enumerate(order):
            coords[ax - 1] = np.asarray(y[k], dtype=float)
        return coords

    parts = None
    if f.partials is not None:
        parts = tuple((lambda d: (lambda *y: d(*embed(*y))))(f.partial(ax)) for ax in order)
    rough = frozenset(k + 1 for k, ax in enumerate(order) if ax in f.rough)
    return ScalarField(len(order), lambda *y: f(*embed(*y)), parts, rough, f.label)
