"""Default case suites behind the command-line subcommands.

Every runner returns a list of :class:`Row`.  A row with ``passed=None`` is
reported but not judged (identities resting on the Leibniz rule).
"""
from __future__ import annotations

from dataclasses import dataclass
import itertools
from typing import Optional, Sequence

import numpy as np

from .core1d import Function1D, Interval, check_ftc1, check_ftc2, check_leibniz
from .fields import Box, ScalarField
from .report import ResidualReport
from .string_app import StringProblem, alpha_sweep, solution_grid
from .theorems import check_gauss, check_green, check_stokes_planar
from .variational import (
    Lagrangian2D,
    Lagrangian3D,
    VariationalProblem2D,
    VariationalProblem3D,
    check_lemma1,
    check_lemma2,
    el_residual_2d,
    el_residual_3d,
    eval_functional,
    gateaux_derivative,
    natural_boundary_residuals,
)
from .veccalc import ASSERTED_IDENTITIES, IDENTITIES, VectorField3, check_identity

DEFAULT_ALPHAS = (0.25, 0.5, 0.75, 0.9)
COLUMNS = ("check_id", "alpha", "case_id", "lhs", "rhs", "abs_residual", "rel_residual", "pass")


@dataclass(frozen=True)
class Row:
    check_id: str
    alpha: float
    case_id: str
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    passed: Optional[bool]

    @classmethod
    def from_report(cls, check_id, alpha, case_id, rep: ResidualReport, tol: Optional[float]) -> Row:
        ok = None if tol is None else rep.passed(tol)
        return cls(check_id, float(alpha), case_id, rep.lhs, rep.rhs, rep.abs_residual, rep.rel_residual, ok)

    def key(self):
        return (self.check_id, self.alpha, self.case_id)

    def values(self):
        return (self.check_id, self.alpha, self.case_id, self.lhs, self.rhs, self.abs_residual, self.rel_residual, self.passed)


@dataclass(frozen=True)
class Settings:
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    order: int = 40
    cheb_degree: int = 32
    seed: int = 0
    tol: Optional[float] = None
    box: Optional[Box] = None
    suite: str = "default"

    def kw(self):
        return {"order": self.order, "cheb_degree": self.cheb_degree}


# --- 1-D ---------------------------------------------------------------------

ONE_D_FUNCTIONS = {
    "one": Function1D(lambda t: np.ones_like(np.asarray(t, dtype=float)), lambda t: np.zeros_like(np.asarray(t, dtype=float))),
    "t": Function1D(lambda t: np.asarray(t, dtype=float), lambda t: np.ones_like(np.asarray(t, dtype=float))),
    "t2": Function1D(lambda t: np.asarray(t, dtype=float) ** 2, lambda t: 2 * np.asarray(t, dtype=float)),
    "t3": Function1D(lambda t: np.asarray(t, dtype=float) ** 3, lambda t: 3 * np.asarray(t, dtype=float) ** 2),
    "sin": Function1D(np.sin, np.cos),
    "exp": Function1D(np.exp, np.exp),
}
FTC_POINT = 0.8


def run_ftc(s: Settings) -> list[Row]:
    tol = 1e-5 if s.tol is None else s.tol
    iv = Interval(0.0, 1.0)
    rows = []
    for a in s.alphas:
        for name, f in ONE_D_FUNCTIONS.items():
            rows.append(Row.from_report("ftc1", a, name, check_ftc1(f, iv, FTC_POINT, a, order=s.order), tol))
            rows.append(Row.from_report("ftc2", a, name, check_ftc2(f, iv, FTC_POINT, a, order=s.order), tol))
    return rows


def run_leibniz(s: Settings) -> list[Row]:
    tol = 1e-5 if s.tol is None else s.tol
    iv = Interval(0.0, 1.0)
    rows = []
    names = list(ONE_D_FUNCTIONS)
    for a in s.alphas:
        for i, j in itertools.combinations_with_replacement(range(len(names)), 2):
            f, g = ONE_D_FUNCTIONS[names[i]], ONE_D_FUNCTIONS[names[j]]
            rows.append(Row.from_report("leibniz", a, f"{names[i]}*{names[j]}", check_leibniz(f, g, iv, FTC_POINT, a), tol))
    return rows


# --- theorems ----------------------------------------------------------------

GREEN_BOXES = (Box.unit(2), Box((-1.0, 0.5), (2.0, 3.0)))
GAUSS_BOXES = (Box.unit(3), Box((-1.0, 0.0, 0.5), (1.0, 2.0, 1.5)))


def _monomials(dim: int, degree: int):
    return [p for p in itertools.product(range(degree + 1), repeat=dim) if sum(p) <= degree]


def _random_poly(rng, dim: int, degree: int) -> ScalarField:
    c = np.zeros((degree + 1,) * dim)
    for p in _monomials(dim, degree):
        c[p] = rng.uniform(-1.0, 1.0)
    return ScalarField.polynomial(np.round(c, 6))


def _poly_name(p) -> str:
    return "".join(str(k) for k in p)


def green_cases(s: Settings):
    """Monomial pairs of degree <= 3 plus seeded random cubic pairs."""
    if s.suite == "constants":
        return [("c1,c2", ScalarField.constant(2, 1.5), ScalarField.constant(2, -0.5))]
    mons = _monomials(2, 3)
    cases = []
    for pf, pg in itertools.product(mons, mons):
        if pf == pg or (sum(pf) + sum(pg)) % 2 == 0:
            cases.append((f"m{_poly_name(pf)},m{_poly_name(pg)}", ScalarField.monomial(pf), ScalarField.monomial(pg)))
    rng = np.random.default_rng(s.seed)
    for k in range(4):
        cases.append((f"rand{k}", _random_poly(rng, 2, 3), _random_poly(rng, 2, 3)))
    return cases


def gauss_cases(s: Settings):
    if s.suite == "constants":
        return [("const", VectorField3.constant((1.0, -2.0, 0.5)))]
    M = ScalarField.monomial
    rng = np.random.default_rng(s.seed + 1)
    return [
        ("linear", VectorField3(M((1, 0, 0)), M((0, 1, 0)), M((0, 0, 1)))),
        ("squares", VectorField3(M((2, 0, 0)), M((0, 2, 0)), M((0, 0, 2)))),
        ("mixed", VectorField3(M((1, 1, 0)), M((0, 1, 1)), M((1, 0, 1)))),
        ("rand", VectorField3(*(_random_poly(rng, 3, 2) for _ in range(3)))),
    ]


def stokes_cases(s: Settings):
    if s.suite == "constants":
        return [("const", VectorField3.constant((1.0, 2.0, 3.0)))]
    M = ScalarField.monomial
    rng = np.random.default_rng(s.seed + 2)
    return [
        ("rotation", VectorField3(M((0, 1, 0), -1.0), M((1, 0, 0)), M((0, 0, 1)))),
        ("rand", VectorField3(*(_random_poly(rng, 3, 2) for _ in range(3)))),
    ]


def run_theorems(s: Settings) -> list[Row]:
    green_tol = 1e-6 if s.tol is None else s.tol
    gauss_tol = 1e-5 if s.tol is None else s.tol
    green_boxes = GREEN_BOXES if s.box is None or s.box.dim != 2 else (Box.unit(2), s.box)
    gauss_boxes = GAUSS_BOXES if s.box is None or s.box.dim != 3 else (Box.unit(3), s.box)
    rows = []
    for a in s.alphas:
        for bi, box in enumerate(green_boxes):
            for name, f, g in green_cases(s):
                rep = check_green(f, g, box, a, **s.kw())
                rows.append(Row.from_report("green", a, f"box{bi}:{name}", rep, green_tol))
        for bi, box in enumerate(gauss_boxes):
            for name, F in gauss_cases(s):
                rows.append(Row.from_report("gauss", a, f"box{bi}:{name}", check_gauss(F, box, a, **s.kw()), gauss_tol))
        for name, F in stokes_cases(s):
            for normal in (1, 2, 3, (0.0, 0.0, -1.0)):
                tag = f"+e{normal}" if isinstance(normal, int) else "-e3"
                rep = check_stokes_planar(F, gauss_boxes[-1], a, normal, **s.kw())
                rows.append(Row.from_report("stokes", a, f"{name}:{tag}", rep, green_tol))
    return rows


# --- identities --------------------------------------------------------------


def identity_fields(s: Settings):
    M = ScalarField.monomial
    rng = np.random.default_rng(s.seed + 3)
    fields = {
        "xyz": M((1, 1, 1)),
        "x2y+z3": M((2, 1, 0)) + M((0, 0, 3)),
        "rand": _random_poly(rng, 3, 3),
    }
    vectors = {
        "yz,zx,xy": VectorField3(M((0, 1, 1)), M((1, 0, 1)), M((1, 1, 0))),
        "rand": VectorField3(*(_random_poly(rng, 3, 3) for _ in range(3))),
    }
    return fields, vectors


def run_identities(s: Settings) -> list[Row]:
    tol = 1e-5 if s.tol is None else s.tol
    box = s.box if s.box is not None and s.box.dim == 3 else Box.unit(3)
    pts = box.grid((3, 3, 3), interior=True)
    fields, vectors = identity_fields(s)
    rows = []
    for a in s.alphas:
        for which in IDENTITIES:
            judged = tol if which in ASSERTED_IDENTITIES else None
            if which in ("ii", "v"):
                cases = [(n, {"f": f}) for n, f in fields.items()]
            elif which == "iii":
                cases = [(n, {"F": F}) for n, F in vectors.items()]
            elif which == "i":
                cases = [(f"{fn}|{vn}", {"f": f, "F": F}) for (fn, f), (vn, F) in itertools.product(fields.items(), vectors.items())]
            else:
                names = list(fields)
                cases = [(f"{p}|{q}", {"f": fields[p], "g": fields[q]}) for p, q in itertools.combinations(names, 2)]
            for name, inputs in cases:
                rep = check_identity(which, box, pts, a, **inputs, **s.kw())
                rows.append(Row.from_report(f"identity_{which}", a, name, rep, judged))
    return rows


# --- variational -------------------------------------------------------------


def dirichlet_lagrangian() -> Lagrangian2D:
    return Lagrangian2D(
        lambda x, y, w, p, q: 0.5 * (p**2 + q**2),
        lambda x, y, w, p, q: 0.0 * w,
        lambda x, y, w, p, q: p,
        lambda x, y, w, p, q: q,
    )


def gateaux_lagrangian() -> Lagrangian2D:
    # non-quadratic, with explicit x dependence
    return Lagrangian2D(
        lambda x, y, w, p, q: 0.5 * (p**2 + q**2) + w**3 / 3.0 + x * w * p,
        lambda x, y, w, p, q: w**2 + x * p,
        lambda x, y, w, p, q: p + x * w,
        lambda x, y, w, p, q: q + 0.0 * w,
    )


def potential_lagrangian2() -> Lagrangian2D:
    return Lagrangian2D(lambda x, y, w, p, q: w, lambda x, y, w, p, q: 1.0 + 0.0 * w, lambda x, y, w, p, q: 0.0 * w, lambda x, y, w, p, q: 0.0 * w)


def potential_lagrangian3() -> Lagrangian3D:
    z0 = lambda x, y, z, w, p, q, r: 0.0 * w  # noqa: E731
    return Lagrangian3D(lambda x, y, z, w, p, q, r: w, lambda x, y, z, w, p, q, r: 1.0 + 0.0 * w, z0, z0, z0)


def dirichlet_lagrangian3() -> Lagrangian3D:
    return Lagrangian3D(
        lambda x, y, z, w, p, q, r: 0.5 * (p**2 + q**2 + r**2),
        lambda x, y, z, w, p, q, r: 0.0 * w,
        lambda x, y, z, w, p, q, r: p,
        lambda x, y, z, w, p, q, r: q,
        lambda x, y, z, w, p, q, r: r,
    )


def bubble2(box: Box) -> ScalarField:
    """Polynomial vanishing on the rectangle's boundary."""
    (a, c), (b, d) = box.lo, box.hi
    X = ScalarField.polynomial([[0.0], [1.0]])
    Y = ScalarField.polynomial([[0.0, 1.0]])
    return (X - a) * (b - X) * (Y - c) * (d - Y)


def bubble3(box: Box) -> ScalarField:
    out = ScalarField.constant(3, 1.0)
    for i in range(3):
        xi = ScalarField.monomial(tuple(int(j == i) for j in range(3)))
        out = out * (xi - box.lo[i]) * (box.hi[i] - xi)
    return out


def run_el(s: Settings) -> list[Row]:
    tol = 1e-4 if s.tol is None else s.tol
    rng = np.random.default_rng(s.seed + 4)
    b2, b3 = Box.unit(2), Box.unit(3)
    pts2 = b2.grid((3, 3), interior=True)
    pts3 = b3.grid((2, 2, 2), interior=True)
    M = ScalarField.monomial
    rows = []
    gl = gateaux_lagrangian()
    for a in s.alphas:
        vp = VariationalProblem2D(gl, b2, a)
        for k in range(5):
            w = _random_poly(rng, 2, 2)
            h = _random_poly(rng, 2, 2)
            eps = 1e-5
            gd = gateaux_derivative(vp, w, h, **s.kw())
            fd = (eval_functional(vp, w + h.scale(eps), **s.kw()) - eval_functional(vp, w + h.scale(-eps), **s.kw())) / (2 * eps)
            rep = ResidualReport.from_sides(gd, fd)
            rows.append(Row("gateaux_fd", float(a), f"pair{k}", gd, fd, rep.abs_residual, abs(gd - fd) / max(abs(fd), 1e-300), abs(gd - fd) <= tol * max(abs(fd), 1e-300)))
        # potential Lagrangian: the residual is 1 for every w
        w = M((2, 1))
        el = el_residual_2d(VariationalProblem2D(potential_lagrangian2(), b2, a), w, pts2, **s.kw())
        rows.append(Row.from_report("el2_potential", a, "x2y", ResidualReport.from_pointwise(el, np.ones_like(el)), tol))
        el = el_residual_3d(VariationalProblem3D(potential_lagrangian3(), b3, a), M((1, 1, 1)), pts3, **s.kw())
        rows.append(Row.from_report("el3_potential", a, "xyz", ResidualReport.from_pointwise(el, np.ones_like(el)), tol))
        # Dirichlet energy on harmonic functions; exact in the classical limit only
        harm2 = M((2, 0)) - M((0, 2))
        el = el_residual_2d(VariationalProblem2D(dirichlet_lagrangian(), b2, a), harm2, pts2, **s.kw())
        rows.append(Row.from_report("el2_dirichlet", a, "x2-y2", ResidualReport.from_pointwise(el, np.zeros_like(el)), tol if a == 1.0 else None))
        harm3 = M((2, 0, 0)) + M((0, 2, 0)) - M((0, 0, 2)).scale(2.0)
        el = el_residual_3d(VariationalProblem3D(dirichlet_lagrangian3(), b3, a), harm3, pts3, **s.kw())
        rows.append(Row.from_report("el3_dirichlet", a, "x2+y2-2z2", ResidualReport.from_pointwise(el, np.zeros_like(el)), tol if a == 1.0 else None))
        # free boundary, Lagrangian without p and q: all four traces vanish
        tr = natural_boundary_residuals(VariationalProblem2D(potential_lagrangian2(), b2, a), w, 5, **s.kw())
        rows.append(Row.from_report("natural_bc", a, "potential", ResidualReport.from_sides(tr.max_abs(), 0.0), tol))
        # integration by parts; proved through the Leibniz rule, so reported only
        h2 = bubble2(b2)
        rep = check_lemma1(M((1, 1)), M((2, 0)), h2, b2, a, **s.kw())
        rows.append(Row.from_report("lemma1", a, "F=xy,G=x2", rep, tol if a == 1.0 else None))
        h3 = bubble3(b3)
        rep = check_lemma2(M((1, 0, 0)), M((0, 1, 0)), M((0, 0, 1)), h3, b3, a, **s.kw())
        rows.append(Row.from_report("lemma2", a, "A=x,B=y,C=z", rep, tol if a == 1.0 else None))
    return rows


# --- string ------------------------------------------------------------------


def string_template(shape: str = "sine", sigma: float = 1.0, tau: float = 1.0) -> StringProblem:
    if shape == "sine":
        init = Function1D(lambda x: np.sin(np.pi * np.asarray(x, dtype=float)), lambda x: np.pi * np.cos(np.pi * np.asarray(x, dtype=float)))
    elif shape == "zero":
        init = Function1D(lambda x: 0.0 * np.asarray(x, dtype=float), lambda x: 0.0 * np.asarray(x, dtype=float))
    else:
        raise ValueError(f"unknown shape {shape!r}")
    zero = Function1D(lambda x: 0.0 * np.asarray(x, dtype=float), lambda x: 0.0 * np.asarray(x, dtype=float))
    # w*(x, t) = sin(pi x) cos(pi t) fixes the data on [0, 1] x [0, 1/2]
    return StringProblem(1.0, 0.0, 0.5, sigma, tau, 1.0, init, zero)


def run_string(s: Settings, modes: int = 4, shape: str = "sine", grid_points: int = 21):
    """Sweep rows plus the solution grid of the last alpha and the sweep table."""
    tol = 1e-8 if s.tol is None else s.tol
    template = string_template(shape)
    ansatz = template.ansatz(modes, modes)
    sweep = alpha_sweep(template, s.alphas, ansatz, tol, el_points=5, **s.kw())
    rows = []
    grids = {}
    for r in sweep:
        rows.append(Row("string_stationarity", r.alpha, f"M={modes * modes}", r.grad_norm, 0.0, r.grad_norm, r.grad_norm, r.converged))
        rows.append(Row("string_el", r.alpha, f"M={modes * modes}", r.max_el_residual, 0.0, r.max_el_residual, r.max_el_residual / max(1.0, r.max_el_residual), None))
        if r.coeffs or not len(ansatz):
            grids[r.alpha] = solution_grid(ansatz, r.coeffs if r.coeffs else (), template.box, grid_points)
    return rows, sweep, grids
