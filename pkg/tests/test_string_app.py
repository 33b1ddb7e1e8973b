from __future__ import annotations

import numpy as np
import pytest
from scipy.integrate import dblquad

from fracvar import Function1D, ScalarField, StringProblem, alpha_sweep, el_residual_2d, string_action, string_eom_residual
from fracvar.errors import DomainError, UsageError
from fracvar.ritz import RitzObjective
from fracvar.string_app import interior_grid, solution_grid
from fracvar.suites import string_template

PI = np.pi


def sine_shape(amp=1.0, k=1, L=1.0):
    return Function1D(lambda x: amp * np.sin(k * PI * np.asarray(x, dtype=float) / L), lambda x: amp * k * PI / L * np.cos(k * PI * np.asarray(x, dtype=float) / L))


def standing_wave(L, omega, amp=1.0):
    # amp sin(pi x / L) cos(omega t), with exact partials
    return ScalarField(
        2,
        lambda x, t: amp * np.sin(PI * x / L) * np.cos(omega * t),
        (
            lambda x, t: amp * PI / L * np.cos(PI * x / L) * np.cos(omega * t),
            lambda x, t: -amp * omega * np.sin(PI * x / L) * np.sin(omega * t),
        ),
    )


def wave_problem(alpha=1.0, amp=1.0, L=2.0, t1=0.1, t2=0.9, sigma=1.5, tau=0.6):
    omega = PI / L * np.sqrt(tau / sigma)
    prob = StringProblem(L, t1, t2, sigma, tau, alpha, sine_shape(amp * np.cos(omega * t1), 1, L), sine_shape(amp * np.cos(omega * t2), 1, L))
    return prob, standing_wave(L, omega, amp), omega


def test_zero_string_has_zero_action():
    prob = string_template("zero")
    assert string_action(prob, ScalarField.constant(2, 0.0)) == 0.0


def test_classical_action_matches_plain_quadrature():
    prob, w, _ = wave_problem()
    wx, wt = w.partials
    dens = lambda t, x: 0.5 * (prob.sigma * wt(x, t) ** 2 - prob.tau * wx(x, t) ** 2)  # noqa: E731
    oracle, _ = dblquad(dens, 0.0, prob.length, prob.t1, prob.t2, epsabs=1e-13, epsrel=1e-13)
    assert string_action(prob, w) == pytest.approx(oracle, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("alpha", [0.6, 0.9, 1.0])
def test_action_is_quadratic(alpha):
    p1, w1, _ = wave_problem(alpha, 1.0)
    p2, w2, _ = wave_problem(alpha, 2.0)
    assert string_action(p2, w2) == pytest.approx(4 * string_action(p1, w1), rel=1e-12)


def test_eom_zero_field():
    prob = string_template("zero").with_alpha(0.8)
    assert string_eom_residual(prob, ScalarField.constant(2, 0.0), (0.5, 0.25)) == 0.0


def test_eom_classical_standing_wave():
    prob, w, _ = wave_problem()
    pts = interior_grid(prob.box, 5)
    assert np.max(np.abs(string_eom_residual(prob, w, pts))) < 1e-6


@pytest.mark.parametrize("alpha", [0.5, 0.9, 1.0])
def test_eom_equals_el_residual(alpha):
    prob, w, _ = wave_problem(alpha)
    rng = np.random.default_rng(5)
    box = prob.box
    pts = np.stack([rng.uniform(lo, hi, 50) for lo, hi in zip(box.lo, box.hi)])
    eom = string_eom_residual(prob, w, pts)
    el = el_residual_2d(prob.variational_problem(), w, pts)
    assert np.max(np.abs(eom - el)) <= 1e-6 * max(1.0, np.max(np.abs(el)))


def test_variable_density_uses_general_path():
    prob = StringProblem(1.0, 0.0, 0.5, lambda x: 1.0 + 0.5 * x, 1.0, 0.9, sine_shape(), sine_shape(0.0))
    w = prob.base()
    with pytest.raises(UsageError):
        string_eom_residual(prob, w, (0.5, 0.25))
    assert np.isfinite(el_residual_2d(prob.variational_problem(), w, (0.5, 0.25)))


@pytest.mark.parametrize(
    "kwargs",
    [
        {"length": 0.0},
        {"t1": 1.0, "t2": 0.5},
        {"tau": -1.0},
        {"sigma": 0.0},
        {"alpha": 1.5},
        {"initial_shape": Function1D(lambda x: 1.0 + 0 * np.asarray(x))},
    ],
)
def test_problem_validation(kwargs):
    base = dict(length=1.0, t1=0.0, t2=0.5)
    base.update(kwargs)
    with pytest.raises((DomainError, ValueError)):
        StringProblem(**base)


def classical_ritz(prob: StringProblem, kx: int, kt: int):
    """Direct Gauss-Legendre assembly of the alpha = 1 Ritz system for sine modes."""
    L, t1, t2 = prob.length, prob.t1, prob.t2
    T = t2 - t1
    xg, xw = np.polynomial.legendre.leggauss(60)
    x = 0.5 * L * (xg + 1)
    t = t1 + 0.5 * T * (xg + 1)
    X, Tt = np.meshgrid(x, t, indexing="ij")
    W = np.outer(0.5 * L * xw, 0.5 * T * xw)
    f0, f1 = prob.initial_shape, prob.final_shape
    r = (Tt - t1) / T
    # linear-in-time blend already matches the data on all four edges
    bx = (1 - r) * f0.deriv(X) + r * f1.deriv(X)
    bt = (f1(X) - f0(X)) / T
    ks = [(k, l) for k in range(1, kx + 1) for l in range(1, kt + 1)]
    px = [k * PI / L * np.cos(k * PI * X / L) * np.sin(l * PI * (Tt - t1) / T) for k, l in ks]
    pt = [l * PI / T * np.sin(k * PI * X / L) * np.cos(l * PI * (Tt - t1) / T) for k, l in ks]
    sig, tau = float(prob.sigma), prob.tau
    H = np.array([[np.sum(W * (sig * pt[i] * pt[j] - tau * px[i] * px[j])) for j in range(len(ks))] for i in range(len(ks))])
    g = np.array([np.sum(W * (sig * bt * pt[i] - tau * bx * px[i])) for i in range(len(ks))])
    c, *_ = np.linalg.lstsq(H, -g, rcond=1e-10)
    J0 = 0.5 * np.sum(W * (sig * bt**2 - tau * bx**2))
    return ks, c, J0 + g @ c + 0.5 * c @ H @ c


def test_alpha_one_sweep_matches_classical_ritz():
    prob = string_template("sine")
    ans = prob.ansatz(3, 3)
    row = alpha_sweep(prob, [1.0], ans)[0]
    ks, c, J = classical_ritz(prob, 3, 3)
    assert row.value == pytest.approx(J, abs=1e-8)
    pt = (0.37, 0.11)
    lookup = {}
    for coef, m in zip(row.coeffs, ans.modes):
        for (k, l), cc in zip(ks, c):
            if abs(m(*pt) - np.sin(k * PI * pt[0]) * np.sin(2 * l * PI * pt[1])) < 1e-14:
                lookup[(k, l)] = (coef, cc)
    assert len(lookup) == len(ks)
    for coef, cc in lookup.values():
        assert coef == pytest.approx(cc, abs=1e-8)


def test_empty_ansatz_returns_base_action():
    prob = string_template("sine")
    ans = prob.ansatz(0, 0)
    row = alpha_sweep(prob, [0.9, 1.0], ans)
    for r in row:
        assert r.coeffs == ()
        assert r.value == pytest.approx(string_action(prob.with_alpha(r.alpha), prob.base()), rel=1e-13)


def test_sweep_drift_toward_classical_modulo_resonant_modes():
    # At alpha = 1 modes sin(k pi x) sin(2 l pi t) with k = 2 l solve the wave equation with zero
    # data, so the classical stationary point is only fixed modulo those directions.
    prob = string_template("sine")
    ans = prob.ansatz(4, 4)
    rows = alpha_sweep(prob, [0.9, 0.95, 0.99, 1.0], ans, el_points=2)
    assert all(r.converged for r in rows)
    obj = RitzObjective(prob.variational_problem(), ans)
    g0 = obj.gradient(np.zeros(len(ans)))
    H = np.stack([obj.gradient(e) - g0 for e in np.eye(len(ans))], axis=1)
    _, s, vt = np.linalg.svd(0.5 * (H + H.T))
    null = vt[s < 1e-8 * s[0]]
    assert null.shape[0] == 2
    c1 = np.array(rows[-1].coeffs)
    drift = []
    for r in rows[:-1]:
        d = np.array(r.coeffs) - c1
        d = d - null.T @ (null @ d)
        drift.append(np.max(np.abs(d)))
    assert drift[0] > drift[1] > drift[2]


def test_solution_grid_shape_and_boundary():
    prob = string_template("sine")
    ans = prob.ansatz(2, 2)
    grid = solution_grid(ans, (0.0,) * 4, prob.box, n=5)
    assert grid.shape == (25, 3)
    at_t0 = grid[np.isclose(grid[:, 1], 0.0)]
    assert np.allclose(at_t0[:, 2], np.sin(PI * at_t0[:, 0]), atol=1e-14)
