"""Jumarie fractional calculus of variations for multiple integrals.

Fractional derivatives and ``(dt)^alpha`` integrals in one and several
variables, fractional vector calculus on boxes, numerical checks of the
Green, Gauss and Stokes theorems, Euler-Lagrange residuals, a Ritz solver and
the fractional vibrating string.
"""
from __future__ import annotations

from .core1d import (
    Function1D,
    Interval,
    check_ftc1,
    check_ftc2,
    check_leibniz,
    dt_alpha_integral,
    gamma_factorial,
    jumarie_derivative,
    jumarie_derivative_extrapolated,
    jumarie_derivative_series,
)
from .errors import (
    AdmissibilityError,
    DimensionError,
    DomainError,
    FracVarError,
    LagrangianError,
    QuadratureError,
    UnsupportedSurfaceError,
    UsageError,
)
from .fields import Box, ScalarField, restrict
from .ndops import (
    AxisSubset,
    frac_line_integral_2d,
    frac_multi_integral,
    frac_partial,
    frac_partial_field,
    frac_surface_integral_3d,
    frac_volume_integral,
)
from .quadrature import JacobiRule, build_jacobi_rule
from .report import ResidualReport
from .ritz import RitzAnsatz, RitzResult, legendre_modes, ritz_minimize, ritz_stationary, sine_modes, transfinite_base
from .string_app import StringProblem, alpha_sweep, string_action, string_eom_residual
from .theorems import check_gauss, check_green, check_stokes_planar
from .variational import (
    Lagrangian2D,
    Lagrangian3D,
    VariationalProblem,
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
from .veccalc import Vec3, VectorField3, check_identity, frac_curl, frac_div, frac_flux, frac_grad

__version__ = "0.1.0"
