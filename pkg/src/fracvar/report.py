from __future__ import annotations

from dataclasses import dataclass, field
import math


@dataclass(frozen=True)
class ResidualReport:
    """Both sides of a verified identity and their disagreement.

    ``rel_residual`` is ``abs_residual / max(1, |lhs|, |rhs|)`` so that
    identities whose sides are both close to zero are judged absolutely.
    """

    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    meta: str = ""
    details: dict = field(default_factory=dict, compare=False, repr=False)

    @classmethod
    def from_sides(cls, lhs, rhs, meta="", **details) -> ResidualReport:
        lhs = float(lhs)
        rhs = float(rhs)
        err = abs(lhs - rhs)
        return cls(lhs, rhs, err, err / max(1.0, abs(lhs), abs(rhs)), meta, details)

    @classmethod
    def from_pointwise(cls, lhs, rhs, meta="", **details) -> ResidualReport:
        """Summarise an identity checked at many points by its worst point."""
        import numpy as np

        lhs = np.asarray(lhs, dtype=float).ravel()
        rhs = np.asarray(rhs, dtype=float).ravel()
        diff = np.abs(lhs - rhs)
        k = int(np.argmax(diff)) if diff.size else 0
        worst_l = float(lhs[k]) if diff.size else 0.0
        worst_r = float(rhs[k]) if diff.size else 0.0
        err = float(diff[k]) if diff.size else 0.0
        return cls(worst_l, worst_r, err, err / max(1.0, abs(worst_l), abs(worst_r)), meta, details)

    def passed(self, tol: float, relative: bool = True) -> bool:
        value = self.rel_residual if relative else self.abs_residual
        return math.isfinite(value) and value < tol
