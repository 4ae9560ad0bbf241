"""Adaptive gradient descent on manifolds with nonnegative curvature.

A numpy library providing: a growth-capped, transport-based adaptive
step-size rule for Riemannian gradient descent (plus line-search and
fixed-step baselines); closed-form geometry for the unit sphere, SPD
matrices under the Bures-Wasserstein metric, and the positive orthant;
from-scratch dense symmetric linear algebra (Jacobi eigensolver,
Lyapunov solve, SPD square root); four benchmark objectives; and a CSV
benchmark harness (``adgd-bench``).
"""

from . import diagnostics, linalg, problems, trace_io
from .errors import ConvergenceError, DomainError
from .manifolds import BuresWasserstein, BWTangent, Manifold, PositiveOrthant, Sphere
from .optimizers import (
    RunConfig,
    Trace,
    TraceRow,
    adgd_run,
    armijo_run,
    euclidean_adgd_run,
    fixed_run,
)

__version__ = "0.1.0"

__all__ = [
    "adgd_run",
    "armijo_run",
    "fixed_run",
    "euclidean_adgd_run",
    "RunConfig",
    "Trace",
    "TraceRow",
    "Manifold",
    "Sphere",
    "BuresWasserstein",
    "BWTangent",
    "PositiveOrthant",
    "DomainError",
    "ConvergenceError",
    "linalg",
    "problems",
    "diagnostics",
    "trace_io",
]
