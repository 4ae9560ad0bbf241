"""Benchmark objectives with Euclidean gradients and seeded generators.

Each generator returns a :class:`Problem`: callables for the objective
value and its Euclidean (ambient) gradient, a deterministic starting
point, the known optimum when one is available, and expensive-operation
price tags used by the benchmark accounting (matrix-vector products for
sphere objectives, matrix-matrix products for SPD objectives).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np

from . import linalg
from .errors import DomainError


@dataclass
class Problem:
    """Objective + gradient evaluators over one manifold's points."""

    name: str
    n: int
    value: Callable[[Any], float]
    euclidean_grad: Callable[[Any], Any]
    x0: Any
    optimum_point: Optional[Any] = None
    optimum_value: Optional[float] = None
    value_ops: int = 0
    grad_ops: int = 0
    extras: dict = field(default_factory=dict)


def _hemisphere_points(rng, n, count):
    # Uniform on the sphere, then the last coordinate is forced positive so
    # every sample lies in the open upper hemisphere.
    pts = rng.standard_normal((count, n))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    pts[:, -1] = np.abs(pts[:, -1])
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    return pts


def center_of_mass(n, n_points=50, seed=0, reference=True):
    """Sum of squared geodesic distances to fixed hemisphere points.

    phi(x) = sum_i arccos(<p_i, x>)^2 / 2 on the unit sphere; its Euclidean
    gradient is -sum_i (theta_i / sin theta_i) p_i with theta_i the angle to
    p_i (the coefficient tends to 1 as theta_i -> 0).  With ``reference``
    set, a high-accuracy fixed-step descent provides the optimum.
    """
    rng = np.random.default_rng(seed)
    pts = _hemisphere_points(rng, n, n_points)

    def _angles(x):
        c = pts @ x
        if np.any(c <= -1.0 + 1e-12):
            raise DomainError("center-of-mass term evaluated at an antipodal point")
        return np.clip(c, -1.0, 1.0)

    def value(x):
        theta = np.arccos(_angles(x))
        return 0.5 * float(np.sum(theta * theta))

    def euclidean_grad(x):
        c = _angles(x)
        theta = np.arccos(c)
        sin2 = 1.0 - c * c
        near = 1.0 - c < 1e-12
        coef = np.empty_like(c)
        coef[near] = 1.0
        coef[~near] = theta[~near] / np.sqrt(sin2[~near])
        return -(pts.T @ coef)

    x0 = pts.mean(axis=0)
    x0 /= np.linalg.norm(x0)
    prob = Problem(
        name="center-of-mass",
        n=n,
        value=value,
        euclidean_grad=euclidean_grad,
        x0=x0,
        value_ops=1,
        grad_ops=1,
        extras={"points": pts},
    )
    if reference:
        from .manifolds import Sphere

        xstar = fixed_step_reference(prob, Sphere(), step=1.0 / n_points)
        prob.optimum_point = xstar
        prob.optimum_value = value(xstar)
    return prob


def rayleigh(n, seed=0):
    """Rayleigh quotient x^T A x on the unit sphere; minimum is the smallest
    eigenvalue of A.  Nonconvex, but a standard stress test."""
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    a = 0.5 * (a + a.T)
    lam_min = float(linalg.sym_eig(a).eigenvalues[0])

    def value(x):
        return float(x @ (a @ x))

    def euclidean_grad(x):
        return 2.0 * (a @ x)

    x0 = rng.standard_normal(n)
    x0 /= np.linalg.norm(x0)
    return Problem(
        name="rayleigh",
        n=n,
        value=value,
        euclidean_grad=euclidean_grad,
        x0=x0,
        optimum_value=lam_min,
        value_ops=1,
        grad_ops=1,
        extras={"A": a},
    )


def _random_spd(rng, n, lo, hi):
    m = rng.standard_normal((n, n))
    q = linalg.sym_eig(0.5 * (m + m.T)).basis
    w = rng.uniform(lo, hi, size=n)
    return linalg.symmetrize((q * w) @ q.T)


def lyapunov_objective(n, seed=0):
    """phi(X) = Tr(X A X) - Tr(X C) over SPD matrices.

    The minimizer solves A X + X A = C; restricting A to be symmetric
    positive definite lets the eigenbasis Lyapunov solver double as the
    exact reference.
    """
    rng = np.random.default_rng(seed)
    a = _random_spd(rng, n, 1.0, 3.0)
    c = _random_spd(rng, n, 1.0, 3.0)
    xstar = linalg.solve_lyapunov(a, c)

    def value(x):
        xa = x @ a
        return float(np.sum(xa * x) - np.sum(x * c))

    def euclidean_grad(x):
        xa = x @ a
        return xa + xa.T - c

    return Problem(
        name="lyapunov",
        n=n,
        value=value,
        euclidean_grad=euclidean_grad,
        x0=np.eye(n),
        optimum_point=xstar,
        optimum_value=float(np.sum((xstar @ a) * xstar) - np.sum(xstar * c)),
        value_ops=1,
        grad_ops=1,
        extras={"A": a, "C": c},
    )


def weighted_least_squares(n, seed=0, density=None):
    """phi(X) = ||A . X - B||_F^2 with . the entrywise (Hadamard) product.

    ``density`` in (0, 1] zeroes out entries of the symmetric weight matrix
    A (sparse weights stored densely).  The target is an exact fit
    B = A . S of a random SPD matrix S, so the minimizer is an interior
    point of the cone with value zero; a random symmetric target would put
    the constrained optimum on the cone boundary and every descent run
    would stall against the domain guard.  The Euclidean gradient is
    2 (A . X - B) . A; the factor 2 is what the finite-difference check of
    the stated objective requires.  Evaluations use Hadamard products only,
    so both price tags are zero.
    """
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n, n))
    a = 0.5 * (a + a.T)
    if density is not None:
        mask = rng.random((n, n)) < density
        mask = np.triu(mask) | np.triu(mask).T
        a = a * mask
    target = _random_spd(rng, n, 0.5, 2.0)
    b = a * target

    def value(x):
        r = a * x - b
        return float(np.sum(r * r))

    def euclidean_grad(x):
        return 2.0 * (a * x - b) * a

    return Problem(
        name="wls-sparse" if density is not None else "wls-dense",
        n=n,
        value=value,
        euclidean_grad=euclidean_grad,
        x0=np.eye(n),
        # With zero weights the fit is non-unique, so only the value is known.
        optimum_point=None if density is not None else target,
        optimum_value=0.0,
        value_ops=0,
        grad_ops=0,
        extras={"A": a, "B": b, "S": target},
    )


def linear_minus_log(n, seed=0):
    """Separable objective sum_i (x_i - c_i ln x_i) on the positive orthant.

    Geodesically convex there (its pullback under x = exp(y) is convex),
    with optimum exactly x = c.
    """
    rng = np.random.default_rng(seed)
    c = rng.uniform(0.5, 2.0, size=n)
    x0 = rng.uniform(0.5, 2.0, size=n)

    def value(x):
        return float(np.sum(x - c * np.log(x)))

    def euclidean_grad(x):
        return 1.0 - c / x

    return Problem(
        name="linear-minus-log",
        n=n,
        value=value,
        euclidean_grad=euclidean_grad,
        x0=x0,
        optimum_point=c.copy(),
        optimum_value=float(np.sum(c - c * np.log(c))),
        extras={"c": c},
    )


def fixed_step_reference(problem, manifold, step, tol=1e-13, max_iters=100_000):
    """High-accuracy reference optimum via plain fixed-step descent.

    Deliberately independent of the adaptive optimizer: a small constant
    step is iterated until the Riemannian gradient norm falls below
    ``tol`` (capped at ``max_iters`` steps).
    """
    x = problem.x0
    for _ in range(max_iters):
        g = manifold.egrad_to_rgrad(x, problem.euclidean_grad(x))
        if manifold.norm(x, g) <= tol:
            break
        x = manifold.exp(x, (-step) * g)
    return x
