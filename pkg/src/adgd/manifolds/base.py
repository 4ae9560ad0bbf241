"""Uniform geometric interface consumed by the descent loops.

A manifold object bundles exactly the operations the optimizers need:
converting Euclidean gradients to Riemannian ones, the exponential map,
parallel transport along the step geodesic, the metric, distances for
diagnostics, and the supremum of admissible step lengths on incomplete
manifolds.  Implementations are stateless and all operations are pure,
so one instance can serve any number of concurrent runs.

Tangent vectors are plain ``numpy`` arrays except on Bures-Wasserstein,
where they carry a cached Lyapunov factor; either way they support
``-``, ``+`` and scalar ``*``, which is all the optimizers use.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod

# Curvature classes, in the sense of the lower sectional-curvature bound
# and geodesic completeness that the convergence analysis relies on.
CURVATURE_NONNEGATIVE_COMPLETE = "nonnegative-complete"
CURVATURE_NONNEGATIVE_INCOMPLETE = "nonnegative-incomplete"
CURVATURE_FLAT = "flat"


class Manifold(ABC):
    """Geometric operations shared by all manifolds in this package.

    Class attributes
    ----------------
    name : str
        Short identifier used in traces and error messages.
    curvature_class : str
        One of the CURVATURE_* tags above.
    rgrad_ops, exp_ops, adapt_extra_ops : int
        Expensive-operation price tags (matrix-vector products on the
        sphere, matrix-matrix products on SPD matrices) charged per
        gradient conversion, per exponential-map call, and per adaptive
        step-size evaluation.  Used only for benchmark accounting.
    """

    name = "manifold"
    curvature_class = CURVATURE_FLAT
    rgrad_ops = 0
    exp_ops = 0
    adapt_extra_ops = 0

    @abstractmethod
    def egrad_to_rgrad(self, x, g):
        """Riemannian gradient at x from the ambient (Euclidean) gradient g."""

    @abstractmethod
    def exp(self, x, v):
        """Point reached after unit time along the geodesic from x with velocity v."""

    def exp_flagged(self, x, v):
        """exp plus a flag telling whether a numerical guard was applied."""
        return self.exp(x, v), False

    @abstractmethod
    def transport_along_step(self, x, v, w):
        """Parallel transport of w from x to exp(x, v) along t -> exp(x, t v)."""

    @abstractmethod
    def inner(self, x, u, v):
        """Riemannian inner product of tangents u, v at x."""

    def norm(self, x, v):
        return math.sqrt(max(self.inner(x, v, v), 0.0))

    @abstractmethod
    def distance(self, x, y):
        """Geodesic distance (diagnostics only)."""

    def distance_from(self, y):
        """Callable ``x -> distance(x, y)`` for many distances to a fixed
        point; metrics with per-point precomputation override this."""
        return lambda x: self.distance(x, y)

    def max_step(self, x, v):
        """Supremum of t such that exp(x, t v) is defined; inf when complete."""
        return math.inf

    def max_step_lower_bound(self, x, v):
        """Cheap, never-overestimating stand-in for max_step.

        Step clamping screens with this first and computes the exact
        supremum only when a step might actually come close; manifolds
        whose max_step is expensive override it.
        """
        return self.max_step(x, v)

    @abstractmethod
    def project(self, raw):
        """Re-validate / normalize a raw ambient value into a manifold point."""

    def grad_diff_norm_sq(self, x, g_new, transported, prev_norm_sq):
        """Squared norm at x of ``g_new - transported``.

        ``transported`` is the previous gradient carried to x by
        ``transport_along_step`` and ``prev_norm_sq`` its squared norm at
        the previous base point (equal to the squared norm of
        ``transported`` at x, transport being an isometry).  The default
        forms the difference directly; metrics whose inner product is
        expensive override this with the isometry-based expansion.
        """
        d = g_new - transported
        return max(self.inner(x, d, d), 0.0)
