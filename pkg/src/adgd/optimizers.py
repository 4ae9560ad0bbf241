"""Descent loops over the manifold contract.

Four entry points:

* :func:`adgd_run` -- gradient descent whose step size combines a growth
  cap ``sqrt(1 + theta) * alpha_prev`` with a local inverse-smoothness
  estimate built from the parallel-transported previous gradient.  No
  line search, one gradient and one exponential per iteration.
* :func:`armijo_run` -- backtracking line search baseline whose initial
  trial step grows as ``lambda * eta_prev``.
* :func:`fixed_run` -- constant step size baseline.
* :func:`euclidean_adgd_run` -- the same adaptive loop specialized to
  flat R^n (identity transport, dot-product metric), used as the oracle
  for the positive-orthant equivalence.

Every run produces a :class:`Trace`: one :class:`TraceRow` per iterate
with objective value, gradient norm, step size, step ratio, the local
inverse-smoothness estimate, cumulative work counters, optional distance
to the optimum, and a flag recording whether any numerical guard fired.

Work counters: ``fn_evals`` and ``exp_evals`` count objective and
exponential-map evaluations directly (line-search trials included);
``expensive_ops`` charges the price tags declared by the problem and the
manifold (matrix-vector products on the sphere, matrix-matrix products
on SPD matrices) per gradient evaluation, per objective evaluation, per
exponential call, and per adaptive step-size evaluation, so that all
optimizers are metered identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .errors import DomainError
from .manifolds import STEP_SAFETY, Manifold
from .manifolds.base import CURVATURE_FLAT

_SQRT2 = math.sqrt(2.0)

STATUS_CONVERGED = "converged"
STATUS_MAX_ITERS = "max-iters"
STATUS_ABORTED = "aborted"

_MAX_BACKTRACKS = 60
_MAX_FIRST_LS_DOUBLINGS = 60
_DIVERGENCE_STREAK = 50


@dataclass
class RunConfig:
    """Knobs shared by all runs; Armijo fields are ignored elsewhere."""

    max_iters: int = 1000
    tol: float = 1e-10
    alpha0: float = 1.0
    first_ls: bool = False
    armijo_c: float = 1e-4
    armijo_beta: float = 0.5
    armijo_lambda: float = 1.0
    # Testing hook: disable the max_step clamp on incomplete manifolds to
    # demonstrate that it is load-bearing.  Leave True everywhere else.
    clamp_steps: bool = True
    # Record distance-to-optimum per iterate when the optimum is known;
    # turn off to skip the per-row distance computation on large runs.
    track_distance: bool = True

    def __post_init__(self):
        if not self.alpha0 > 0.0:
            raise ValueError("alpha0 must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        if not 0.0 < self.armijo_beta < 1.0:
            raise ValueError("armijo_beta must lie in (0, 1)")
        if not self.armijo_lambda >= 1.0:
            raise ValueError("armijo_lambda must be >= 1")
        if not 0.0 < self.armijo_c < 1.0:
            raise ValueError("armijo_c must lie in (0, 1)")
        if not self.tol >= 0.0:
            raise ValueError("tol must be nonnegative")


@dataclass
class TraceRow:
    """Per-iterate record; ``ell`` is 0.0 where undefined (k = 0, or a
    vanishing gradient-difference denominator)."""

    k: int
    phi: float
    grad_norm: float
    alpha: float
    theta: float
    ell: float
    fn_evals: int
    exp_evals: int
    expensive_ops: int
    dist_to_opt: Optional[float]
    clamped: bool


@dataclass
class Trace:
    rows: list
    points: list
    status: str
    message: str = ""

    def column(self, name):
        return np.array([getattr(r, name) for r in self.rows])

    @property
    def final_point(self):
        return self.points[-1]


class _Meter:
    """Cumulative work counters plus per-run context for one run."""

    __slots__ = ("fn_evals", "exp_evals", "expensive", "manifold", "problem", "dist_fn")

    def __init__(self, manifold, problem, track_distance=True):
        self.fn_evals = 0
        self.exp_evals = 0
        self.expensive = 0
        self.manifold = manifold
        self.problem = problem
        if track_distance and problem.optimum_point is not None:
            self.dist_fn = manifold.distance_from(problem.optimum_point)
        else:
            self.dist_fn = None

    # Overflow and invalid-value warnings are silenced in the evaluation
    # paths: non-finite results flow to the explicit finiteness check,
    # which aborts the run with a diagnostic.

    def value(self, x):
        self.fn_evals += 1
        self.expensive += self.problem.value_ops
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return float(self.problem.value(x))

    def grad(self, x):
        self.expensive += self.problem.grad_ops + self.manifold.rgrad_ops
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return self.manifold.egrad_to_rgrad(x, self.problem.euclidean_grad(x))

    def norm(self, x, v):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return self.manifold.norm(x, v)

    def exp(self, x, v):
        self.exp_evals += 1
        self.expensive += self.manifold.exp_ops
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return self.manifold.exp_flagged(x, v)

    def adapt(self):
        self.expensive += self.manifold.adapt_extra_ops


@dataclass
class AdaptiveState:
    """Loop state on arrival at ``x_curr`` (iteration index ``k``)."""

    k: int
    x_prev: Any
    x_curr: Any
    grad_prev: Any
    step_prev: Any  # tangent at x_prev actually used to reach x_curr
    alpha_prev: float
    theta_prev: float
    grad_prev_norm: float
    phi_prev: float
    meter: _Meter
    # Filled when the first-iteration line search already evaluated the
    # gradient and transport at x_curr; consumed by the next step.
    pending_grad: Any = None
    pending_transported: Any = None


class _AbortRun(Exception):
    """Internal control flow: numerical abort with a diagnostic message."""


def _dist_to_opt(meter, x):
    if meter.dist_fn is None:
        return None
    return meter.dist_fn(x)


def _require_finite(phi, grad_norm, k):
    if not (np.isfinite(phi) and np.isfinite(grad_norm)):
        raise _AbortRun(
            f"non-finite objective ({phi}) or gradient norm ({grad_norm}) at iteration {k}"
        )


def _clamp_alpha(alpha, manifold, x, neg_grad, enabled):
    """Apply the step-domain safety clamp; returns (alpha, clamped?).

    A cheap lower bound on max_step screens out the common case (step far
    from the boundary) before paying for the exact supremum.
    """
    if not enabled:
        return alpha, False
    if alpha <= STEP_SAFETY * manifold.max_step_lower_bound(x, neg_grad):
        return alpha, False
    cap = manifold.max_step(x, neg_grad)
    if math.isinf(cap):
        return alpha, False
    limit = STEP_SAFETY * cap
    if alpha > limit:
        return limit, True
    return alpha, False


def adgd_step(state, manifold, problem, config, step_override=None):
    """One iteration of the adaptive loop: evaluate at ``x_curr``, choose
    the step size, and (unless stopping) move to the next iterate.

    Returns ``(next_state, row)``; ``next_state`` is None when the
    gradient-norm tolerance is met.  Raises ``_AbortRun`` on non-finite
    values and propagates DomainError when clamping is disabled.
    """
    m = state.meter
    phi = m.value(state.x_curr)
    if state.pending_grad is not None:
        grad = state.pending_grad
        transported = state.pending_transported
    else:
        grad = m.grad(state.x_curr)
        transported = manifold.transport_along_step(
            state.x_prev, state.step_prev, state.grad_prev
        )
    grad_norm = m.norm(state.x_curr, grad)
    _require_finite(phi, grad_norm, state.k)

    m.adapt()
    denom_sq = manifold.grad_diff_norm_sq(
        state.x_curr, grad, transported, state.grad_prev_norm**2
    )
    denom = math.sqrt(denom_sq)
    numer = state.alpha_prev * state.grad_prev_norm
    ell = numer / denom if denom > 0.0 else 0.0

    if step_override is not None:
        alpha = step_override
    else:
        growth_cap = math.sqrt(1.0 + state.theta_prev) * state.alpha_prev
        local = numer / (_SQRT2 * denom) if denom > 0.0 else math.inf
        alpha = min(growth_cap, local)

    neg_grad = -1.0 * grad
    alpha, clamped = _clamp_alpha(alpha, manifold, state.x_curr, neg_grad, config.clamp_steps)
    # alpha_prev is zero only under a pinned zero step; the ratio is moot then.
    theta = alpha / state.alpha_prev if state.alpha_prev > 0.0 else 0.0

    row = TraceRow(
        k=state.k,
        phi=phi,
        grad_norm=grad_norm,
        alpha=alpha,
        theta=theta,
        ell=ell,
        fn_evals=m.fn_evals,
        exp_evals=m.exp_evals,
        expensive_ops=m.expensive,
        dist_to_opt=_dist_to_opt(m, state.x_curr),
        clamped=clamped,
    )
    if grad_norm <= config.tol:
        return None, row

    step = alpha * neg_grad
    x_next, exp_clamped = m.exp(state.x_curr, step)
    row.clamped = row.clamped or exp_clamped
    row.exp_evals = m.exp_evals
    row.expensive_ops = m.expensive
    next_state = AdaptiveState(
        k=state.k + 1,
        x_prev=state.x_curr,
        x_curr=x_next,
        grad_prev=grad,
        step_prev=step,
        alpha_prev=alpha,
        theta_prev=theta,
        grad_prev_norm=grad_norm,
        phi_prev=phi,
        meter=m,
    )
    return next_state, row


def _first_iteration(config, manifold, problem, meter, step_override, take_step=True):
    """Evaluate at x0 and take the very first step ``exp(x0, -alpha0 g0)``.

    With ``config.first_ls`` set (adaptive runs only), alpha0 is doubled
    until the transported-gradient ratio drops to 1, so that the step
    sequence starts at the local inverse-smoothness scale.

    Returns ``(state, row0)``; ``state`` is None when x0 is stationary or
    ``take_step`` is False.
    """
    x0 = problem.x0
    phi0 = meter.value(x0)
    grad0 = meter.grad(x0)
    grad0_norm = meter.norm(x0, grad0)
    _require_finite(phi0, grad0_norm, 0)

    def row0(alpha, clamped):
        return TraceRow(
            k=0,
            phi=phi0,
            grad_norm=grad0_norm,
            alpha=alpha,
            theta=0.0,
            ell=0.0,
            fn_evals=meter.fn_evals,
            exp_evals=meter.exp_evals,
            expensive_ops=meter.expensive,
            dist_to_opt=_dist_to_opt(meter, x0),
            clamped=clamped,
        )

    base_alpha = config.alpha0 if step_override is None else step_override
    if grad0_norm <= config.tol or not take_step:
        return None, row0(base_alpha, False)

    neg_grad0 = -1.0 * grad0
    alpha0, clamped = _clamp_alpha(base_alpha, manifold, x0, neg_grad0, config.clamp_steps)

    pending_grad = None
    pending_transported = None
    if config.first_ls and step_override is None:
        for _ in range(_MAX_FIRST_LS_DOUBLINGS):
            step = alpha0 * neg_grad0
            x1, exp_clamped = meter.exp(x0, step)
            pending_grad = meter.grad(x1)
            pending_transported = manifold.transport_along_step(x0, step, grad0)
            meter.adapt()
            denom_sq = manifold.grad_diff_norm_sq(
                x1, pending_grad, pending_transported, grad0_norm**2
            )
            denom = math.sqrt(denom_sq)
            ratio = grad0_norm / (_SQRT2 * denom) if denom > 0.0 else math.inf
            if ratio <= 1.0 or clamped:
                break
            alpha0, clamped = _clamp_alpha(
                2.0 * alpha0, manifold, x0, neg_grad0, config.clamp_steps
            )
            pending_grad = None
            pending_transported = None
        else:
            # Ratio never dropped; proceed with the last (largest) trial.
            step = alpha0 * neg_grad0
            x1, exp_clamped = meter.exp(x0, step)
            pending_grad = meter.grad(x1)
            pending_transported = manifold.transport_along_step(x0, step, grad0)
    else:
        step = alpha0 * neg_grad0
        x1, exp_clamped = meter.exp(x0, step)

    state = AdaptiveState(
        k=1,
        x_prev=x0,
        x_curr=x1,
        grad_prev=grad0,
        step_prev=step,
        alpha_prev=alpha0,
        theta_prev=0.0,
        grad_prev_norm=grad0_norm,
        phi_prev=phi0,
        meter=meter,
        pending_grad=pending_grad,
        pending_transported=pending_transported,
    )
    return state, row0(alpha0, clamped or exp_clamped)


def _adaptive_loop(config, manifold, problem, step_override=None, divergence_abort=False):
    meter = _Meter(manifold, problem, config.track_distance)
    rows = []
    points = [problem.x0]
    try:
        state, row0 = _first_iteration(
            config, manifold, problem, meter, step_override, take_step=config.max_iters > 0
        )
        rows.append(row0)
        if state is None:
            status = STATUS_CONVERGED if row0.grad_norm <= config.tol else STATUS_MAX_ITERS
            return Trace(rows, points, status)
        points.append(state.x_curr)
        increase_streak = 0
        while True:
            phi_before = state.phi_prev
            state_next, row = adgd_step(state, manifold, problem, config, step_override)
            rows.append(row)
            if state_next is None:
                return Trace(rows, points, STATUS_CONVERGED)
            if divergence_abort:
                increase_streak = increase_streak + 1 if row.phi > phi_before else 0
                if increase_streak >= _DIVERGENCE_STREAK:
                    raise _AbortRun(
                        f"objective increased for {_DIVERGENCE_STREAK} consecutive "
                        f"iterations (diverging fixed step)"
                    )
            if row.k >= config.max_iters:
                return Trace(rows, points, STATUS_MAX_ITERS)
            state = state_next
            points.append(state.x_curr)
    except _AbortRun as exc:
        return Trace(rows, points, STATUS_ABORTED, str(exc))
    except (DomainError, FloatingPointError) as exc:
        return Trace(rows, points, STATUS_ABORTED, str(exc))


def adgd_run(config, manifold, problem):
    """Run the adaptive method until the gradient-norm tolerance or
    ``config.max_iters`` iterations."""
    return _adaptive_loop(config, manifold, problem)


def fixed_run(config, manifold, problem, alpha):
    """Constant step size baseline.

    Shares the adaptive loop's bookkeeping (the trace carries the same
    diagnostics) with the step choice pinned to ``alpha``; aborts when the
    objective increases for 50 consecutive iterations.
    """
    if alpha < 0.0:
        raise ValueError("fixed step size must be nonnegative")
    return _adaptive_loop(config, manifold, problem, step_override=alpha, divergence_abort=True)


def armijo_run(config, manifold, problem):
    """Backtracking line search with per-iteration growth.

    At iterate x, trials start from ``eta = lambda * eta_prev`` and halve
    (factor ``armijo_beta``) until
    ``phi(exp(x, -eta g)) <= phi(x) - c * eta * ||g||^2``; every trial's
    objective and exponential evaluation is metered.  More than 60
    rejections abort the run.
    """
    meter = _Meter(manifold, problem, config.track_distance)
    rows = []
    points = [problem.x0]
    eta_prev = None
    x = problem.x0
    carried_phi = None
    try:
        for k in range(config.max_iters + 1):
            # The accepted trial already evaluated the objective at x.
            phi = meter.value(x) if carried_phi is None else carried_phi
            grad = meter.grad(x)
            grad_norm = meter.norm(x, grad)
            _require_finite(phi, grad_norm, k)
            dist = _dist_to_opt(meter, x)

            def make_row(alpha, theta, clamped):
                return TraceRow(
                    k=k,
                    phi=phi,
                    grad_norm=grad_norm,
                    alpha=alpha,
                    theta=theta,
                    ell=0.0,
                    fn_evals=meter.fn_evals,
                    exp_evals=meter.exp_evals,
                    expensive_ops=meter.expensive,
                    dist_to_opt=dist,
                    clamped=clamped,
                )

            if grad_norm <= config.tol:
                rows.append(make_row(0.0, 0.0, False))
                return Trace(rows, points, STATUS_CONVERGED)
            if k >= config.max_iters:
                rows.append(make_row(0.0, 0.0, False))
                return Trace(rows, points, STATUS_MAX_ITERS)

            neg_grad = -1.0 * grad
            eta = config.alpha0 if eta_prev is None else config.armijo_lambda * eta_prev
            eta, clamped = _clamp_alpha(eta, manifold, x, neg_grad, config.clamp_steps)
            target_slope = config.armijo_c * grad_norm**2
            accepted = None
            for _ in range(_MAX_BACKTRACKS + 1):
                x_trial, exp_clamped = meter.exp(x, eta * neg_grad)
                phi_trial = meter.value(x_trial)
                if phi_trial <= phi - eta * target_slope:
                    accepted = x_trial
                    carried_phi = phi_trial
                    clamped = clamped or exp_clamped
                    break
                eta *= config.armijo_beta
            if accepted is None:
                raise _AbortRun(
                    f"Armijo backtracking exceeded {_MAX_BACKTRACKS} reductions "
                    f"at iteration {k}"
                )

            theta = 0.0 if not eta_prev else eta / eta_prev
            rows.append(make_row(eta, theta, clamped))
            eta_prev = eta
            x = accepted
            points.append(x)
        raise AssertionError("unreachable: loop exits via tol or max_iters")
    except _AbortRun as exc:
        return Trace(rows, points, STATUS_ABORTED, str(exc))
    except (DomainError, FloatingPointError) as exc:
        return Trace(rows, points, STATUS_ABORTED, str(exc))


class _FlatSpace(Manifold):
    """R^n with the dot product: identity transport, exp(x, v) = x + v."""

    name = "euclidean"
    curvature_class = CURVATURE_FLAT

    def egrad_to_rgrad(self, x, g):
        return g

    def exp(self, x, v):
        return x + v

    def transport_along_step(self, x, v, w):
        return w

    def inner(self, x, u, v):
        return float(np.dot(u, v))

    def distance(self, x, y):
        return float(np.linalg.norm(x - y))

    def project(self, raw):
        return np.asarray(raw, dtype=float)


def euclidean_adgd_run(config, f, grad_f, y0, optimum_point=None, optimum_value=None):
    """The adaptive method on flat R^n: ``y_{k+1} = y_k - alpha_k grad f(y_k)``
    with the identical step-size rule (identity transport, dot metric)."""
    from .problems import Problem

    prob = Problem(
        name="euclidean",
        n=int(np.asarray(y0).size),
        value=f,
        euclidean_grad=grad_f,
        x0=np.asarray(y0, dtype=float),
        optimum_point=optimum_point,
        optimum_value=optimum_value,
    )
    return _adaptive_loop(config, _FlatSpace(), prob)
