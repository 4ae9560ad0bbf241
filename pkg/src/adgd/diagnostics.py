"""Trace-level diagnostics for the adaptive method's descent guarantees.

All functions consume a :class:`~adgd.optimizers.Trace` whose rows carry
a distance-to-optimum column (runs on problems with a known optimum) and
evaluate, purely from recorded quantities:

* the descent energy
  ``E_k = d(x_k, x*)^2 + ||alpha_{k-1} grad_{k-1}||^2
  + 2 alpha_k theta_k (phi(x_{k-1}) - phi_*)``,
  which is non-increasing on geodesically convex runs;
* the containment radius
  ``R^2 = d(x_0, x*)^2 + 2 ||alpha_0 grad_0||^2`` bounding every iterate;
* the certified gap bound ``R^2 / (2 sum_{i<=k} alpha_i)`` on the best
  objective value seen so far;
* the step-size floor ``min(alpha_0, 1 / (2 L))`` with L estimated from
  the recorded local inverse-smoothness values.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = ["energy_sequence", "radius", "rate_gap_bounds", "step_floor_bound"]


def _require_distances(trace):
    if any(r.dist_to_opt is None for r in trace.rows):
        raise ValueError("trace lacks distance-to-optimum data (unknown optimum)")


def energy_sequence(trace, phi_star):
    """Descent energy E_k for k = 1 .. len(rows)-1 (k = 0 has no predecessor)."""
    _require_distances(trace)
    rows = trace.rows
    out = []
    for k in range(1, len(rows)):
        prev, cur = rows[k - 1], rows[k]
        carried = (prev.alpha * prev.grad_norm) ** 2
        out.append(
            cur.dist_to_opt**2
            + carried
            + 2.0 * cur.alpha * cur.theta * (prev.phi - phi_star)
        )
    return np.array(out)


def radius(trace):
    """R from the starting point: sqrt(d_0^2 + 2 (alpha_0 ||grad_0||)^2)."""
    _require_distances(trace)
    r0 = trace.rows[0]
    return math.sqrt(r0.dist_to_opt**2 + 2.0 * (r0.alpha * r0.grad_norm) ** 2)


def rate_gap_bounds(trace, phi_star, ks):
    """Pairs (best gap up to k, certified bound R^2 / (2 sum alpha_i)).

    The sum runs over i = 1 .. k; requested indices beyond the trace are
    evaluated at the last recorded iterate.
    """
    rows = trace.rows
    r_sq = radius(trace) ** 2
    out = []
    for k in ks:
        k_eff = min(k, len(rows) - 1)
        if k_eff < 1:
            raise ValueError("rate bound needs at least one adaptive iteration")
        best_gap = min(r.phi for r in rows[1 : k_eff + 1]) - phi_star
        alpha_sum = sum(r.alpha for r in rows[1 : k_eff + 1])
        out.append((best_gap, r_sq / (2.0 * alpha_sum)))
    return out


def step_floor_bound(trace):
    """(observed min alpha, min(alpha_0, 1 / (2 L))) with L = max over the
    trace of the reciprocal local inverse-smoothness estimate."""
    rows = trace.rows
    ells = [r.ell for r in rows if r.ell > 0.0]
    if not ells:
        return min(r.alpha for r in rows), rows[0].alpha
    lipschitz = max(1.0 / e for e in ells)
    return min(r.alpha for r in rows), min(rows[0].alpha, 1.0 / (2.0 * lipschitz))
