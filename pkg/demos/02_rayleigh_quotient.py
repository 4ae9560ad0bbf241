#!/usr/bin/env python3
"""Smallest eigenvalue via x^T A x on the unit sphere.

A nonconvex problem where the adaptive step sizes stretch far beyond what
a cautious line search accepts, converging in far fewer iterations.
"""
import numpy as np

from adgd import RunConfig, adgd_run, armijo_run, problems
from adgd.manifolds import Sphere

sphere = Sphere()
prob = problems.rayleigh(100, seed=0)

adaptive = adgd_run(RunConfig(max_iters=5000, tol=1e-10, alpha0=0.05), sphere, prob)
ls1 = armijo_run(RunConfig(max_iters=5000, tol=1e-10, alpha0=0.05, armijo_lambda=1.0), sphere, prob)
ls2 = armijo_run(RunConfig(max_iters=5000, tol=1e-10, alpha0=0.05, armijo_lambda=2.0), sphere, prob)

print(f"target: smallest eigenvalue = {prob.optimum_value:.12f}\n")
print(f"{'method':>10} {'status':>10} {'iters':>6} {'fn':>6} {'ops':>7} {'gap':>10} {'max step':>9}")
for name, tr in (("adaptive", adaptive), ("armijo(1)", ls1), ("armijo(2)", ls2)):
    last = tr.rows[-1]
    print(f"{name:>10} {tr.status:>10} {last.k:6d} {last.fn_evals:6d} "
          f"{last.expensive_ops:7d} {abs(last.phi - prob.optimum_value):10.2e} "
          f"{tr.column('alpha').max():9.3f}")

print("\nstep-size sample (iterations 1-12):")
print("  adaptive :", np.array2string(adaptive.column("alpha")[1:13], precision=3))
print("  armijo(1):", np.array2string(ls1.column("alpha")[1:13], precision=3))
