"""Dense symmetric linear algebra kernels.

Everything here is built from scratch on top of plain ``numpy`` arrays:
a cyclic Jacobi eigensolver, a Lyapunov solver working in the eigenbasis,
and an SPD matrix square root.  These kernels are the workhorses of the
Bures-Wasserstein geometry and double as test oracles, so they favour
robustness and explicit failure over raw speed.  All functions are pure;
inputs are never mutated.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "EigenDecomposition",
    "symmetrize",
    "check_symmetric",
    "sym_eig",
    "solve_lyapunov",
    "spd_sqrt",
    "matmul",
    "frobenius_norm",
    "trace",
    "add_scaled",
    "spd_min_eig_threshold",
    "is_spd_spectrum",
    "cholesky",
]

# Relative asymmetry tolerated at construction / validation time.
_SYM_TOL = 1e-12

# Off-diagonal mass threshold for Jacobi convergence, relative to ||M||_F.
_JACOBI_TOL = 1e-14
_JACOBI_MAX_SWEEPS = 100


class EigenDecomposition:
    """Spectral factorization M = Q diag(w) Q^T of a symmetric matrix.

    Attributes
    ----------
    eigenvalues : ndarray, shape (n,)
        Eigenvalues sorted ascending.
    basis : ndarray, shape (n, n)
        Orthogonal matrix; column ``i`` is the eigenvector for
        ``eigenvalues[i]``.
    """

    __slots__ = ("eigenvalues", "basis")

    def __init__(self, eigenvalues, basis):
        self.eigenvalues = eigenvalues
        self.basis = basis

    def reconstruct(self):
        """Return Q diag(w) Q^T."""
        return (self.basis * self.eigenvalues) @ self.basis.T


def symmetrize(m):
    """Exact symmetrization (M + M^T) / 2."""
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + m.T)


def check_symmetric(m, name="matrix"):
    """Validate near-symmetry of a square matrix, return it as float64.

    Raises ValueError when the matrix is not square or its asymmetry
    exceeds 1e-12 relative to the entry magnitude.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    gap = np.abs(m - m.T)
    scale = np.maximum(1.0, np.abs(m))
    if np.any(gap > _SYM_TOL * scale):
        worst = float(np.max(gap / scale))
        raise ValueError(f"{name} is not symmetric (relative asymmetry {worst:.3e})")
    return m


def sym_eig(m, max_sweeps=_JACOBI_MAX_SWEEPS):
    """Eigendecomposition of a dense symmetric matrix by cyclic Jacobi.

    Sweeps Givens rotations over all off-diagonal positions until the
    off-diagonal Frobenius mass drops below ``1e-14 * ||M||_F``.

    Parameters
    ----------
    m : array_like, shape (n, n)
        Symmetric matrix (validated to 1e-12 relative asymmetry).
    max_sweeps : int
        Iteration cap; exceeding it raises ConvergenceError rather than
        returning a silently inaccurate factorization.

    Returns
    -------
    EigenDecomposition
        Eigenvalues ascending, orthonormal basis columns.
    """
    a = check_symmetric(m, "sym_eig input").copy()
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    q = np.eye(n)
    if n == 1:
        return EigenDecomposition(a[0].copy(), q)

    target = _JACOBI_TOL * math.sqrt(float(np.sum(a * a)))

    def off_mass(mat):
        # Sum of squared off-diagonal entries, computed directly: the
        # ||A||^2 - ||diag||^2 form cancels catastrophically near convergence.
        off = mat.copy()
        np.fill_diagonal(off, 0.0)
        return math.sqrt(float(np.sum(off * off)))

    converged = False
    for sweep in range(max_sweeps):
        off = off_mass(a)
        if off <= target:
            converged = True
            break
        # Classic thresholding: early sweeps skip pivots far below the
        # remaining off-diagonal mass, late sweeps rotate everything.
        thresh = 0.2 * off / n if sweep < 3 else 0.0
        for p in range(n - 1):
            for qq in range(p + 1, n):
                apq = float(a[p, qq])
                if apq == 0.0 or abs(apq) <= thresh:
                    continue
                app = float(a[p, p])
                aqq_d = float(a[qq, qq])
                tau = (aqq_d - app) / (2.0 * apq)
                if not math.isfinite(tau):
                    t = 0.0  # negligible pivot; the explicit zeroing removes it
                elif abs(tau) > 1e150:
                    t = 1.0 / (2.0 * tau)
                elif tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c

                row_p = c * a[p, :] - s * a[qq, :]
                row_q = s * a[p, :] + c * a[qq, :]
                a[p, :] = row_p
                a[qq, :] = row_q
                col_p = c * a[:, p] - s * a[:, qq]
                col_q = s * a[:, p] + c * a[:, qq]
                a[:, p] = col_p
                a[:, qq] = col_q
                # Analytic updates keep the pivot entries exactly consistent.
                a[p, p] = app - t * apq
                a[qq, qq] = aqq_d + t * apq
                a[p, qq] = 0.0
                a[qq, p] = 0.0

                qcol_p = c * q[:, p] - s * q[:, qq]
                qcol_q = s * q[:, p] + c * q[:, qq]
                q[:, p] = qcol_p
                q[:, qq] = qcol_q
    if not converged:
        # The final sweep may have converged without a fresh check.
        off = off_mass(a)
        if off > target:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {off:.3e}, target {target:.3e})"
            )

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], q[:, order])


def spd_min_eig_threshold(eigenvalues):
    """Positive-definiteness threshold: 1e-12 * max(1, max eigenvalue)."""
    return 1e-12 * max(1.0, float(np.max(eigenvalues)))


def is_spd_spectrum(eigenvalues):
    """Whether a spectrum passes the SPD tolerance test."""
    ev = np.asarray(eigenvalues, dtype=float)
    return float(np.min(ev)) > spd_min_eig_threshold(ev)


def _spd_eig(x, name):
    eig = sym_eig(x)
    if not is_spd_spectrum(eig.eigenvalues):
        raise DomainError(
            f"{name} requires a positive definite matrix "
            f"(min eigenvalue {float(np.min(eig.eigenvalues)):.3e})"
        )
    return eig


def solve_lyapunov(x, u):
    """Solve X L + L X = U for symmetric L, with X positive definite.

    Works in the eigenbasis of X: if X = Q diag(w) Q^T then
    L = Q [ (Q^T U Q)_ij / (w_i + w_j) ] Q^T.

    Raises DomainError when X fails the SPD tolerance test.
    """
    u = check_symmetric(u, "solve_lyapunov right-hand side")
    eig = _spd_eig(check_symmetric(x, "solve_lyapunov pencil"), "solve_lyapunov")
    w = eig.eigenvalues
    qt_u_q = eig.basis.T @ u @ eig.basis
    denom = w[:, None] + w[None, :]
    sol = eig.basis @ (qt_u_q / denom) @ eig.basis.T
    return 0.5 * (sol + sol.T)


def spd_sqrt(x):
    """Principal square root of a positive definite matrix.

    Raises DomainError when X fails the SPD tolerance test.
    """
    eig = _spd_eig(check_symmetric(x, "spd_sqrt input"), "spd_sqrt")
    s = (eig.basis * np.sqrt(eig.eigenvalues)) @ eig.basis.T
    return 0.5 * (s + s.T)


def matmul(a, b):
    """Matrix product. Note: the product of two symmetric matrices is not
    symmetrized; triple products like G X G regain symmetry on their own."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ValueError(f"matmul dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def frobenius_norm(a):
    return float(np.sqrt(np.sum(np.asarray(a, dtype=float) ** 2)))


def trace(a):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"trace requires a square matrix, got shape {a.shape}")
    return float(np.trace(a))


def add_scaled(m, n_mat, s):
    """M + s * N with matching shapes."""
    m = np.asarray(m, dtype=float)
    n_mat = np.asarray(n_mat, dtype=float)
    if m.shape != n_mat.shape:
        raise ValueError(f"add_scaled shape mismatch: {m.shape} vs {n_mat.shape}")
    return m + s * n_mat


def cholesky(x):
    """Lower-triangular Cholesky factor of a strictly positive definite matrix.

    Used as a cheap positivity certificate in hot paths; raises DomainError
    on a non-positive pivot.  Tolerance-based SPD validation goes through
    ``sym_eig`` instead.
    """
    a = np.asarray(x, dtype=float)
    n = a.shape[0]
    low = np.zeros_like(a)
    for j in range(n):
        d = a[j, j] - np.dot(low[j, :j], low[j, :j])
        if not d > 0.0 or not np.isfinite(d):
            raise DomainError(f"matrix is not positive definite (pivot {j})")
        low[j, j] = math.sqrt(d)
        if j + 1 < n:
            low[j + 1 :, j] = (a[j + 1 :, j] - low[j + 1 :, :j] @ low[j, :j]) / low[j, j]
    return low
