"""Cyclic Jacobi routines for small dense real matrices.

Two variants: the classical two-sided iteration for symmetric
eigendecompositions, and the one-sided (Hestenes) iteration for singular
values.  The one-sided form works on the matrix itself rather than on
``a.T @ a``, which keeps tiny and zero singular values accurate to machine
precision instead of ``sqrt(eps)``.  Both converge quadratically and are
comfortable at the block sizes this package allows (n <= 64).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import EigenSolverError

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100


def _off_norm(a):
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def symmetric_eigen(matrix, off_tol=OFF_DIAGONAL_TOL, max_sweeps=MAX_SWEEPS, block_index=0):
    """Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    columns ``v`` such that ``matrix = v @ diag(w) @ v.T``.  Convergence is
    declared when the off-diagonal Frobenius norm falls below
    ``off_tol * max(1, ||matrix||_F)``; failing that after ``max_sweeps``
    sweeps raises :class:`EigenSolverError` tagged with ``block_index``.
    """
    a = np.array(matrix, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise EigenSolverError(block_index, "matrix must be square")
    if n == 0:
        return np.array([]), np.zeros((0, 0))
    if not np.all(np.isfinite(a)):
        raise EigenSolverError(block_index, "matrix has non-finite entries")
    sym_gap = np.max(np.abs(a - a.T)) if n > 1 else 0.0
    if sym_gap > 1e-10 * (1.0 + np.max(np.abs(a))):
        raise EigenSolverError(block_index, "matrix is not symmetric")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    if n == 1:
        return a[0].copy(), v
    threshold = off_tol * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        if _off_norm(a) <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                # rotation angle that annihilates a[p, q]
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.hypot(1.0, theta)) if theta != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
    else:
        raise EigenSolverError(
            block_index,
            f"off-diagonal norm {_off_norm(a):.3e} above {threshold:.3e} "
            f"after {max_sweeps} sweeps",
        )
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]


def one_sided_svd(matrix, off_tol=OFF_DIAGONAL_TOL, max_sweeps=MAX_SWEEPS, block_index=0):
    """Singular values and right singular vectors by one-sided Jacobi sweeps.

    Rotates pairs of columns of ``matrix`` until they are mutually orthogonal
    relative to ``off_tol``; the column norms are then the singular values and
    the accumulated rotations the right singular vectors.  Returns ``(s, v)``
    with ``s`` descending and ``matrix.T @ matrix = v @ diag(s**2) @ v.T``.
    """
    b = np.array(matrix, dtype=float)
    n = b.shape[0]
    if b.shape != (n, n):
        raise EigenSolverError(block_index, "matrix must be square")
    if not np.all(np.isfinite(b)):
        raise EigenSolverError(block_index, "matrix has non-finite entries")
    v = np.eye(n)
    if n > 1:
        for _ in range(max_sweeps):
            rotated = False
            for p in range(n - 1):
                for q in range(p + 1, n):
                    gamma = float(b[:, p] @ b[:, q])
                    if gamma == 0.0:
                        continue
                    alpha = float(b[:, p] @ b[:, p])
                    beta = float(b[:, q] @ b[:, q])
                    if abs(gamma) <= off_tol * math.sqrt(alpha * beta):
                        continue
                    zeta = (beta - alpha) / (2.0 * gamma)
                    t = np.sign(zeta) / (abs(zeta) + np.hypot(1.0, zeta)) if zeta != 0 else 1.0
                    c = 1.0 / np.hypot(1.0, t)
                    s = t * c
                    col_p = b[:, p].copy()
                    col_q = b[:, q].copy()
                    b[:, p] = c * col_p - s * col_q
                    b[:, q] = s * col_p + c * col_q
                    vec_p = v[:, p].copy()
                    vec_q = v[:, q].copy()
                    v[:, p] = c * vec_p - s * vec_q
                    v[:, q] = s * vec_p + c * vec_q
                    rotated = True
            if not rotated:
                break
        else:
            raise EigenSolverError(
                block_index, f"columns not orthogonal after {max_sweeps} sweeps"
            )
    sv = np.linalg.norm(b, axis=0)
    order = np.argsort(-sv, kind="stable")
    return sv[order], v[:, order]
