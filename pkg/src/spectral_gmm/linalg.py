"""Dense symmetric linear algebra: Cholesky, power iteration, Jacobi oracle.

Matrices are plain ``numpy.ndarray`` objects of shape ``(n, n)``;
:func:`sym_matrix` is the validating constructor used at module boundaries.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NoConvergence, NotPositiveDefinite

EPS = np.finfo(float).eps
ORACLE_MAX_DIM = 64
# relative closeness of the deflated Rayleigh quotient to lambda_1 that counts as a tie
GAP_RTOL = 1e-9


class EigenPair(NamedTuple):
    value: float
    vector: np.ndarray


def sym_matrix(entries, rtol: float = 1e-12) -> np.ndarray:
    """Return ``entries`` as an exactly symmetric float array.

    Asymmetry up to ``rtol`` (relative to the largest entry) is averaged away;
    anything larger is rejected.
    """
    a = np.array(entries, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    scale = np.max(np.abs(a))
    if np.max(np.abs(a - a.T)) > rtol * max(scale, np.finfo(float).tiny):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def cholesky(a: np.ndarray) -> np.ndarray:
    """Lower-triangular ``L`` with ``a = L @ L.T``.

    Raises NotPositiveDefinite when a pivot falls below ``n * eps * ||a||_F``.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    threshold = n * EPS * np.linalg.norm(a)
    L = np.zeros_like(a)
    for j in range(n):
        row = L[j, :j]
        pivot = a[j, j] - row @ row
        if not pivot > threshold:
            raise NotPositiveDefinite(
                f"pivot {pivot:.3e} at index {j} is not above {threshold:.3e}"
            )
        d = np.sqrt(pivot)
        L[j, j] = d
        if j + 1 < n:
            L[j + 1:, j] = (a[j + 1:, j] - L[j + 1:, :j] @ row) / d
    return L


def _unit_start(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def _power_iterate(a, v, tol, max_iter):
    """Run power iteration from unit ``v``; return (lambda, v, converged)."""
    lam = 0.0
    for _ in range(max_iter):
        w = a @ v
        lam = float(v @ w)
        resid = np.linalg.norm(w - lam * v)
        if resid <= tol * abs(lam) or resid == 0.0:
            return lam, v, True
        v = w / np.linalg.norm(w)
    return lam, v, False


def _second_rayleigh(a, lam, v, seed, max_iter=500):
    """Power iteration on the deflated operator ``a - lam v v^T``; returns its Rayleigh quotient."""
    n = a.shape[0]
    if n == 1:
        return -np.inf
    x = _unit_start(n, seed + 1)
    x -= (v @ x) * v
    norm = np.linalg.norm(x)
    if norm == 0.0:
        return -np.inf
    x /= norm
    rho = -np.inf
    threshold = lam * (1.0 - GAP_RTOL)
    for _ in range(max_iter):
        y = a @ x
        y -= (v @ y) * v
        rho_new = float(x @ y)
        if rho_new >= threshold:
            return rho_new
        if abs(rho_new - rho) <= 1e-15 * abs(lam):
            return rho_new
        rho = rho_new
        norm = np.linalg.norm(y)
        if norm == 0.0:
            return rho
        x = y / norm
    return rho


def leading_eigenpair(a, tol: float = 1e-12, max_iter: int = 10000, seed: int = 0,
                      check_gap: bool = True) -> EigenPair:
    """Largest eigenpair of a symmetric PSD matrix by power iteration.

    Converged when ``||a v - lambda v|| <= tol * lambda``. The sign of the
    returned vector is whatever the iteration produced; callers align it.

    With ``check_gap`` a short deflated iteration probes for a second eigenvalue
    tied with the first, in which case the eigenvector is not unique and
    NoConvergence is raised.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(a, dtype=float)
    v0 = _unit_start(a.shape[0], seed)
    lam, v, converged = _power_iterate(a, v0, tol, max_iter)
    if not converged:
        raise NoConvergence(max_iter)
    v = v / np.linalg.norm(v)
    if check_gap and _second_rayleigh(a, lam, v, seed) >= lam * (1.0 - GAP_RTOL):
        raise NoConvergence(max_iter, "leading eigenvalue is repeated; eigenvector is not unique")
    return EigenPair(lam, v)


def largest_eigenvalue(a, tol: float = 1e-12, max_iter: int = 10000, seed: int = 0) -> float:
    """lambda_1 of a symmetric PSD matrix.

    Ties are fine here, and if the vector has not settled after ``max_iter``
    steps the Rayleigh quotient (accurate to second order) is returned.
    """
    a = np.asarray(a, dtype=float)
    lam, _, _ = _power_iterate(a, _unit_start(a.shape[0], seed), tol, max_iter)
    return lam


def full_eigen_oracle(a, max_sweeps: int = 60) -> list[EigenPair]:
    """All eigenpairs by cyclic Jacobi rotations, sorted by descending value."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n > ORACLE_MAX_DIM:
        raise ValueError(f"oracle limited to dim <= {ORACLE_MAX_DIM}, got {n}")
    V = np.eye(n)
    stop = 4 * EPS * np.linalg.norm(a)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2))
        if off <= stop:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                g = 100.0 * abs(apq)
                if abs(a[p, p]) + g == abs(a[p, p]) and abs(a[q, q]) + g == abs(a[q, q]):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = a[q, q] - a[p, p]
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    values = np.diag(a)
    order = np.argsort(-values, kind="stable")
    return [EigenPair(float(values[k]), V[:, k].copy()) for k in order]


def smallest_eigenvalue(a, tol: float = 1e-13, max_iter: int = 10000, seed: int = 0) -> float:
    """lambda_n of a symmetric positive definite matrix.

    Jacobi for ``dim <= 64``, inverse power iteration through the Cholesky
    factor above that. NotPositiveDefinite propagates from the factorization.
    """
    a = np.asarray(a, dtype=float)
    L = cholesky(a)
    n = a.shape[0]
    if n <= ORACLE_MAX_DIM:
        return full_eigen_oracle(a)[-1].value
    v = _unit_start(n, seed)
    mu = np.inf
    for _ in range(max_iter):
        w = solve_triangular(L.T, solve_triangular(L, v, lower=True), lower=False)
        mu_new = float(v @ w)  # Rayleigh quotient of a^{-1}
        v = w / np.linalg.norm(w)
        if abs(mu_new - mu) <= tol * mu_new:
            break
        mu = mu_new
    return float(v @ (a @ v))
