"""Two-component Gaussian mixture ``X = theta * mu + g``, ``g ~ N(0, Sigma_theta)``.

The label ``theta`` is Rademacher (equal weights). Everything here is a
closed-form function of the model parameters except :func:`sample`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.linalg import solve_triangular

from . import linalg
from .errors import ZeroMean
from .normal import std_normal_cdf

LABELS = (-1, 1)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MixtureModel:
    """Mean offset ``mu`` and the two component covariances.

    Construction validates dimensions and positive definiteness and caches
    the Cholesky factors and extreme eigenvalues of both covariances.
    """

    mu: np.ndarray
    sigma_neg: np.ndarray
    sigma_pos: np.ndarray
    chol: dict = field(init=False, repr=False)
    lambda_max: dict = field(init=False, repr=False)
    lambda_min: dict = field(init=False, repr=False)

    def __post_init__(self):
        mu = np.array(self.mu, dtype=float).reshape(-1)
        neg = linalg.sym_matrix(self.sigma_neg)
        pos = linalg.sym_matrix(self.sigma_pos)
        if not (mu.shape[0] == neg.shape[0] == pos.shape[0]):
            raise ValueError(
                f"dimension mismatch: mu {mu.shape[0]}, sigma_neg {neg.shape[0]}, sigma_pos {pos.shape[0]}"
            )
        if not np.all(np.isfinite(mu)):
            raise ValueError("mu has non-finite entries")
        covs = {-1: neg, 1: pos}
        chol = {j: _readonly(linalg.cholesky(s)) for j, s in covs.items()}
        lam_min = {j: linalg.smallest_eigenvalue(s) for j, s in covs.items()}
        # the two solvers can disagree by an ulp when all eigenvalues coincide
        lam_max = {j: max(linalg.largest_eigenvalue(s), lam_min[j]) for j, s in covs.items()}
        object.__setattr__(self, "mu", _readonly(mu))
        object.__setattr__(self, "sigma_neg", _readonly(neg))
        object.__setattr__(self, "sigma_pos", _readonly(pos))
        object.__setattr__(self, "chol", chol)
        object.__setattr__(self, "lambda_max", lam_max)
        object.__setattr__(self, "lambda_min", lam_min)

    @property
    def n(self) -> int:
        return self.mu.shape[0]

    def sigma(self, j: int) -> np.ndarray:
        if j == 1:
            return self.sigma_pos
        if j == -1:
            return self.sigma_neg
        raise ValueError(f"label must be -1 or +1, got {j}")

    @property
    def mu_norm_sq(self) -> float:
        return float(self.mu @ self.mu)

    @cached_property
    def sigma_avg(self) -> np.ndarray:
        return _readonly(0.5 * (self.sigma_neg + self.sigma_pos))

    @cached_property
    def gamma_sigma(self) -> np.ndarray:
        """Leading eigenvector of the averaged covariance (sign as computed).

        Raises NoConvergence when that eigenvalue is repeated, e.g. isotropic models.
        """
        return _readonly(linalg.leading_eigenpair(self.sigma_avg).vector)

    def to_dict(self) -> dict:
        return {
            "mu": self.mu.tolist(),
            "sigma_neg": self.sigma_neg.tolist(),
            "sigma_pos": self.sigma_pos.tolist(),
        }

    def rotated(self, q: np.ndarray) -> "MixtureModel":
        """The same model in coordinates ``x -> q x`` for orthogonal ``q``."""
        return MixtureModel(q @ self.mu, q @ self.sigma_neg @ q.T, q @ self.sigma_pos @ q.T)


@dataclass(frozen=True)
class LabeledSample:
    x: np.ndarray
    theta: int

    def __post_init__(self):
        if self.theta not in LABELS:
            raise ValueError(f"theta must be -1 or +1, got {self.theta}")


def average_covariance(model: MixtureModel) -> np.ndarray:
    return model.sigma_avg


def sample_arrays(model: MixtureModel, m: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Draw ``m`` observations as ``(X, theta)`` with ``X`` of shape ``(m, n)``.

    Consumption order from ``numpy.random.default_rng(seed)``: all ``m`` label
    bits first, then an ``(m, n)`` block of standard normals (row i is z_i).
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    rng = np.random.default_rng(seed)
    theta = 2 * rng.integers(0, 2, size=m) - 1
    z = rng.standard_normal((m, model.n))
    x = np.empty_like(z)
    for j in LABELS:
        rows = theta == j
        x[rows] = j * model.mu + z[rows] @ model.chol[j].T
    return x, theta


def sample(model: MixtureModel, m: int, seed: int) -> list[LabeledSample]:
    x, theta = sample_arrays(model, m, seed)
    return [LabeledSample(xi, int(t)) for xi, t in zip(x, theta)]


def snr_eta(model: MixtureModel) -> float:
    """||mu||^2 over the largest eigenvalue across both covariances."""
    return model.mu_norm_sq / max(model.lambda_max.values())


def projected_sd(model: MixtureModel, j: int) -> float:
    """``||Sigma_j^{1/2} mu||``, computed as ``sqrt(mu' Sigma_j mu)``."""
    return math.sqrt(float(model.mu @ model.sigma(j) @ model.mu))


def _require_mean(model):
    if model.mu_norm_sq == 0.0:
        raise ZeroMean()


def center_A(model: MixtureModel) -> float:
    _require_mean(model)
    return model.mu_norm_sq / max(projected_sd(model, j) for j in LABELS)


def center_A_j(model: MixtureModel, j: int) -> float:
    _require_mean(model)
    return model.mu_norm_sq / projected_sd(model, j)


def mahalanobis_sq(model: MixtureModel, j: int) -> float:
    """``mu' Sigma_j^{-1} mu`` through the cached Cholesky factor."""
    y = solve_triangular(model.chol[j], model.mu, lower=True)
    return float(y @ y)


def oracle_lda_sandwich(model: MixtureModel, j: int) -> tuple[float, float, float]:
    """(lower, LDA error, upper) for component ``j``.

    The oracle LDA error ``Phi(-sqrt(mu' Sigma_j^{-1} mu))`` lies between
    ``Phi(-sqrt(cond(Sigma_j)) A_j)`` and ``Phi(-A_j)``.
    """
    a_j = center_A_j(model, j)
    cond = model.lambda_max[j] / model.lambda_min[j]
    return (
        std_normal_cdf(-math.sqrt(cond) * a_j),
        std_normal_cdf(-math.sqrt(mahalanobis_sq(model, j))),
        std_normal_cdf(-a_j),
    )
