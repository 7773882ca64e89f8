"""Sign-based spectral clustering on the uncentered second-moment matrix."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import AlignmentUndefined, EmptyInput, LengthMismatch, NoConvergence
from .model import LabeledSample, MixtureModel


class AlignmentMode(enum.Enum):
    ORACLE_SIGMA = "oracle"
    MEAN_DIRECTION = "mean"
    LABEL_FREE = "label-free"


@dataclass(frozen=True)
class ClusterResult:
    gamma: np.ndarray
    predictions: np.ndarray
    scores: np.ndarray
    alignment_mode: AlignmentMode


def _as_matrix(samples) -> np.ndarray:
    if isinstance(samples, np.ndarray):
        x = samples
    else:
        samples = list(samples)
        if not samples:
            raise EmptyInput("no samples")
        x = np.array([s.x if isinstance(s, LabeledSample) else s for s in samples], dtype=float)
    if x.ndim != 2 or x.shape[0] == 0:
        raise EmptyInput("no samples")
    return x


def second_moment(samples) -> np.ndarray:
    """``(1/m) sum_i x_i x_i'`` for a list of samples or an ``(m, n)`` array."""
    x = _as_matrix(samples)
    s = x.T @ x / x.shape[0]
    return 0.5 * (s + s.T)


def reference_direction(model: MixtureModel, mode: AlignmentMode) -> tuple[np.ndarray | None, AlignmentMode]:
    """Vector whose sign convention ``gamma`` is aligned to, and the mode actually used.

    ORACLE_SIGMA needs a simple top eigenvalue of the averaged covariance; when
    it is repeated (isotropic models) the mean direction is used instead.
    """
    if mode is AlignmentMode.LABEL_FREE:
        return None, mode
    if mode is AlignmentMode.ORACLE_SIGMA:
        try:
            return model.gamma_sigma, mode
        except NoConvergence:
            mode = AlignmentMode.MEAN_DIRECTION
    return model.mu, mode


def align_sign(gamma: np.ndarray, model: MixtureModel, mode: AlignmentMode) -> np.ndarray:
    ref, _ = reference_direction(model, mode)
    return align_to(gamma, ref)


def align_to(gamma, ref):
    if ref is None:
        return gamma
    dot = float(gamma @ ref)
    if dot == 0.0:
        raise AlignmentUndefined("eigenvector is orthogonal to the reference direction")
    return gamma if dot > 0 else -gamma


def classify(gamma: np.ndarray, x: np.ndarray) -> int:
    # a zero score counts as +1
    return 1 if float(gamma @ x) >= 0.0 else -1


def classify_all(gamma: np.ndarray, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    scores = x @ gamma
    return np.where(scores >= 0.0, 1, -1), scores


def misclustered_count(predictions, labels) -> int:
    """Disagreements under the better of the two global label assignments."""
    p = np.asarray(predictions)
    t = np.asarray(labels)
    if p.shape != t.shape:
        raise LengthMismatch(f"{p.shape} predictions vs {t.shape} labels")
    if p.size == 0:
        raise EmptyInput("no predictions")
    wrong = int(np.count_nonzero(p != t))
    return min(wrong, p.size - wrong)


def spectral_cluster(samples, model: MixtureModel,
                     mode: AlignmentMode = AlignmentMode.ORACLE_SIGMA,
                     tol: float = 1e-12, max_iter: int = 10000, seed: int = 0) -> ClusterResult:
    """Full pipeline: ``S_m``, its leading eigenvector, sign alignment, and classification."""
    x = _as_matrix(samples)
    pair = linalg.leading_eigenpair(second_moment(x), tol=tol, max_iter=max_iter, seed=seed)
    ref, used = reference_direction(model, mode)
    gamma = align_to(pair.vector, ref)
    predictions, scores = classify_all(gamma, x)
    return ClusterResult(gamma, predictions, scores, used)
