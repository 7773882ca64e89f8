"""Closed-form misclassification bounds and consistency ratios.

The absolute constants ``c, C, K`` have no published numeric values; the
defaults in :class:`Constants` are indicative only and should be varied when
studying how sharp the bracket is. ``K_g = sqrt(8/3)`` is the psi_2 norm of a
standard normal.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import NamedTuple, Union

from . import model as mm
from .errors import AlphaOutOfRange, ZeroMean
from .model import MixtureModel
from .normal import std_normal_cdf, std_normal_pdf

__all__ = [
    "Constants", "BoundReport", "std_normal_cdf", "std_normal_pdf",
    "gaussian_norm_tail", "c1_tail", "delta", "alpha_for_delta", "minimal_alpha",
    "theorem_bracket", "lemma_bracket", "corollary_ratio", "large_mn_ratio",
    "cz18_ratio", "logm_over_n", "bound_report",
]

K_G_DEFAULT = math.sqrt(8.0 / 3.0)


@dataclass(frozen=True)
class Constants:
    c: float = 0.25
    C: float = 1.0
    K: float = K_G_DEFAULT
    K_g: float = K_G_DEFAULT

    def __post_init__(self):
        for name in ("c", "C", "K", "K_g"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"constant {name} must be a positive finite number, got {value!r}")

    @property
    def c1(self) -> float:
        return 1.0 + self.K_g ** 2 / math.sqrt(self.c)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Constants":
        unknown = set(d) - {"c", "C", "K", "K_g"}
        if unknown:
            raise ValueError(f"unknown constants: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in d.items()})


def gaussian_norm_tail(t: float, constants: Constants = Constants()) -> float:
    """Upper bound ``2 exp(-c t^2 / K_g^4)`` on ``P(| ||g|| - sqrt(n) | >= t)``."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    return 2.0 * math.exp(-constants.c * t * t / constants.K_g ** 4)


def c1_tail(n: int) -> float:
    """``2 e^{-n}``: the tail at ``t = (c1 - 1) sqrt(n)``."""
    return 2.0 * math.exp(-n)


def _lambda_max(model):
    return max(model.lambda_max.values())


def _require_mean(model):
    if model.mu_norm_sq == 0.0:
        raise ZeroMean()


def delta(model: MixtureModel, m: int, constants: Constants = Constants()) -> float:
    """Eigenvector-deviation radius that drives the error bound."""
    _require_mean(model)
    if m < 1:
        raise ValueError("m must be at least 1")
    n = model.n
    mu2 = model.mu_norm_sq
    lam_sum = model.lambda_max[1] + model.lambda_max[-1]
    first = 2 ** 2.5 * constants.c1 * math.sqrt(n * _lambda_max(model) / (m * mu2))
    ratio = 2.0 * n / m
    second = math.sqrt(2.0) * (lam_sum / mu2) * (
        constants.C * constants.K ** 2 * (math.sqrt(ratio) + ratio) + 1.0
    )
    return first + second


def alpha_for_delta(delta_value: float, mu_norm: float, n: int, lambda_max: float,
                    constants: Constants = Constants()) -> float:
    """Smallest alpha satisfying the feasibility inequality for a given delta."""
    if mu_norm <= 0:
        raise ZeroMean()
    return delta_value * (constants.c1 * math.sqrt(n * lambda_max) + mu_norm) / mu_norm


def minimal_alpha(model: MixtureModel, m: int, constants: Constants = Constants()) -> tuple[float, bool]:
    d = delta(model, m, constants)
    alpha = alpha_for_delta(d, math.sqrt(model.mu_norm_sq), model.n, _lambda_max(model), constants)
    return alpha, alpha < 1.0


class TheoremBracket(NamedTuple):
    center: float
    halfwidth: float
    lower: float
    upper: float


def _clamp(p):
    return min(1.0, max(0.0, p))


def theorem_bracket(model: MixtureModel, alpha: float, n: int | None = None) -> TheoremBracket:
    """``Phi(-A) -/+ (alpha A phi((1-alpha) A) + 10 e^{-n})``, clamped to [0, 1]."""
    a = mm.center_A(model)
    if not 0.0 < alpha < 1.0:
        raise AlphaOutOfRange(f"alpha must lie in (0, 1), got {alpha}")
    n = model.n if n is None else n
    center = std_normal_cdf(-a)
    half = alpha * a * std_normal_pdf((1.0 - alpha) * a) + 10.0 * math.exp(-n)
    return TheoremBracket(center, half, _clamp(center - half), _clamp(center + half))


def lemma_bracket(model: MixtureModel, alpha: float, n: int | None = None,
                  j: int | None = None) -> tuple[float, float]:
    """Per-component bracket ``[Phi(-(1+alpha) A_j) - 10e^{-n}, Phi(-(1-alpha) A_j) + 10e^{-n}]``.

    With ``j=None`` the component with the larger ``||Sigma_j^{1/2} mu||`` is
    used, so ``A_j`` equals the theorem's center argument.
    """
    if j is None:
        a = mm.center_A(model)
    else:
        a = mm.center_A_j(model, j)
    if not 0.0 <= alpha < 1.0:
        raise AlphaOutOfRange(f"alpha must lie in [0, 1), got {alpha}")
    n = model.n if n is None else n
    slack = 10.0 * math.exp(-n)
    lower = _clamp(std_normal_cdf(-(1.0 + alpha) * a) - slack)
    upper = _clamp(std_normal_cdf(-(1.0 - alpha) * a) + slack)
    return lower, upper


def corollary_ratio(model: MixtureModel, m: int, n: int | None = None) -> float:
    """``(1/eta) max{n/sqrt(m), n^(1/3), log m}``; consistency needs this to vanish."""
    _require_mean(model)
    n = model.n if n is None else n
    return max(n / math.sqrt(m), n ** (1.0 / 3.0), math.log(m)) / mm.snr_eta(model)


def large_mn_ratio(model: MixtureModel, m: int, n: int | None = None) -> float:
    _require_mean(model)
    n = model.n if n is None else n
    return max(n / math.sqrt(m), n ** (1.0 / 3.0)) / mm.snr_eta(model)


def cz18_ratio(model: MixtureModel, m: int, n: int | None = None) -> float:
    """Competing sufficient condition ``max{n^(1/4), m^(1/2)} / ||mu||`` (isotropic setting)."""
    _require_mean(model)
    n = model.n if n is None else n
    return max(n ** 0.25, math.sqrt(m)) / math.sqrt(model.mu_norm_sq)


def logm_over_n(m: int, n: int) -> float:
    return math.log(m) / n


@dataclass(frozen=True)
class BoundReport:
    delta: float
    alpha_min: float
    feasible: bool
    alpha: float
    center: float
    center_A: float
    theorem_halfwidth: float
    theorem_lower: float
    theorem_upper: float
    lemma_lower: float
    lemma_upper: float
    eta: float
    corollary_ratio: float
    large_mn_ratio: float
    cz18_ratio: float
    logm_over_n: float
    lda: tuple
    constants: Constants

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lda"] = {str(j): dict(zip(("lower", "lda", "upper"), t)) for j, t in zip((-1, 1), self.lda)}
        return d


AlphaPolicy = Union[str, float]


def bound_report(model: MixtureModel, m: int, constants: Constants = Constants(),
                 alpha_policy: AlphaPolicy = "min") -> BoundReport:
    """Every closed-form quantity for ``model`` at sample size ``m``.

    ``alpha_policy="min"`` evaluates the brackets at the smallest admissible
    alpha; a number uses that alpha when it is admissible. Otherwise the
    brackets are reported as the vacuous [0, 1] with ``feasible=False``.
    """
    n = model.n
    d = delta(model, m, constants)
    alpha_min, feasible = minimal_alpha(model, m, constants)
    if alpha_policy == "min":
        alpha = alpha_min
    else:
        alpha = float(alpha_policy)
        feasible = feasible and alpha_min <= alpha < 1.0
    a = mm.center_A(model)
    center = std_normal_cdf(-a)
    if feasible and alpha > 0.0:
        tb = theorem_bracket(model, alpha, n)
        lemma = lemma_bracket(model, alpha, n)
        half, t_lo, t_hi = tb.halfwidth, tb.lower, tb.upper
    else:
        half, t_lo, t_hi = math.nan, 0.0, 1.0
        lemma = (0.0, 1.0)
    return BoundReport(
        delta=d,
        alpha_min=alpha_min,
        feasible=bool(feasible),
        alpha=alpha if feasible else math.nan,
        center=center,
        center_A=a,
        theorem_halfwidth=half,
        theorem_lower=t_lo,
        theorem_upper=t_hi,
        lemma_lower=lemma[0],
        lemma_upper=lemma[1],
        eta=mm.snr_eta(model),
        corollary_ratio=corollary_ratio(model, m, n),
        large_mn_ratio=large_mn_ratio(model, m, n),
        cz18_ratio=cz18_ratio(model, m, n),
        logm_over_n=logm_over_n(m, n),
        lda=tuple(mm.oracle_lda_sandwich(model, j) for j in (-1, 1)),
        constants=constants,
    )
