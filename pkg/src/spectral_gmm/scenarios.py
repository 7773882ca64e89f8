"""Named model presets and the model JSON format.

A model file is either inline::

    {"mu": [...], "sigma_neg": [[...]], "sigma_pos": [[...]]}

or a preset::

    {"scenario": "isotropic", "params": {"n": 50, "mu_norm": 2.0}}
"""
from __future__ import annotations

import numpy as np

from .errors import BadScenarioParams, ConfigError, NotPositiveDefinite
from .model import MixtureModel

INLINE_NAME = "custom"


def _mean(n, params):
    if "mu" in params and "mu_norm" in params:
        raise BadScenarioParams("give either mu or mu_norm, not both")
    if "mu" in params:
        mu = np.asarray(params["mu"], dtype=float)
        if mu.shape != (n,):
            raise BadScenarioParams(f"mu must have length n={n}, got shape {mu.shape}")
        return mu
    mu = np.zeros(n)
    mu[0] = float(params.get("mu_norm", 1.0))
    return mu


def _dim(params):
    n = params.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise BadScenarioParams(f"n must be a positive integer, got {n!r}")
    return n


def _check_keys(name, params, allowed):
    unknown = set(params) - set(allowed)
    if unknown:
        raise BadScenarioParams(f"unknown {name} params: {sorted(unknown)}")


def isotropic(n: int, sigma: float = 1.0, mu=None, mu_norm=None) -> MixtureModel:
    params = {"n": n, "sigma": sigma}
    if mu is not None:
        params["mu"] = mu
    if mu_norm is not None:
        params["mu_norm"] = mu_norm
    return build("isotropic", params)


def _isotropic(p):
    _check_keys("isotropic", p, {"n", "sigma", "mu", "mu_norm"})
    n = _dim(p)
    sigma = float(p.get("sigma", 1.0))
    if not sigma > 0:
        raise BadScenarioParams("sigma must be positive")
    cov = sigma ** 2 * np.eye(n)
    return MixtureModel(_mean(n, p), cov, cov)


def _variances(value, n, name):
    v = np.asarray(value, dtype=float)
    if v.ndim == 0:
        v = np.full(n, float(v))
    if v.shape != (n,) or not np.all(v > 0):
        raise BadScenarioParams(f"{name} must be positive, scalar or length {n}")
    return np.diag(v)


def _hetero_diag(p):
    _check_keys("hetero_diag", p, {"n", "mu", "mu_norm", "var_neg", "var_pos"})
    n = _dim(p)
    if "var_neg" not in p or "var_pos" not in p:
        raise BadScenarioParams("hetero_diag needs var_neg and var_pos")
    return MixtureModel(_mean(n, p), _variances(p["var_neg"], n, "var_neg"),
                        _variances(p["var_pos"], n, "var_pos"))


def _allometric(p):
    """``Sigma_j = a_j P + b_j (I - P)`` with ``P`` the projector onto ``mu``; ``a_j > b_j > 0``."""
    _check_keys("allometric", p, {"n", "mu", "mu_norm", "a", "b"})
    n = _dim(p)
    mu = _mean(n, p)
    norm = np.linalg.norm(mu)
    if norm == 0:
        raise BadScenarioParams("allometric needs mu != 0 to define its principal direction")
    try:
        a_neg, a_pos = (float(v) for v in p["a"])
        b_neg, b_pos = (float(v) for v in p["b"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadScenarioParams("allometric needs a=[a_neg, a_pos] and b=[b_neg, b_pos]") from exc
    if not (a_neg > b_neg > 0 and a_pos > b_pos > 0):
        raise BadScenarioParams("allometric requires a_j > b_j > 0")
    u = mu / norm
    proj = np.outer(u, u)
    rest = np.eye(n) - proj
    return MixtureModel(mu, a_neg * proj + b_neg * rest, a_pos * proj + b_pos * rest)


def random_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def _general(p):
    _check_keys("general", p, {"n", "seed", "mu_norm", "eig_range"})
    n = _dim(p)
    if "seed" not in p:
        raise BadScenarioParams("general needs a seed")
    lo, hi = (float(v) for v in p.get("eig_range", (0.5, 2.0)))
    if not 0 < lo <= hi:
        raise BadScenarioParams("eig_range must satisfy 0 < lo <= hi")
    rng = np.random.default_rng(int(p["seed"]))
    direction = rng.standard_normal(n)
    mu = float(p.get("mu_norm", 2.0)) * direction / np.linalg.norm(direction)
    covs = []
    for _ in range(2):
        q = random_orthogonal(n, rng)
        covs.append((q * rng.uniform(lo, hi, size=n)) @ q.T)
    return MixtureModel(mu, covs[0], covs[1])


SCENARIOS = {
    "isotropic": _isotropic,
    "hetero_diag": _hetero_diag,
    "allometric": _allometric,
    "general": _general,
}


def build(name: str, params: dict) -> MixtureModel:
    if name not in SCENARIOS:
        raise BadScenarioParams(f"unknown scenario {name!r}; choose from {sorted(SCENARIOS)}")
    try:
        return SCENARIOS[name](dict(params))
    except NotPositiveDefinite as exc:
        raise BadScenarioParams(str(exc)) from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, BadScenarioParams):
            raise
        raise BadScenarioParams(str(exc)) from exc


def model_from_spec(spec: dict) -> tuple[MixtureModel, str]:
    """Parse a model JSON object; returns the model and its scenario label."""
    if not isinstance(spec, dict):
        raise ConfigError("model spec must be a JSON object")
    if "scenario" in spec:
        unknown = set(spec) - {"scenario", "params"}
        if unknown:
            raise ConfigError(f"unknown model keys: {sorted(unknown)}")
        return build(spec["scenario"], spec.get("params", {})), spec["scenario"]
    keys = {"mu", "sigma_neg", "sigma_pos"}
    if set(spec) != keys:
        raise ConfigError(f"inline model needs exactly {sorted(keys)}, got {sorted(spec)}")
    return MixtureModel(spec["mu"], spec["sigma_neg"], spec["sigma_pos"]), INLINE_NAME
