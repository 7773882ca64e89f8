import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectral_gmm import model as mm
from spectral_gmm.errors import NotPositiveDefinite, ZeroMean
from spectral_gmm.model import LabeledSample, MixtureModel

from conftest import random_model, random_orthogonal, random_spd

# Phi values from mpmath quadrature of the normal density (40 digits)
PHI_M1 = 0.15865525393145705141
PHI_M2 = 0.022750131948179207200


def test_model_validates_dimensions():
    with pytest.raises(ValueError):
        MixtureModel([1.0, 0.0, 0.0], np.eye(2), np.eye(2))


def test_model_rejects_non_pd_covariance():
    with pytest.raises(NotPositiveDefinite):
        MixtureModel([1.0, 0.0], np.eye(2), [[1.0, 2.0], [2.0, 1.0]])


def test_model_is_immutable(worked_model):
    with pytest.raises(ValueError):
        worked_model.mu[0] = 5.0
    with pytest.raises(AttributeError):
        worked_model.mu = np.zeros(2)


def test_cached_eigenvalues(worked_model):
    assert worked_model.lambda_max[1] == pytest.approx(4.0)
    assert worked_model.lambda_min[1] == pytest.approx(1.0)
    assert worked_model.lambda_max[-1] == pytest.approx(1.0)
    for j in (-1, 1):
        assert worked_model.lambda_max[j] >= worked_model.lambda_min[j] > 0


def test_labeled_sample_rejects_bad_label():
    with pytest.raises(ValueError):
        LabeledSample(np.zeros(2), 0)


def test_average_covariance_identity():
    m = MixtureModel([1.0, 0.0], np.eye(2), np.eye(2))
    np.testing.assert_array_equal(mm.average_covariance(m), np.eye(2))


def test_average_covariance_diagonal():
    m = MixtureModel([1.0, 0.0], np.diag([2.0, 0.5]), np.diag([4.0, 1.0]))
    np.testing.assert_array_equal(mm.average_covariance(m), np.diag([3.0, 0.75]))


def test_average_covariance_random_pair(rng):
    a, b = random_spd(rng, 5), random_spd(rng, 5)
    m = MixtureModel(np.ones(5), a, b)
    avg = mm.average_covariance(m)
    np.testing.assert_allclose(avg, (a + b) / 2, rtol=1e-15, atol=1e-15)
    assert np.array_equal(avg, avg.T)
    assert np.all(np.linalg.eigvalsh(avg) > 0)


def test_sample_is_deterministic(worked_model):
    s1 = mm.sample(worked_model, 50, seed=11)
    s2 = mm.sample(worked_model, 50, seed=11)
    assert [s.theta for s in s1] == [s.theta for s in s2]
    assert all(np.array_equal(a.x, b.x) for a, b in zip(s1, s2))
    s3 = mm.sample(worked_model, 50, seed=12)
    assert any(not np.array_equal(a.x, b.x) for a, b in zip(s1, s3))


def test_sample_arrays_match_list_form(worked_model):
    x, theta = mm.sample_arrays(worked_model, 20, seed=4)
    samples = mm.sample(worked_model, 20, seed=4)
    np.testing.assert_array_equal(x, np.array([s.x for s in samples]))
    np.testing.assert_array_equal(theta, [s.theta for s in samples])
    assert set(np.unique(theta)) <= {-1, 1}


def test_sample_symmetric_model_has_zero_mean():
    n, m = 3, 10_000
    model = MixtureModel(np.zeros(n), np.eye(n), np.eye(n))
    x, _ = mm.sample_arrays(model, m, seed=1)
    assert np.all(np.abs(x.mean(axis=0)) <= 4 / math.sqrt(m) * math.sqrt(n))


def test_sample_conditional_mean(worked_model):
    x, theta = mm.sample_arrays(worked_model, 100_000, seed=2)
    pos = x[theta == 1]
    tol = 4 * math.sqrt(worked_model.lambda_max[1] / len(pos))
    np.testing.assert_allclose(pos.mean(axis=0), [2.0, 0.0], atol=tol)
    neg = x[theta == -1]
    np.testing.assert_allclose(neg.mean(axis=0), [-2.0, 0.0], atol=4 * math.sqrt(1.0 / len(neg)))


def test_sample_conditional_covariance(worked_model):
    x, theta = mm.sample_arrays(worked_model, 100_000, seed=3)
    cov = np.cov(x[theta == 1].T)
    np.testing.assert_allclose(cov, np.diag([4.0, 1.0]), atol=0.06)


def test_second_moment_converges_to_population():
    model = MixtureModel([1.0, -0.5, 0.0], [[1.0, 0.3, 0.0], [0.3, 2.0, 0.1], [0.0, 0.1, 0.5]],
                         [[2.0, 0.0, 0.2], [0.0, 1.0, 0.0], [0.2, 0.0, 1.5]])
    m = 100_000
    x, _ = mm.sample_arrays(model, m, seed=8)
    s = x.T @ x / m
    population = mm.average_covariance(model) + np.outer(model.mu, model.mu)
    products = x[:, :, None] * x[:, None, :]
    maxvar = products.var(axis=0).max()
    assert np.abs(s - population).max() <= 5 * math.sqrt(maxvar / m)


def test_snr_eta_examples(worked_model):
    iso = MixtureModel([2.0, 0.0], np.eye(2), np.eye(2))
    assert mm.snr_eta(iso) == pytest.approx(4.0, rel=1e-12)
    assert mm.snr_eta(MixtureModel([0.0, 0.0], np.eye(2), np.eye(2))) == 0.0
    assert mm.snr_eta(worked_model) == pytest.approx(1.0, rel=1e-12)


def test_center_A_isotropic_reduction():
    sigma = 1.7
    mu = np.array([1.0, 2.0, -2.0])
    cov = sigma ** 2 * np.eye(3)
    assert mm.center_A(MixtureModel(mu, cov, cov)) == pytest.approx(3.0 / sigma, rel=1e-14)


def test_center_A_worked(worked_model):
    assert mm.center_A(worked_model) == pytest.approx(1.0, rel=1e-15)
    assert mm.center_A_j(worked_model, -1) == pytest.approx(2.0, rel=1e-15)


def test_center_A_zero_mean():
    with pytest.raises(ZeroMean):
        mm.center_A(MixtureModel([0.0, 0.0], np.eye(2), np.eye(2)))


def test_lda_sandwich_identity():
    mu = np.array([1.2, -0.5])
    m = MixtureModel(mu, np.eye(2), np.eye(2))
    expected = 0.5 * math.erfc(np.linalg.norm(mu) / math.sqrt(2))
    for v in mm.oracle_lda_sandwich(m, 1):
        assert v == pytest.approx(expected, rel=1e-12)


def test_lda_sandwich_worked(worked_model):
    lower, lda, upper = mm.oracle_lda_sandwich(worked_model, 1)
    assert mm.mahalanobis_sq(worked_model, 1) == pytest.approx(1.0, rel=1e-14)
    assert lower == pytest.approx(PHI_M2, rel=1e-12)
    assert lda == pytest.approx(PHI_M1, rel=1e-12)
    assert upper == pytest.approx(PHI_M1, rel=1e-12)


def test_lda_sandwich_zero_mean():
    with pytest.raises(ZeroMean):
        mm.oracle_lda_sandwich(MixtureModel([0.0], [[1.0]], [[1.0]]), 1)


def test_lda_sandwich_ordering_random_draws():
    rng = np.random.default_rng(99)
    for _ in range(100):
        model = random_model(rng, int(rng.integers(1, 21)))
        for j in (-1, 1):
            lower, lda, upper = mm.oracle_lda_sandwich(model, j)
            assert lower <= lda + 1e-12 and lda <= upper + 1e-12


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_projection_inequality_chain(n, seed):
    # ||mu||^2/||S^{1/2} mu|| <= sqrt(mu' S^{-1} mu) <= sqrt(cond) ||mu||^2/||S^{1/2} mu||
    rng = np.random.default_rng(seed)
    model = random_model(rng, n)
    for j in (-1, 1):
        a_j = mm.center_A_j(model, j)
        maha = math.sqrt(mm.mahalanobis_sq(model, j))
        cond = model.lambda_max[j] / model.lambda_min[j]
        assert a_j <= maha * (1 + 1e-10)
        assert maha <= math.sqrt(cond) * a_j * (1 + 1e-10)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 8), seed=st.integers(0, 2**32 - 1))
def test_eta_and_A_rotation_invariant(n, seed):
    rng = np.random.default_rng(seed)
    model = random_model(rng, n)
    rotated = model.rotated(random_orthogonal(n, rng))
    assert mm.snr_eta(rotated) == pytest.approx(mm.snr_eta(model), rel=1e-10)
    assert mm.center_A(rotated) == pytest.approx(mm.center_A(model), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.floats(0.01, 100.0))
def test_eta_scales_quadratically(seed, c):
    rng = np.random.default_rng(seed)
    model = random_model(rng, 4)
    scaled = MixtureModel(c * model.mu, model.sigma_neg, model.sigma_pos)
    assert mm.snr_eta(scaled) == pytest.approx(c * c * mm.snr_eta(model), rel=1e-12)
