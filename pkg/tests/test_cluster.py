import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spectral_gmm import cluster, model as mm
from spectral_gmm.cluster import AlignmentMode
from spectral_gmm.errors import AlignmentUndefined, EmptyInput, LengthMismatch
from spectral_gmm.model import LabeledSample, MixtureModel

from conftest import random_orthogonal


@pytest.fixture
def aniso_model():
    # Sigma has a simple top eigenvector along e1, parallel to mu
    return MixtureModel([3.0, 0.0, 0.0], np.diag([2.0, 1.0, 0.5]), np.diag([3.0, 1.0, 1.0]))


def test_second_moment_single_sample():
    s = cluster.second_moment([LabeledSample(np.array([1.0, 0.0]), 1)])
    np.testing.assert_array_equal(s, [[1.0, 0.0], [0.0, 0.0]])


def test_second_moment_two_samples():
    s = cluster.second_moment([LabeledSample(np.array([1.0, 0.0]), 1),
                               LabeledSample(np.array([0.0, 1.0]), -1)])
    np.testing.assert_array_equal(s, [[0.5, 0.0], [0.0, 0.5]])


def test_second_moment_empty():
    with pytest.raises(EmptyInput):
        cluster.second_moment([])


def test_second_moment_population_limit(aniso_model):
    m = 100_000
    x, _ = mm.sample_arrays(aniso_model, m, seed=1)
    s = cluster.second_moment(x)
    population = mm.average_covariance(aniso_model) + np.outer(aniso_model.mu, aniso_model.mu)
    products = x[:, :, None] * x[:, None, :]
    assert np.abs(s - population).max() <= 5 * math.sqrt(products.var(axis=0).max() / m)


def test_second_moment_permutation_invariant(rng):
    x = rng.standard_normal((40, 5))
    perm = rng.permutation(40)
    np.testing.assert_allclose(cluster.second_moment(x), cluster.second_moment(x[perm]), rtol=1e-14)


def test_align_sign_oracle_sigma(aniso_model):
    ref = aniso_model.gamma_sigma
    g = np.array([0.6, 0.8, 0.0])
    if ref[0] < 0:
        g = -g
    np.testing.assert_array_equal(cluster.align_sign(g, aniso_model, AlignmentMode.ORACLE_SIGMA), g)
    np.testing.assert_array_equal(cluster.align_sign(-g, aniso_model, AlignmentMode.ORACLE_SIGMA), g)


def test_align_sign_orthogonal_is_undefined(aniso_model):
    with pytest.raises(AlignmentUndefined):
        cluster.align_to(np.array([0.0, 1.0, 0.0]), np.array([1.0, 0.0, 0.0]))
    with pytest.raises(AlignmentUndefined):
        cluster.align_sign(np.array([0.0, 0.0, 1.0]), aniso_model, AlignmentMode.MEAN_DIRECTION)


def test_align_sign_mean_and_label_free(aniso_model):
    g = np.array([-1.0, 0.0, 0.0])
    np.testing.assert_array_equal(cluster.align_sign(g, aniso_model, AlignmentMode.MEAN_DIRECTION), -g)
    np.testing.assert_array_equal(cluster.align_sign(g, aniso_model, AlignmentMode.LABEL_FREE), g)


def test_oracle_alignment_falls_back_to_mean_for_isotropic():
    iso = MixtureModel([0.0, 2.0], np.eye(2), np.eye(2))
    ref, used = cluster.reference_direction(iso, AlignmentMode.ORACLE_SIGMA)
    assert used is AlignmentMode.MEAN_DIRECTION
    np.testing.assert_array_equal(ref, iso.mu)


def test_classify_examples():
    e1 = np.array([1.0, 0.0])
    assert cluster.classify(e1, np.array([0.5, -3.0])) == 1
    assert cluster.classify(e1, np.array([-0.1, 9.0])) == -1
    assert cluster.classify(e1, np.array([0.0, 9.0])) == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3),
       st.lists(st.floats(-1e3, 1e3), min_size=3, max_size=3))
def test_classify_antisymmetric(g, x):
    g, x = np.array(g), np.array(x)
    if np.linalg.norm(g) == 0 or g @ x == 0:
        return
    g = g / np.linalg.norm(g)
    if g @ x == 0:
        return
    assert cluster.classify(-g, x) == -cluster.classify(g, x)


def test_misclustered_count_examples():
    labels = np.array([1, -1, 1, 1, -1])
    assert cluster.misclustered_count(labels, labels) == 0
    assert cluster.misclustered_count(-labels, labels) == 0
    assert cluster.misclustered_count([1, 1, 1, -1], [1, 1, 1, 1]) == 1


def test_misclustered_count_errors():
    with pytest.raises(LengthMismatch):
        cluster.misclustered_count([1, 1], [1])
    with pytest.raises(EmptyInput):
        cluster.misclustered_count([], [])


@settings(max_examples=100)
@given(st.lists(st.tuples(st.sampled_from([-1, 1]), st.sampled_from([-1, 1])), min_size=1, max_size=50))
def test_misclustered_count_sign_flip_invariant(pairs):
    p = np.array([a for a, _ in pairs])
    t = np.array([b for _, b in pairs])
    k = cluster.misclustered_count(p, t)
    assert k == cluster.misclustered_count(-p, t)
    assert 0 <= k <= len(pairs) // 2


def test_pipeline_result_invariants(aniso_model):
    samples = mm.sample(aniso_model, 500, seed=3)
    res = cluster.spectral_cluster(samples, aniso_model)
    assert np.linalg.norm(res.gamma) == pytest.approx(1.0, abs=1e-12)
    assert np.array_equal(res.predictions == 1, res.scores >= 0)
    assert res.gamma @ aniso_model.gamma_sigma > 0
    assert res.alignment_mode is AlignmentMode.ORACLE_SIGMA


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_pipeline_rotation_equivariance(aniso_model, seed):
    rng = np.random.default_rng(seed)
    q = random_orthogonal(3, rng)
    x, theta = mm.sample_arrays(aniso_model, 400, seed=seed)
    res = cluster.spectral_cluster(x, aniso_model, AlignmentMode.MEAN_DIRECTION)
    rotated = cluster.spectral_cluster(x @ q.T, aniso_model.rotated(q), AlignmentMode.MEAN_DIRECTION)
    np.testing.assert_allclose(rotated.gamma, q @ res.gamma, atol=1e-8)
    np.testing.assert_allclose(rotated.scores, res.scores, atol=1e-8)
    np.testing.assert_array_equal(rotated.predictions, res.predictions)
    assert cluster.misclustered_count(rotated.predictions, theta) == cluster.misclustered_count(res.predictions, theta)


def test_conditional_rates_symmetric_when_covariances_equal():
    cov = np.diag([1.0, 1.0, 1.0, 1.0])
    model = MixtureModel([1.5, 0.0, 0.0, 0.0], cov, cov)
    miss = {1: 0, -1: 0}
    count = {1: 0, -1: 0}
    for seed in range(100):
        x, theta = mm.sample_arrays(model, 1000, seed=seed)
        res = cluster.spectral_cluster(x, model, AlignmentMode.MEAN_DIRECTION, seed=seed)
        for j in (1, -1):
            rows = theta == j
            miss[j] += int(np.count_nonzero(res.predictions[rows] != j))
            count[j] += int(rows.sum())
    p_pos, p_neg = miss[1] / count[1], miss[-1] / count[-1]
    p = (miss[1] + miss[-1]) / (count[1] + count[-1])
    se = math.sqrt(p * (1 - p) * (1 / count[1] + 1 / count[-1]))
    assert abs(p_pos - p_neg) <= 3 * se
