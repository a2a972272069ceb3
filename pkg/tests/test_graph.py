import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dgeseg.graph import (
    bump_weights,
    cosine_affinity,
    local_average,
    make_bump_kernel,
    semantic_shrink,
    temporal_shrink,
)


def random_symmetric(rng, N, lo=0.0, hi=1.0):
    A = rng.uniform(lo, hi, size=(N, N))
    return 0.5 * (A + A.T)


def test_cosine_affinity_reference_values():
    Y = np.array([[1.0, 0.0], [3.0, 0.0], [0.0, 2.0], [-1.0, 0.0]])
    G = cosine_affinity(Y, 0.3)
    assert G[0, 1] == pytest.approx(1.0)
    assert G[0, 2] == pytest.approx(math.exp(-1 / 0.3), rel=1e-12)
    assert G[0, 2] == pytest.approx(0.03567, abs=1e-5)
    assert G[0, 3] == pytest.approx(math.exp(-2 / 0.3), rel=1e-12)
    assert G[0, 3] == pytest.approx(1.27e-3, abs=1e-5)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.01, 2.0))
def test_cosine_affinity_properties(seed, l):
    Y = np.random.default_rng(seed).normal(size=(12, 4))
    G = cosine_affinity(Y, l)
    np.testing.assert_array_equal(G, G.T)
    np.testing.assert_array_equal(np.diag(G), 1.0)
    assert np.all(G > 0) and np.all(G <= 1.0)


def test_zero_row_gets_zero_similarity_with_warning(caplog):
    Y = np.array([[1.0, 0.0], [0.0, 0.0], [0.5, 0.5]])
    with caplog.at_level(logging.WARNING):
        G = cosine_affinity(Y, 0.5)
    assert "all-zero" in caplog.text
    assert G[0, 1] == pytest.approx(math.exp(-1 / 0.5))
    assert G[1, 1] == 1.0


def test_bump_kernel_small_sizes():
    np.testing.assert_array_equal(make_bump_kernel(1), [[1.0]])
    raw = np.array([math.exp(-4 / 3), math.exp(-1), math.exp(-4 / 3)])
    np.testing.assert_allclose(bump_weights(3), raw / raw.sum(), rtol=1e-14)
    np.testing.assert_allclose(bump_weights(3), [0.2945, 0.4110, 0.2945], atol=1e-4)


@pytest.mark.parametrize("p", [1, 3, 5, 7, 51])
def test_bump_kernel_normalized_and_symmetric(p):
    K = make_bump_kernel(p)
    assert K.shape == (p, p)
    assert abs(K.sum() - 1.0) < 1e-12
    np.testing.assert_allclose(K, K[::-1], rtol=1e-15)
    np.testing.assert_allclose(K, K[:, ::-1], rtol=1e-15)
    assert np.all(K > 0)


@pytest.mark.parametrize("p", [0, 2, -3, 4])
def test_bump_kernel_rejects_bad_size(p):
    with pytest.raises(ValueError):
        make_bump_kernel(p)


def brute_local_average(G, K):
    # truncated, renormalized 2-D convolution by direct summation
    N = G.shape[0]
    r = K.shape[0] // 2
    out = np.zeros_like(G)
    for a in range(N):
        for b in range(N):
            num = den = 0.0
            for u in range(-r, r + 1):
                for v in range(-r, r + 1):
                    if 0 <= a + u < N and 0 <= b + v < N:
                        w = K[u + r, v + r]
                        num += w * G[a + u, b + v]
                        den += w
            out[a, b] = num / den
    return out


def test_local_average_matches_direct_convolution():
    rng = np.random.default_rng(5)
    G = random_symmetric(rng, 6)
    K = make_bump_kernel(3)
    ref = brute_local_average(G, K)
    out = local_average(G, K)
    np.testing.assert_allclose(out[2, 3], ref[2, 3], rtol=1e-13)
    np.testing.assert_allclose(out, ref, rtol=1e-13)
    G7 = random_symmetric(rng, 9)
    np.testing.assert_allclose(local_average(G7, make_bump_kernel(5)),
                               brute_local_average(G7, make_bump_kernel(5)), rtol=1e-13)


def test_local_average_trivial_cases():
    G = np.full((7, 7), 0.42)
    np.testing.assert_allclose(local_average(G, make_bump_kernel(3)), G, rtol=1e-14)
    R = random_symmetric(np.random.default_rng(0), 7)
    np.testing.assert_array_equal(local_average(R, make_bump_kernel(1)), R)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([3, 5, 7]))
def test_local_average_range_symmetry_and_reversal(seed, p):
    G = random_symmetric(np.random.default_rng(seed), 10)
    K = make_bump_kernel(p)
    out = local_average(G, K)
    np.testing.assert_array_equal(out, out.T)
    assert out.min() >= G.min() - 1e-14 and out.max() <= G.max() + 1e-14
    # reversing time commutes with averaging
    np.testing.assert_allclose(local_average(G[::-1, ::-1], K), out[::-1, ::-1], rtol=1e-12)


def test_temporal_shrink_examples():
    G = np.full((12, 12), 0.5)
    out = temporal_shrink(G, 0.3)
    assert out[5, 9] == pytest.approx(0.35)
    assert out[5, 6] == 0.5 and out[6, 5] == 0.5
    np.testing.assert_array_equal(np.diag(out), np.diag(G))


def test_temporal_shrink_rejects_bad_eta():
    with pytest.raises(ValueError):
        temporal_shrink(np.eye(3), 1.0)
    with pytest.raises(ValueError):
        temporal_shrink(np.eye(3), -0.1)


def test_semantic_shrink_examples():
    G = np.full((8, 8), 0.4)
    labels = np.zeros(8, dtype=int)
    np.testing.assert_array_equal(semantic_shrink(G, labels, 0.1), G)
    labels[7] = 1
    out = semantic_shrink(G, labels, 0.1)
    assert out[2, 7] == pytest.approx(0.36)
    assert out[2, 3] == 0.4


def test_semantic_shrink_composes_multiplicatively():
    rng = np.random.default_rng(9)
    G = random_symmetric(rng, 10)
    labels = rng.integers(0, 3, 10)
    mu = 0.17
    twice = semantic_shrink(semantic_shrink(G, labels, mu), labels, mu)
    once = semantic_shrink(G, labels, 1 - (1 - mu) ** 2)
    np.testing.assert_allclose(twice, once, rtol=1e-14)


def test_semantic_shrink_label_length_mismatch():
    with pytest.raises(ValueError, match="label length"):
        semantic_shrink(np.eye(4), [0, 1, 1], 0.1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.0, 0.99), st.floats(0.0, 0.99))
def test_shrinks_preserve_symmetry_and_exempt_sets(seed, eta, mu):
    rng = np.random.default_rng(seed)
    N = 11
    G = random_symmetric(rng, N)
    labels = rng.integers(0, 3, N)
    T = temporal_shrink(G, eta)
    S = semantic_shrink(G, labels, mu)
    for out in (T, S):
        np.testing.assert_array_equal(out, out.T)
        assert np.all(out <= G)
    k = np.arange(N)
    near = np.abs(k[:, None] - k[None, :]) <= 1
    np.testing.assert_array_equal(T[near], G[near])
    same = labels[:, None] == labels[None, :]
    np.testing.assert_array_equal(S[same], G[same])


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000))
def test_semantic_shrink_commutes_with_relabelled_permutation(seed):
    rng = np.random.default_rng(seed)
    N = 9
    G = random_symmetric(rng, N)
    labels = rng.integers(0, 3, N)
    perm = rng.permutation(N)
    out = semantic_shrink(G, labels, 0.2)
    permuted = semantic_shrink(G[np.ix_(perm, perm)], labels[perm], 0.2)
    np.testing.assert_array_equal(permuted, out[np.ix_(perm, perm)])
    # time reversal is the permutation that keeps temporal adjacency
    np.testing.assert_array_equal(temporal_shrink(G[::-1, ::-1], 0.3), temporal_shrink(G, 0.3)[::-1, ::-1])
