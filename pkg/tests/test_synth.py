import numpy as np
import pytest

from dgeseg.core import labels_to_boundaries
from dgeseg.synth import DEFAULT_MEANS, SynthConfig, expected_segment_length, gen_markov_gaussian


def test_default_configuration():
    c = SynthConfig()
    assert c.N == 350 and c.sigma == 3.7
    assert c.means == ((-7.8, 5.1), (-1.4, 2.8), (-2.9, 12.1), (2.5, 3.4))


def test_shapes_and_consistency():
    X, labels, b = gen_markov_gaussian(SynthConfig(seed=4))
    assert X.shape == (350, 2) and labels.shape == (350,)
    np.testing.assert_array_equal(b, labels_to_boundaries(labels))
    assert np.all(labels[b] != labels[b - 1])


def test_deterministic_given_seed():
    a = gen_markov_gaussian(SynthConfig(seed=11))
    b = gen_markov_gaussian(SynthConfig(seed=11))
    for u, v in zip(a, b):
        np.testing.assert_array_equal(u, v)


def test_vanishing_hazard_gives_single_segment():
    X, labels, b = gen_markov_gaussian(SynthConfig(hazard=1e-9, seed=0))
    assert b.size == 0 and np.unique(labels).size == 1


def test_expected_length_series():
    # small hazard: sum_t exp(-h t (t+1) / 2) approaches sqrt(pi / (2 h)) - 1/2 + ...
    assert expected_segment_length(0.04) == pytest.approx(
        sum(np.exp(-0.04 * t * (t + 1) / 2) for t in range(200)), rel=1e-12)
    assert expected_segment_length(10.0) == pytest.approx(1 + np.exp(-10.0), rel=1e-6)


def test_mean_segment_length_matches_series():
    lengths = []
    for seed in range(1000):
        _, labels, b = gen_markov_gaussian(SynthConfig(hazard=0.04, seed=seed))
        edges = np.r_[0, b]
        # the last segment is cut off by the end of the sequence
        lengths.extend(np.diff(edges)[1:].tolist() if edges.size > 1 else [])
    expected = expected_segment_length(0.04)
    assert np.mean(lengths) == pytest.approx(expected, rel=0.2)


def test_state_means_converge():
    c = SynthConfig(N=20_000, hazard=0.01, seed=3)
    X, labels, _ = gen_markov_gaussian(c)
    for s, mean in enumerate(DEFAULT_MEANS):
        rows = X[labels == s]
        tol = 3 * c.sigma / np.sqrt(len(rows))
        np.testing.assert_array_less(np.abs(rows.mean(axis=0) - mean), tol)
        assert rows.std(axis=0).mean() == pytest.approx(c.sigma, rel=0.05)


def test_invalid_configs():
    with pytest.raises(ValueError):
        SynthConfig(means=((0.0, 0.0),))
    with pytest.raises(ValueError):
        SynthConfig(sigma=0.0)
    with pytest.raises(ValueError):
        SynthConfig(hazard=0.0)


def test_default_hazard_gives_about_fourteen_segments():
    counts = [gen_markov_gaussian(SynthConfig(seed=s))[2].size + 1 for s in range(200)]
    assert 12 <= np.mean(counts) <= 16
