import numpy as np
import pytest

from genmetrics.diversity import SamplingPlan
from genmetrics.errors import InputError
from genmetrics.fidelity import nearest_centroid_fit, nearest_centroid_predict
from genmetrics.fixtures import summary_features, synth_fixture
from genmetrics.warping import dtw, wpd

PLAN = SamplingPlan(subset_size=30, repetitions=2, seed=0)


def test_shape_and_labels():
    seqs, labels = synth_fixture(4, 3, 25, 6, seed=1)
    assert seqs.sequences.shape == (12, 25, 6)
    assert labels.tolist() == [0] * 4 + [1] * 4 + [2] * 4


def test_deterministic():
    a, la = synth_fixture(3, 2, 10, 2, seed=5)
    b, lb = synth_fixture(3, 2, 10, 2, seed=5)
    assert a.sequences.tobytes() == b.sequences.tobytes() and np.array_equal(la, lb)


def test_no_distortion_means_identical_classes():
    seqs, labels = synth_fixture(5, 2, 15, 3, seed=2, shift=0, warp=0, jitter=0, noise=0)
    for c in (0, 1):
        block = seqs.sequences[labels == c]
        assert np.all(block == block[0])
    one_class = seqs.subset(labels == 0)
    assert wpd(one_class, PLAN) == 0.0


def test_shift_gives_positive_wpd():
    seqs, _ = synth_fixture(8, 1, 20, 1, seed=3, shift=0.3, warp=0.5, jitter=0, noise=0)
    diagonal = [(i, i) for i in range(20)]
    paths = [dtw(seqs.sequences[0], seqs.sequences[j]).path.as_tuples() for j in range(1, 8)]
    assert any(p != diagonal for p in paths)
    assert wpd(seqs, PLAN) > 0.0


def test_latents_are_class_separable():
    seqs, labels = synth_fixture(20, 4, 30, 3, seed=4)
    feats = summary_features(seqs)
    assert feats.shape == (80, 15)
    model = nearest_centroid_fit(feats[::2], labels[::2])
    accuracy = np.mean(nearest_centroid_predict(model, feats[1::2]) == labels[1::2])
    assert accuracy >= 0.9


def test_bad_counts():
    with pytest.raises(InputError):
        synth_fixture(0, 1, 5, 1)


def test_template_seed_separates_classes_from_samples():
    clean = dict(shift=0, warp=0, jitter=0, noise=0)
    a, _ = synth_fixture(2, 2, 12, 2, seed=0, **clean)
    b, _ = synth_fixture(2, 2, 12, 2, seed=9, **clean)
    c, _ = synth_fixture(2, 2, 12, 2, seed=0, template_seed=1, **clean)
    assert np.array_equal(a.sequences, b.sequences)
    assert not np.allclose(a.sequences, c.sequences)
    noisy_a, _ = synth_fixture(2, 2, 12, 2, seed=0)
    noisy_b, _ = synth_fixture(2, 2, 12, 2, seed=9)
    assert not np.array_equal(noisy_a.sequences, noisy_b.sequences)
