"""Deterministic synthetic motion-like sequences for desk-scale evaluation runs.

Each class owns one smooth base waveform per channel. A sample is that
waveform read through a random monotone time warp plus a random shift,
scaled by an amplitude jitter and perturbed by white noise.
"""

import numpy as np

from .errors import InputError
from .tensor_io import SequenceSet


def _base_parameters(rng, classes, channels):
    shape = (classes, channels, 2)
    return {
        "freq": rng.uniform(0.5, 3.0, shape),
        "phase": rng.uniform(0.0, 2 * np.pi, shape),
        "amp": rng.uniform(0.3, 1.0, shape),
        "offset": rng.uniform(-1.0, 1.0, (classes, channels)),
    }


def _waveform(params, c, t):
    """Class-``c`` waveform at times ``t`` (any shape); returns t.shape + (channels,)."""
    t = np.asarray(t)[..., None, None]
    waves = params["amp"][c] * np.sin(2 * np.pi * params["freq"][c] * t + params["phase"][c])
    return waves.sum(axis=-1) + params["offset"][c]


def synth_fixture(
    n_per_class,
    classes,
    length,
    channels,
    seed=0,
    shift=0.1,
    warp=0.3,
    jitter=0.1,
    noise=0.02,
    template_seed=0,
):
    """Return ``(SequenceSet, labels)`` with ``n_per_class * classes`` sequences.

    ``shift`` is the maximal time shift as a fraction of the sequence span,
    ``warp`` the maximal strength of the monotone time warp (< 1),
    ``jitter`` the relative amplitude spread and ``noise`` the noise std.
    All zero gives identical sequences within a class.

    ``template_seed`` fixes the class waveforms and ``seed`` the per-sample
    variation, so sets with one template seed and different seeds are
    independent draws from the same distribution.
    """
    if min(n_per_class, classes, length, channels) < 1:
        raise InputError("fixture counts must all be >= 1")
    if not 0 <= warp < 1:
        raise InputError("warp must lie in [0, 1)")
    params = _base_parameters(np.random.default_rng(int(template_seed)), classes, channels)
    rng = np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(1,)))
    t = np.linspace(0.0, 1.0, length)
    seqs = np.empty((classes * n_per_class, length, channels))
    labels = np.repeat(np.arange(classes), n_per_class)
    for row, c in enumerate(labels):
        offset = rng.uniform(-shift, shift)
        strength = rng.uniform(-warp, warp)
        scale = 1.0 + rng.uniform(-jitter, jitter)
        warped = t + strength * np.sin(np.pi * t) / np.pi + offset
        seqs[row] = scale * _waveform(params, c, warped)
        seqs[row] += noise * rng.standard_normal((length, channels))
    return SequenceSet(seqs), labels


def summary_features(sequences):
    """Per-sequence latent stand-in: mean, std, min, max and mean absolute
    frame-to-frame change of every channel, giving 5 * D features."""
    seqs = sequences.sequences if isinstance(sequences, SequenceSet) else np.asarray(sequences, dtype=np.float64)
    if seqs.ndim == 2:
        seqs = seqs[:, :, None]
    step = np.abs(np.diff(seqs, axis=1)).mean(axis=1) if seqs.shape[1] > 1 else np.zeros(seqs.shape[::2])
    return np.concatenate(
        [seqs.mean(axis=1), seqs.std(axis=1), seqs.min(axis=1), seqs.max(axis=1), step],
        axis=1,
    )
