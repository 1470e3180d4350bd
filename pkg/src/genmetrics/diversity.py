"""Diversity metrics: APD, ACPD, coverage, recall and MMS."""

from dataclasses import dataclass

import numpy as np

from ._parallel import map_items
from .errors import InputError
from .fidelity import Verdict
from .latent_stats import as_matrix, knn_radii, pairwise_distances
from .tensor_io import LatentSet


@dataclass(frozen=True)
class SamplingPlan:
    """Random pair sampling: ``subset_size`` pairs per repetition, ``repetitions`` times."""

    subset_size: int = 200
    repetitions: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.subset_size < 1 or self.repetitions < 1:
            raise InputError("subset_size and repetitions must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must fit in 64 unsigned bits")


@dataclass
class DiversityResult:
    apd: float
    coverage: float
    recall: float
    mms: float
    k: int
    plan: SamplingPlan
    acpd: float = None


def repetition_rng(seed, repetition):
    """Counter-based generator for one repetition; independent of execution order."""
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(int(repetition),))
    return np.random.Generator(np.random.Philox(seq))


def sample_pairs(rng, n, size):
    """``size`` index pairs drawn uniformly with replacement, never pairing an index with itself."""
    if n < 2:
        raise InputError(f"need at least 2 samples to draw pairs, got {n}")
    first = rng.integers(0, n, size)
    second = rng.integers(0, n, size)
    same = first == second
    while same.any():
        second[same] = rng.integers(0, n, int(same.sum()))
        same = first == second
    return first, second


def _pair_distance(x, first, second):
    diff = x[first] - x[second]
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _repeat(plan, one_repetition):
    values = map_items(one_repetition, range(plan.repetitions))
    return float(np.mean(values))


def apd(latents, plan=SamplingPlan()):
    """Average Euclidean distance between randomly drawn pairs of rows."""
    x = as_matrix(latents)
    if x.shape[0] < 2:
        raise InputError(f"APD needs at least 2 samples, got {x.shape[0]}")

    def one(rep):
        first, second = sample_pairs(repetition_rng(plan.seed, rep), x.shape[0], plan.subset_size)
        return _pair_distance(x, first, second).mean()

    return _repeat(plan, one)


def compare_apd(apd_gen1, apd_gen2, apd_real, epsilon):
    """The more diverse model wins only if it stays within ``epsilon`` of the real APD."""
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if apd_gen1 == apd_gen2:
        return Verdict.TIE
    if apd_gen1 > apd_gen2:
        return Verdict.GEN1 if abs(apd_gen1 - apd_real) < epsilon else Verdict.NO_VERDICT
    return Verdict.GEN2 if abs(apd_gen2 - apd_real) < epsilon else Verdict.NO_VERDICT


def acpd(latents, labels=None, plan=SamplingPlan()):
    """APD computed inside each class, averaged over classes then repetitions.

    Classes are visited in ascending id order and share one generator per
    repetition, so a single-class set reproduces ``apd`` exactly.
    """
    if isinstance(latents, LatentSet) and labels is None:
        labels = latents.labels
    if labels is None:
        raise InputError("ACPD needs class labels")
    x = as_matrix(latents)
    labels = np.asarray(labels).ravel()
    if labels.shape[0] != x.shape[0]:
        raise InputError(f"{labels.shape[0]} labels for {x.shape[0]} latents")
    classes, counts = np.unique(labels, return_counts=True)
    if classes.size == 0:
        raise InputError("ACPD of an empty set")
    if np.any(counts < 2):
        small = classes[counts < 2].tolist()
        raise InputError(f"classes {small} have fewer than 2 samples")
    members = [x[labels == c] for c in classes]

    def one(rep):
        rng = repetition_rng(plan.seed, rep)
        per_class = []
        for rows in members:
            first, second = sample_pairs(rng, rows.shape[0], plan.subset_size)
            per_class.append(_pair_distance(rows, first, second).mean())
        return np.mean(per_class)

    return _repeat(plan, one)


def _check_pair(real, gen):
    real = as_matrix(real)
    gen = as_matrix(gen)
    if real.shape[1] != gen.shape[1]:
        raise InputError(f"dimension mismatch: {real.shape[1]} vs {gen.shape[1]}")
    return real, gen


def recall(real, gen, k):
    """Fraction of real samples inside the union of generated-sample balls."""
    real, gen = _check_pair(real, gen)
    radii = knn_radii(gen, k).radii
    inside = pairwise_distances(real, gen) <= radii[None, :]
    return float(np.count_nonzero(inside.any(axis=1))) / real.shape[0]


def coverage(real, gen, k):
    """Fraction of real-sample balls holding at least one generated sample."""
    real, gen = _check_pair(real, gen)
    radii = knn_radii(real, k).radii
    nearest_gen = pairwise_distances(real, gen).min(axis=1)
    return float(np.count_nonzero(nearest_gen <= radii)) / real.shape[0]


def expected_coverage(n, m, k):
    """Expected coverage when real and generated samples share one distribution.

    ``1 - prod_{t=1..k} (n - t) / (m + n - t)``; tends to ``1 - 2**-k``.
    """
    if k < 0 or k >= n:
        raise InputError(f"k={k} must satisfy 0 <= k < n={n}")
    product = 1.0
    for t in range(1, k + 1):
        product *= (n - t) / (m + n - t)
    return 1.0 - product


def mms(real, gen):
    """Mean distance from each generated sample to its nearest real sample."""
    real, gen = _check_pair(real, gen)
    if real.shape[0] == 0 or gen.shape[0] == 0:
        raise InputError("MMS needs nonempty real and generated sets")
    return float(pairwise_distances(gen, real).min(axis=1).mean())


def mms_real_reference(real):
    """Mean distance from each real sample to its nearest other real sample."""
    real = as_matrix(real)
    if real.shape[0] < 2:
        raise InputError(f"MMS reference needs at least 2 samples, got {real.shape[0]}")
    return float(knn_radii(real, 1).radii.mean())
