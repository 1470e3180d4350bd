"""Fidelity metrics: FID, accuracy on generated (AOG), density and precision."""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalConsistencyError
from .latent_stats import (
    GaussianStats,
    as_matrix,
    bures_term,
    estimate_gaussian,
    knn_radii,
    pairwise_distances,
    trace_sqrt_product,
)

# FID^2 values this far below zero (relative to the trace scale) count as rounding.
FID_CLAMP = 1e-8


class Verdict(str, enum.Enum):
    GEN1 = "gen1"
    GEN2 = "gen2"
    TIE = "tie"
    NO_VERDICT = "no_verdict"


@dataclass
class FidelityResult:
    fid: float
    precision: float
    density: float
    k: int
    aog: float = None


def fid(real, gen):
    """Frechet distance between two Gaussians.

    Accepts GaussianStats or raw latent matrices (moments are estimated).
    Returns the distance itself, i.e. the square root of
    ``|mu1 - mu2|^2 + tr(S1 + S2 - 2 (S1 S2)^1/2)``.
    """
    if not isinstance(real, GaussianStats):
        real = estimate_gaussian(real)
    if not isinstance(gen, GaussianStats):
        gen = estimate_gaussian(gen)
    if real.dim != gen.dim:
        raise InputError(f"dimension mismatch: {real.dim} vs {gen.dim}")
    diff = real.mean - gen.mean
    shift = float(diff @ diff)
    # the expanded form cancels badly but must agree in sign; it is the consistency check
    traces = float(np.trace(real.covariance)) + float(np.trace(gen.covariance))
    expanded = shift + traces - 2.0 * trace_sqrt_product(real.covariance, gen.covariance)
    if expanded < -FID_CLAMP * max(1.0, shift + traces):
        raise NumericalConsistencyError(f"FID^2 = {expanded!r} is negative")
    squared = shift + bures_term(real.covariance, gen.covariance)
    return float(np.sqrt(squared))


def compare_fid(fid_gen1, fid_gen2, fid_real):
    """Rank two models by FID, only trusting values at or above the real reference.

    A model scoring below ``fid_real`` is closer to the real data than the
    real data is to itself, which points at copying rather than fidelity.
    """
    if fid_gen1 == fid_gen2:
        return Verdict.TIE
    best = min(fid_gen1, fid_gen2)
    if best < fid_real:
        return Verdict.NO_VERDICT
    return Verdict.GEN1 if fid_gen1 < fid_gen2 else Verdict.GEN2


def aog(predicted, conditioned):
    """Fraction of generated samples classified as the label they were conditioned on."""
    predicted = np.asarray(predicted).ravel()
    conditioned = np.asarray(conditioned).ravel()
    if predicted.shape != conditioned.shape:
        raise InputError(
            f"{predicted.size} predicted labels vs {conditioned.size} conditioning labels"
        )
    if predicted.size == 0:
        raise InputError("AOG of an empty generated set")
    return float(np.count_nonzero(predicted == conditioned)) / predicted.size


def nearest_centroid_fit(latents, labels):
    """Per-class centroids; returns (classes, centroid matrix)."""
    x = as_matrix(latents)
    labels = np.asarray(labels).ravel()
    if labels.shape[0] != x.shape[0]:
        raise InputError("labels do not match latents")
    classes = np.unique(labels)
    centroids = np.stack([x[labels == c].mean(axis=0) for c in classes])
    return classes, centroids


def nearest_centroid_predict(model, latents):
    classes, centroids = model
    dist = pairwise_distances(as_matrix(latents), centroids)
    return classes[np.argmin(dist, axis=1)]


def _check_k(k, n, what):
    if not 1 <= k <= n - 1:
        raise InputError(f"k={k} out of range for {what} of size {n}")


def _real_balls(real, gen, k):
    real = as_matrix(real)
    gen = as_matrix(gen)
    if real.shape[1] != gen.shape[1]:
        raise InputError(f"dimension mismatch: {real.shape[1]} vs {gen.shape[1]}")
    _check_k(k, real.shape[0], "the real set")
    radii = knn_radii(real, k).radii
    # inside[i, j]: generated j lies in the closed ball around real i
    return pairwise_distances(real, gen) <= radii[:, None]


def density(real, gen, k):
    """Mean number of real-sample balls containing each generated sample, over k."""
    inside = _real_balls(real, gen, k)
    m = inside.shape[1]
    return float(np.count_nonzero(inside)) / (k * m)


def precision(real, gen, k):
    """Fraction of generated samples inside the union of real-sample balls."""
    inside = _real_balls(real, gen, k)
    return float(np.count_nonzero(inside.any(axis=0))) / inside.shape[1]
