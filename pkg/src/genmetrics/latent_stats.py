"""Gaussian moments, symmetric matrix square roots and nearest-neighbour radii."""

from dataclasses import dataclass

import numpy as np

from ._parallel import map_chunks
from .errors import InputError
from .tensor_io import LatentSet

SYMMETRY_TOL = 1e-10
PSD_TOL = -1e-8


def as_matrix(x):
    """Accept a LatentSet or array-like and return a float64 N x f matrix."""
    if isinstance(x, LatentSet):
        return x.vectors
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    if x.ndim != 2:
        raise InputError(f"expected an N x f matrix, got shape {x.shape}")
    return x


@dataclass(eq=False)
class GaussianStats:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64).ravel()
        cov = np.atleast_2d(np.asarray(self.covariance, dtype=np.float64))
        f = self.mean.shape[0]
        if cov.shape != (f, f):
            raise InputError(f"covariance shape {cov.shape} does not match mean length {f}")
        _check_symmetric(cov, "covariance")
        self.covariance = cov

    @property
    def dim(self):
        return self.mean.shape[0]


def _check_symmetric(a, what):
    if np.max(np.abs(a - a.T), initial=0.0) > SYMMETRY_TOL:
        raise InputError(f"{what} is not symmetric within {SYMMETRY_TOL}")


def estimate_gaussian(latents):
    """Sample mean and unbiased (N - 1) covariance of the rows."""
    x = as_matrix(latents)
    n = x.shape[0]
    if n < 2:
        raise InputError(f"need at least 2 samples to estimate a covariance, got {n}")
    mean = x.mean(axis=0)
    centered = x - mean
    cov = centered.T @ centered / (n - 1)
    cov = (cov + cov.T) / 2
    return GaussianStats(mean, cov)


def psd_sqrt(a):
    """Symmetric square root of a PSD matrix, negative eigenvalues clamped to 0."""
    w, v = np.linalg.eigh(a)
    w = np.clip(w, 0.0, None)
    return (v * np.sqrt(w)) @ v.T


def trace_sqrt_product(a, b):
    """trace((a b)^1/2) for symmetric PSD ``a``, ``b``.

    This is the trace of the square root of a^1/2 b a^1/2, taken as the sum
    of singular values of b^1/2 a^1/2. Going through singular values avoids
    squaring the spectrum, so small eigenvalues keep their absolute accuracy
    and fid(s, s) stays near zero for ill-conditioned covariances.
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise InputError(f"shape mismatch: {a.shape} vs {b.shape}")
    _check_symmetric(a, "first matrix")
    _check_symmetric(b, "second matrix")
    return float(np.sum(np.linalg.svd(psd_sqrt(b) @ psd_sqrt(a), compute_uv=False)))


def bures_term(a, b):
    """tr(a + b - 2 (a b)^1/2) as a sum of squares.

    With X = a^1/2, Y = b^1/2 and the SVD Y X^T = U S V^T, the term equals
    ||X - V U^T Y||_F^2 (orthogonal Procrustes), so identical inputs give a
    value at rounding level instead of a difference of two large traces.
    """
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    b = np.atleast_2d(np.asarray(b, dtype=np.float64))
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise InputError(f"shape mismatch: {a.shape} vs {b.shape}")
    _check_symmetric(a, "first matrix")
    _check_symmetric(b, "second matrix")
    x, y = psd_sqrt(a), psd_sqrt(b)
    u, _, vt = np.linalg.svd(y @ x.T)
    residual = x - vt.T @ u.T @ y
    return float(np.einsum("ij,ij->", residual, residual))


def pairwise_distances(a, b):
    """Euclidean distance between every row of ``a`` and every row of ``b``."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[1]:
        raise InputError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")

    def block(start, stop):
        diff = a[start:stop, None, :] - b[None, :, :]
        return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))

    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[0]))
    return np.concatenate(map_chunks(block, a.shape[0]), axis=0)


@dataclass(eq=False)
class NeighborRadii:
    radii: np.ndarray
    k: int

    def __len__(self):
        return self.radii.shape[0]


def _kth_excluding_self(dist, k):
    d = np.array(dist, copy=True)
    np.fill_diagonal(d, np.inf)
    return np.partition(d, k - 1, axis=1)[:, k - 1]


def knn_radii(latents, k, distances=None):
    """Distance from each row to its k-th nearest other row.

    ``distances`` may pass a precomputed self-distance matrix.
    """
    x = as_matrix(latents)
    n = x.shape[0]
    if not 1 <= k <= n - 1:
        raise InputError(f"k={k} out of range for a set of {n} samples (need 1 <= k <= n-1)")
    if distances is None:
        distances = pairwise_distances(x, x)
    return NeighborRadii(_kth_excluding_self(distances, k), int(k))
