"""Data model, the EVGM binary tensor format, CSV ingestion and preprocessing.

EVGM layout (little-endian)::

    magic   4 bytes  b"EVGM"
    version 1 byte   1
    dtype   1 byte   1 = float32, 2 = float64
    rank    1 byte   1..3
    dims    rank x uint64
    payload row-major elements
"""

import struct
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (
    BadMagicError,
    DimsOverflowError,
    InputError,
    TruncatedPayloadError,
    TensorFormatError,
    UnsupportedDtypeError,
    UnsupportedRankError,
    UnsupportedVersionError,
)

MAGIC = b"EVGM"
VERSION = 1
_DTYPE_CODES = {"f32": 1, "f64": 2}
_CODE_DTYPES = {1: "f32", 2: "f64"}
_NUMPY_DTYPES = {"f32": np.dtype("<f4"), "f64": np.dtype("<f8")}
_HEADER = struct.Struct("<4sBBB")
_MAX_ELEMENTS = 2**63 - 1


@dataclass(eq=False)
class TensorFile:
    """An in-memory EVGM tensor. ``data`` is a C-ordered array of shape ``dims``."""

    dtype: str
    dims: tuple
    data: np.ndarray

    def __post_init__(self):
        if self.dtype not in _DTYPE_CODES:
            raise UnsupportedDtypeError(f"unsupported dtype {self.dtype!r}")
        self.dims = tuple(int(d) for d in self.dims)
        if not 1 <= len(self.dims) <= 3:
            raise UnsupportedRankError(f"rank must be 1, 2 or 3, got {len(self.dims)}")
        if any(d < 0 for d in self.dims):
            raise InputError(f"negative dimension in {self.dims}")
        data = np.ascontiguousarray(self.data, dtype=_NUMPY_DTYPES[self.dtype])
        if data.size != int(np.prod(self.dims, dtype=object)):
            raise InputError(
                f"element count {data.size} does not match dims {self.dims}"
            )
        self.data = data.reshape(self.dims)

    @property
    def rank(self):
        return len(self.dims)

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array)
        dtype = "f32" if array.dtype == np.float32 else "f64"
        return cls(dtype, array.shape, array)

    def same_bits(self, other):
        return (
            self.dtype == other.dtype
            and self.dims == other.dims
            and self.data.tobytes() == other.data.tobytes()
        )


def write_tensor(t, path):
    """Serialize ``t`` to ``path`` in EVGM format."""
    if not isinstance(t, TensorFile):
        t = TensorFile.from_array(t)
    header = _HEADER.pack(MAGIC, VERSION, _DTYPE_CODES[t.dtype], t.rank)
    dims = struct.pack(f"<{t.rank}Q", *t.dims)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(dims)
        fh.write(t.data.tobytes(order="C"))


def read_tensor(path):
    """Parse an EVGM file. Each malformation raises its own TensorFormatError subclass."""
    blob = Path(path).read_bytes()
    if len(blob) < 4 or blob[:4] != MAGIC:
        raise BadMagicError(f"{path}: bad magic {blob[:4]!r}, expected {MAGIC!r}")
    if len(blob) < _HEADER.size:
        raise TruncatedPayloadError(f"{path}: header truncated")
    _, version, dtype_code, rank = _HEADER.unpack_from(blob)
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {version}")
    if dtype_code not in _CODE_DTYPES:
        raise UnsupportedDtypeError(f"{path}: unsupported dtype code {dtype_code}")
    if not 1 <= rank <= 3:
        raise UnsupportedRankError(f"{path}: unsupported rank {rank}")
    offset = _HEADER.size
    if len(blob) < offset + 8 * rank:
        raise TruncatedPayloadError(f"{path}: dims truncated")
    dims = struct.unpack_from(f"<{rank}Q", blob, offset)
    offset += 8 * rank

    count = 1
    for d in dims:
        count *= d
    dtype = _CODE_DTYPES[dtype_code]
    itemsize = _NUMPY_DTYPES[dtype].itemsize
    if count > _MAX_ELEMENTS or count * itemsize > _MAX_ELEMENTS:
        raise DimsOverflowError(f"{path}: dims {dims} overflow")
    expected = count * itemsize
    available = len(blob) - offset
    if available < expected:
        raise TruncatedPayloadError(
            f"{path}: payload has {available} bytes, dims {dims} need {expected}"
        )
    if available > expected:
        raise TensorFormatError(f"{path}: {available - expected} trailing bytes")
    data = np.frombuffer(blob, dtype=_NUMPY_DTYPES[dtype], count=count, offset=offset)
    return TensorFile(dtype, dims, data.copy())


# -- typed sets ---------------------------------------------------------------


def _require_finite(array, what):
    if not np.all(np.isfinite(array)):
        raise InputError(f"{what} contains NaN or Inf")


@dataclass(eq=False)
class LatentSet:
    """N x f latent vectors with optional integer class labels."""

    vectors: np.ndarray
    labels: np.ndarray = None

    def __post_init__(self):
        vectors = np.asarray(self.vectors, dtype=np.float64)
        if vectors.ndim == 1:
            vectors = vectors[:, None]
        if vectors.ndim != 2 or vectors.shape[1] < 1:
            raise InputError(f"latents must be an N x f matrix, got shape {vectors.shape}")
        _require_finite(vectors, "latents")
        self.vectors = vectors
        if self.labels is not None:
            labels = np.asarray(self.labels)
            if labels.ndim != 1 or labels.shape[0] != vectors.shape[0]:
                raise InputError(
                    f"{labels.shape} labels do not match {vectors.shape[0]} latent rows"
                )
            if labels.size and (np.any(labels < 0) or not np.all(labels == np.round(labels))):
                raise InputError("labels must be nonnegative integers")
            self.labels = labels.astype(np.int64)

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def dim(self):
        return self.vectors.shape[1]

    def subset(self, index):
        labels = None if self.labels is None else self.labels[index]
        return LatentSet(self.vectors[index], labels)


@dataclass(eq=False)
class SequenceSet:
    """N equal-length sequences stored as an (N, T, D) array."""

    sequences: np.ndarray

    def __post_init__(self):
        seqs = np.asarray(self.sequences, dtype=np.float64)
        if seqs.ndim == 2:
            seqs = seqs[:, :, None]
        if seqs.ndim != 3:
            raise InputError(f"sequences must be (N, T, D), got shape {seqs.shape}")
        _require_finite(seqs, "sequences")
        self.sequences = seqs

    def __len__(self):
        return self.sequences.shape[0]

    @property
    def length(self):
        return self.sequences.shape[1]

    @property
    def channels(self):
        return self.sequences.shape[2]

    def subset(self, index):
        return SequenceSet(self.sequences[index])


@dataclass
class LabelDistribution:
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        counts = {int(c): int(n) for c, n in sorted(self.counts.items())}
        if any(n < 0 for n in counts.values()):
            raise InputError("class counts must be nonnegative")
        if sum(counts.values()) < 1:
            raise InputError("label distribution must hold at least one sample")
        self.counts = counts

    @property
    def total(self):
        return sum(self.counts.values())


def label_distribution(labels):
    labels = [int(c) for c in np.asarray(labels).ravel()]
    if not labels:
        raise InputError("cannot build a label distribution from no labels")
    return LabelDistribution(dict(Counter(labels)))


# -- CSV and file loading -----------------------------------------------------


def read_csv_matrix(path, header=False):
    """Read a 2-D float CSV (rows are samples)."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=2)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return data.astype(np.float64)


def read_csv_labels(path, header=False):
    """Read integer labels, one per line (a single row is accepted too)."""
    try:
        data = np.loadtxt(path, delimiter=",", skiprows=1 if header else 0, ndmin=1)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    data = data.ravel()
    if not np.all(data == np.round(data)):
        raise InputError(f"{path}: labels must be integers")
    return data.astype(np.int64)


def write_csv_labels(labels, path):
    with open(path, "w") as fh:
        for label in labels:
            fh.write(f"{int(label)}\n")


def load_array(path, header=False):
    """Load an EVGM tensor or a CSV matrix as a float64 array."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_csv_matrix(path, header=header)
    return read_tensor(path).data.astype(np.float64)


def load_latents(path, labels=None, header=False):
    return LatentSet(load_array(path, header=header), labels)


def load_sequences(path):
    return SequenceSet(read_tensor(path).data)


# -- preprocessing ------------------------------------------------------------


def resample_sequence(s, target_len):
    """Piecewise-linear resampling of every channel of a T x D sequence.

    Frame ``i`` of the output samples the input at position
    ``i * (T - 1) / (target_len - 1)``; both end frames are kept exactly.
    """
    s = np.asarray(s, dtype=np.float64)
    squeeze = s.ndim == 1
    if squeeze:
        s = s[:, None]
    n = s.shape[0]
    if n < 2 or target_len < 2:
        raise InputError(f"cannot resample length {n} to {target_len}; both must be >= 2")
    if target_len == n:
        out = s.copy()
    else:
        src = np.arange(n, dtype=np.float64)
        pos = np.linspace(0.0, n - 1, int(target_len))
        out = np.stack([np.interp(pos, src, s[:, d]) for d in range(s.shape[1])], axis=1)
    return out[:, 0] if squeeze else out


def average_length(sequences):
    """Mean sequence length rounded to the nearest integer, halves away from zero."""
    lengths = [len(s) for s in sequences]
    if not lengths:
        raise InputError("average length of an empty list")
    mean = Fraction(sum(lengths), len(lengths))
    return int(mean + Fraction(1, 2)) if mean >= 0 else -int(-mean + Fraction(1, 2))


def xyz_groups(channels, n_groups=3):
    """Channel groups ``j mod n_groups`` (x, y, z of interleaved joints)."""
    return [list(range(g, channels, n_groups)) for g in range(min(n_groups, channels))]


@dataclass
class ScalingRecord:
    groups: list
    minimum: list
    maximum: list

    def invert(self, sequences):
        seqs = np.array(np.asarray(sequences, dtype=np.float64), copy=True)
        for group, lo, hi in zip(self.groups, self.minimum, self.maximum):
            if hi > lo:
                seqs[..., group] = seqs[..., group] * (hi - lo) + lo
            else:
                seqs[..., group] = lo
        return seqs

    def to_dict(self):
        return {"groups": self.groups, "min": self.minimum, "max": self.maximum}


def minmax_normalize(seqset, axis_groups):
    """Scale each channel group to [0, 1] with its global min and max.

    Statistics are pooled over all samples, frames and channels of the
    group. A constant group maps to 0.5.
    """
    seqs = seqset.sequences if isinstance(seqset, SequenceSet) else SequenceSet(seqset).sequences
    groups = [list(map(int, g)) for g in axis_groups]
    if any(not g for g in groups):
        raise InputError("channel groups must be nonempty")
    flat = sorted(c for g in groups for c in g)
    if flat != list(range(seqs.shape[2])):
        raise InputError("channel groups must partition the channels")
    out = np.empty_like(seqs)
    lows, highs = [], []
    for group in groups:
        block = seqs[..., group]
        lo, hi = float(block.min()), float(block.max())
        if hi > lo:
            out[..., group] = (block - lo) / (hi - lo)
        else:
            out[..., group] = 0.5
        lows.append(lo)
        highs.append(hi)
    return SequenceSet(out), ScalingRecord(groups, lows, highs)


def preprocess(raw_sequences, target_len=None, n_groups=3):
    """Resample raw T_i x D sequences to one length, then min-max scale per axis group.

    Rank-3 raw inputs (T, J, 3) are flattened to D = 3 * J channels.
    """
    raw = []
    for s in raw_sequences:
        s = np.asarray(s, dtype=np.float64)
        if s.ndim == 3:
            s = s.reshape(s.shape[0], -1)
        elif s.ndim == 1:
            s = s[:, None]
        raw.append(s)
    if not raw:
        raise InputError("no sequences to preprocess")
    channels = {s.shape[1] for s in raw}
    if len(channels) != 1:
        raise InputError(f"sequences disagree on channel count: {sorted(channels)}")
    if target_len is None:
        target_len = average_length(raw)
    stacked = np.stack([resample_sequence(s, target_len) for s in raw])
    return minmax_normalize(SequenceSet(stacked), xyz_groups(stacked.shape[2], n_groups))
