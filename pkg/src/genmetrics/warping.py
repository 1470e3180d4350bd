"""Dynamic time warping with path recovery, and warping path diversity (WPD)."""

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._parallel import map_items
from .diversity import SamplingPlan, repetition_rng, sample_pairs
from .errors import InputError, NumericalConsistencyError
from .tensor_io import SequenceSet

_BATCH = 256


class WarpingVerdict(str, enum.Enum):
    RECREATES = "recreates"
    EXCEEDS = "exceeds"
    COLLAPSES = "collapses"


@dataclass(eq=False)
class WarpingPath:
    """0-based (i, j) alignment pairs, shape (L_pi, 2)."""

    pairs: np.ndarray

    def __post_init__(self):
        pairs = np.asarray(self.pairs, dtype=np.int64)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise InputError(f"path pairs must have shape (L, 2), got {pairs.shape}")
        self.pairs = pairs

    def __len__(self):
        return self.pairs.shape[0]

    def __eq__(self, other):
        return isinstance(other, WarpingPath) and np.array_equal(self.pairs, other.pairs)

    def as_tuples(self):
        return [tuple(p) for p in self.pairs.tolist()]

    def admissibility_error(self, len_x=None, len_y=None):
        """Return why the path is not admissible, or None when it is."""
        p = self.pairs
        if len(p) == 0:
            return "empty path"
        if len_x is None:
            len_x = int(p[-1, 0]) + 1
        if len_y is None:
            len_y = int(p[-1, 1]) + 1
        if tuple(p[0]) != (0, 0):
            return f"path starts at {tuple(p[0])}, not (0, 0)"
        if tuple(p[-1]) != (len_x - 1, len_y - 1):
            return f"path ends at {tuple(p[-1])}, not {(len_x - 1, len_y - 1)}"
        steps = np.diff(p, axis=0)
        if np.any((steps < 0) | (steps > 1)) or np.any(steps.sum(axis=1) == 0):
            return "path steps must advance i and j by 0 or 1, not both 0"
        # with unit monotone steps from (0,0) to the end, every index is visited
        return None

    def is_admissible(self, len_x=None, len_y=None):
        return self.admissibility_error(len_x, len_y) is None


@dataclass(eq=False)
class DtwResult:
    distance: float
    path: WarpingPath


def _as_sequence(s):
    s = np.asarray(s, dtype=np.float64)
    if s.ndim == 1:
        s = s[:, None]
    if s.ndim != 2 or s.shape[0] == 0:
        raise InputError(f"a sequence must be a nonempty T x D array, got shape {s.shape}")
    return s


def _accumulated_cost(cost):
    """Cumulative DTW cost for a batch; ``cost`` is (L_x, L_y, B), result (L_x+1, L_y+1, B).

    Cells on one anti-diagonal are independent, so each diagonal is filled in
    one vectorised step; every cell still sees the scalar recurrence
    ``D[i, j] = c + min(D[i-1, j], D[i, j-1], D[i-1, j-1])``.
    """
    lx, ly, batch = cost.shape
    acc = np.full((lx + 1, ly + 1, batch), np.inf)
    acc[0, 0] = 0.0
    for s in range(2, lx + ly + 1):
        i = np.arange(max(1, s - ly), min(lx, s - 1) + 1)
        j = s - i
        best = np.minimum(np.minimum(acc[i - 1, j], acc[i, j - 1]), acc[i - 1, j - 1])
        acc[i, j] = cost[i - 1, j - 1] + best
    return acc


def _backtrack(acc):
    """Optimal path through a 2-D accumulated cost table, ties: diagonal, left, up."""
    table = acc.tolist()
    i, j = len(table) - 1, len(table[0]) - 1
    path = [(i - 1, j - 1)]
    while i > 1 or j > 1:
        diag = table[i - 1][j - 1]
        left = table[i][j - 1]
        up = table[i - 1][j]
        if diag <= left and diag <= up:
            i, j = i - 1, j - 1
        elif left <= up:
            j -= 1
        else:
            i -= 1
        path.append((i - 1, j - 1))
    path.reverse()
    return WarpingPath(np.array(path, dtype=np.int64))


def _batch_dtw(xs, ys):
    """DTW for aligned lists of equal-shape sequences ``xs[b]``, ``ys[b]``."""
    x = np.stack(xs, axis=-1)  # (L_x, D, B)
    y = np.stack(ys, axis=-1)
    diff = x[:, None, :, :] - y[None, :, :, :]
    cost = np.einsum("ijdb,ijdb->ijb", diff, diff)
    acc = _accumulated_cost(cost)
    results = []
    for b in range(acc.shape[2]):
        distance = float(acc[-1, -1, b])
        if not math.isfinite(distance):
            raise NumericalConsistencyError("DTW cost overflowed")
        results.append(DtwResult(distance, _backtrack(acc[:, :, b])))
    return results


def dtw(x, y):
    """Dependent multivariate DTW.

    The per-cell cost is the squared Euclidean distance between frames;
    ``distance`` is the accumulated cost (no square root).
    """
    x = _as_sequence(x)
    y = _as_sequence(y)
    if x.shape[1] != y.shape[1]:
        raise InputError(f"channel mismatch: {x.shape[1]} vs {y.shape[1]}")
    return _batch_dtw([x], [y])[0]


def dtw_many(xs, ys):
    """DTW over many pairs of same-shape sequences, in batches."""
    xs = [_as_sequence(s) for s in xs]
    ys = [_as_sequence(s) for s in ys]
    if len(xs) != len(ys):
        raise InputError("xs and ys must have the same number of sequences")
    out = []
    for start in range(0, len(xs), _BATCH):
        out.extend(_batch_dtw(xs[start:start + _BATCH], ys[start:start + _BATCH]))
    return out


def path_diagonal_deviation(path):
    """Mean perpendicular distance of the path points to the diagonal.

    Only defined for paths between equal-length sequences.
    """
    if not isinstance(path, WarpingPath):
        path = WarpingPath(path)
    problem = path.admissibility_error()
    if problem:
        raise InputError(f"inadmissible path: {problem}")
    end = path.pairs[-1]
    if end[0] != end[1]:
        raise InputError("diagonal deviation needs a path between equal-length sequences")
    offsets = np.abs(path.pairs[:, 0] - path.pairs[:, 1])
    return float(math.sqrt(2.0) / (2.0 * len(path)) * offsets.sum())


def wpd_upper_bound(length):
    return math.sqrt(2.0) / 4.0 * (length + 1)


def wpd(sequences, plan=SamplingPlan()):
    """Warping path diversity of a set of equal-length raw sequences.

    Pairs are drawn with the same sampler as APD; each pair is aligned
    with DTW and scored by the diagonal deviation of its optimal path.
    """
    if isinstance(sequences, SequenceSet):
        seqs = sequences.sequences
    elif isinstance(sequences, np.ndarray):
        seqs = SequenceSet(sequences).sequences
    else:
        shapes = {np.shape(s)[:1] for s in sequences}
        if len(shapes) > 1:
            raise InputError("WPD needs sequences of equal length")
        seqs = SequenceSet(np.stack([_as_sequence(s) for s in sequences])).sequences
    if seqs.shape[0] < 2:
        raise InputError(f"WPD needs at least 2 sequences, got {seqs.shape[0]}")

    def one(rep):
        first, second = sample_pairs(repetition_rng(plan.seed, rep), seqs.shape[0], plan.subset_size)
        results = dtw_many(seqs[first], seqs[second])
        return np.mean([path_diagonal_deviation(r.path) for r in results])

    return float(np.mean(map_items(one, range(plan.repetitions))))


def classify_wpd(wpd_gen, wpd_real, epsilon):
    """Whether generated temporal distortions match, exceed or fall short of the real ones."""
    if epsilon <= 0:
        raise InputError("epsilon must be positive")
    if abs(wpd_gen - wpd_real) < epsilon:
        return WarpingVerdict.RECREATES
    if wpd_gen > wpd_real + epsilon:
        return WarpingVerdict.EXCEEDS
    return WarpingVerdict.COLLAPSES
