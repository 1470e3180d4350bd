"""Evaluation protocol: real-reference split, generation plan, report assembly."""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import diversity, fidelity, warping
from .errors import InputError
from .tensor_io import LabelDistribution, LatentSet, SequenceSet

FORMAT_VERSION = 1
METRICS = (
    "fid", "aog", "density", "precision",
    "apd", "acpd", "coverage", "recall", "mms", "wpd",
)


@dataclass(frozen=True)
class ProtocolConfig:
    k: int = 5
    plan: diversity.SamplingPlan = diversity.SamplingPlan()
    epsilon_apd: float = None
    epsilon_wpd: float = None
    metrics: tuple = METRICS
    split_seed: int = 0

    def __post_init__(self):
        metrics = tuple(self.metrics)
        if not metrics:
            raise InputError("select at least one metric")
        unknown = sorted(set(metrics) - set(METRICS))
        if unknown:
            raise InputError(f"unknown metrics: {', '.join(unknown)}")
        # canonical order, no duplicates
        object.__setattr__(self, "metrics", tuple(m for m in METRICS if m in metrics))
        if self.k < 1:
            raise InputError("k must be >= 1")
        for name in ("epsilon_apd", "epsilon_wpd"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise InputError(f"{name} must be positive")


# -- real-reference split -----------------------------------------------------


def split_indices(n, labels=None, seed=0):
    """Random halves of ``range(n)`` of sizes ceil(n/2) and floor(n/2).

    With labels, each class is split in half on its own and the odd
    leftovers alternate between the halves, so per-class counts differ by at
    most one. Both index arrays are returned sorted.
    """
    if n < 4:
        raise InputError(f"the real-reference split needs at least 4 samples, got {n}")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    if labels is None:
        perm = rng.permutation(n)
        cut = (n + 1) // 2
        return np.sort(perm[:cut]), np.sort(perm[cut:])
    labels = np.asarray(labels).ravel()
    if labels.shape[0] != n:
        raise InputError(f"{labels.shape[0]} labels for {n} samples")
    first, second, leftovers = [], [], []
    for c in np.unique(labels):
        members = rng.permutation(np.flatnonzero(labels == c))
        half = members.shape[0] // 2
        first.append(members[:half])
        second.append(members[half:2 * half])
        if members.shape[0] % 2:
            leftovers.append(members[-1])
    leftovers = rng.permutation(np.array(leftovers, dtype=np.int64))
    first.append(leftovers[0::2])
    second.append(leftovers[1::2])
    return np.sort(np.concatenate(first)), np.sort(np.concatenate(second))


def real_reference_split(real, seed=0, labels=None):
    """Split a LatentSet, SequenceSet or array into two random halves."""
    if labels is None and isinstance(real, LatentSet):
        labels = real.labels
    first, second = split_indices(len(real), labels, seed)
    if isinstance(real, (LatentSet, SequenceSet)):
        return real.subset(first), real.subset(second)
    real = np.asarray(real)
    return real[first], real[second]


# -- generation plan ----------------------------------------------------------


def _round_half_up(x):
    return math.floor(x + Fraction(1, 2))


def generation_plan(real_dist, factor):
    """Per-class generation counts that keep the real label proportions.

    The total is ``round(total * factor)``; classes get the floor of their
    exact quota and the remaining units go to the largest remainders,
    ties broken by ascending class id.
    """
    factor = Fraction(factor) if not isinstance(factor, float) else Fraction(str(factor))
    if factor <= 0:
        raise InputError("factor must be positive")
    if not isinstance(real_dist, LabelDistribution):
        real_dist = LabelDistribution(dict(real_dist))
    quotas = {c: n * factor for c, n in real_dist.counts.items()}
    target = _round_half_up(real_dist.total * factor)
    counts = {c: math.floor(q) for c, q in quotas.items()}
    spare = target - sum(counts.values())
    by_remainder = sorted(quotas, key=lambda c: (-(quotas[c] - counts[c]), c))
    for c in by_remainder[:spare]:
        counts[c] += 1
    return LabelDistribution(counts)


def parse_factor(text):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"invalid factor {text!r}") from exc
    if value <= 0:
        raise InputError("factor must be positive")
    return value


# -- reports ------------------------------------------------------------------


@dataclass
class MetricValue:
    gen: float
    real: float
    verdict: str = None

    def to_dict(self):
        out = {"gen": self.gen, "real": self.real}
        if self.verdict is not None:
            out["verdict"] = self.verdict
        return out


@dataclass
class MetricReport:
    metrics: dict
    protocol: dict
    model: str = "model"
    format_version: int = FORMAT_VERSION

    def to_dict(self):
        return {
            "format_version": self.format_version,
            "model": self.model,
            "metrics": {name: value.to_dict() for name, value in self.metrics.items()},
            "protocol": self.protocol,
        }

    @classmethod
    def from_dict(cls, data):
        if data.get("format_version") != FORMAT_VERSION:
            raise InputError(f"unsupported report format {data.get('format_version')!r}")
        metrics = {
            name: MetricValue(v["gen"], v["real"], v.get("verdict"))
            for name, v in data["metrics"].items()
        }
        return cls(metrics, data.get("protocol", {}), data.get("model", "model"))


def _canonical(obj):
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise InputError(f"cannot serialize non-finite value {value}")
        return float(f"{value:.12g}")
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_json(report):
    """Canonical JSON text: sorted keys, 12 significant digits, trailing newline."""
    data = report.to_dict() if isinstance(report, MetricReport) else report
    return json.dumps(_canonical(data), sort_keys=True, indent=2) + "\n"


def emit_report(report, path):
    with open(path, "w", newline="\n") as fh:
        fh.write(report_json(report))


def load_report(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not a JSON report ({exc})") from exc
    return MetricReport.from_dict(data)


def write_report_csv(report, path):
    """Flat ``metric,gen,real,verdict`` table of one report."""
    lines = ["metric,gen,real,verdict"]
    for name, value in report.metrics.items():
        verdict = value.verdict or ""
        lines.append(f"{name},{value.gen:.12g},{value.real:.12g},{verdict}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


# -- evaluation ---------------------------------------------------------------

_NEEDS = {
    "fid": ("latents",),
    "density": ("latents",),
    "precision": ("latents",),
    "apd": ("latents",),
    "coverage": ("latents",),
    "recall": ("latents",),
    "mms": ("latents",),
    "acpd": ("latents", "real_labels", "gen_labels"),
    "aog": ("gen_labels", "real_labels", "latents"),
    "wpd": ("sequences",),
}


def _as_latents(x, labels=None):
    if x is None or isinstance(x, LatentSet):
        if x is not None and labels is not None:
            return LatentSet(x.vectors, labels)
        return x
    return LatentSet(x, labels)


def _as_sequences(x):
    if x is None or isinstance(x, SequenceSet):
        return x
    return SequenceSet(x)


def evaluate(
    real_latents=None,
    gen_latents=None,
    real_sequences=None,
    gen_sequences=None,
    predicted_labels=None,
    config=ProtocolConfig(),
    conditioned_labels=None,
    model="model",
):
    """Compute every selected metric on the generated set and on the real split.

    Real labels travel on ``real_latents.labels``; the labels generation was
    conditioned on come from ``conditioned_labels`` or ``gen_latents.labels``.
    The real side of each metric treats the first split half as real and the
    second as generated, except MMS, whose reference uses the whole real set.
    When AOG is requested without ``predicted_labels``, a nearest-centroid
    classifier fitted on the real latents stands in for the pre-trained one.
    """
    real = _as_latents(real_latents)
    gen = _as_latents(gen_latents, conditioned_labels)
    real_seqs = _as_sequences(real_sequences)
    gen_seqs = _as_sequences(gen_sequences)
    available = {
        "latents": real is not None and gen is not None,
        "sequences": real_seqs is not None and gen_seqs is not None,
        "real_labels": real is not None and real.labels is not None,
        "gen_labels": gen is not None and gen.labels is not None,
    }
    for metric in config.metrics:
        missing = [need for need in _NEEDS[metric] if not available[need]]
        if missing:
            raise InputError(f"metric {metric!r} is missing input: {', '.join(missing)}")

    plan, k = config.plan, config.k
    protocol = {
        "k": k,
        "metrics": list(config.metrics),
        "subset_size": plan.subset_size,
        "repetitions": plan.repetitions,
        "seed": plan.seed,
        "split_seed": config.split_seed,
        "epsilon_apd": config.epsilon_apd,
        "epsilon_wpd": config.epsilon_wpd,
        "sizes": {},
    }
    sizes = protocol["sizes"]
    results = {}

    if available["latents"]:
        if real.dim != gen.dim:
            raise InputError(f"latent dimension mismatch: real {real.dim}, generated {gen.dim}")
        sizes.update(N=len(real), M=len(gen), f=real.dim)
    if available["sequences"]:
        if real_seqs.sequences.shape[1:] != gen_seqs.sequences.shape[1:]:
            raise InputError(
                f"sequence shape mismatch: real {real_seqs.sequences.shape[1:]}, "
                f"generated {gen_seqs.sequences.shape[1:]}"
            )
        sizes.update(L=real_seqs.length, D=real_seqs.channels,
                     N_seqs=len(real_seqs), M_seqs=len(gen_seqs))

    uses_latents = any("latents" in _NEEDS[m] for m in config.metrics)
    if uses_latents:
        idx1, idx2 = split_indices(len(real), real.labels, config.split_seed)
        v1, v2 = real.subset(idx1), real.subset(idx2)

    for metric in config.metrics:
        if metric == "fid":
            gen_value = fidelity.fid(real.vectors, gen.vectors)
            real_value = fidelity.fid(v1.vectors, v2.vectors)
            verdict = "above_real" if gen_value >= real_value else "below_real"
            results[metric] = MetricValue(gen_value, real_value, verdict)
        elif metric == "aog":
            if predicted_labels is None:
                model_fit = fidelity.nearest_centroid_fit(real.vectors, real.labels)
                predicted = fidelity.nearest_centroid_predict(model_fit, gen.vectors)
                protocol["aog_predictor"] = "nearest_centroid"
            else:
                predicted = predicted_labels
                protocol["aog_predictor"] = "supplied"
            gen_value = fidelity.aog(predicted, gen.labels)
            half_fit = fidelity.nearest_centroid_fit(v1.vectors, v1.labels)
            real_value = fidelity.aog(fidelity.nearest_centroid_predict(half_fit, v2.vectors), v2.labels)
            results[metric] = MetricValue(gen_value, real_value)
        elif metric in ("density", "precision"):
            fn = getattr(fidelity, metric)
            results[metric] = MetricValue(fn(real, gen, k), fn(v1, v2, k))
        elif metric in ("coverage", "recall"):
            fn = getattr(diversity, metric)
            results[metric] = MetricValue(fn(real, gen, k), fn(v1, v2, k))
        elif metric == "apd":
            gen_value = diversity.apd(gen, plan)
            real_value = diversity.apd(v2, plan)
            verdict = None
            if config.epsilon_apd is not None:
                close = abs(gen_value - real_value) < config.epsilon_apd
                verdict = "within_epsilon" if close else "outside_epsilon"
            results[metric] = MetricValue(gen_value, real_value, verdict)
        elif metric == "acpd":
            results[metric] = MetricValue(
                diversity.acpd(gen, gen.labels, plan),
                diversity.acpd(v2, v2.labels, plan),
            )
        elif metric == "mms":
            results[metric] = MetricValue(
                diversity.mms(real, gen), diversity.mms_real_reference(real)
            )
        elif metric == "wpd":
            seq_labels = None
            if real is not None and real.labels is not None and len(real) == len(real_seqs):
                seq_labels = real.labels
            s1, s2 = split_indices(len(real_seqs), seq_labels, config.split_seed)
            gen_value = warping.wpd(gen_seqs, plan)
            real_value = warping.wpd(real_seqs.subset(s2), plan)
            verdict = None
            if config.epsilon_wpd is not None:
                verdict = warping.classify_wpd(gen_value, real_value, config.epsilon_wpd).value
            results[metric] = MetricValue(gen_value, real_value, verdict)

    return MetricReport(results, protocol, model)
