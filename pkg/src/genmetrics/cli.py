"""Command line: ``genmetrics {eval,radar,plan-labels,preprocess,fixture}``.

Exit status is 0 on success, 2 for input or validation errors and 3 for
numerical-consistency errors.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from . import protocol, radar
from .diversity import SamplingPlan
from .errors import InputError, NumericalConsistencyError
from .fixtures import summary_features, synth_fixture
from .tensor_io import (
    LatentSet,
    TensorFile,
    label_distribution,
    load_array,
    load_sequences,
    preprocess,
    read_csv_labels,
    read_csv_matrix,
    read_tensor,
    write_csv_labels,
    write_tensor,
)

log = logging.getLogger("genmetrics")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


def _labels(path, header):
    return None if path is None else read_csv_labels(path, header=header)


def cmd_eval(args):
    metrics = tuple(m.strip() for m in args.metrics.split(",") if m.strip())
    if metrics == ("all",):
        metrics = protocol.METRICS
    config = protocol.ProtocolConfig(
        k=args.k,
        plan=SamplingPlan(args.subset_size, args.reps, args.seed),
        epsilon_apd=args.epsilon_apd,
        epsilon_wpd=args.epsilon_wpd,
        metrics=metrics,
        split_seed=args.seed if args.split_seed is None else args.split_seed,
    )
    real = gen = None
    if args.real_latents:
        real = LatentSet(load_array(args.real_latents, args.header), _labels(args.labels, args.header))
    if args.gen_latents:
        gen = LatentSet(load_array(args.gen_latents, args.header), _labels(args.cond_labels, args.header))
    real_seqs = load_sequences(args.real_seqs) if args.real_seqs else None
    gen_seqs = load_sequences(args.gen_seqs) if args.gen_seqs else None
    report = protocol.evaluate(
        real, gen, real_seqs, gen_seqs,
        predicted_labels=_labels(args.pred_labels, args.header),
        config=config,
        model=args.model,
    )
    protocol.emit_report(report, args.out)
    if args.csv:
        protocol.write_report_csv(report, args.csv)
    log.info("wrote %s", args.out)


def cmd_radar(args):
    reports = [protocol.load_report(p) for p in args.reports]
    names = args.names.split(",") if args.names else None
    normalized = radar.emit_radar(reports, args.out, names)
    if args.csv:
        radar.write_radar_csv(normalized, args.csv)
    if args.png:
        from .plotting import save_radar_figure

        save_radar_figure(normalized, args.png, title=args.title)
    log.info("wrote %s", args.out)


def cmd_plan_labels(args):
    dist = label_distribution(read_csv_labels(args.labels, header=args.header))
    plan = protocol.generation_plan(dist, protocol.parse_factor(args.factor))
    with open(args.out, "w", newline="\n") as fh:
        fh.write("class,count\n")
        for c, n in plan.counts.items():
            fh.write(f"{c},{n}\n")


def cmd_preprocess(args):
    root = Path(args.input)
    if not root.is_dir():
        raise InputError(f"{root} is not a directory")
    files = sorted(p for p in root.iterdir() if p.suffix.lower() in (".evgm", ".csv"))
    if not files:
        raise InputError(f"no .evgm or .csv sequences in {root}")
    raw = [
        read_csv_matrix(p, header=args.header) if p.suffix.lower() == ".csv" else read_tensor(p).data
        for p in files
    ]
    seqset, record = preprocess(raw, args.target_len, args.groups)
    write_tensor(TensorFile.from_array(seqset.sequences), args.out)
    if args.scaling_out:
        with open(args.scaling_out, "w") as fh:
            json.dump(record.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    log.info("wrote %d sequences of length %d to %s", len(seqset), seqset.length, args.out)


def cmd_fixture(args):
    seqs, labels = synth_fixture(
        args.per_class, args.classes, args.len, args.channels, args.seed,
        shift=args.shift, warp=args.warp, jitter=args.jitter, noise=args.noise,
        template_seed=args.template_seed,
    )
    prefix = args.out_prefix
    write_tensor(TensorFile.from_array(seqs.sequences), f"{prefix}_seqs.evgm")
    write_tensor(TensorFile.from_array(summary_features(seqs)), f"{prefix}_latents.evgm")
    write_csv_labels(labels, f"{prefix}_labels.csv")


def build_parser():
    parser = argparse.ArgumentParser(prog="genmetrics", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a generated set against a real set")
    p.add_argument("--real-latents")
    p.add_argument("--gen-latents")
    p.add_argument("--real-seqs")
    p.add_argument("--gen-seqs")
    p.add_argument("--pred-labels", help="classifier predictions on the generated set")
    p.add_argument("--cond-labels", help="labels the generation was conditioned on")
    p.add_argument("--labels", help="class labels of the real set")
    p.add_argument("--metrics", default="all", help="comma-separated subset, or 'all'")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--subset-size", type=int, default=200)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--split-seed", type=int, help="defaults to --seed")
    p.add_argument("--epsilon-apd", type=float)
    p.add_argument("--epsilon-wpd", type=float)
    p.add_argument("--model", default="model", help="name used in reports and radar charts")
    p.add_argument("--header", action="store_true", help="skip one header line in CSV inputs")
    p.add_argument("--out", required=True)
    p.add_argument("--csv", help="also write a metric,gen,real,verdict table")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("radar", help="draw a radar chart from reports")
    p.add_argument("--reports", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--names", help="comma-separated model names overriding the reports")
    p.add_argument("--csv", help="also write the normalized table")
    p.add_argument("--png", help="also render a matplotlib figure")
    p.add_argument("--title")
    p.set_defaults(func=cmd_radar)

    p = sub.add_parser("plan-labels", help="class counts for label-preserving generation")
    p.add_argument("--labels", required=True)
    p.add_argument("--factor", required=True, help="positive rational, e.g. 2 or 3/2")
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plan_labels)

    p = sub.add_parser("preprocess", help="resample and min-max scale raw sequences")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--target-len", type=int, help="defaults to the average length")
    p.add_argument("--groups", type=int, default=3, help="channel groups j mod G (x, y, z)")
    p.add_argument("--header", action="store_true")
    p.add_argument("--scaling-out", help="write the min/max record as JSON")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("fixture", help="write a synthetic labelled sequence set")
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--per-class", type=int, required=True)
    p.add_argument("--len", type=int, required=True)
    p.add_argument("--channels", type=int, required=True)
    p.add_argument("--seed", type=int, default=0, help="per-sample variation")
    p.add_argument("--template-seed", type=int, default=0, help="class waveforms")
    p.add_argument("--shift", type=float, default=0.1)
    p.add_argument("--warp", type=float, default=0.3)
    p.add_argument("--jitter", type=float, default=0.1)
    p.add_argument("--noise", type=float, default=0.02)
    p.add_argument("--out-prefix", required=True)
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.func(args)
    except NumericalConsistencyError as exc:
        print(f"genmetrics: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, OSError) as exc:
        print(f"genmetrics: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
