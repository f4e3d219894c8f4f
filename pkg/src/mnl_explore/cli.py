"""Command-line experiment harness (``mnl-bench``)."""

import argparse
import csv
import io
import sys
from pathlib import Path

from .algorithms import ALGORITHMS
from .bench import GENERATORS, ExperimentConfig, UsageError, build_instance, run_experiment
from .metrics import DegenerateInstanceError, gap_profile
from .model import format_instance


def build_parser():
    p = argparse.ArgumentParser(
        prog="mnl-bench",
        description="Pure-exploration experiments for the MNL bandit.",
    )
    p.add_argument("--algo", choices=sorted(ALGORITHMS))
    src = p.add_argument_group("instance source")
    src.add_argument("--instance", metavar="FILE", help="instance text file")
    src.add_argument("--gen", choices=GENERATORS)
    src.add_argument("--ratings", metavar="FILE", help="ratings CSV (item_id,rating,...)")
    src.add_argument("--n", type=int)
    src.add_argument("--k", type=int)
    src.add_argument("--eps", type=float)
    src.add_argument("--delta-param", type=float)
    src.add_argument("--instance-seed", type=int, help="generator seed (default: --seed)")
    src.add_argument("--min-count", type=int, default=20000)
    src.add_argument("--max-count", type=int, default=40000)
    src.add_argument("--rating-scale", type=float, default=5.0)
    src.add_argument("--count-denominator", type=float, default=40000.0)
    src.add_argument("--item-column", default="item_id")
    src.add_argument("--rating-column", default="rating")
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--budget", type=int)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    p.add_argument("--out", metavar="FILE", help="trial CSV (default: stdout)")
    p.add_argument("--trace", metavar="FILE", help="per-round trace (TSV)")
    p.add_argument(
        "--metrics",
        nargs="?",
        const="-",
        metavar="FILE",
        help="write the instance's gap profile as CSV ('-' or no value: stdout)",
    )
    p.add_argument("--dump-instance", metavar="FILE", help="write the resolved instance file")
    p.add_argument("--timing", action="store_true", help="record wall time per trial")
    return p


def metrics_csv(instance):
    prof = gap_profile(instance)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["item", "reward", "preference", "advantage", "gap", "in_best"])
    for (item, eta, gap, inside), r, v in zip(prof.rows(), instance.rewards, instance.preferences):
        w.writerow([item, repr(float(r)), repr(float(v)), repr(eta), repr(gap), int(inside)])
    w.writerow(["THETA", repr(prof.theta), "", "", "", ""])
    w.writerow(["H1", repr(prof.h1), "", "", "", ""])
    w.writerow(["H2", repr(prof.h2), "", "", "", ""])
    return buf.getvalue()


def _emit(text, dest):
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8", newline="\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    config = ExperimentConfig(
        algorithm=args.algo or "basic",
        delta=args.delta,
        budget=args.budget,
        trials=args.trials,
        master_seed=args.seed,
        instance_path=args.instance,
        generator=args.gen,
        n=args.n,
        capacity=args.k,
        epsilon=args.eps,
        delta_param=args.delta_param,
        instance_seed=args.instance_seed,
        ratings_path=args.ratings,
        min_count=args.min_count,
        max_count=args.max_count,
        rating_scale=args.rating_scale,
        count_denominator=args.count_denominator,
        item_column=args.item_column,
        rating_column=args.rating_column,
        jobs=args.jobs,
        timing=args.timing,
    )
    if args.algo is None and args.metrics is None and args.dump_instance is None:
        parser.error("nothing to do: give --algo, --metrics or --dump-instance")
    try:
        config.validate()
        instance = build_instance(config)
        if args.dump_instance:
            _emit(format_instance(instance), args.dump_instance)
        if args.metrics is not None:
            _emit(metrics_csv(instance), args.metrics)
        if args.algo is not None:
            _, _, text = run_experiment(config, trace_out=args.trace)
            _emit(text, args.out)
    except (UsageError, DegenerateInstanceError, ValueError) as exc:
        print(f"mnl-bench: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
