"""Seeded multi-trial experiments with CSV reporting."""

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .algorithms import ALGORITHMS
from .datasets import gen_gaussian, gen_uniform, ingest_ratings
from .environment import Environment, trial_seed
from .metrics import make_example_instance, make_lower_bound_instance
from .model import read_instance
from .static import optimal

CSV_COLUMNS = ["trial", "seed", "correct", "pulls", "rounds", "answer_ids", "wall_ms"]
GENERATORS = ("uniform", "gaussian", "i1", "i2", "example1", "example2")


class UsageError(ValueError):
    """Invalid experiment configuration."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce an experiment.

    Exactly one instance source is used: ``instance_path``, ``ratings_path``
    or ``generator`` (with ``n``, ``capacity``, ``epsilon``, ``delta_param``
    and ``instance_seed`` as its parameters).
    """

    algorithm: str
    delta: float = 0.1
    budget: int = None
    trials: int = 1
    master_seed: int = 0
    instance_path: str = None
    generator: str = None
    n: int = None
    capacity: int = None
    epsilon: float = None
    delta_param: float = None
    instance_seed: int = None
    ratings_path: str = None
    min_count: int = 20000
    max_count: int = 40000
    rating_scale: float = 5.0
    count_denominator: float = 40000.0
    item_column: str = "item_id"
    rating_column: str = "rating"
    jobs: int = 1
    timing: bool = False

    def validate(self):
        if self.algorithm not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise UsageError("trials must be >= 1")
        if self.budget is not None and self.budget < 1:
            raise UsageError("budget must be >= 1")
        if self.algorithm in ("unifb", "unifg") and self.budget is None:
            raise UsageError(f"{self.algorithm} is a fixed-budget method and needs --budget")
        if self.algorithm in ("basic", "improved") and not 0.0 < self.delta < 1.0:
            raise UsageError("delta must lie in (0, 1)")
        sources = [self.instance_path, self.generator, self.ratings_path]
        if sum(s is not None for s in sources) != 1:
            raise UsageError("give exactly one of --instance, --gen or --ratings")
        if self.generator is not None and self.generator not in GENERATORS:
            raise UsageError(f"unknown generator {self.generator!r}")
        return self


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    answer: tuple
    correct: bool
    pulls: int
    rounds: int
    wall_ms: float = None

    def row(self):
        return [
            self.trial,
            self.seed,
            "" if self.correct is None else int(self.correct),
            self.pulls,
            self.rounds,
            ";".join(map(str, self.answer)),
            "" if self.wall_ms is None else f"{self.wall_ms:.3f}",
        ]


def _need(value, flag):
    if value is None:
        raise UsageError(f"generator needs {flag}")
    return value


def build_instance(config):
    """Resolve the configured instance source."""
    if config.instance_path is not None:
        try:
            return read_instance(config.instance_path)
        except OSError as exc:
            raise UsageError(f"cannot read instance file: {exc}") from exc
    if config.ratings_path is not None:
        try:
            instance, _ = ingest_ratings(
                config.ratings_path,
                config.min_count,
                config.max_count,
                config.rating_scale,
                config.count_denominator,
                _need(config.capacity, "--k"),
                item_column=config.item_column,
                rating_column=config.rating_column,
            )
        except OSError as exc:
            raise UsageError(f"cannot read ratings file: {exc}") from exc
        return instance
    gen = config.generator
    seed = config.master_seed if config.instance_seed is None else config.instance_seed
    if gen == "uniform":
        return gen_uniform(_need(config.n, "--n"), _need(config.capacity, "--k"), seed)
    if gen == "gaussian":
        return gen_gaussian(_need(config.n, "--n"), _need(config.capacity, "--k"), seed)
    if gen in ("i1", "i2"):
        return make_lower_bound_instance(
            gen.upper(), _need(config.capacity, "--k"), _need(config.delta_param, "--delta-param")
        )
    if gen == "example1":
        return make_example_instance(1, _need(config.n, "--n"), 1)
    return make_example_instance(
        2, _need(config.n, "--n"), _need(config.capacity, "--k"), _need(config.epsilon, "--eps")
    )


def make_explorer(config, capacity):
    cls = ALGORITHMS[config.algorithm]
    if config.algorithm in ("basic", "improved"):
        return cls(delta=config.delta, capacity=capacity, budget=config.budget)
    return cls(budget=config.budget, capacity=capacity)


def run_trial(config, instance, truth, trial):
    seed = trial_seed(config.master_seed, trial)
    env = Environment(instance, seed=seed)
    start = time.perf_counter()
    explorer = make_explorer(config, instance.capacity).fit(env)
    wall = (time.perf_counter() - start) * 1000.0 if config.timing else None
    correct = None if truth is None else explorer.assortment_ == truth
    return (
        TrialRecord(
            trial, seed, explorer.assortment_, correct, explorer.n_pulls_, explorer.n_rounds_, wall
        ),
        explorer.trace_,
    )


def summarize(records):
    """Error rate, pull mean/stddev, mean rounds."""
    judged = [r.correct for r in records if r.correct is not None]
    pulls = [r.pulls for r in records]
    return {
        "error_rate": (sum(not c for c in judged) / len(judged)) if judged else None,
        "mean_pulls": statistics.fmean(pulls),
        "std_pulls": statistics.pstdev(pulls),
        "mean_rounds": statistics.fmean(r.rounds for r in records),
    }


def format_csv(records, summary, master_seed):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.row())
    err = summary["error_rate"]
    writer.writerow(
        [
            "SUMMARY",
            master_seed,
            "" if err is None else repr(err),
            repr(summary["mean_pulls"]),
            repr(summary["mean_rounds"]),
            f"std_pulls={summary['std_pulls']!r}",
            "",
        ]
    )
    return buf.getvalue()


def format_trace(traces):
    lines = ["round\tepsilon\tcumulative_T\tsurviving_ids\ttheta_lo\ttheta_hi"]
    for trial, trace in traces:
        lines.append(f"# trial {trial}")
        lines.extend(step.line() for step in trace)
    return "\n".join(lines) + "\n"


def _trial_worker(args):
    return run_trial(*args)


def run_experiment(config, out=None, trace_out=None):
    """Run all trials and return ``(records, summary, csv_text)``.

    Trials may run in a process pool (``config.jobs``); rows are ordered
    by trial index, so output does not depend on scheduling.
    """
    config.validate()
    instance = build_instance(config)
    truth = optimal(instance.rewards, instance.preferences, instance.capacity).best
    jobs = [(config, instance, truth, t) for t in range(config.trials)]
    if config.jobs > 1 and config.trials > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_trial_worker, jobs))
    else:
        results = [_trial_worker(j) for j in jobs]
    results.sort(key=lambda res: res[0].trial)
    records = [rec for rec, _ in results]
    summary = summarize(records)
    text = format_csv(records, summary, config.master_seed)
    if out is not None:
        Path(out).write_text(text, encoding="utf-8", newline="\n")
    if trace_out is not None:
        traces = [(rec.trial, trace) for rec, trace in results]
        Path(trace_out).write_text(format_trace(traces), encoding="utf-8", newline="\n")
    return records, summary, text
