"""Acceptance criteria, one test each.

Every test records a single ``[PASS]``/``[FAIL]`` line; the lines are printed
immediately (visible with ``-s``) and again in pytest's terminal summary.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

from mnl_explore.algorithms import (
    ImprovedExplorer,
    UniformGroupExplorer,
    UniformSingletonExplorer,
    run_basic,
    run_improved,
)
from mnl_explore.cli import main
from mnl_explore.datasets import gen_uniform
from mnl_explore.environment import Environment, trial_seed
from mnl_explore.metrics import DegenerateInstanceError, gap_profile, make_lower_bound_instance
from mnl_explore.model import Instance, PreferenceBounds, choice_prob
from mnl_explore.prune import (
    ThetaInterval,
    prune,
    survives_oracle,
    survives_sweep,
    survivor_vector,
    theta_interval,
)
from mnl_explore.static import brute_force_optimal, optimal, top_set

from conftest import corpus, random_instance

TRIALS = 200
CORPUS = corpus(2024, 1000)


@pytest.fixture
def report(request):
    def _report(number, title, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
        print(line)
        request.config.acceptance_lines.append(line)
        assert ok, line

    return _report


def _three_items():
    return Instance([0.8, 0.6, 0.4], [0.5, 0.5, 0.5], 2)


@pytest.fixture(scope="module")
def confidence_runs():
    inst = _three_items()
    out = {}
    for name, fn in (("basic", run_basic), ("improved", run_improved)):
        results = [
            fn(Environment(inst, seed=trial_seed(5, t)), inst.n, inst.capacity, 0.1)
            for t in range(TRIALS)
        ]
        out[name] = results
    return out


def test_c01_static_optimizer_exactness(report):
    start = time.perf_counter()
    worst, mismatched = 0.0, 0
    for inst in CORPUS:
        fast = optimal(inst.rewards, inst.preferences, inst.capacity)
        ref = brute_force_optimal(inst.rewards, inst.preferences, inst.capacity)
        worst = max(worst, abs(fast.theta - ref.theta))
        mismatched += fast.best != ref.best
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and mismatched == 0 and elapsed < 10
    report(1, "static optimizer vs brute force", ok,
           f"max |dtheta|={worst:.2e}, set mismatches={mismatched}, {elapsed:.2f}s")


def test_c02_top_set_at_optimum(report):
    bad = 0
    for inst in CORPUS:
        opt = optimal(inst.rewards, inst.preferences, inst.capacity)
        bad += top_set(inst.rewards, inst.preferences, opt.theta, inst.capacity) != opt.best
    report(2, "top set at the optimal value equals the best set", bad == 0,
           f"{bad}/{len(CORPUS)} mismatches")


def test_c03_lower_bound_closed_forms(report):
    problems = []
    for K, delta in ((2, 0.1), (3, 0.05), (5, 0.01)):
        prof = gap_profile(make_lower_bound_instance("I1", K, delta))
        gap_k = delta / (2 * (2 - delta))
        if abs(prof.theta - 0.5) > 1e-9:
            problems.append(f"K={K} theta={prof.theta}")
        if abs(prof.gaps[K - 1] - gap_k) > 1e-9:
            problems.append(f"K={K} gap={prof.gaps[K - 1]}")
        if prof.h2 > 64 / delta**2:
            problems.append(f"K={K} H2={prof.h2}")
        if K == 2 and not math.isclose(prof.h2, 4 * (2 * (2 - delta) / delta) ** 2, rel_tol=1e-9):
            problems.append(f"K=2 H2={prof.h2}")
    report(3, "lower-bound instance closed forms", not problems,
           "; ".join(problems) or "3 parameter sets match")


def _query(rng):
    n = int(rng.integers(1, 13))
    K = int(rng.integers(1, min(4, n) + 1))
    r = rng.uniform(0.05, 1, n)
    lower = rng.uniform(0, 1, n) * (rng.random(n) > 0.15)
    upper = np.minimum(lower + rng.uniform(0, 0.5, n), 1)
    bounds = PreferenceBounds(lower, upper)
    i = int(rng.integers(1, n + 1))
    if rng.random() < 0.7:
        iv = theta_interval(r, bounds, K)
    else:
        lo, hi = np.sort(rng.uniform(0, 1, 2))
        iv = ThetaInterval(lo, hi)
    return r, survivor_vector(bounds, i), i, iv, K


def test_c04_prune_correctness(report):
    start = time.perf_counter()
    rng = np.random.default_rng(404)

    disagree = 0
    for _ in range(2000):
        args = _query(rng)
        disagree += survives_sweep(*args) != survives_oracle(*args)

    superset = 0
    for inst in corpus(405, 500):
        v = inst.preferences
        lower = v * (1 - rng.uniform(0, 0.5, inst.n))
        upper = np.minimum(v + rng.uniform(0, 0.5, inst.n), 1)
        best = optimal(inst.rewards, v, inst.capacity).best
        superset += not set(best) <= set(prune(inst.rewards, inst.capacity, PreferenceBounds(lower, upper)))

    cases = kept_losers = 0
    source = np.random.default_rng(406)
    while cases < 500:
        inst = random_instance(source, n_low=2)
        try:
            prof = gap_profile(inst)
        except DegenerateInstanceError:
            continue
        losers = [i for i in range(1, inst.n + 1) if i not in prof.best]
        if not losers:
            continue
        target = max(losers, key=lambda i: prof.gaps[i - 1])
        eps = min(rng.uniform(0.2, 0.99) * prof.gaps[target - 1] / 8, 1.0)
        v, K = inst.preferences, inst.capacity
        lower = np.maximum(v - rng.uniform(0, 1, inst.n) * eps / K, 0)
        upper = np.minimum(v + rng.uniform(0, 1, inst.n) * eps / K, 1)
        kept = prune(inst.rewards, K, PreferenceBounds(lower, upper))
        cases += 1
        kept_losers += target in kept
    elapsed = time.perf_counter() - start
    ok = disagree == 0 and superset == 0 and kept_losers == 0 and elapsed < 30
    report(4, "prune: sweep vs oracle, superset, elimination", ok,
           f"disagreements={disagree}/2000, superset violations={superset}/500, "
           f"elimination violations={kept_losers}/500, {elapsed:.2f}s")


def test_c05_fixed_confidence_success(report, confidence_runs):
    rates = {
        name: sum(res.answer != (1, 2) for res in results) / TRIALS
        for name, results in confidence_runs.items()
    }
    ok = all(rate <= 0.164 for rate in rates.values())
    report(5, "fixed-confidence error rate <= 0.164", ok,
           ", ".join(f"{k} error={v:.3f}" for k, v in rates.items()))


def test_c06_improved_uses_fewer_pulls(report, confidence_runs):
    mean = {k: np.mean([res.pulls for res in v]) for k, v in confidence_runs.items()}
    report(6, "Improved mean pulls < Basic mean pulls", mean["improved"] < mean["basic"],
           f"basic={mean['basic']:.1f}, improved={mean['improved']:.1f}")


def test_c07_simulator_fidelity(report):
    rng = np.random.default_rng(707)
    worst_p = 1.0
    for pair in range(20):
        n = int(rng.integers(2, 9))
        K = int(rng.integers(1, n + 1))
        inst = Instance(rng.uniform(0.1, 1, n), rng.uniform(0.05, 1, n), K)
        S = tuple(sorted(rng.choice(np.arange(1, n + 1), size=K, replace=False).tolist()))
        draws = Environment(inst, seed=trial_seed(7, pair)).sample_choices(S, 100_000)
        labels = (0,) + S
        observed = [np.count_nonzero(draws == j) for j in labels]
        expected = [100_000 * choice_prob(S, inst.preferences, j) for j in labels]
        worst_p = min(worst_p, stats.chisquare(observed, expected).pvalue)

    worst_rel = 0.0
    for k, S in enumerate(((1,), (1, 2), (2, 3, 4), (1, 2, 3, 4, 5))):
        inst = Instance(np.full(5, 0.5), [0.2, 0.9, 0.5, 1.0, 0.05], 5)
        env = Environment(inst, seed=trial_seed(77, k))
        calls = env.explore_set_many(S, 10_000)
        target = 1 + sum(inst.preferences[i - 1] for i in S)
        worst_rel = max(worst_rel, abs(calls.pulls_used / 10_000 - target) / target)
    ok = worst_p > 1e-3 and worst_rel <= 0.02
    report(7, "simulator fidelity", ok,
           f"min chi-square p={worst_p:.3g} over 20 pairs, max explore_set pull deviation={worst_rel:.2%}")


def test_c08_h_relations(report):
    violations = checked = 0
    for inst in CORPUS:
        try:
            prof = gap_profile(inst)
        except DegenerateInstanceError:
            continue
        inv = [1 / Fraction(g) ** 2 for g in prof.gaps]
        h1 = sum(inv)
        h2 = sum((Fraction(v) + Fraction(1, inst.capacity)) * w
                 for v, w in zip(inst.preferences, inv)) + max(inv)
        checked += 1
        violations += not (h1 / inst.capacity <= h2 <= 3 * h1)
    ok = violations == 0 and checked >= 0.99 * len(CORPUS)
    report(8, "H1/K <= H2 <= 3 H1", ok, f"{violations} violations over {checked} instances")


def _slack(p, q, trials):
    return 3 * math.sqrt((p * (1 - p) + q * (1 - q)) / trials)


def test_c09_baseline_ordering(report):
    budget = 10**6
    makers = {
        "unifb": lambda: UniformSingletonExplorer(budget=budget),
        "unifg": lambda: UniformGroupExplorer(budget=budget),
        "improved": lambda: ImprovedExplorer(delta=0.1, budget=budget),
    }
    errors = dict.fromkeys(makers, 0)
    for t in range(TRIALS):
        inst = gen_uniform(20, 5, seed=t)
        truth = optimal(inst.rewards, inst.preferences, inst.capacity).best
        seed = trial_seed(9, t)
        for name, make in makers.items():
            errors[name] += make().fit(Environment(inst, seed=seed)).assortment_ != truth
    e = {k: v / TRIALS for k, v in errors.items()}
    ok = (e["unifg"] <= e["unifb"] + _slack(e["unifg"], e["unifb"], TRIALS)
          and e["improved"] <= e["unifg"] + _slack(e["improved"], e["unifg"], TRIALS))
    report(9, "error ordering Improved <= UnifG <= UnifB at budget 1e6", ok,
           ", ".join(f"{k}={v:.3f}" for k, v in e.items()))


def test_c10_reproducible_csv(report, tmp_path):
    configs = [
        ["--algo", "basic", "--gen", "i1", "--k", "2", "--delta-param", "0.1", "--trials", "5"],
        ["--algo", "improved", "--gen", "uniform", "--n", "12", "--k", "3", "--trials", "5", "--seed", "3"],
        ["--algo", "unifg", "--gen", "gaussian", "--n", "10", "--k", "4", "--budget", "5000", "--trials", "4"],
        ["--algo", "unifb", "--gen", "uniform", "--n", "10", "--k", "4", "--budget", "5000", "--trials", "4"],
    ]
    differing = 0
    for k, args in enumerate(configs):
        outs = []
        for run, extra in enumerate(([], [], ["--jobs", "2"])):
            dest = tmp_path / f"{k}_{run}.csv"
            assert main(args + extra + ["--out", str(dest)]) == 0
            outs.append(dest.read_bytes())
        differing += len(set(outs)) != 1
    report(10, "byte-identical CSV output", differing == 0,
           f"{len(configs)} configs x 3 runs (one parallel), {differing} differ")
