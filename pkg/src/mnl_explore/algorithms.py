"""Fixed-confidence pure-exploration algorithms and uniform-sampling baselines.

Both elimination algorithms run in rounds ``tau = 0, 1, ...`` with accuracy
``eps_tau = 2^-(tau+3)``. Each surviving item is sampled until its
cumulative sample count reaches ``T_tau``; preferences are estimated,
widened by ``eps_tau`` into a confidence box, and fed to :func:`prune`.
The run stops once at most K candidates remain and each candidate's reward
beats the optimistic reward of the candidate set.

:class:`BasicExplorer` samples with singleton offers (``T`` coefficient
32); :class:`ImprovedExplorer` offers groups of up to K items until a
no-purchase (coefficient 8). Passing ``budget`` turns either into a
fixed-budget method that solves the static problem over the survivors
when the budget runs out.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_budget, check_capacity, check_delta
from .environment import Environment
from .model import PreferenceBounds, expected_reward
from .prune import prune, theta_interval
from .static import optimal

IMPROVED_PASSES = 16


def round_epsilon(tau):
    return 2.0 ** (-tau - 3)


@dataclass(frozen=True)
class Schedule:
    """Cumulative per-item sample targets ``T_tau``.

    ``T_tau = ceil(coefficient / eps_tau^2 * ln(16 N (tau + 1)^2 / delta))``
    with ``T_-1 = 0``.
    """

    n_items: int
    delta: float
    coefficient: float

    def epsilon(self, tau):
        return round_epsilon(tau)

    def target(self, tau):
        if tau < 0:
            return 0
        eps = round_epsilon(tau)
        log_term = math.log(16 * self.n_items * (tau + 1) ** 2 / self.delta)
        return math.ceil(self.coefficient / eps**2 * log_term)

    def increment(self, tau):
        return self.target(tau) - self.target(tau - 1)


def basic_schedule(n_items, delta):
    return Schedule(n_items, delta, 32.0)


def improved_schedule(n_items, delta):
    return Schedule(n_items, delta, 8.0)


def partition(items, capacity):
    """Consecutive chunks of ``capacity`` ids (ascending); the last may be shorter."""
    items = sorted(items)
    return [tuple(items[k : k + capacity]) for k in range(0, len(items), capacity)]


@dataclass(frozen=True)
class RoundTrace:
    round: int
    epsilon: float
    cumulative_T: int
    surviving: tuple
    theta_lo: float
    theta_hi: float

    def line(self):
        ids = ",".join(map(str, self.surviving))
        return (
            f"{self.round}\t{self.epsilon!r}\t{self.cumulative_T}\t{ids}"
            f"\t{self.theta_lo!r}\t{self.theta_hi!r}"
        )


@dataclass
class RunResult:
    answer: tuple
    pulls: int
    rounds: int
    budget_exhausted: bool = False
    trace: list = field(default_factory=list)


def _bounded_estimate(x):
    return np.clip(x, 0.0, 1.0)


class _Explorer(BaseEstimator):
    """Shared fit/validation plumbing; subclasses implement :meth:`_run`."""

    def _setup(self, env):
        if not isinstance(env, Environment):
            raise TypeError("fit expects an Environment")
        n = env.n_items
        capacity = env.capacity if self.capacity is None else self.capacity
        return n, check_capacity(capacity, n), check_budget(self.budget)

    def fit(self, env, y=None):
        """Explore ``env`` until the answer is certified or the budget is spent.

        Parameters
        ----------
        env : Environment
        y : None
            Ignored.

        Returns
        -------
        self
        """
        start = env.pulls if isinstance(env, Environment) else 0
        result = self._run(env)
        result.pulls = env.pulls - start
        self.result_ = result
        self.assortment_ = result.answer
        self.n_pulls_ = result.pulls
        self.n_rounds_ = result.rounds
        self.budget_exhausted_ = result.budget_exhausted
        self.trace_ = result.trace
        return self

    def predict(self, X=None):
        """Return the identified assortment."""
        check_is_fitted(self, "assortment_")
        return self.assortment_


class _EliminationExplorer(_Explorer):
    coefficient = None

    def __init__(self, delta=0.1, capacity=None, budget=None):
        self.delta = delta
        self.capacity = capacity
        self.budget = budget

    def _confidence_bounds(self, estimates, eps, surviving):
        a = np.zeros_like(estimates)
        b = np.zeros_like(estimates)
        idx = np.asarray(surviving, dtype=np.intp) - 1
        a[idx] = np.maximum(estimates[idx] - eps, 0.0)
        b[idx] = np.minimum(estimates[idx] + eps, 1.0)
        return PreferenceBounds(a, b)

    def _run(self, env):
        n, K, budget = self._setup(env)
        delta = check_delta(self.delta)
        schedule = Schedule(n, delta, self.coefficient)
        rewards = np.asarray(env.rewards)
        self._init_stats(n)
        surviving = tuple(range(1, n + 1))
        remaining = budget
        trace = []
        tau = 0
        while True:
            if not surviving:
                raise RuntimeError("surviving item set became empty")
            used, complete = self._pull_round(env, surviving, schedule.increment(tau), K, remaining)
            if remaining is not None:
                remaining -= used
            estimates = self._estimates()
            if not complete:
                best = optimal(rewards, estimates, K, surviving).best
                return RunResult(best, 0, tau, True, trace)

            eps = schedule.epsilon(tau)
            bounds = self._confidence_bounds(estimates, eps, surviving)
            interval = theta_interval(rewards, bounds, K, surviving)
            trace.append(
                RoundTrace(tau, eps, schedule.target(tau), surviving, interval.lo, interval.hi)
            )
            cand = prune(rewards, K, bounds, surviving, interval)
            if len(cand) <= K:
                optimistic = expected_reward(cand, rewards, bounds.upper)
                if all(rewards[i - 1] > optimistic for i in cand):
                    return RunResult(cand, 0, tau + 1, False, trace)
            surviving = cand
            tau += 1


class BasicExplorer(_EliminationExplorer):
    """Round-based elimination with singleton offers.

    Parameters
    ----------
    delta : float, default=0.1
        Target error probability.
    capacity : int, optional
        Assortment size limit; defaults to the environment's.
    budget : int, optional
        Total pull budget. When set, the run stops pulling once the budget
        is spent and answers with the static optimum over the surviving
        items under the current estimates.

    Attributes
    ----------
    assortment_ : tuple of int
    n_pulls_ : int
    n_rounds_ : int
        Completed rounds.
    budget_exhausted_ : bool
    trace_ : list of RoundTrace
    """

    coefficient = 32.0

    def _init_stats(self, n):
        self.ones_ = np.zeros(n, dtype=np.int64)
        self.samples_ = np.zeros(n, dtype=np.int64)

    def _estimates(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            est = np.minimum(self.samples_ / self.ones_ - 1.0, 1.0)
        est[self.ones_ == 0] = 1.0
        est[self.samples_ == 0] = 0.0
        return _bounded_estimate(est)

    def _pull_round(self, env, surviving, per_item, K, remaining):
        need = per_item * len(surviving)
        if remaining is None or remaining >= need:
            shares = [per_item] * len(surviving)
        else:
            q, extra = divmod(remaining, len(surviving))
            shares = [q + (k < extra) for k in range(len(surviving))]
        used = 0
        for i, share in zip(surviving, shares):
            ones, calls = env.explore_many(i, share)
            self.ones_[i - 1] += ones
            self.samples_[i - 1] += calls
            used += calls
        return used, used == need


class ImprovedExplorer(_EliminationExplorer):
    """Round-based elimination that samples groups of up to K items.

    Each round partitions the survivors into consecutive id chunks of size
    K and runs explore-set calls on every chunk; an item's estimate is its
    mean pick count over all calls that offered it. Parameters and
    attributes as in :class:`BasicExplorer`.
    """

    coefficient = 8.0

    def _init_stats(self, n):
        self.picks_ = np.zeros(n, dtype=np.int64)
        self.calls_ = np.zeros(n, dtype=np.int64)

    def _estimates(self):
        with np.errstate(divide="ignore", invalid="ignore"):
            est = self.picks_ / self.calls_
        est[self.calls_ == 0] = 0.0
        return _bounded_estimate(est)

    def _pull_round(self, env, surviving, per_group, K, remaining):
        groups = partition(surviving, K)
        q, extra = divmod(per_group, IMPROVED_PASSES)
        shares = [q + (p < extra) for p in range(IMPROVED_PASSES)]
        used = 0
        for share in shares:
            if share == 0:
                continue
            for group in groups:
                left = None if remaining is None else remaining - used
                res = env.explore_set_many(group, share, max_pulls=left)
                idx = np.asarray(group, dtype=np.intp) - 1
                self.picks_[idx] += res.counts
                self.calls_[idx] += res.calls
                used += res.pulls_used
                if res.truncated:
                    return used, False
        return used, True


class _BudgetedBaseline(_Explorer):
    def __init__(self, budget=10**6, capacity=None):
        self.budget = budget
        self.capacity = capacity

    def _setup(self, env):
        n, K, budget = super()._setup(env)
        if budget is None:
            raise ValueError(f"{type(self).__name__} needs a pull budget")
        return n, K, budget


class UniformSingletonExplorer(_BudgetedBaseline):
    """Fixed-budget baseline: offer every singleton in turn, then solve statically.

    Parameters
    ----------
    budget : int
    capacity : int, optional
    """

    def _run(self, env):
        n, K, budget = self._setup(env)
        q, extra = divmod(budget, n)
        ones = np.zeros(n, dtype=np.int64)
        samples = np.zeros(n, dtype=np.int64)
        for i in range(1, n + 1):
            ones[i - 1], samples[i - 1] = env.explore_many(i, q + (i <= extra))
        with np.errstate(divide="ignore", invalid="ignore"):
            est = np.minimum(samples / ones - 1.0, 1.0)
        est[ones == 0] = 1.0
        est[samples == 0] = 0.0
        self.estimates_ = _bounded_estimate(est)
        best = optimal(np.asarray(env.rewards), self.estimates_, K).best
        return RunResult(best, 0, q, True)


class UniformGroupExplorer(_BudgetedBaseline):
    """Fixed-budget baseline: cycle explore-set calls over a fixed partition.

    Calls are issued in passes over the groups; pass sizes are chosen from
    the pulls-per-call observed so far so that each pass uses about half of
    the remaining budget, falling back to one call per group at the end.
    """

    def _run(self, env):
        n, K, budget = self._setup(env)
        groups = partition(range(1, n + 1), K)
        picks = np.zeros(n, dtype=np.int64)
        calls = np.zeros(n, dtype=np.int64)
        group_calls = np.zeros(len(groups), dtype=np.int64)
        group_pulls = np.zeros(len(groups), dtype=np.int64)
        remaining = budget
        share = 1
        while remaining > 0:
            for g, group in enumerate(groups):
                res = env.explore_set_many(group, share, max_pulls=remaining)
                idx = np.asarray(group, dtype=np.intp) - 1
                picks[idx] += res.counts
                calls[idx] += res.calls
                group_calls[g] += res.calls
                group_pulls[g] += res.pulls_used
                remaining -= res.pulls_used
                if remaining <= 0 or res.truncated:
                    remaining = 0
                    break
            per_pass = float(np.sum(group_pulls / np.maximum(group_calls, 1)))
            share = max(1, int(remaining / (2.0 * per_pass))) if per_pass > 0 else 1
        with np.errstate(divide="ignore", invalid="ignore"):
            est = picks / calls
        est[calls == 0] = 0.0
        self.estimates_ = _bounded_estimate(est)
        best = optimal(np.asarray(env.rewards), self.estimates_, K).best
        return RunResult(best, 0, int(group_calls.min()), True)


def _result(explorer, env):
    return explorer.fit(env).result_


def run_basic(env, n_items, capacity, delta):
    """Fixed-confidence singleton-sampling run; see :class:`BasicExplorer`."""
    _check_shape(env, n_items)
    return _result(BasicExplorer(delta=delta, capacity=capacity), env)


def run_improved(env, n_items, capacity, delta):
    """Fixed-confidence group-sampling run; see :class:`ImprovedExplorer`."""
    _check_shape(env, n_items)
    return _result(ImprovedExplorer(delta=delta, capacity=capacity), env)


def run_unif_b(env, n_items, capacity, budget):
    _check_shape(env, n_items)
    return _result(UniformSingletonExplorer(budget=budget, capacity=capacity), env)


def run_unif_g(env, n_items, capacity, budget):
    _check_shape(env, n_items)
    return _result(UniformGroupExplorer(budget=budget, capacity=capacity), env)


def run_fixed_budget(which, env, n_items, capacity, delta, budget):
    """Budget-capped variant of ``"basic"`` or ``"improved"``."""
    _check_shape(env, n_items)
    classes = {"basic": BasicExplorer, "improved": ImprovedExplorer}
    if which not in classes:
        raise ValueError(f"unknown algorithm {which!r}; use 'basic' or 'improved'")
    return _result(classes[which](delta=delta, capacity=capacity, budget=budget), env)


def _check_shape(env, n_items):
    if n_items != env.n_items:
        raise ValueError(f"environment has {env.n_items} items, got n_items={n_items}")


ALGORITHMS = {
    "basic": BasicExplorer,
    "improved": ImprovedExplorer,
    "unifb": UniformSingletonExplorer,
    "unifg": UniformGroupExplorer,
}
