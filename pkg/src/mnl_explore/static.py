"""Exact capacity-constrained assortment optimization under a known MNL model.

The solver rests on a monotone feasibility test: ``theta`` does not exceed
the optimal reward exactly when the up-to-K items with the largest positive
scores ``(r_i - theta) v_i`` have total score at least ``theta``. Bisection
on that test brackets the optimum; a few fixed-point steps
``theta <- R(top_set(theta))`` then land exactly on it.
"""

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._validation import check_capacity
from .model import expected_reward

BISECT_ITERATIONS = 60
BRUTE_FORCE_MAX_ITEMS = 20


@dataclass(frozen=True)
class OptimumResult:
    """Optimal expected reward and the smallest optimal assortment."""

    theta: float
    best: tuple


def _ground_set(n, items):
    if items is None:
        return np.arange(1, n + 1)
    return np.asarray(sorted(items), dtype=np.intp).reshape(-1)


def top_set(rewards, preferences, theta, capacity, items=None):
    """Up to ``capacity`` items with the largest ``(r_i - theta) v_i``, minus those with ``r_i <= theta``.

    ``rewards`` and ``preferences`` are full-length vectors indexed by
    ``id - 1``; ``items`` restricts the ground set (default: all ids). Equal
    scores are resolved in favour of the smaller id.
    """
    r = np.asarray(rewards, dtype=np.float64)
    v = np.asarray(preferences, dtype=np.float64)
    ids = _ground_set(r.shape[0], items)
    if ids.size == 0:
        return ()
    k = min(check_capacity(capacity), ids.size)
    rr = r[ids - 1]
    score = (rr - theta) * v[ids - 1]
    # ids ascend, so a stable sort keeps the smaller id first among equal scores
    order = np.argsort(-score, kind="stable")[:k]
    chosen = ids[order][rr[order] - theta > 0]
    return tuple(sorted(chosen.tolist()))


def _top_score(rewards, preferences, theta, capacity, items):
    chosen = top_set(rewards, preferences, theta, capacity, items)
    if not chosen:
        return chosen, 0.0
    idx = np.asarray(chosen) - 1
    r = np.asarray(rewards, dtype=np.float64)[idx]
    v = np.asarray(preferences, dtype=np.float64)[idx]
    return chosen, float(np.dot(r - theta, v))


def theta_feasible(rewards, preferences, theta, capacity, items=None):
    """Return True iff ``theta`` is at most the optimal expected reward."""
    _, total = _top_score(rewards, preferences, theta, capacity, items)
    return total >= theta


def _drop_null_items(best, preferences):
    v = np.asarray(preferences, dtype=np.float64)
    return tuple(i for i in best if v[i - 1] > 0)


def optimal(rewards, preferences, capacity, items=None):
    """Maximise the expected reward over assortments of size at most ``capacity``.

    Returns
    -------
    OptimumResult
        ``theta`` is the optimal reward and ``best`` the smallest maximiser.
    """
    lo, hi = 0.0, 1.0
    for _ in range(BISECT_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if theta_feasible(rewards, preferences, mid, capacity, items):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12:
            break
    best = top_set(rewards, preferences, lo, capacity, items)
    theta = expected_reward(best, rewards, preferences)
    for _ in range(8):
        cand = top_set(rewards, preferences, theta, capacity, items)
        if cand == best:
            break
        cand_theta = expected_reward(cand, rewards, preferences)
        if cand_theta < theta - 1e-12:
            break
        best, theta = cand, cand_theta
    best = _drop_null_items(best, preferences)
    return OptimumResult(expected_reward(best, rewards, preferences), best)


def brute_force_optimal(rewards, preferences, capacity, items=None):
    """Exhaustive-search reference for :func:`optimal` (at most 20 items)."""
    r = np.asarray(rewards, dtype=np.float64)
    ids = _ground_set(r.shape[0], items).tolist()
    if len(ids) > BRUTE_FORCE_MAX_ITEMS:
        raise ValueError(
            f"brute force is limited to {BRUTE_FORCE_MAX_ITEMS} items, got {len(ids)}"
        )
    k = min(check_capacity(capacity), len(ids))
    best, theta = (), 0.0
    # size-ascending lexicographic enumeration: the first maximiser found wins ties
    for size in range(1, k + 1):
        for subset in combinations(ids, size):
            value = expected_reward(subset, rewards, preferences)
            if value > theta + 1e-12:
                best, theta = subset, value
    return OptimumResult(theta, best)


__all__ = [
    "OptimumResult",
    "top_set",
    "theta_feasible",
    "optimal",
    "brute_force_optimal",
]
