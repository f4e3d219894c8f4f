"""Reward gaps, instance complexities and the named hard/illustrative instances."""

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .model import Instance
from .static import optimal

DEGENERATE_GAP = 1e-12


class DegenerateInstanceError(ValueError):
    """Raised when some reward gap vanishes, so the complexities are infinite."""


@dataclass(frozen=True, eq=False)
class GapProfile:
    """Advantages, reward gaps and complexities H1/H2 of an instance.

    Attributes
    ----------
    theta : float
        Optimal expected reward.
    best : tuple of int
        Optimal assortment.
    advantages : ndarray of shape (n,)
        ``(r_i - theta) v_i``.
    gaps : ndarray of shape (n,)
        Per-item reward gaps; every member of ``best`` shares the same gap.
    h1, h2 : float
        Instance complexities.
    """

    theta: float
    best: tuple
    advantages: np.ndarray
    gaps: np.ndarray
    h1: float
    h2: float

    def rows(self):
        """Per-item ``(id, advantage, gap, in_best)`` tuples."""
        best = set(self.best)
        return [
            (i + 1, float(eta), float(gap), (i + 1) in best)
            for i, (eta, gap) in enumerate(zip(self.advantages, self.gaps))
        ]


def gap_profile(instance):
    """Compute reward gaps and the H1/H2 complexities of ``instance``.

    Outside the optimal set the gap is ``eta^(K) - eta_i`` when the optimum
    is full, else ``-eta_i``. Inside it every item gets the common gap
    ``min(min_{j outside} gap_j, min_{j inside} (r_j - theta))``, which
    equals ``eta^(K) - eta^(K+1)`` capped by the reward margin when the
    optimum is full and stays defined when it is not.

    Raises
    ------
    DegenerateInstanceError
        If some gap is zero (within 1e-12).
    """
    r, v, K = instance.rewards, instance.preferences, instance.capacity
    opt = optimal(r, v, K)
    theta, best = opt.theta, opt.best
    eta = (r - theta) * v
    inside = np.zeros(instance.n, dtype=bool)
    inside[np.asarray(best, dtype=np.intp) - 1] = True

    gaps = np.empty(instance.n)
    if len(best) == K:
        eta_k = np.sort(eta)[::-1][K - 1]
        gaps[~inside] = eta_k - eta[~inside]
    else:
        gaps[~inside] = -eta[~inside]
    if inside.any():
        outside_min = gaps[~inside].min() if (~inside).any() else np.inf
        gaps[inside] = min(outside_min, float((r[inside] - theta).min()))

    if np.any(np.abs(gaps) <= DEGENERATE_GAP):
        raise DegenerateInstanceError(
            "instance has a zero reward gap; its complexity is unbounded"
        )
    inv_sq = 1.0 / gaps**2
    h1 = float(inv_sq.sum())
    h2 = float(((v + 1.0 / K) * inv_sq).sum() + inv_sq.max())
    return GapProfile(theta, best, eta, gaps, h1, h2)


def make_lower_bound_instance(which, capacity, delta):
    """Build one of the two K-item instances that are hard to tell apart.

    ``"I1"`` has rewards ``(1, ..., 1, (1 - delta)/(2 - delta))`` and
    preferences ``(1/(K-1), ..., 1/(K-1), 1)``; ``"I2"`` lowers the first
    preference by ``2 delta``.
    """
    K = int(capacity)
    if K < 2:
        raise ValueError(f"capacity must be at least 2, got {capacity}")
    if not 0.0 < delta < 1.0 / (4 * K):
        raise ValueError(f"delta must lie in (0, 1/(4K)) = (0, {1 / (4 * K)}), got {delta}")
    which = str(which).upper()
    if which not in ("I1", "I2"):
        raise ValueError(f"unknown lower-bound instance {which!r}; use 'I1' or 'I2'")
    rewards = np.ones(K)
    rewards[-1] = (1.0 - delta) / (2.0 - delta)
    prefs = np.full(K, 1.0 / (K - 1))
    prefs[-1] = 1.0
    if which == "I2":
        prefs[0] -= 2.0 * delta
    return Instance(rewards, prefs, K)


def make_example_instance(which, n, capacity, epsilon=None):
    """Unit-reward instances contrasting item-level and assortment-level gaps.

    Example 1 (``capacity`` must be 1): preferences ``(1, 1 - 1/sqrt(n),
    1/sqrt(n), ...)``. Example 2: ``capacity`` items of preference 1, the
    rest ``epsilon`` with ``0 < epsilon < 1/capacity``.
    """
    n, K = int(n), int(capacity)
    if which == 1:
        if K != 1:
            raise ValueError("example 1 requires capacity 1")
        if n < 2:
            raise ValueError("example 1 requires at least 2 items")
        prefs = np.full(n, 1.0 / sqrt(n))
        prefs[0] = 1.0
        prefs[1] = 1.0 - 1.0 / sqrt(n)
    elif which == 2:
        if epsilon is None or not 0.0 < epsilon < 1.0 / K:
            raise ValueError(f"example 2 requires epsilon in (0, 1/K), got {epsilon}")
        if not 1 <= K <= n:
            raise ValueError("example 2 requires 1 <= capacity <= n")
        prefs = np.full(n, float(epsilon))
        prefs[:K] = 1.0
    else:
        raise ValueError(f"unknown example {which!r}; use 1 or 2")
    return Instance(np.ones(n), prefs, K)
