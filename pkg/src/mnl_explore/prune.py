"""Conservative elimination of items that cannot belong to the best assortment.

Item ``i`` survives when, with its own preference raised to the upper bound
and every other preference lowered to the lower bound, some reward level
``theta`` in ``[theta_lower, theta_upper]`` puts ``i`` among the top-K
scores. Each competitor ``j`` beats ``i`` on an interval of ``theta``
(the two scores are lines in ``theta`` and cross at most once), so the
test reduces to asking whether some ``theta`` is covered by fewer than K
competitor intervals, answered by one sorted sweep.
"""

from dataclasses import dataclass
from itertools import groupby

import numpy as np

from ._validation import check_capacity
from .static import optimal

SOLVER_TOL = 1e-12
ORACLE_MAX_ITEMS = 50


@dataclass(frozen=True)
class ThetaInterval:
    lo: float
    hi: float


def theta_interval(rewards, bounds, capacity, items=None):
    """Optimal rewards under the lower and upper preference vectors, widened by 1e-12."""
    lo = optimal(rewards, bounds.lower, capacity, items).theta
    hi = optimal(rewards, bounds.upper, capacity, items).theta
    return ThetaInterval(max(lo - SOLVER_TOL, 0.0), hi + SOLVER_TOL)


def _competitors(rewards, g, item, items):
    """Arrays (ids, intercept, slope) of ``(r_j - t) g_j - (r_i - t) g_i = c - s t``."""
    ids = np.asarray([j for j in items if j != item], dtype=np.intp)
    r = np.asarray(rewards, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    ri, gi = r[item - 1], g[item - 1]
    rj, gj = r[ids - 1], g[ids - 1]
    return ids, rj * gj - ri * gi, gj - gi


def _search_range(rewards, item, interval):
    """``[lo, hi] ∩ [0, r_i)`` as ``(left, right, right_closed)`` or None if empty."""
    ri = float(np.asarray(rewards)[item - 1])
    left = max(interval.lo, 0.0)
    if interval.hi < ri:
        right, closed = interval.hi, True
    else:
        right, closed = ri, False
    if left > right or (left == right and not closed):
        return None
    return left, right, closed


def survives_sweep(rewards, g, item, interval, capacity, items=None):
    """Is there a ``theta`` in the interval (below ``r_item``) with ``item`` in the top set?

    A competitor counts against ``item`` only where its score is strictly
    larger, so exact ties keep ``item`` in. Runs in O(n log n).
    """
    K = check_capacity(capacity)
    if items is None:
        items = range(1, len(rewards) + 1)
    rng = _search_range(rewards, item, interval)
    if rng is None:
        return False
    left, right, closed = rng
    _, c, s = _competitors(rewards, g, item, items)

    # a competitor with s > 0 wins on theta < c/s, with s < 0 on theta > c/s,
    # with s == 0 everywhere (c > 0) or nowhere
    flat = s == 0
    base = int(np.count_nonzero(flat & (c > 0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(flat, np.nan, c / s)
    down = x[s > 0]
    up = x[s < 0]

    # downward rays ending at or before `left` never cover the range
    base += int(np.count_nonzero(down > right if closed else down >= right))
    active = int(np.count_nonzero((down > left) & ((down <= right) if closed else (down < right))))
    base += int(np.count_nonzero(up < left))

    events = [(p, 0) for p in down[(down > left) & ((down <= right) if closed else (down < right))]]
    events += [(p, 1) for p in up[(up >= left) & (up < right)]]
    events.sort()

    # at `left`: every active downward ray still covers; upward rays with x == left do not yet
    if base + active < K:
        return True
    started = 0
    for p, group in groupby(events, key=lambda e: e[0]):
        kinds = [kind for _, kind in group]
        active -= kinds.count(0)
        if base + active + started < K:
            return True
        started += kinds.count(1)
    # right end (closed) or just below r_i (open)
    return base + active + started < K


def survives_oracle(rewards, g, item, interval, capacity, items=None):
    """Reference for :func:`survives_sweep` by direct evaluation at all breakpoints.

    Breakpoints are the crossings of any two score lines and their zero
    crossings. The competitor count is evaluated at every breakpoint in
    range, at midpoints between consecutive ones and at the range ends.
    """
    K = check_capacity(capacity)
    if items is None:
        items = range(1, len(rewards) + 1)
    items = sorted(items)
    if len(items) > ORACLE_MAX_ITEMS:
        raise ValueError(f"oracle is limited to {ORACLE_MAX_ITEMS} items")
    rng = _search_range(rewards, item, interval)
    if rng is None:
        return False
    left, right, closed = rng

    r = np.asarray(rewards, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    lines = [(r[j - 1] * g[j - 1], g[j - 1]) for j in items]  # score = a - b * theta
    points = {left}
    for p in range(len(lines)):
        a1, b1 = lines[p]
        if b1 != 0:
            points.add(a1 / b1)
        for q in range(p + 1, len(lines)):
            a2, b2 = lines[q]
            if b1 != b2:
                points.add((a1 - a2) / (b1 - b2))
    marks = sorted({t for t in points if left <= t < right} | {right})
    # the right end itself is a probe only when closed; open ends are reached
    # through the midpoint of the last segment
    probes = marks if closed else marks[:-1]
    probes = probes + [(u + w) / 2 for u, w in zip(marks, marks[1:])]

    ri, gi = r[item - 1], g[item - 1]
    others = [j for j in items if j != item]
    for t in probes:
        mine = (ri - t) * gi
        beating = sum((r[j - 1] - t) * g[j - 1] > mine for j in others)
        if beating < K:
            return True
    return False


def survivor_vector(bounds, item):
    """Lower bounds everywhere except ``item``, which takes its upper bound."""
    g = np.array(bounds.lower, dtype=np.float64)
    g[item - 1] = bounds.upper[item - 1]
    return g


def prune(rewards, capacity, bounds, items=None, interval=None):
    """Return the candidate set: items that may still belong to the best assortment.

    Parameters
    ----------
    rewards : array-like of shape (n,)
    capacity : int
    bounds : PreferenceBounds
        Full-length lower/upper preference vectors; only entries in
        ``items`` are read.
    items : iterable of int, optional
        Current surviving ids (default: all).
    interval : ThetaInterval, optional
        Precomputed result of :func:`theta_interval` for these arguments.

    Returns
    -------
    tuple of int
    """
    if items is None:
        items = range(1, len(rewards) + 1)
    items = tuple(sorted(items))
    if interval is None:
        interval = theta_interval(rewards, bounds, capacity, items)
    return tuple(
        i
        for i in items
        if survives_sweep(rewards, survivor_vector(bounds, i), i, interval, capacity, items)
    )
