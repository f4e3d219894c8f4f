"""MNL ground-truth types and the deterministic reward formulas.

Items are identified by ids ``1..n``; the no-purchase option is item ``0``
with preference fixed to 1 and is never stored. Preference and reward
vectors are indexed by ``id - 1``. An assortment is a sorted tuple of ids.
"""

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import check_capacity, check_items, check_vector

# Absolute tolerance for comparisons against a reward level theta.
THETA_TOL = 1e-9


def as_assortment(items, n=None):
    """Return ``items`` as a canonical assortment (ascending, duplicate-free)."""
    if n is None:
        ids = tuple(sorted(int(i) for i in items))
        if len(set(ids)) != len(ids):
            raise ValueError(f"duplicate item ids in {ids}")
        return ids
    return check_items(items, n)


def _freeze(arr):
    arr = np.array(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Instance:
    """Rewards, true preferences and capacity of an MNL problem.

    Parameters
    ----------
    rewards : array-like of shape (n,)
        Known item rewards in (0, 1].
    preferences : array-like of shape (n,)
        True preference weights in (0, 1].
    capacity : int
        Maximum assortment size K. Values above ``n`` are clipped to ``n``.
    strict : bool, default=True
        When False, rewards and preferences may also be 0. Used for
        simulator edge cases; regular runs keep this True.
    """

    rewards: np.ndarray
    preferences: np.ndarray
    capacity: int
    strict: bool = True

    def __post_init__(self):
        r = check_vector(self.rewards, "rewards", low_inclusive=not self.strict)
        if r.shape[0] == 0:
            raise ValueError("an instance needs at least one item")
        v = check_vector(
            self.preferences, "preferences", n=r.shape[0], low_inclusive=not self.strict
        )
        object.__setattr__(self, "rewards", _freeze(r))
        object.__setattr__(self, "preferences", _freeze(v))
        object.__setattr__(self, "capacity", check_capacity(self.capacity, r.shape[0]))

    @property
    def n(self):
        return self.rewards.shape[0]

    @property
    def items(self):
        return tuple(range(1, self.n + 1))

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.capacity == other.capacity
            and np.array_equal(self.rewards, other.rewards)
            and np.array_equal(self.preferences, other.preferences)
        )

    def __hash__(self):
        return hash((self.capacity, self.rewards.tobytes(), self.preferences.tobytes()))

    def __repr__(self):
        return f"Instance(n={self.n}, capacity={self.capacity})"


@dataclass(frozen=True, eq=False)
class PreferenceBounds:
    """Componentwise confidence box ``lower <= v <= upper``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        a = check_vector(self.lower, "lower", low_inclusive=True)
        b = check_vector(self.upper, "upper", n=a.shape[0], low_inclusive=True)
        if np.any(a > b):
            raise ValueError("lower bounds must not exceed upper bounds")
        object.__setattr__(self, "lower", _freeze(a))
        object.__setattr__(self, "upper", _freeze(b))

    def contains(self, preferences):
        v = np.asarray(preferences, dtype=np.float64)
        return bool(np.all(self.lower <= v) and np.all(v <= self.upper))


def _index(assortment):
    return np.fromiter(assortment, dtype=np.intp, count=len(assortment)) - 1


def choice_prob(assortment, preferences, item):
    """Probability that a user offered ``assortment`` picks ``item`` (0 = no purchase)."""
    v = np.asarray(preferences, dtype=np.float64)
    assortment = as_assortment(assortment)
    if item != 0 and item not in assortment:
        raise ValueError(f"item {item} is neither offered nor the no-purchase option")
    denom = 1.0 + v[_index(assortment)].sum()
    return (1.0 if item == 0 else float(v[item - 1])) / denom


def expected_reward(assortment, rewards, preferences):
    """Expected revenue per offer of ``assortment``; 0 for the empty set."""
    if len(assortment) == 0:
        return 0.0
    idx = _index(as_assortment(assortment, len(rewards)))
    r = np.asarray(rewards, dtype=np.float64)[idx]
    v = np.asarray(preferences, dtype=np.float64)[idx]
    return float(np.dot(r, v) / (1.0 + v.sum()))


def reward_at_least(assortment, rewards, preferences, theta):
    """Decide ``R(S) >= theta`` through the linearised form ``sum (r_i - theta) v_i >= theta``."""
    if len(assortment) == 0:
        return theta <= THETA_TOL
    idx = _index(as_assortment(assortment, len(rewards)))
    r = np.asarray(rewards, dtype=np.float64)[idx]
    v = np.asarray(preferences, dtype=np.float64)[idx]
    return float(np.dot(r - theta, v)) >= theta - THETA_TOL


def read_instance(path, *, strict=True):
    """Parse the plain-text instance format.

    The first non-comment line is ``n K``; each of the next ``n`` lines is
    ``r_i v_i``. Lines starting with ``#`` and blank lines are skipped.
    """
    rows = []
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line.split()))
    if not rows:
        raise ValueError(f"{path}: empty instance file")
    lineno, head = rows[0]
    try:
        n, capacity = (int(tok) for tok in head)
    except ValueError:
        raise ValueError(f"{path}:{lineno}: expected 'n K', got {' '.join(head)!r}") from None
    if len(rows) - 1 != n:
        raise ValueError(f"{path}: header declares {n} items but {len(rows) - 1} follow")
    rewards, prefs = [], []
    for lineno, toks in rows[1:]:
        try:
            r, v = (float(tok) for tok in toks)
        except ValueError:
            raise ValueError(f"{path}:{lineno}: expected 'r v', got {' '.join(toks)!r}") from None
        rewards.append(r)
        prefs.append(v)
    return Instance(rewards, prefs, capacity, strict=strict)


def format_instance(instance, comment=None):
    lines = [] if comment is None else [f"# {c}" for c in comment.splitlines()]
    lines.append(f"{instance.n} {instance.capacity}")
    lines.extend(f"{r!r} {v!r}" for r, v in zip(instance.rewards.tolist(), instance.preferences.tolist()))
    return "\n".join(lines) + "\n"


def write_instance(instance, path, comment=None):
    Path(path).write_text(format_instance(instance, comment), encoding="utf-8", newline="\n")
