"""Input validation helpers shared by the public API."""

import numbers

import numpy as np


def check_vector(x, name, *, n=None, low=0.0, high=1.0, low_inclusive=False):
    """Return ``x`` as a 1-d float64 array with every entry in the given range.

    Parameters
    ----------
    x : array-like of shape (n,)
    name : str
        Used in error messages.
    n : int, optional
        Required length.
    low, high : float
        Range bounds; ``high`` is always inclusive.
    low_inclusive : bool, default=False
        Whether ``low`` itself is permitted.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if n is not None and arr.shape[0] != n:
        raise ValueError(f"{name} must have length {n}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    too_low = arr < low if low_inclusive else arr <= low
    if np.any(too_low) or np.any(arr > high):
        op = "[" if low_inclusive else "("
        raise ValueError(f"{name} must lie in {op}{low}, {high}]")
    return arr


def check_capacity(capacity, n=None):
    if not isinstance(capacity, numbers.Integral) or isinstance(capacity, bool):
        raise TypeError(f"capacity must be an integer, got {capacity!r}")
    if capacity < 1:
        raise ValueError(f"capacity must be >= 1, got {capacity}")
    capacity = int(capacity)
    if n is not None:
        capacity = min(capacity, n)
    return capacity


def check_delta(delta):
    if not isinstance(delta, numbers.Real) or not 0.0 < float(delta) < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    return float(delta)


def check_budget(budget):
    if budget is None:
        return None
    if not isinstance(budget, numbers.Integral) or isinstance(budget, bool) or budget < 1:
        raise ValueError(f"budget must be a positive integer, got {budget!r}")
    return int(budget)


def check_items(items, n):
    """Canonicalise an item collection into a sorted tuple of ids in ``1..n``."""
    ids = tuple(sorted(int(i) for i in items))
    if len(set(ids)) != len(ids):
        raise ValueError(f"duplicate item ids in {ids}")
    if ids and (ids[0] < 1 or ids[-1] > n):
        raise ValueError(f"item ids must lie in 1..{n}, got {ids}")
    return ids
