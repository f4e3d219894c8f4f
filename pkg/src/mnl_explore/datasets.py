"""Synthetic instance generators and a ratings-file ingester."""

import csv
from collections import defaultdict
from pathlib import Path

import numpy as np

from .environment import make_rng
from .model import Instance


class RatingsParseError(ValueError):
    pass


class EmptyInstanceError(ValueError):
    pass


def _check_sizes(n, capacity):
    if not 1 <= capacity <= n:
        raise ValueError(f"need 1 <= capacity <= n, got n={n}, capacity={capacity}")


def gen_uniform(n, capacity, seed):
    """Rewards and preferences i.i.d. uniform on [0.1, 0.6]."""
    _check_sizes(n, capacity)
    rng = make_rng(seed)
    rewards = rng.uniform(0.1, 0.6, size=n)
    prefs = rng.uniform(0.1, 0.6, size=n)
    return Instance(rewards, prefs, capacity)


def _truncated_normal(rng, size, mean, std, low, high):
    out = rng.normal(mean, std, size=size)
    bad = (out <= low) | (out > high)
    while bad.any():
        out[bad] = rng.normal(mean, std, size=int(bad.sum()))
        bad = (out <= low) | (out > high)
    return out


def gen_gaussian(n, capacity, seed):
    """Preferences uniform on (0, 1]; rewards Normal(0.5, 0.1^2) truncated to (0, 1]."""
    _check_sizes(n, capacity)
    rng = make_rng(seed)
    prefs = 1.0 - rng.random(n)
    rewards = _truncated_normal(rng, n, 0.5, 0.1, 0.0, 1.0)
    return Instance(rewards, prefs, capacity)


def _sort_key(item_id):
    try:
        return (0, int(item_id), item_id)
    except ValueError:
        return (1, 0, item_id)


def ingest_ratings(
    path,
    min_count,
    max_count,
    rating_scale,
    count_denominator,
    capacity,
    *,
    item_column="item_id",
    rating_column="rating",
):
    """Build an instance from a ratings CSV (one row per rating event).

    Items rated between ``min_count`` and ``max_count`` times (inclusive)
    are kept. Reward = mean rating / ``rating_scale``; preference = count /
    ``count_denominator``; both are clipped to at most 1. Kept items are
    renumbered ``1..n`` in ascending original id (numerically when ids are
    integers). Columns other than the two named ones are ignored.

    Returns
    -------
    instance : Instance
    original_ids : list of str
        ``original_ids[k]`` is the source id of item ``k + 1``.
    """
    if min_count > max_count:
        raise ValueError("min_count must not exceed max_count")
    totals = defaultdict(float)
    counts = defaultdict(int)
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise RatingsParseError(f"{path}: missing header row") from None
        header = [h.strip() for h in header]
        try:
            item_col = header.index(item_column)
            rating_col = header.index(rating_column)
        except ValueError:
            raise RatingsParseError(
                f"{path}:1: header must name {item_column!r} and {rating_column!r}"
            ) from None
        for row in reader:
            lineno = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                item = row[item_col].strip()
                rating = float(row[rating_col])
            except (IndexError, ValueError):
                raise RatingsParseError(f"{path}:{lineno}: malformed row {row!r}") from None
            if not item or not np.isfinite(rating):
                raise RatingsParseError(f"{path}:{lineno}: malformed row {row!r}")
            totals[item] += rating
            counts[item] += 1

    kept = sorted((i for i, c in counts.items() if min_count <= c <= max_count), key=_sort_key)
    if not kept:
        raise EmptyInstanceError(
            f"no item has between {min_count} and {max_count} ratings"
        )
    rewards = np.array([totals[i] / counts[i] / rating_scale for i in kept])
    prefs = np.array([counts[i] / count_denominator for i in kept])
    instance = Instance(np.minimum(rewards, 1.0), np.minimum(prefs, 1.0), capacity)
    return instance, kept
