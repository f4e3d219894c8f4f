"""Seeded MNL choice simulator and the two exploration primitives.

Every offer consumes exactly one uniform draw from a Philox stream and maps
it to an outcome by inverse CDF over ``(0, S[0], S[1], ...)``. The batched
methods draw the same uniforms in bulk, so a batched call and the matching
sequence of single offers produce identical feedback.
"""

from dataclasses import dataclass

import numpy as np

from .model import Instance, as_assortment

EXPLORE_SET_OFFER_CAP = 10**9


class RunawayExplorationError(RuntimeError):
    """An explore-set call exceeded the per-call offer cap."""


def trial_seed(master_seed, trial):
    """Derive a reproducible 64-bit seed for ``trial`` from ``master_seed``."""
    ss = np.random.SeedSequence([int(master_seed) & (2**64 - 1), int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def make_rng(seed):
    """Counter-based generator used by every environment and data generator."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


@dataclass(frozen=True)
class ExploreSetCounts:
    """Result of one explore-set call: per-item pick counts and offers used."""

    counts: dict
    pulls_used: int


@dataclass
class BatchCounts:
    """Aggregate of several explore-set calls on one assortment."""

    counts: np.ndarray
    calls: int
    pulls_used: int
    truncated: bool = False


class Environment:
    """Hidden MNL instance behind a seeded choice oracle with a pull counter.

    Algorithms see only the item count, capacity and rewards; the true
    preferences stay private.

    Parameters
    ----------
    instance : Instance
    seed : int
        64-bit seed of the Philox stream.
    transcript : file-like, optional
        Receives one ``pull<TAB>ids<TAB>feedback`` line per offer.
    """

    def __init__(self, instance, seed=0, transcript=None):
        if not isinstance(instance, Instance):
            raise TypeError("instance must be an Instance")
        self._instance = instance
        self._rng = make_rng(seed)
        self.seed = int(seed)
        self.pulls = 0
        self.transcript = transcript

    @property
    def n_items(self):
        return self._instance.n

    @property
    def capacity(self):
        return self._instance.capacity

    @property
    def rewards(self):
        return self._instance.rewards

    def _cdf(self, assortment):
        v = self._instance.preferences[np.asarray(assortment, dtype=np.intp) - 1]
        weights = np.concatenate(([1.0], v))
        cdf = np.cumsum(weights / weights.sum())
        cdf[-1] = np.inf
        return cdf

    def _check(self, assortment):
        return as_assortment(assortment, self._instance.n)

    def _log(self, assortment, outcomes):
        if self.transcript is None or len(outcomes) == 0:
            return
        ids = ",".join(map(str, assortment))
        start = self.pulls - len(outcomes) + 1
        self.transcript.write(
            "".join(f"{start + k}\t{ids}\t{o}\n" for k, o in enumerate(outcomes.tolist()))
        )

    def _outcomes(self, assortment, uniforms):
        labels = np.concatenate(([0], np.asarray(assortment, dtype=np.int64)))
        return labels[np.searchsorted(self._cdf(assortment), uniforms, side="right")]

    def sample_choice(self, assortment):
        """Offer ``assortment`` once and return the chosen id (0 = no purchase)."""
        assortment = self._check(assortment)
        return int(self.sample_choices(assortment, 1)[0])

    def sample_choices(self, assortment, m):
        """Offer ``assortment`` ``m`` times; returns the feedback array."""
        assortment = self._check(assortment)
        out = self._outcomes(assortment, self._rng.random(int(m)))
        self.pulls += out.shape[0]
        self._log(assortment, out)
        return out

    def explore(self, item):
        """Offer ``{item}`` once; 1 if the user declined, else 0."""
        return int(self.explore_many(item, 1)[0] == 1)

    def explore_many(self, item, m, max_pulls=None):
        """Run ``explore(item)`` up to ``m`` times, never more than ``max_pulls`` offers.

        Returns
        -------
        (ones, calls) : tuple of int
            Number of no-purchase outcomes and number of offers made.
        """
        (item,) = self._check([item])
        m = int(m) if max_pulls is None else min(int(m), int(max_pulls))
        out = self.sample_choices((item,), max(m, 0))
        return int(np.count_nonzero(out == 0)), int(out.shape[0])

    def explore_set(self, assortment):
        """Offer ``assortment`` until the user declines; count the picks."""
        assortment = self._check(assortment)
        res = self.explore_set_many(assortment, 1)
        return ExploreSetCounts(dict(zip(assortment, res.counts.tolist())), res.pulls_used)

    def explore_set_many(self, assortment, m, max_pulls=None):
        """Perform up to ``m`` explore-set calls on ``assortment``.

        Offers stop before ``max_pulls`` would be exceeded. Picks from a call
        cut short by the limit are not included in ``counts``; its offers are
        still counted in ``pulls_used`` and ``truncated`` is set.
        """
        assortment = self._check(assortment)
        if not assortment:
            raise ValueError("explore_set needs a non-empty assortment")
        m = int(m)
        limit = np.inf if max_pulls is None else int(max_pulls)
        if m <= 0 or limit <= 0:
            return BatchCounts(np.zeros(len(assortment), dtype=np.int64), 0, 0, m > 0)

        cdf = self._cdf(assortment)
        mean_len = 1.0 / cdf[0]
        state = self._rng.bit_generator.state
        chunks, zeros_seen, drawn = [], 0, 0
        while zeros_seen < m and drawn < limit:
            size = int(min(limit - drawn, max((m - zeros_seen) * mean_len * 1.1 + 64, 256)))
            idx = np.searchsorted(cdf, self._rng.random(size), side="right")
            chunks.append(idx)
            zeros_seen += int(np.count_nonzero(idx == 0))
            drawn += size
            if drawn / m > EXPLORE_SET_OFFER_CAP:
                raise RunawayExplorationError("explore_set exceeded its offer cap")
        idx = np.concatenate(chunks)
        zero_pos = np.flatnonzero(idx == 0)
        if zero_pos.size >= m:
            used = int(zero_pos[m - 1]) + 1
            calls, truncated = m, False
        else:
            used = int(idx.shape[0])
            calls, truncated = int(zero_pos.size), True
        # rewind and redraw exactly the consumed uniforms so the stream
        # position matches a sequence of single offers
        self._rng.bit_generator.state = state
        self._rng.random(used)
        idx = idx[:used]
        complete = int(zero_pos[calls - 1]) + 1 if calls else 0
        counts = np.bincount(idx[:complete], minlength=len(assortment) + 1)[1:]
        self.pulls += used
        if self.transcript is not None:
            labels = np.concatenate(([0], np.asarray(assortment, dtype=np.int64)))
            self._log(assortment, labels[idx])
        return BatchCounts(counts.astype(np.int64), calls, used, truncated)

    def truth(self):
        """The hidden instance. For evaluation code only, never for algorithms."""
        return self._instance


__all__ = [
    "Environment",
    "ExploreSetCounts",
    "BatchCounts",
    "RunawayExplorationError",
    "make_rng",
    "trial_seed",
]
