import numpy as np
import pytest

from mnl_explore.model import Instance, expected_reward
from mnl_explore.static import brute_force_optimal, optimal, theta_feasible, top_set

from conftest import corpus


def test_top_set_examples(i1_k2):
    r, v = [1.0, 0.9, 0.2], [0.1, 0.9, 1.0]
    assert top_set(r, v, 1.0, 2) == ()
    assert top_set(i1_k2.rewards, i1_k2.preferences, 0.5, 2) == (1,)
    assert top_set(r, v, 0.3, 2) == (1, 2)


def test_top_set_ties_prefer_smaller_id():
    assert top_set([0.5, 0.5, 0.5], [0.3, 0.3, 0.3], 0.1, 2) == (1, 2)


def test_top_set_restricted_ground_set():
    r, v = [0.9, 0.8, 0.7], [0.9, 0.9, 0.9]
    assert top_set(r, v, 0.1, 1, items=(2, 3)) == (2,)


def test_theta_feasible_examples(i1_k2, three_items):
    assert theta_feasible([0.3], [0.2], 0.0, 1)
    assert theta_feasible(i1_k2.rewards, i1_k2.preferences, 0.5, 2)
    assert not theta_feasible(i1_k2.rewards, i1_k2.preferences, 0.500001, 2)
    assert theta_feasible(three_items.rewards, three_items.preferences, 0.35, 2)
    assert not theta_feasible(three_items.rewards, three_items.preferences, 0.36, 2)


@pytest.mark.parametrize(
    "r,v,K,theta,best",
    [
        ([1.0], [1.0], 1, 0.5, (1,)),
        ([1.0, 0.9 / 1.9], [1.0, 1.0], 2, 0.5, (1,)),
        ([0.8, 0.6, 0.4], [0.5, 0.5, 0.5], 2, 0.35, (1, 2)),
        ([0.5, 0.5], [0.5, 0.5], 2, 0.25, (1, 2)),
        ([1.0] * 4, [1.0, 0.5, 0.5, 0.5], 1, 0.5, (1,)),
    ],
)
def test_optimal_and_brute_force_examples(r, v, K, theta, best):
    for solve in (optimal, brute_force_optimal):
        res = solve(r, v, K)
        assert res.theta == pytest.approx(theta, abs=1e-9)
        assert res.best == best


def test_brute_force_guard():
    with pytest.raises(ValueError):
        brute_force_optimal(np.full(21, 0.5), np.full(21, 0.5), 2)


def test_zero_preferences_give_empty_optimum():
    res = optimal([0.5, 0.7], [0.0, 0.0], 1)
    assert res.theta == 0.0 and res.best == ()


def test_solver_matches_oracle_and_top_identity():
    for inst in corpus(1, 300):
        r, v, K = inst.rewards, inst.preferences, inst.capacity
        fast, slow = optimal(r, v, K), brute_force_optimal(r, v, K)
        assert abs(fast.theta - slow.theta) <= 1e-9
        assert fast.best == slow.best
        assert abs(expected_reward(fast.best, r, v) - fast.theta) <= 1e-9
        assert top_set(r, v, fast.theta, K) == slow.best


def test_feasibility_is_monotone():
    grid = np.linspace(0, 1, 100)
    for inst in corpus(2, 100):
        flags = [theta_feasible(inst.rewards, inst.preferences, t, inst.capacity) for t in grid]
        first_false = flags.index(False) if False in flags else len(flags)
        assert all(flags[:first_false]) and not any(flags[first_false:])


def test_top_set_maximises_linear_score():
    rng = np.random.default_rng(3)
    for inst in corpus(3, 200):
        r, v, K = inst.rewards, inst.preferences, inst.capacity
        theta = rng.uniform(0, 1)
        size = int(rng.integers(0, K + 1))
        S = rng.choice(inst.n, size=size, replace=False) + 1
        T = np.asarray(top_set(r, v, theta, K), dtype=int)
        lhs = np.dot(r[S - 1] - theta, v[S - 1])
        rhs = np.dot(r[T - 1] - theta, v[T - 1]) if T.size else 0.0
        assert lhs <= rhs + 1e-12


def test_optimum_monotone_in_preferences():
    rng = np.random.default_rng(4)
    for _ in range(200):
        n = int(rng.integers(1, 9))
        K = int(rng.integers(1, n + 1))
        r = rng.uniform(0.05, 1, n)
        v = rng.uniform(0.05, 1, n)
        w = np.minimum(v + rng.uniform(0, 0.5, n), 1.0)
        assert brute_force_optimal(r, v, K).theta <= brute_force_optimal(r, w, K).theta + 1e-12


def test_small_preference_increase_moves_optimum_little():
    rng = np.random.default_rng(5)
    for inst in corpus(5, 300):
        eps = rng.uniform(0.001, 0.5)
        v = inst.preferences
        w = np.minimum(v + rng.uniform(0, eps / inst.capacity, inst.n), 1.0)
        tv = optimal(inst.rewards, v, inst.capacity).theta
        tw = optimal(inst.rewards, w, inst.capacity).theta
        assert tv <= tw + 1e-12
        assert tw <= tv + eps + 1e-12


def test_large_instance_runs():
    rng = np.random.default_rng(6)
    inst = Instance(rng.uniform(0.1, 1, 500), rng.uniform(0.1, 1, 500), 25)
    res = optimal(inst.rewards, inst.preferences, inst.capacity)
    assert len(res.best) <= 25
    assert top_set(inst.rewards, inst.preferences, res.theta, 25) == res.best
