import numpy as np
import pytest

from mnl_explore.model import Instance


def random_instance(rng, n_low=1, n_high=10, k_high=4, low=0.05):
    n = int(rng.integers(n_low, n_high + 1))
    K = int(rng.integers(1, min(k_high, n) + 1))
    rewards = rng.uniform(low, 1.0, size=n)
    prefs = rng.uniform(low, 1.0, size=n)
    return Instance(rewards, prefs, K)


def corpus(seed, size, **kw):
    rng = np.random.default_rng(seed)
    return [random_instance(rng, **kw) for _ in range(size)]


@pytest.fixture
def three_items():
    """The small instance used throughout: optimum {1, 2} with value 0.35."""
    return Instance([0.8, 0.6, 0.4], [0.5, 0.5, 0.5], 2)


@pytest.fixture
def i1_k2():
    from mnl_explore.metrics import make_lower_bound_instance

    return make_lower_bound_instance("I1", 2, 0.1)


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(config.acceptance_lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
