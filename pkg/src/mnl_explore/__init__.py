"""Pure exploration in the multinomial-logit bandit.

Exact static assortment optimization, instance complexities, a seeded
choice simulator, the candidate-pruning subroutine, and fixed-confidence
and fixed-budget exploration algorithms with sklearn-style estimators.
"""

from .algorithms import (
    BasicExplorer,
    ImprovedExplorer,
    RunResult,
    Schedule,
    UniformGroupExplorer,
    UniformSingletonExplorer,
    run_basic,
    run_fixed_budget,
    run_improved,
    run_unif_b,
    run_unif_g,
)
from .environment import Environment, ExploreSetCounts
from .metrics import GapProfile, gap_profile, make_example_instance, make_lower_bound_instance
from .model import (
    Instance,
    PreferenceBounds,
    choice_prob,
    expected_reward,
    read_instance,
    reward_at_least,
    write_instance,
)
from .prune import ThetaInterval, prune, survives_oracle, survives_sweep, theta_interval
from .static import OptimumResult, brute_force_optimal, optimal, theta_feasible, top_set

__version__ = "0.1.0"
