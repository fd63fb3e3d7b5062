"""Tripartite correlations from networks of PR boxes.

Exact simulation of decision-tree wirings over pairwise PR boxes, the
induced observable behaviors and their no-signaling audit, a Bell score
with the bound E(F) >= 1/8 for all such networks, the quantum table that
violates it, strategy surgeries verifying the bound's proof chain on
instances, and an exact rational LP over the (3,2,2) no-signaling set.
"""

from .strategy import (
    BoxRef,
    DecisionNode,
    NetworkStrategy,
    Party,
    PartyStrategy,
    load_network,
    sample_random_network,
    save_network,
    trivial_network,
    validate,
    walk,
)
from .joint import (
    ORDERINGS,
    FullAssignment,
    JointDistribution,
    build_joint,
    check_ordering_invariance,
    determined_ac,
    marginal,
    verify_joint_laws,
)
from .behavior import (
    Behavior,
    check_no_signaling,
    induced_behavior,
    simulate_rounds,
)
from .bell import (
    bell_expectation,
    bell_score,
    check_inequality,
    quantum_behavior,
)
from .boxes import pathological_signaling_demo, pr_determined_output

__all__ = [
    "BoxRef",
    "DecisionNode",
    "NetworkStrategy",
    "Party",
    "PartyStrategy",
    "load_network",
    "sample_random_network",
    "save_network",
    "trivial_network",
    "validate",
    "walk",
    "ORDERINGS",
    "FullAssignment",
    "JointDistribution",
    "build_joint",
    "check_ordering_invariance",
    "determined_ac",
    "marginal",
    "verify_joint_laws",
    "Behavior",
    "check_no_signaling",
    "induced_behavior",
    "simulate_rounds",
    "bell_expectation",
    "bell_score",
    "check_inequality",
    "quantum_behavior",
    "pathological_signaling_demo",
    "pr_determined_output",
]

__version__ = "0.1.0"
