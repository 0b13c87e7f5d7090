"""Exact toolkit for deadline-constrained durable-good monopoly pricing.

Solves the sequential pricing game by backward induction over exact
rationals, verifies the solution against brute-force enumeration and
deviation checks, audits the profit bounds against static benchmarks,
detects full-surplus-extraction markets, and repairs out-of-order
two-period equilibria by swapping.
"""

from .bounds import BoundsReport, analyze, split_upper_bound, suffix_profit_bound, tight_example
from .generate import random_instance, random_instances
from .model import (
    Instance,
    Rational,
    SizeGuardError,
    SubgameRef,
    ValidationError,
    format_rational,
    instance_from_dict,
    instance_to_dict,
    make_instance,
    parse_rational,
    total_surplus,
)
from .nonskim import (
    NonEquilibriumError,
    Outcome2P,
    StrategyProfile2P,
    SwapChain,
    SwapPair,
    builtin_nonskim_example,
    check_swap_chain,
    exhaustive_equilibrium_search,
    is_skimming,
    play_profile,
    profile_from_dict,
    profile_to_dict,
    swap_to_skimming,
    verify_profile,
)
from .oracle import (
    Deviation,
    DeviationReport,
    best_with_skips,
    enumerate_schedules,
    verify_spne,
)
from .pacman import (
    DistinctProfile,
    PacmanCheck,
    distinct_profile,
    pacman1_inequality,
    pacman_condition,
    profit_with_first_price,
    simulate_pacman,
    subset_price_property,
)
from .solver import (
    DpTables,
    EquilibriumSolution,
    reindexed_subgame,
    solve,
    threat_price,
)
from .static_monopoly import (
    StaticPriceTable,
    insert_value_price,
    replace_value_price,
    static_price,
    static_profit,
    suffix_price_table,
)

__all__ = [
    "BoundsReport",
    "Deviation",
    "DeviationReport",
    "DistinctProfile",
    "DpTables",
    "EquilibriumSolution",
    "Instance",
    "NonEquilibriumError",
    "Outcome2P",
    "PacmanCheck",
    "Rational",
    "SizeGuardError",
    "StaticPriceTable",
    "StrategyProfile2P",
    "SubgameRef",
    "SwapChain",
    "SwapPair",
    "ValidationError",
    "analyze",
    "best_with_skips",
    "builtin_nonskim_example",
    "check_swap_chain",
    "distinct_profile",
    "enumerate_schedules",
    "exhaustive_equilibrium_search",
    "format_rational",
    "instance_from_dict",
    "instance_to_dict",
    "insert_value_price",
    "is_skimming",
    "make_instance",
    "pacman1_inequality",
    "pacman_condition",
    "parse_rational",
    "play_profile",
    "profile_from_dict",
    "profile_to_dict",
    "profit_with_first_price",
    "random_instance",
    "random_instances",
    "reindexed_subgame",
    "replace_value_price",
    "simulate_pacman",
    "solve",
    "split_upper_bound",
    "static_price",
    "static_profit",
    "subset_price_property",
    "suffix_price_table",
    "suffix_profit_bound",
    "swap_to_skimming",
    "threat_price",
    "tight_example",
    "total_surplus",
    "verify_profile",
    "verify_spne",
]
