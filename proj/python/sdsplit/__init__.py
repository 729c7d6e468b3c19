"""Lossless a priori demand splitting for split-delivery routing problems.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its public surface.
"""

from ._core import (  # noqa: F401
    ExternalSolverError,
    InfeasibleError,
    InstanceParseError,
    Expansion,
    Node,
    OriginMap,
    Route,
    Solution,
    TimeWindow,
    VrpInstance,
    Visit,
    coalesces_to,
    coalesces_to_all,
    count_splits,
    denomination_split,
    enumerate_partitions,
    expand,
    expanded_size,
    gap_percent,
    generate_random,
    greedy_coalesce,
    k_min,
    lossless_split,
    merge_back,
    mscp,
    mscp_size,
    mscp_table,
    parse_solomon,
    parse_solver_tour,
    parse_tsplib,
    size_bound,
    solution_cost,
    solve,
    validate,
    verify_minimality,
    write_solver_files,
    write_tsplib,
)

__version__ = "0.1.0"
