"""Exact solution spaces of minimum vertex covers on bipartite-core graphs.

The library builds reduced solution graphs (backbone states plus
mutual-determination double edges) from maximum matchings, counts minimum
covers exactly, evaluates the matching mean-field theory, and grows
Konig-Egervary subgraphs of general graphs.
"""

from .core_analysis import (CountIntractableError, CountResult, SimplifiedRSG,
                            UnfrozenCore, brute_force_min_covers,
                            count_core_solutions, count_solutions,
                            cycle_simplification, expand_assignment,
                            unfrozen_core)
from .experiments import (EnsembleStats, InstanceRow, RunConfig,
                          classify_big_ratio, run_instance, run_sweep)
from .graph import (BipartitePartition, EnsembleParams, Graph, OddCycle,
                    PeelResult, check_bipartition, generate_random_bipartite,
                    generate_random_graph, giant_component_fraction,
                    leaf_removal, ratio_sizes, read_graph, write_graph)
from .ke_growth import KEGrowthState, bipartite_seed, grow_all, grow_step
from .matching import (Matching, heuristic_max_matching, max_bipartite_matching,
                       verify_matching)
from .meanfield import (MeanFieldSolution, poisson_pmf, side_degrees,
                        solve_fixed_point, theory_curve)
from .rsg import (EdgeKind, NodeState, NotBipartiteCoreError,
                  PropagationConflictError, ReducedSolutionGraph,
                  build_rsg_bipartite, build_rsg_bipartite_core,
                  consistent_assignments, freezing_influence,
                  odd_cycle_breaking, read_rsg, state_ratios, write_rsg)

__version__ = "0.1.0"

__all__ = [
    "BipartitePartition", "CountIntractableError", "CountResult", "EdgeKind",
    "EnsembleParams", "EnsembleStats", "Graph", "InstanceRow", "KEGrowthState",
    "Matching", "MeanFieldSolution", "NodeState", "NotBipartiteCoreError",
    "OddCycle", "PeelResult", "PropagationConflictError",
    "ReducedSolutionGraph", "RunConfig", "SimplifiedRSG", "UnfrozenCore",
    "bipartite_seed", "brute_force_min_covers", "check_bipartition",
    "classify_big_ratio", "consistent_assignments", "count_core_solutions",
    "count_solutions", "cycle_simplification", "expand_assignment",
    "freezing_influence", "generate_random_bipartite", "generate_random_graph",
    "giant_component_fraction", "grow_all", "grow_step",
    "heuristic_max_matching", "leaf_removal", "max_bipartite_matching",
    "odd_cycle_breaking", "poisson_pmf", "ratio_sizes", "read_graph",
    "read_rsg", "run_instance", "run_sweep", "side_degrees",
    "solve_fixed_point", "state_ratios", "theory_curve", "unfrozen_core",
    "verify_matching", "write_graph", "write_rsg",
]
