"""Path covers of DAGs with required pairs of vertices.

The core objects are a :class:`Dag` with a source and a sink and a
:class:`PcrpInstance` adding required pairs.  Solvers cover every vertex
and pair with few st-paths (:mod:`pcrp.cover`) or find one path covering
the most pairs (:mod:`pcrp.maxrpsp`); :mod:`pcrp.reductions` builds the
hard instances from 3-Coloring and h-Clique.
"""

from types import ModuleType as _ModuleType

from .cover import (
    PairCompatGraph,
    exact_minpcrp,
    greedy_minpcrp,
    min_chain_cover,
    min_path_cover,
    pair_compat_graph,
    solve_1pcrp,
    solve_2pcrp,
)
from .errors import (
    ContractEndpoint,
    CycleDetected,
    Disconnected,
    DisconnectedOutput,
    ImproperColoring,
    Infeasible,
    InvalidCover,
    MalformedPath,
    NotAClique,
    NotCoverable,
    NotEnoughPairs,
    NotReachable,
    ParseError,
    PathBudgetExceeded,
    PcrpError,
    SizeLimitExceeded,
    ValidationError,
)
from .generate import random_dag, random_instance, random_pairs, serial_blocks, serial_blocks_n
from .graph import (
    Dag,
    ReachabilityIndex,
    TopoOrder,
    collapse_sccs,
    contract_vertex,
    count_st_paths,
    enumerate_st_paths,
    is_chain,
    is_st_path,
    stitch_chain,
    topological_sort,
    transitive_closure,
)
from .instance import (
    Overlap,
    PairOrdering,
    PcrpInstance,
    RequiredPair,
    VerificationReport,
    augment_trivial_pairs,
    classify_overlap,
    max_overlap_degree,
    op_set,
    order_pairs,
    overlap_degree,
    pairs_covered,
    parse_instance,
    parse_solution,
    verify_solution,
    write_instance,
    write_solution,
)
from .maxrpsp import MaxRpspResult, agreement, feasible_extension, max_rpsp_bruteforce, max_rpsp_dp, ov
from .reductions import (
    GadgetLayout,
    brute_3coloring,
    brute_max_clique,
    clique_to_path,
    coloring_to_paths,
    gen_3pcrp,
    gen_krpsp,
    path_to_clique,
    paths_to_coloring,
)

__all__ = [
    name
    for name, value in list(globals().items())
    if not name.startswith("_") and not isinstance(value, _ModuleType)
]
