"""Thin coalgebras over branching signatures: decision procedures, finitary
terms, normal forms and tree encodings."""

from .coalgebra import (
    Coalgebra,
    Condensation,
    FinitePath,
    PointedCoalgebra,
    beh_equal,
    canonical_key,
    cycles_through,
    minimize,
    path_count,
    paths_to_depth,
    reachable_states,
    sccs,
    validate_path,
)
from .errors import CoalgebraError, NonThinError, SignatureError, TermError
from .normalform import (
    StateRank,
    StateRankTable,
    brute_force_normal,
    enumerate_terms,
    extract_normal,
    normalize,
    state_ranks,
)
from .semantics import UnfoldResult, beh_equal_terms, check_constructible_thin, unfold
from .signature import (
    DEFAULT_ARITY_CAP,
    ContextElem,
    FElem,
    OperationSymbol,
    PermGroup,
    SignatureSpec,
    enumerate_group,
)
from .terms import (
    FNode,
    GNode,
    LassoStream,
    Rank,
    Term,
    fold_candidates,
    rank,
    subterms,
    term_compare,
    term_size,
    unfold_step,
)
from .thinness import (
    PathClassCount,
    ThinVerdict,
    ThinWitness,
    count_infinite_paths_class,
    is_thin,
    oracle_is_thin,
)
from .treeenc import WordTree, assert_polynomial, cb_rank, dom_tree, enc

__version__ = "0.1.0"

__all__ = [
    "Coalgebra",
    "CoalgebraError",
    "Condensation",
    "ContextElem",
    "DEFAULT_ARITY_CAP",
    "FElem",
    "FNode",
    "FinitePath",
    "GNode",
    "LassoStream",
    "NonThinError",
    "OperationSymbol",
    "PathClassCount",
    "PermGroup",
    "PointedCoalgebra",
    "Rank",
    "SignatureError",
    "SignatureSpec",
    "StateRank",
    "StateRankTable",
    "Term",
    "TermError",
    "ThinVerdict",
    "ThinWitness",
    "UnfoldResult",
    "WordTree",
    "assert_polynomial",
    "beh_equal",
    "beh_equal_terms",
    "brute_force_normal",
    "canonical_key",
    "cb_rank",
    "check_constructible_thin",
    "count_infinite_paths_class",
    "cycles_through",
    "dom_tree",
    "enc",
    "enumerate_group",
    "enumerate_terms",
    "extract_normal",
    "fold_candidates",
    "is_thin",
    "minimize",
    "normalize",
    "oracle_is_thin",
    "path_count",
    "paths_to_depth",
    "rank",
    "reachable_states",
    "sccs",
    "state_ranks",
    "subterms",
    "term_compare",
    "term_size",
    "unfold",
    "unfold_step",
    "validate_path",
]
