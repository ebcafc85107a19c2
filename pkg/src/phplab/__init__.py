"""Finite pigeonhole forcing laboratory.

Conditions (partial matchings), PHP decision trees, bounded formulas, the
finite forcing relation over ``P(n, K)``, a formula-to-tree compiler,
k-matching family bounds and WPHP arrays, with exact integer and rational
arithmetic throughout.
"""
from .compiler import (
    accepting_leaves,
    build_array_from_formula,
    compile_formula,
    forced_violation,
    rejecting_leaves,
    violation_forced,
)
from .conditions import (
    EMPTY,
    Condition,
    Scale,
    compatible,
    conflicts,
    count_conditions,
    enumerate_conditions,
    extends,
    extensions,
    is_compatible,
    is_filter,
)
from .errors import (
    BudgetExceeded,
    ConfigError,
    FormulaSyntaxError,
    GraftError,
    IdentityViolation,
    LabError,
    NegativeBoundError,
    PreconditionError,
    RegimeError,
    ShapeError,
    UnboundVariableError,
)
from .forcing import (
    ForcingContext,
    density_witness,
    forces,
    is_dense,
    is_dense_relative,
    negation_for_forcing,
)
from .formula import (
    And,
    Atom,
    ExistsLe,
    ForallLe,
    Formula,
    NegAtom,
    Not,
    Or,
    Shape,
    classify,
    free_vars,
    instantiate,
    is_sharply_bounded,
    make_php_instance,
    negate,
    substitute,
)
from .matching import (
    MatchingFamily,
    brute_force_max_family,
    count_extensions,
    count_k_matchings,
    family_bound,
    fixed_holes_family,
    k_matchings,
)
from .parser import parse, to_text
from .phptree import (
    HoleQuery,
    Leaf,
    LeafFamily,
    PhpTree,
    PigeonQuery,
    check_covering,
    covering_witness,
    decide_condition_tree,
    extend_uniform,
    graft,
    leaves,
    min_leaf_count,
    pigeon_chain,
    root_only,
    tree_from_json,
    tree_to_json,
    validate_tree,
)
from .warray import (
    PropertyReport,
    WArray,
    ajtai_check,
    array_from_json,
    array_size,
    array_to_json,
    brute_force_search_array,
    contradiction_check,
    lower_bound,
    uniformize,
    uniformize_row,
    upper_bound,
    verify_properties,
)

# ``compile`` is the documented name; the builtin stays reachable as ``builtins.compile``
compile = compile_formula

__version__ = "0.1.0"
