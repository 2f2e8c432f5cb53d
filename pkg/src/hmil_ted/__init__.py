"""Edit distance between JSON documents under schema-preserving edits.

Documents become rooted labeled trees (objects, unordered arrays, typed
values); the distance is the cheapest leaf-only edit script between them
under a configurable cost model.
"""

from .assignment import AssignmentResult, DeltaMatrix, min_cost_assignment, pad_to_square
from .corpus import CorpusRecord, distance_matrix, read_corpus
from .costs import (
    CostModel,
    Relabel,
    capped_levenshtein,
    custom,
    format_cost,
    gamma,
    indicator,
    load_cost_config,
    model_from_config,
    numeric_absolute,
    verify_metric_axioms,
)
from .engine import bag_distance, delete_tree_cost, distance, explain, insert_tree_cost, object_distance, value_distance
from .errors import (
    ContractViolation,
    CostConfigError,
    DuplicateKeyError,
    HmilTedError,
    InputError,
    JsonParseError,
    ResourceLimitError,
)
from .mapping import EditMapping, EditOp, EditScript, apply_script
from .oracle import brute_force_assignment, brute_force_distance
from .rlt import (
    EMPTY,
    DataType,
    NodeType,
    RltNode,
    RltTree,
    bag_node,
    from_rlt,
    object_node,
    parse_json,
    to_rlt,
    validate_tree,
    value_node,
)

__all__ = [
    "AssignmentResult",
    "ContractViolation",
    "CorpusRecord",
    "CostConfigError",
    "CostModel",
    "DataType",
    "DeltaMatrix",
    "DuplicateKeyError",
    "EMPTY",
    "EditMapping",
    "EditOp",
    "EditScript",
    "HmilTedError",
    "InputError",
    "JsonParseError",
    "NodeType",
    "Relabel",
    "ResourceLimitError",
    "RltNode",
    "RltTree",
    "apply_script",
    "bag_distance",
    "bag_node",
    "brute_force_assignment",
    "brute_force_distance",
    "capped_levenshtein",
    "custom",
    "delete_tree_cost",
    "distance",
    "distance_matrix",
    "explain",
    "format_cost",
    "from_rlt",
    "gamma",
    "indicator",
    "insert_tree_cost",
    "load_cost_config",
    "min_cost_assignment",
    "model_from_config",
    "numeric_absolute",
    "object_distance",
    "object_node",
    "pad_to_square",
    "parse_json",
    "read_corpus",
    "to_rlt",
    "validate_tree",
    "value_distance",
    "value_node",
    "verify_metric_axioms",
]
