"""JSON parsing and the rooted labeled tree (RLT) data model.

A JSON document maps onto an RLT as follows:

* an Object becomes an ``OBJECT`` node whose child edges carry the keys,
* an Array becomes a ``BAG`` node whose children are unordered and unlabeled,
* a scalar becomes a ``VALUE`` leaf carrying its data type and value.

Inner nodes carry an implicit ``null`` label. Numbers are held as
:class:`decimal.Decimal` so label equality is exact (``1.0 == 1``).
"""

from __future__ import annotations

import enum
import hashlib
import json
import math
import re
import sys
from dataclasses import dataclass, field
from decimal import Context, Decimal
from typing import Any, Iterator, Optional, Sequence, Tuple, Union

from .errors import ContractViolation, DuplicateKeyError, JsonParseError, ResourceLimitError

DEFAULT_MAX_DEPTH = 1000

JsonValue = Union[None, bool, Decimal, str, list, dict]
PathStep = Union[str, int]
Path = Tuple[PathStep, ...]


class NodeType(enum.Enum):
    OBJECT = "Object"
    BAG = "Bag"
    VALUE = "Value"


class DataType(enum.Enum):
    NULL = "Null"
    BOOLEAN = "Boolean"
    NUMBER = "Number"
    STRING = "String"


# Edge = (edge label or None, child)
@dataclass(frozen=True, eq=False)
class RltNode:
    node_type: NodeType
    label: Any = None
    data_type: DataType = DataType.NULL
    children: Tuple[Tuple[Optional[str], "RltNode"], ...] = ()

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def __repr__(self) -> str:
        if self.node_type is NodeType.VALUE:
            return f"Value({self.data_type.value} {self.label!r})"
        return f"{self.node_type.value}(<{len(self.children)} children>)"


@dataclass(frozen=True, eq=False)
class RltTree:
    """A tree with an optional root; ``RltTree(None)`` is the empty tree."""

    root: Optional[RltNode]
    node_count: int = field(init=False)

    def __post_init__(self) -> None:
        count = 0
        if self.root is not None:
            stack = [self.root]
            while stack:
                node = stack.pop()
                count += 1
                stack.extend(child for _, child in node.children)
        object.__setattr__(self, "node_count", count)

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RltTree):
            return NotImplemented
        return canonical_text(self) == canonical_text(other)

    def __hash__(self) -> int:
        return hash(canonical_text(self))


EMPTY = RltTree(None)


# ---------------------------------------------------------------------------
# constructors


def value_node(value: Any) -> RltNode:
    """Leaf for a scalar Python/JSON value."""
    return RltNode(NodeType.VALUE, _scalar_label(value), _data_type_of(value))


def object_node(children: dict) -> RltNode:
    return RltNode(NodeType.OBJECT, None, DataType.NULL, tuple(children.items()))


def bag_node(children: Sequence[RltNode]) -> RltNode:
    return RltNode(NodeType.BAG, None, DataType.NULL, tuple((None, c) for c in children))


def _data_type_of(value: Any) -> DataType:
    if value is None:
        return DataType.NULL
    if isinstance(value, bool):
        return DataType.BOOLEAN
    if isinstance(value, (int, float, Decimal)):
        return DataType.NUMBER
    if isinstance(value, str):
        return DataType.STRING
    raise ContractViolation(f"not a JSON scalar: {value!r}")


def _scalar_label(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ContractViolation("JSON numbers must be finite")
        return Decimal(repr(value))
    if isinstance(value, int):
        return Decimal(value)
    if isinstance(value, Decimal):
        if not value.is_finite():
            raise ContractViolation("JSON numbers must be finite")
        return value
    raise ContractViolation(f"not a JSON scalar: {value!r}")


# ---------------------------------------------------------------------------
# parsing

_DEPTH_TOKEN = re.compile(r'"(?:[^"\\]|\\.)*"|[\[\]{}]', re.S)


def json_nesting_depth(text: str) -> int:
    """Maximum bracket nesting of a JSON text, ignoring brackets in strings."""
    depth = deepest = 0
    for match in _DEPTH_TOKEN.finditer(text):
        tok = match.group()
        if tok in "[{":
            depth += 1
            if depth > deepest:
                deepest = depth
        elif tok in "]}":
            depth -= 1
    return deepest


def _reject_duplicates(pairs):
    obj = {}
    for key, value in pairs:
        if key in obj:
            raise DuplicateKeyError(key)
        obj[key] = value
    return obj


def _reject_constant(name):
    raise ValueError(f"non-finite number {name} is not valid JSON")


def parse_json(data: Union[bytes, str], max_depth: int = DEFAULT_MAX_DEPTH) -> JsonValue:
    """Parse UTF-8 JSON text into plain Python values.

    Objects become ``dict``, arrays ``list`` (order kept), numbers ``Decimal``.
    Duplicate keys raise :class:`DuplicateKeyError`; nesting deeper than
    ``max_depth`` raises :class:`ResourceLimitError`.
    """
    if isinstance(data, (bytes, bytearray)):
        try:
            text = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            raise JsonParseError("input is not valid UTF-8", exc.start) from None
    else:
        text = data

    depth = json_nesting_depth(text)
    if depth > max_depth:
        raise ResourceLimitError(f"JSON nesting depth {depth} exceeds limit {max_depth}")

    old_limit = sys.getrecursionlimit()
    if depth + 200 > old_limit:
        sys.setrecursionlimit(depth + 200)
    try:
        return json.loads(
            text,
            parse_float=Decimal,
            parse_int=Decimal,
            parse_constant=_reject_constant,
            object_pairs_hook=_reject_duplicates,
        )
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise JsonParseError(exc.msg, offset) from None
    except ValueError as exc:
        if isinstance(exc, JsonParseError):
            raise
        raise JsonParseError(str(exc)) from None
    except RecursionError:
        raise ResourceLimitError("JSON nesting too deep for the parser") from None
    finally:
        sys.setrecursionlimit(old_limit)


# ---------------------------------------------------------------------------
# JSON -> RLT


def to_rlt(doc: JsonValue, max_depth: int = DEFAULT_MAX_DEPTH) -> RltTree:
    """Map a parsed JSON document to its RLT. Array order is discarded."""
    # Post-order construction on an explicit stack; documents may nest deeply.
    built: dict[int, RltNode] = {}
    stack: list[tuple[Any, int, bool]] = [(doc, 1, False)]
    while stack:
        value, depth, expanded = stack.pop()
        if isinstance(value, dict):
            if not expanded:
                if depth > max_depth:
                    raise ResourceLimitError(f"nesting depth exceeds limit {max_depth}")
                stack.append((value, depth, True))
                stack.extend((v, depth + 1, False) for v in value.values())
            else:
                kids = tuple((str(k), _take(built, v)) for k, v in value.items())
                built[id(value)] = RltNode(NodeType.OBJECT, None, DataType.NULL, kids)
        elif isinstance(value, (list, tuple)):
            if not expanded:
                if depth > max_depth:
                    raise ResourceLimitError(f"nesting depth exceeds limit {max_depth}")
                stack.append((value, depth, True))
                stack.extend((v, depth + 1, False) for v in value)
            else:
                kids = tuple((None, _take(built, v)) for v in value)
                built[id(value)] = RltNode(NodeType.BAG, None, DataType.NULL, kids)
    return RltTree(_take(built, doc))


def _take(built: dict, value: Any) -> RltNode:
    # Scalars may be shared objects (interned small ints, None), so build
    # leaves afresh instead of relying on id() being unique for them.
    if isinstance(value, (dict, list, tuple)):
        return built[id(value)]
    return value_node(value)


def from_rlt(tree: RltTree) -> JsonValue:
    """Inverse mapping; Bag children come out in their stored order."""
    if tree.root is None:
        raise ContractViolation("the empty tree has no JSON rendering")
    out: dict[int, Any] = {}
    stack = [(tree.root, False)]
    while stack:
        node, expanded = stack.pop()
        if node.node_type is NodeType.VALUE:
            out[id(node)] = node.label
        elif not expanded:
            stack.append((node, True))
            stack.extend((c, False) for _, c in node.children)
        elif node.node_type is NodeType.OBJECT:
            out[id(node)] = {k: out[id(c)] for k, c in node.children}
        else:
            out[id(node)] = [out[id(c)] for _, c in node.children]
    return out[id(tree.root)]


# ---------------------------------------------------------------------------
# traversal helpers


def iter_nodes(tree: RltTree) -> Iterator[tuple[Path, RltNode]]:
    """Pre-order walk yielding ``(path, node)``.

    Object children are addressed by key, Bag children by stored position.
    """
    if tree.root is None:
        return
    stack: list[tuple[Path, RltNode]] = [((), tree.root)]
    while stack:
        path, node = stack.pop()
        yield path, node
        steps = _child_steps(node)
        for step, (_, child) in reversed(list(zip(steps, node.children))):
            stack.append((path + (step,), child))


def _child_steps(node: RltNode) -> list[PathStep]:
    if node.node_type is NodeType.BAG:
        return list(range(len(node.children)))
    return [label if label is not None else i for i, (label, _) in enumerate(node.children)]


def format_path(path: Path) -> str:
    """Render a path as a JSON Pointer (RFC 6901)."""
    return "".join("/" + str(step).replace("~", "~0").replace("/", "~1") for step in path)


def tree_depth(tree: RltTree) -> int:
    """Maximum number of inner nodes on a root-to-leaf path."""
    if tree.root is None:
        return 0
    deepest = 0
    stack = [(tree.root, 0)]
    while stack:
        node, depth = stack.pop()
        if node.node_type is not NodeType.VALUE:
            depth += 1
        deepest = max(deepest, depth)
        stack.extend((c, depth) for _, c in node.children)
    return deepest


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    path: str
    message: str


def validate_tree(tree: RltTree) -> list[Violation]:
    """Check the structural RLT invariants; an empty list means valid."""
    report: list[Violation] = []
    for path, node in iter_nodes(tree):
        for message in _node_problems(node):
            report.append(Violation(format_path(path), message))
    return report


def _node_problems(node: RltNode) -> list[str]:
    if not isinstance(node.node_type, NodeType):
        return ["unknown node type"]
    out = []
    if node.node_type is NodeType.VALUE:
        if node.children:
            out.append("Value node must be a leaf")
        if not isinstance(node.data_type, DataType):
            out.append("unknown data type")
        elif not _label_matches(node.label, node.data_type):
            out.append(f"label {node.label!r} does not match data type {node.data_type.value}")
        return out
    if node.label is not None or node.data_type is not DataType.NULL:
        out.append(f"{node.node_type.value} node must carry a null label")
    labels = [label for label, _ in node.children]
    if node.node_type is NodeType.OBJECT:
        if any(not isinstance(label, str) for label in labels):
            out.append("Object edge without a string label")
        seen = set()
        for label in labels:
            if label in seen:
                out.append(f"duplicate edge label {label!r}")
            seen.add(label)
    elif any(label is not None for label in labels):
        out.append("Bag edges must be unlabeled")
    return out


def _label_matches(label: Any, data_type: DataType) -> bool:
    if data_type is DataType.NULL:
        return label is None
    if data_type is DataType.BOOLEAN:
        return isinstance(label, bool)
    if data_type is DataType.NUMBER:
        return isinstance(label, Decimal) and label.is_finite()
    return isinstance(label, str)


# ---------------------------------------------------------------------------
# canonical serialization


def number_text(value: Decimal) -> str:
    """Canonical decimal text; equal values give equal strings."""
    if value == 0:
        return "0"
    digits = len(value.as_tuple().digits)
    return str(value.normalize(Context(prec=digits + 1)))


def _value_text(node: RltNode) -> str:
    dt = json.dumps(node.data_type.value)
    if node.data_type is DataType.NUMBER:
        v = json.dumps(number_text(node.label))
    else:
        v = json.dumps(node.label, ensure_ascii=False)
    return '{"dt":%s,"t":"val","v":%s}' % (dt, v)


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def canonical_text(tree: RltTree) -> str:
    """Byte-stable JSON rendering with node-type tags.

    ``{"t": "obj"|"bag"|"val", "dt": ..., "v": ..., "c": [...]}``; Object
    children appear as ``{"k": key, "n": child}`` sorted by key, Bag children
    sorted by the SHA-256 of their own canonical text. Two trees render
    identically iff they are equal with Bags compared as multisets.
    """
    if tree.root is None:
        return "null"
    out: dict[int, str] = {}
    stack = [(tree.root, False)]
    while stack:
        node, expanded = stack.pop()
        if node.node_type is NodeType.VALUE:
            out[id(node)] = _value_text(node)
        elif not expanded:
            stack.append((node, True))
            stack.extend((c, False) for _, c in node.children)
        elif node.node_type is NodeType.OBJECT:
            items = sorted((k, out[id(c)]) for k, c in node.children)
            body = ",".join('{"k":%s,"n":%s}' % (json.dumps(k, ensure_ascii=False), t) for k, t in items)
            out[id(node)] = '{"c":[%s],"t":"obj"}' % body
        else:
            texts = sorted((out[id(c)] for _, c in node.children), key=lambda t: (_digest(t), t))
            out[id(node)] = '{"c":[%s],"t":"bag"}' % ",".join(texts)
    return out[id(tree.root)]


def trees_equal(a: RltTree, b: RltTree) -> bool:
    """Structural equality with Bag children compared as multisets."""
    return canonical_text(a) == canonical_text(b)


def dump_json(value: JsonValue) -> str:
    """Compact JSON text; ``Decimal`` numbers are written exactly."""
    if isinstance(value, dict):
        return "{" + ",".join(json.dumps(str(k), ensure_ascii=False) + ":" + dump_json(v) for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(dump_json(v) for v in value) + "]"
    if isinstance(value, Decimal):
        return number_text(value)
    return json.dumps(value, ensure_ascii=False)
