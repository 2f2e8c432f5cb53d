"""Edit mappings between two trees and the edit scripts that realize them.

A mapping pairs nodes of the source tree with nodes of the target tree;
unpaired source nodes are deleted and unpaired target nodes inserted. Nodes
are addressed by paths (see :func:`hmil_ted.rlt.iter_nodes`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .costs import Cost, CostModel, gamma
from .errors import ContractViolation
from .rlt import DataType, NodeType, Path, RltNode, RltTree, dump_json, format_path, iter_nodes, trees_equal


@dataclass(frozen=True)
class EditMapping:
    pairs: tuple[tuple[Path, Path], ...]
    deleted: tuple[Path, ...]
    inserted: tuple[Path, ...]
    cost: Cost


@dataclass(frozen=True)
class EditOp:
    kind: str  # "delete" | "relabel" | "insert"
    path: Path  # source path for delete/relabel, target path for insert
    cost: Cost
    node_type: NodeType = NodeType.VALUE
    data_type: DataType = DataType.NULL
    label: Any = None  # new label (relabel, insert)
    old_label: Any = None  # relabel only
    target_path: Optional[Path] = None  # relabel only

    def describe(self) -> str:
        where = format_path(self.path) or "/"
        if self.kind == "relabel":
            return f"relabel {where}: {dump_json(self.old_label)} -> {dump_json(self.label)}"
        if self.kind == "delete":
            return f"delete {where}"
        what = self.node_type.value if self.node_type is not NodeType.VALUE else dump_json(self.label)
        return f"insert {where}: {what}"


@dataclass(frozen=True)
class EditScript:
    ops: tuple[EditOp, ...] = field(default_factory=tuple)

    @property
    def cost(self) -> Cost:
        return sum((op.cost for op in self.ops), 0)

    def __len__(self) -> int:
        return len(self.ops)


def _index(tree: RltTree) -> dict[Path, RltNode]:
    return dict(iter_nodes(tree))


def mapping_cost(mapping: EditMapping, a: RltTree, b: RltTree, model: CostModel) -> Cost:
    """Sum of relabel costs over pairs plus delete/insert costs of the rest."""
    ia, ib = _index(a), _index(b)
    paired_a = {pa for pa, _ in mapping.pairs}
    paired_b = {pb for _, pb in mapping.pairs}
    total = sum((gamma(ia[pa], ib[pb], model) for pa, pb in mapping.pairs), 0)
    total += sum((gamma(node, None, model) for p, node in ia.items() if p not in paired_a), 0)
    total += sum((gamma(None, node, model) for p, node in ib.items() if p not in paired_b), 0)
    return total


def constraint_violations(pairs, a: RltTree, b: RltTree) -> list[str]:
    """Check the five structural requirements of an edit mapping.

    1. paired nodes agree in node type and data type;
    2. the pairing is one-to-one;
    3. roots pair only with roots, and a non-root pair has paired parents;
    4. descendants of unpaired nodes are unpaired;
    5. children of Object nodes pair only across equal edge labels.
    """
    ia, ib = _index(a), _index(b)
    out: list[str] = []
    pairs = list(pairs)
    for pa, pb in pairs:
        if pa not in ia or pb not in ib:
            out.append(f"unknown path in pair ({format_path(pa)}, {format_path(pb)})")
    if out:
        return out
    pair_set = set(pairs)
    for pa, pb in pairs:
        va, vb = ia[pa], ib[pb]
        label = f"({format_path(pa) or '/'}, {format_path(pb) or '/'})"
        if va.node_type is not vb.node_type or va.data_type is not vb.data_type:
            out.append(f"constraint 1: {label} differ in node or data type")
        if (pa == ()) != (pb == ()):
            out.append(f"constraint 3: {label} pairs a root with a non-root")
        elif pa:
            if (pa[:-1], pb[:-1]) not in pair_set:
                out.append(f"constraint 3: parents of {label} are not paired")
            elif ia[pa[:-1]].node_type is NodeType.OBJECT and pa[-1] != pb[-1]:
                out.append(f"constraint 5: {label} hang on different edge labels")
    firsts = [pa for pa, _ in pairs]
    seconds = [pb for _, pb in pairs]
    if len(set(firsts)) != len(firsts) or len(set(seconds)) != len(seconds):
        out.append("constraint 2: mapping is not one-to-one")
    for paths, paired in ((ia, set(firsts)), (ib, set(seconds))):
        for p in paired:
            for k in range(len(p)):
                if p[:k] not in paired:
                    out.append(f"constraint 4: {format_path(p)} is paired below an unpaired ancestor")
                    break
    return out


# ---------------------------------------------------------------------------
# replaying scripts


class _Mutable:
    __slots__ = ("node_type", "data_type", "label", "children")

    def __init__(self, node_type, data_type, label):
        self.node_type = node_type
        self.data_type = data_type
        self.label = label
        self.children: list[list] = []  # [edge label, _Mutable]


def apply_script(a: RltTree, mapping: EditMapping, script: EditScript) -> RltTree:
    """Replay ``script`` on ``a`` with leaf-only operations.

    Raises :class:`ContractViolation` when an operation would act on an inner
    node or leave the tree structurally invalid.
    """
    where: dict[Path, _Mutable] = {}
    parent: dict[int, _Mutable] = {}
    root: Optional[_Mutable] = None
    for path, node in iter_nodes(a):
        m = _Mutable(node.node_type, node.data_type, node.label)
        where[path] = m
        if path:
            up = where[path[:-1]]
            up.children.append([path[-1] if up.node_type is NodeType.OBJECT else None, m])
            parent[id(m)] = up
        else:
            root = m
    target: dict[Path, _Mutable] = {pb: where[pa] for pa, pb in mapping.pairs}

    for op in script.ops:
        if op.kind == "delete":
            m = where.get(op.path)
            if m is None:
                raise ContractViolation(f"delete of unknown node {format_path(op.path)}")
            if m.children:
                raise ContractViolation(f"delete of inner node {format_path(op.path)} with children")
            if m is root:
                root = None
            else:
                up = parent.pop(id(m))
                up.children = [e for e in up.children if e[1] is not m]
            del where[op.path]
        elif op.kind == "relabel":
            m = where.get(op.path)
            if m is None or m.node_type is not NodeType.VALUE or m.data_type is not op.data_type:
                raise ContractViolation(f"invalid relabel at {format_path(op.path)}")
            m.label = op.label
        elif op.kind == "insert":
            m = _Mutable(op.node_type, op.data_type, op.label)
            if op.path == ():
                if root is not None:
                    raise ContractViolation("insert of a second root")
                root = m
            else:
                up = target.get(op.path[:-1])
                if up is None or up.node_type is NodeType.VALUE:
                    raise ContractViolation(f"insert under missing or leaf parent at {format_path(op.path)}")
                edge = op.path[-1] if up.node_type is NodeType.OBJECT else None
                if edge is not None and any(e[0] == edge for e in up.children):
                    raise ContractViolation(f"insert duplicates edge label {edge!r}")
                up.children.append([edge, m])
                parent[id(m)] = up
            target[op.path] = m
        else:
            raise ContractViolation(f"unknown operation {op.kind!r}")
    return RltTree(_freeze(root)) if root is not None else RltTree(None)


def _freeze(root: _Mutable) -> RltNode:
    done: dict[int, RltNode] = {}
    stack = [(root, False)]
    while stack:
        m, expanded = stack.pop()
        if not expanded and m.children:
            stack.append((m, True))
            stack.extend((c, False) for _, c in m.children)
            continue
        kids = tuple((e, done[id(c)]) for e, c in m.children)
        done[id(m)] = RltNode(m.node_type, m.label, m.data_type, kids)
    return done[id(root)]


def script_reaches(a: RltTree, b: RltTree, mapping: EditMapping, script: EditScript) -> bool:
    return trees_equal(apply_script(a, mapping, script), b)
