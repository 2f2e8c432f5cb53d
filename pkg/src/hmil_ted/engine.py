"""Tree edit distance between RLTs under leaf-only (schema-preserving) edits.

The distance is evaluated by case analysis on the two roots:

* empty trees cost nothing; one empty side costs deleting/inserting the other,
* roots of different node types force deleting one tree and inserting the other,
* two Value roots cost their relabel (same data type) or delete + insert,
* two Object roots sum child distances over shared keys and delete/insert
  costs over unshared keys,
* two Bag roots solve a minimum-cost assignment of children, padded with
  deletions or insertions.

:func:`distance` evaluates this over a hash-consed forest using the compiled
kernel when the costs allow it. :func:`explain` replays the same case
analysis top-down and records which case was taken, yielding a mapping and a
leaf-only edit script whose cost equals the distance.
"""

from __future__ import annotations

from typing import Optional, Union

from ._backend import make_kernel
from .assignment import DELETE, INSERT, PAIR, min_cost_assignment, pad_to_square
from .costs import Cost, CostModel, gamma
from .errors import ContractViolation
from .forest import Forest
from .mapping import EditMapping, EditOp, EditScript
from .rlt import DEFAULT_MAX_DEPTH, NodeType, Path, RltNode, RltTree, iter_nodes, validate_tree

TreeLike = Union[RltTree, RltNode, None]

_UNIT = CostModel.unit()


def _as_tree(t: TreeLike) -> RltTree:
    if t is None:
        return RltTree(None)
    if isinstance(t, RltNode):
        return RltTree(t)
    if isinstance(t, RltTree):
        return t
    raise ContractViolation(f"expected an RltTree, got {type(t).__name__}")


def _checked(t: TreeLike) -> RltTree:
    tree = _as_tree(t)
    report = validate_tree(tree)
    if report:
        detail = "; ".join(f"{v.path or '/'}: {v.message}" for v in report[:5])
        raise ContractViolation(f"invalid tree ({len(report)} violations): {detail}")
    return tree


def delete_tree_cost(a: TreeLike, model: Optional[CostModel] = None) -> Cost:
    """Cost of deleting every node of ``a``, leaves first."""
    tree = _as_tree(a)
    if tree.root is None:
        raise ContractViolation("the empty tree has nothing to delete")
    model = model or _UNIT
    return sum((model.delete_cost(node) for _, node in iter_nodes(tree)), 0)


def insert_tree_cost(b: TreeLike, model: Optional[CostModel] = None) -> Cost:
    """Cost of building ``b`` from nothing, parents first."""
    tree = _as_tree(b)
    if tree.root is None:
        raise ContractViolation("the empty tree has nothing to insert")
    model = model or _UNIT
    return sum((model.insert_cost(node) for _, node in iter_nodes(tree)), 0)


def distance(
    a: TreeLike,
    b: TreeLike,
    model: Optional[CostModel] = None,
    *,
    backend: Optional[str] = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> Cost:
    """Edit distance between two trees (either may be the empty tree).

    Raises :class:`ContractViolation` for structurally invalid trees and
    :class:`~hmil_ted.errors.ResourceLimitError` past ``max_depth``.
    """
    ta, tb = _checked(a), _checked(b)
    model = model or _UNIT
    if ta.root is None and tb.root is None:
        return 0
    if tb.root is None:
        return delete_tree_cost(ta, model)
    if ta.root is None:
        return insert_tree_cost(tb, model)
    forest = Forest(model, max_depth)
    ia = forest.add(ta.root)
    ib = forest.add(tb.root)
    return make_kernel(forest, backend).distance(ia, ib)


# ---------------------------------------------------------------------------
# single-case helpers on nodes


def _require(node: RltNode, kind: NodeType) -> None:
    if not isinstance(node, RltNode) or node.node_type is not kind:
        raise ContractViolation(f"expected a {kind.value} node, got {node!r}")


def value_distance(a: RltNode, b: RltNode, model: Optional[CostModel] = None) -> Cost:
    """Relabel cost for equal data types, otherwise delete + insert.

    A relabel dearer than delete + insert is never optimal; the cheaper of
    the two is returned.
    """
    _require(a, NodeType.VALUE)
    _require(b, NodeType.VALUE)
    model = model or _UNIT
    both = gamma(a, None, model) + gamma(None, b, model)
    if a.data_type is not b.data_type:
        return both
    return min(gamma(a, b, model), both)


def object_distance(a: RltNode, b: RltNode, model: Optional[CostModel] = None) -> Cost:
    _require(a, NodeType.OBJECT)
    _require(b, NodeType.OBJECT)
    model = model or _UNIT
    kids_b = dict(b.children)
    total: Cost = 0
    for key, child in a.children:
        if key in kids_b:
            total += distance(child, kids_b.pop(key), model)
        else:
            total += delete_tree_cost(child, model)
    for child in kids_b.values():
        total += insert_tree_cost(child, model)
    return total


def bag_distance(a: RltNode, b: RltNode, model: Optional[CostModel] = None) -> Cost:
    _require(a, NodeType.BAG)
    _require(b, NodeType.BAG)
    model = model or _UNIT
    kids_a = [c for _, c in a.children]
    kids_b = [c for _, c in b.children]
    if not kids_a and not kids_b:
        return 0
    delta = pad_to_square(
        [[distance(x, y, model) for y in kids_b] for x in kids_a],
        [delete_tree_cost(x, model) for x in kids_a],
        [insert_tree_cost(y, model) for y in kids_b],
    )
    return min_cost_assignment(delta).total_cost


# ---------------------------------------------------------------------------
# explanation


def explain(
    a: TreeLike,
    b: TreeLike,
    model: Optional[CostModel] = None,
    *,
    backend: Optional[str] = None,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> tuple[EditMapping, EditScript]:
    """Minimum-cost mapping and a leaf-only edit script realizing it.

    Script order: deletions (children before parents), then relabels, then
    insertions (parents before children).
    """
    ta, tb = _checked(a), _checked(b)
    model = model or _UNIT
    pairs: list[tuple[Path, Path]] = []
    deletes: list[EditOp] = []
    relabels: list[EditOp] = []
    inserts: list[EditOp] = []

    def drop(node: RltNode, path: Path) -> None:
        sub = [(path + p, n) for p, n in iter_nodes(RltTree(node))]
        for p, n in reversed(sub):
            deletes.append(EditOp("delete", p, gamma(n, None, model), n.node_type, n.data_type, None, n.label))

    def add(node: RltNode, path: Path) -> None:
        for p, n in iter_nodes(RltTree(node)):
            inserts.append(EditOp("insert", path + p, gamma(None, n, model), n.node_type, n.data_type, n.label))

    if ta.root is None or tb.root is None:
        if ta.root is not None:
            drop(ta.root, ())
        if tb.root is not None:
            add(tb.root, ())
    else:
        forest = Forest(model, max_depth)
        ids: dict[int, int] = {}
        forest.add(ta.root, ids)
        forest.add(tb.root, ids)
        kernel = make_kernel(forest, backend)

        work: list[tuple[RltNode, Path, RltNode, Path]] = [(ta.root, (), tb.root, ())]
        while work:
            na, pa, nb, pb = work.pop()
            if na.node_type is not nb.node_type:
                drop(na, pa)
                add(nb, pb)
                continue
            if na.node_type is NodeType.VALUE:
                if na.data_type is nb.data_type:
                    cost = gamma(na, nb, model)
                    if cost <= gamma(na, None, model) + gamma(None, nb, model):
                        pairs.append((pa, pb))
                        if cost != 0:
                            relabels.append(
                                EditOp("relabel", pa, cost, na.node_type, na.data_type, nb.label, na.label, pb)
                            )
                        continue
                drop(na, pa)
                add(nb, pb)
                continue

            pairs.append((pa, pb))
            todo = []
            if na.node_type is NodeType.OBJECT:
                kids_b = dict(nb.children)
                for key, child in na.children:
                    if key in kids_b:
                        todo.append((child, pa + (key,), kids_b[key], pb + (key,)))
                    else:
                        drop(child, pa + (key,))
                keys_a = {key for key, _ in na.children}
                for key, child in nb.children:
                    if key not in keys_a:
                        add(child, pb + (key,))
            else:
                kids_a = [c for _, c in na.children]
                kids_b = [c for _, c in nb.children]
                if kids_a or kids_b:
                    delta = pad_to_square(
                        [[kernel.distance(ids[id(x)], ids[id(y)]) for y in kids_b] for x in kids_a],
                        [forest.remove_cost[ids[id(x)]] for x in kids_a],
                        [forest.remove_cost[ids[id(y)]] for y in kids_b],
                    )
                    result = min_cost_assignment(delta)
                    for i, j in enumerate(result.permutation):
                        tag = delta.tags[i][j]
                        if tag[0] == PAIR:
                            todo.append((kids_a[tag[1]], pa + (tag[1],), kids_b[tag[2]], pb + (tag[2],)))
                        elif tag[0] == DELETE:
                            drop(kids_a[tag[1]], pa + (tag[1],))
                        elif tag[0] == INSERT:
                            add(kids_b[tag[1]], pb + (tag[1],))
            work.extend(reversed(todo))

    ops = tuple(deletes + relabels + inserts)
    mapping = EditMapping(
        pairs=tuple(pairs),
        deleted=tuple(op.path for op in deletes),
        inserted=tuple(op.path for op in inserts),
        cost=sum((op.cost for op in ops), 0),
    )
    return mapping, EditScript(ops)
