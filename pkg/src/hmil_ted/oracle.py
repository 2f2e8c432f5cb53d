"""Brute-force reference distances for small inputs.

Nothing here reuses the engine's recursion or the Hungarian solver. The tree
distance is the minimum, over every valid edit mapping, of the mapping cost
computed straight from its definition; the assignment optimum is a minimum
over all permutations.
"""

from __future__ import annotations

import itertools
from typing import Iterator, Optional, Sequence

from .costs import Cost, CostModel, gamma
from .errors import ResourceLimitError
from .rlt import NodeType, Path, RltNode, RltTree, iter_nodes

DEFAULT_NODE_BOUND = 20
MAX_ASSIGNMENT_DIMENSION = 8



def _compatible(v: RltNode, w: RltNode) -> bool:
    return v.node_type is w.node_type and v.data_type is w.data_type


def _children(node: RltNode, path: Path) -> list[tuple[Path, RltNode, Optional[str]]]:
    if node.node_type is NodeType.BAG:
        return [(path + (i,), c, None) for i, (_, c) in enumerate(node.children)]
    return [(path + (k,), c, k) for k, c in node.children]


def _partial_injections(left: Sequence, right: Sequence, allowed) -> Iterator[list[tuple]]:
    """All sets of disjoint (l, r) pairs with ``allowed(l, r)``."""
    if not left:
        yield []
        return
    head, rest = left[0], left[1:]
    yield from _partial_injections(rest, right, allowed)
    for idx, r in enumerate(right):
        if allowed(head, r):
            for tail in _partial_injections(rest, right[:idx] + right[idx + 1 :], allowed):
                yield [(head, r)] + tail


def _below(va: RltNode, pa: Path, vb: RltNode, pb: Path) -> Iterator[frozenset]:
    """Every valid set of pairs strictly below an already-paired (va, vb)."""
    kids_a = _children(va, pa)
    kids_b = _children(vb, pb)
    if va.node_type is NodeType.OBJECT:
        allowed = lambda x, y: x[2] == y[2] and _compatible(x[1], y[1])  # noqa: E731
    else:
        allowed = lambda x, y: _compatible(x[1], y[1])  # noqa: E731
    for chosen in _partial_injections(kids_a, kids_b, allowed):
        options = [
            [frozenset({(xa[0], xb[0])}) | sub for sub in _below(xa[1], xa[0], xb[1], xb[0])]
            for xa, xb in chosen
        ]
        for combo in itertools.product(*options):
            yield frozenset().union(*combo)


def enumerate_mappings(a: RltTree, b: RltTree) -> Iterator[frozenset]:
    """All valid edit mappings, generated top-down from the roots."""
    yield frozenset()
    if a.root is None or b.root is None or not _compatible(a.root, b.root):
        return
    for sub in _below(a.root, (), b.root, ()):
        yield frozenset({((), ())}) | sub


def enumerate_mappings_unpruned(a: RltTree, b: RltTree) -> Iterator[frozenset]:
    """All partial injections between the node sets that pass the mapping checks.

    Exponentially slower than :func:`enumerate_mappings`; used to confirm the
    top-down generator misses nothing on small trees.
    """
    from .mapping import constraint_violations

    nodes_a = [p for p, _ in iter_nodes(a)]
    nodes_b = [p for p, _ in iter_nodes(b)]
    for chosen in _partial_injections(nodes_a, nodes_b, lambda x, y: True):
        if not constraint_violations(chosen, a, b):
            yield frozenset(chosen)


def _mapping_cost(pairs: frozenset, nodes_a: dict, nodes_b: dict, model: CostModel) -> Cost:
    in_a = {p for p, _ in pairs}
    in_b = {q for _, q in pairs}
    total: Cost = 0
    for p, q in pairs:
        total += gamma(nodes_a[p], nodes_b[q], model)
    for p, node in nodes_a.items():
        if p not in in_a:
            total += gamma(node, None, model)
    for q, node in nodes_b.items():
        if q not in in_b:
            total += gamma(None, node, model)
    return total


def brute_force_distance(
    a: RltTree,
    b: RltTree,
    model: Optional[CostModel] = None,
    bound: int = DEFAULT_NODE_BOUND,
) -> Cost:
    """Minimum mapping cost over all valid mappings, by exhaustive search.

    Refuses (``ResourceLimitError``) when the trees together exceed ``bound``
    nodes.
    """
    model = model or CostModel.unit()
    if a.node_count + b.node_count > bound:
        raise ResourceLimitError(
            f"oracle bound exceeded: {a.node_count + b.node_count} nodes > {bound}"
        )
    nodes_a = dict(iter_nodes(a))
    nodes_b = dict(iter_nodes(b))
    return min(_mapping_cost(m, nodes_a, nodes_b, model) for m in enumerate_mappings(a, b))


def brute_force_assignment(delta) -> Cost:
    """Minimum over all permutations of a square matrix (dimension <= 8)."""
    rows = [list(r) for r in getattr(delta, "entries", delta)]
    k = len(rows)
    if k > MAX_ASSIGNMENT_DIMENSION:
        raise ResourceLimitError(f"brute-force assignment limited to {MAX_ASSIGNMENT_DIMENSION} x {MAX_ASSIGNMENT_DIMENSION}")
    if k == 0:
        return 0
    return min(sum(rows[i][p[i]] for i in range(k)) for p in itertools.permutations(range(k)))


def brute_force_permutation(delta) -> tuple[int, ...]:
    """Lexicographically smallest optimal permutation (for tie-break checks)."""
    rows = [list(r) for r in getattr(delta, "entries", delta)]
    k = len(rows)
    if k > MAX_ASSIGNMENT_DIMENSION:
        raise ResourceLimitError("brute-force assignment limited to 8 x 8")
    best = None
    for p in itertools.permutations(range(k)):
        cost = sum(rows[i][p[i]] for i in range(k))
        if best is None or cost < best[0]:
            best = (cost, p)
    return best[1] if best else ()
