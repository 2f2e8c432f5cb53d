"""Exact minimum-cost assignment on the padded square matrix used for Bags.

The solver is the O(k^3) shortest-augmenting-path form of the Hungarian
method. It is generic over the number type, so integer and ``Fraction``
inputs give exact results. Among equal-cost optima the lexicographically
smallest permutation is returned: once the optimal dual potentials are
known, every optimal assignment uses only zero-reduced-cost cells, and the
smallest perfect matching on those cells is found greedily row by row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from .costs import FLOAT_TOLERANCE, Cost
from .errors import ContractViolation

# cell provenance tags
PAIR, DELETE, INSERT = "pair", "delete", "insert"


@dataclass(frozen=True)
class DeltaMatrix:
    entries: Tuple[Tuple[Cost, ...], ...]
    tags: Tuple[Tuple[tuple, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class AssignmentResult:
    permutation: Tuple[int, ...]  # row i -> column permutation[i]
    total_cost: Cost


def pad_to_square(
    pair_costs: Sequence[Sequence[Cost]],
    delete_costs: Sequence[Cost],
    insert_costs: Sequence[Cost],
) -> DeltaMatrix:
    """Pad an m x n pair-cost block to max(m, n) square.

    Extra columns (m > n) repeat each row's deletion cost; extra rows (n > m)
    repeat each column's insertion cost.
    """
    m, n = len(delete_costs), len(insert_costs)
    if m == 0 and n == 0:
        raise ContractViolation("cannot pad an empty 0 x 0 matrix")
    if len(pair_costs) != m or any(len(row) != n for row in pair_costs):
        raise ContractViolation(f"pair_costs must be {m} x {n}")
    for c in list(delete_costs) + list(insert_costs) + [c for row in pair_costs for c in row]:
        if c < 0:
            raise ContractViolation(f"negative cost {c}")

    k = max(m, n)
    entries, tags = [], []
    for i in range(k):
        row, row_tags = [], []
        for j in range(k):
            if i < m and j < n:
                row.append(pair_costs[i][j])
                row_tags.append((PAIR, i, j))
            elif i < m:
                row.append(delete_costs[i])
                row_tags.append((DELETE, i))
            else:
                row.append(insert_costs[j])
                row_tags.append((INSERT, j))
        entries.append(tuple(row))
        tags.append(tuple(row_tags))
    return DeltaMatrix(tuple(entries), tuple(tags))


def _square(delta) -> list[list[Cost]]:
    rows = delta.entries if isinstance(delta, DeltaMatrix) else delta
    rows = [list(r) for r in rows]
    k = len(rows)
    if any(len(r) != k for r in rows):
        raise ContractViolation("assignment matrix must be square")
    return rows


def hungarian(cost: list[list[Cost]]) -> tuple[list[int], list[Cost], list[Cost]]:
    """Solve a k x k assignment; returns (row->col, row potentials, col potentials).

    Potentials satisfy ``cost[i][j] - u[i] - v[j] >= 0`` with equality on the
    chosen cells.
    """
    k = len(cost)
    inf = float("inf")
    u = [0] * (k + 1)
    v = [0] * (k + 1)
    match = [0] * (k + 1)  # match[j] = 1-based row assigned to column j
    way = [0] * (k + 1)
    for i in range(1, k + 1):
        match[0] = i
        j0 = 0
        minv = [inf] * (k + 1)
        used = [False] * (k + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            row = cost[i0 - 1]
            ui0 = u[i0]
            delta = inf
            j1 = 0
            for j in range(1, k + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(k + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    assignment = [0] * k
    for j in range(1, k + 1):
        assignment[match[j] - 1] = j - 1
    return assignment, u[1:], v[1:]


def _lexicographic_smallest(tight: list[list[int]], start: list[int]) -> list[int]:
    """Smallest perfect matching of a bipartite graph, given one perfect matching.

    ``tight[i]`` lists the admissible columns of row i in ascending order.
    Rows are fixed in order. Row ``r`` may trade its column for a smaller one
    owned by a later row only if that row can be re-routed, along an
    alternating path through unfixed rows, onto the column ``r`` gives up.
    """
    k = len(start)
    col_of = list(start)
    row_of = [0] * k
    for i, j in enumerate(col_of):
        row_of[j] = i

    for r in range(k):
        released = col_of[r]
        for col in tight[r]:
            if col >= released:
                break
            owner = row_of[col]
            if owner < r:
                continue
            prev = {}
            frontier = [owner]
            found = False
            while frontier and not found:
                nxt = []
                for row in frontier:
                    for c in tight[row]:
                        if c in prev or c == col:
                            continue
                        if c == released:
                            prev[c] = row
                            found = True
                            break
                        if row_of[c] <= r:
                            continue
                        prev[c] = row
                        nxt.append(row_of[c])
                    if found:
                        break
                frontier = nxt
            if not found:
                continue
            c = released
            while True:
                row = prev[c]
                old = col_of[row]
                col_of[row] = c
                row_of[c] = row
                if row == owner:
                    break
                c = old
            col_of[r] = col
            row_of[col] = r
            break
    return col_of


def min_cost_assignment(delta: Union[DeltaMatrix, Sequence[Sequence[Cost]]]) -> AssignmentResult:
    """Minimum-cost permutation of a square non-negative matrix.

    Ties are broken towards the lexicographically smallest permutation.
    """
    cost = _square(delta)
    k = len(cost)
    if k == 0:
        return AssignmentResult((), 0)
    assignment, u, v = hungarian(cost)
    floating = any(isinstance(c, float) for row in cost for c in row)
    tight = []
    for i in range(k):
        row = []
        for j in range(k):
            reduced = cost[i][j] - u[i] - v[j]
            if reduced == 0 or (floating and abs(reduced) <= FLOAT_TOLERANCE * max(1.0, abs(cost[i][j]))):
                row.append(j)
        tight.append(row)
    perm = _lexicographic_smallest(tight, assignment)
    total = sum(cost[i][perm[i]] for i in range(k))
    return AssignmentResult(tuple(perm), total)


def assignment_cost(cost: list[list[Cost]]) -> Cost:
    """Optimal total only; skips the tie-breaking pass."""
    if not cost:
        return 0
    assignment, _, _ = hungarian(cost)
    return sum(cost[i][assignment[i]] for i in range(len(cost)))
