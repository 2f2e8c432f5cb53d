"""Pure-Python distance kernel over a :class:`~hmil_ted.forest.Forest`.

This is the reference evaluation of the recursion and the fallback used
when the compiled kernel is unavailable or the cost model needs exact
rational arithmetic. Evaluation runs on an explicit stack; results for
pairs of inner nodes are memoized by (smaller id, larger id).
"""

from __future__ import annotations

from .assignment import assignment_cost
from .forest import OBJECT, VALUE, Forest

STRING = 3
MEMO_LIMIT = 4_000_000


class PyKernel:
    def __init__(self, forest: Forest):
        self.forest = forest
        self.memo: dict[tuple[int, int], object] = {}
        model = forest.model
        from .forest import DATA_TYPES

        self._relabel = [model.relabel[dt] for dt in DATA_TYPES]

    # -- leaf-level cases ----------------------------------------------------

    def _value(self, a: int, b: int):
        f = self.forest
        both = f.node_cost[a] + f.node_cost[b]
        if f.dtype[a] != f.dtype[b]:
            return both
        cost = self._relabel[f.dtype[a]](f.label[a], f.label[b])
        return cost if cost <= both else both

    def _quick(self, a: int, b: int):
        """Distance if it needs no child results, else None."""
        if a == b:
            return 0
        f = self.forest
        ka = f.kind[a]
        if ka != f.kind[b]:
            return f.remove_cost[a] + f.remove_cost[b]
        if ka == VALUE:
            if f.dtype[a] == STRING:
                key = (a, b) if a < b else (b, a)
                hit = self.memo.get(key)
                if hit is None:
                    hit = self.memo[key] = self._value(a, b)
                return hit
            return self._value(a, b)
        return self.memo.get((a, b) if a < b else (b, a))

    # -- inner-node cases ----------------------------------------------------

    def _object_parts(self, a: int, b: int):
        """Merge-join the sorted key lists of two Object nodes."""
        f = self.forest
        ka, kb = f.keys[a], f.keys[b]
        ca, cb = f.children[a], f.children[b]
        shared, only_a, only_b = [], [], []
        i = j = 0
        while i < len(ka) and j < len(kb):
            if ka[i] == kb[j]:
                shared.append((ca[i], cb[j]))
                i += 1
                j += 1
            elif ka[i] < kb[j]:
                only_a.append(ca[i])
                i += 1
            else:
                only_b.append(cb[j])
                j += 1
        only_a.extend(ca[i:])
        only_b.extend(cb[j:])
        return shared, only_a, only_b

    def _bag_parts(self, a: int, b: int):
        """Children of two Bags with the common multiset removed.

        Pairing identical subtrees at cost zero is always part of some
        optimal assignment (exchange argument using the triangle inequality).
        """
        ca, cb = self.forest.children[a], self.forest.children[b]
        rest_a, rest_b = [], []
        i = j = 0
        while i < len(ca) and j < len(cb):
            if ca[i] == cb[j]:
                i += 1
                j += 1
            elif ca[i] < cb[j]:
                rest_a.append(ca[i])
                i += 1
            else:
                rest_b.append(cb[j])
                j += 1
        rest_a.extend(ca[i:])
        rest_b.extend(cb[j:])
        return rest_a, rest_b

    def _pending(self, a: int, b: int) -> list[tuple[int, int]]:
        if self.forest.kind[a] == OBJECT:
            pairs, _, _ = self._object_parts(a, b)
        else:
            rest_a, rest_b = self._bag_parts(a, b)
            pairs = [(x, y) for x in rest_a for y in rest_b]
        return [(x, y) for x, y in pairs if self._quick(x, y) is None]

    def _combine(self, a: int, b: int):
        f = self.forest
        rc = f.remove_cost
        quick = self._quick
        if f.kind[a] == OBJECT:
            shared, only_a, only_b = self._object_parts(a, b)
            total = sum(quick(x, y) for x, y in shared)
            return total + sum(rc[x] for x in only_a) + sum(rc[y] for y in only_b)
        rest_a, rest_b = self._bag_parts(a, b)
        if not rest_a:
            return sum(rc[y] for y in rest_b)
        if not rest_b:
            return sum(rc[x] for x in rest_a)
        m, n = len(rest_a), len(rest_b)
        k = max(m, n)
        delta = []
        for i in range(k):
            if i < m:
                x = rest_a[i]
                row = [quick(x, y) for y in rest_b]
                row.extend([rc[x]] * (k - n))
            else:
                row = [rc[y] for y in rest_b]
            delta.append(row)
        return assignment_cost(delta)

    # -- public --------------------------------------------------------------

    def distance(self, a: int, b: int):
        found = self._quick(a, b)
        if found is not None:
            return found
        if len(self.memo) > MEMO_LIMIT:
            self.memo.clear()
        memo = self.memo
        stack = [(a, b)]
        while stack:
            x, y = stack[-1]
            key = (x, y) if x < y else (y, x)
            if key in memo:
                stack.pop()
                continue
            pending = self._pending(x, y)
            if pending:
                stack.extend(pending)
                continue
            memo[key] = self._combine(x, y)
            stack.pop()
        return memo[(a, b) if a < b else (b, a)]

    def fill_rows(self, ids, rows) -> dict[int, list]:
        """Upper-triangle distances for the given row indices into ``ids``."""
        out = {}
        for i in rows:
            out[i] = [self.distance(ids[i], ids[j]) for j in range(i + 1, len(ids))]
        return out
