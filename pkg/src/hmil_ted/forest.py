"""Hash-consed storage of RLT subtrees.

Every structurally distinct subtree (Bags compared as multisets) gets one
integer id, so equal subtrees inside one document or across a corpus share
their distance computations. Object children are stored sorted by key id,
Bag children sorted by child id, which makes both canonical.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .costs import CostModel
from .errors import ResourceLimitError
from .rlt import DEFAULT_MAX_DEPTH, DataType, NodeType, RltNode

OBJECT, BAG, VALUE = 0, 1, 2
DATA_TYPES = (DataType.NULL, DataType.BOOLEAN, DataType.NUMBER, DataType.STRING)
_DT_INDEX = {dt: i for i, dt in enumerate(DATA_TYPES)}

# integers above this are not exactly representable as doubles
_FLOAT_EXACT_LIMIT = 2**52


class Forest:
    def __init__(self, model: CostModel, max_depth: int = DEFAULT_MAX_DEPTH):
        self.model = model
        self.max_depth = max_depth
        self.kind: list[int] = []
        self.dtype: list[int] = []
        self.label: list = []
        self.value_id: list[int] = []
        self.children: list[tuple[int, ...]] = []
        self.keys: list[tuple[int, ...]] = []
        self.node_cost: list = []
        self.remove_cost: list = []
        self.size: list[int] = []
        self.key_names: list[str] = []
        self.values: list[tuple[int, object]] = []  # value id -> (dtype index, label)
        self._key_ids: dict[str, int] = {}
        self._value_ids: dict[tuple, int] = {}
        self._index: dict[tuple, int] = {}
        self._numbers_exact = True
        self._max_remove = 0

    def __len__(self) -> int:
        return len(self.kind)

    @property
    def float_exact(self) -> bool:
        """Whether every distance over this forest is an integer below 2**52."""
        if not self.model.is_integral:
            return False
        numeric = self.model.relabel[DataType.NUMBER].kernel_code == 1
        if numeric and not self._numbers_exact:
            return False
        return self._max_remove < _FLOAT_EXACT_LIMIT // 2

    def _key_id(self, key: str) -> int:
        kid = self._key_ids.get(key)
        if kid is None:
            kid = self._key_ids[key] = len(self.key_names)
            self.key_names.append(key)
        return kid

    def _value_id(self, dt: int, label) -> int:
        vkey = (dt, label)
        vid = self._value_ids.get(vkey)
        if vid is None:
            vid = self._value_ids[vkey] = len(self.values)
            self.values.append(vkey)
            if dt == 2 and self._numbers_exact:
                if label != label.to_integral_value() or abs(label) >= _FLOAT_EXACT_LIMIT:
                    self._numbers_exact = False
        return vid

    def _intern(self, key: tuple, kind: int, dt: int, label, vid: int, kids, keys) -> int:
        nid = self._index.get(key)
        if nid is not None:
            return nid
        nid = self._index[key] = len(self.kind)
        model = self.model
        if kind == VALUE:
            cost = model.node_cost[DATA_TYPES[dt].value]
        else:
            cost = model.node_cost["Object" if kind == OBJECT else "Bag"]
        self.kind.append(kind)
        self.dtype.append(dt)
        self.label.append(label)
        self.value_id.append(vid)
        self.children.append(kids)
        self.keys.append(keys)
        self.node_cost.append(cost)
        remove = cost + sum(self.remove_cost[c] for c in kids)
        self.remove_cost.append(remove)
        if remove > self._max_remove:
            self._max_remove = remove
        self.size.append(1 + sum(self.size[c] for c in kids))
        return nid

    def add(self, root: RltNode, record: Optional[dict] = None) -> int:
        """Intern a tree and return its root id.

        With ``record``, ``id(node) -> forest id`` is stored for every node.
        """
        ids: dict[int, int] = {}
        stack: list[tuple[RltNode, int, bool]] = [(root, 1, False)]
        while stack:
            node, depth, expanded = stack.pop()
            if node.node_type is NodeType.VALUE:
                dt = _DT_INDEX[node.data_type]
                vid = self._value_id(dt, node.label)
                ids[id(node)] = self._intern(("v", vid), VALUE, dt, node.label, vid, (), ())
                continue
            if not expanded:
                if depth > self.max_depth:
                    raise ResourceLimitError(f"tree depth exceeds limit {self.max_depth}")
                stack.append((node, depth, True))
                stack.extend((child, depth + 1, False) for _, child in node.children)
                continue
            if node.node_type is NodeType.OBJECT:
                pairs = sorted((self._key_id(k), ids[id(c)]) for k, c in node.children)
                keys = tuple(k for k, _ in pairs)
                kids = tuple(c for _, c in pairs)
                ids[id(node)] = self._intern(("o", keys, kids), OBJECT, 0, None, -1, kids, keys)
            else:
                kids = tuple(sorted(ids[id(c)] for _, c in node.children))
                ids[id(node)] = self._intern(("b", kids), BAG, 0, None, -1, kids, ())
        if record is not None:
            record.update(ids)
        return ids[id(root)]

    def freeze(self) -> dict:
        """Flat numpy arrays for the compiled kernel.

        Only meaningful when :attr:`float_exact` holds; costs become doubles.
        """
        n = len(self)
        counts = np.fromiter((len(c) for c in self.children), dtype=np.int32, count=n)
        starts = np.zeros(n, dtype=np.int32)
        if n:
            starts[1:] = np.cumsum(counts)[:-1]
        flat_children = np.fromiter((c for kids in self.children for c in kids), dtype=np.int32)
        flat_keys = np.full(len(flat_children), -1, dtype=np.int32)
        for i in range(n):
            if self.keys[i]:
                flat_keys[starts[i] : starts[i] + counts[i]] = self.keys[i]

        numbers = np.zeros(len(self.values), dtype=np.float64)
        str_start = np.zeros(len(self.values), dtype=np.int64)
        str_len = np.zeros(len(self.values), dtype=np.int32)
        chunks = []
        offset = 0
        for vid, (dt, label) in enumerate(self.values):
            if dt == 2:
                numbers[vid] = float(label)
            elif dt == 3:
                cps = [ord(ch) for ch in label]
                str_start[vid] = offset
                str_len[vid] = len(cps)
                chunks.extend(cps)
                offset += len(cps)
        codepoints = np.array(chunks, dtype=np.int32)

        codes = np.zeros(4, dtype=np.int32)
        caps = np.zeros(4, dtype=np.float64)
        for i, dt in enumerate(DATA_TYPES):
            fn = self.model.relabel[dt]
            codes[i] = fn.kernel_code
            if fn.cap is not None:
                caps[i] = float(fn.cap)
        return {
            "kind": np.array(self.kind, dtype=np.int8),
            "dtype": np.array(self.dtype, dtype=np.int8),
            "value_id": np.array(self.value_id, dtype=np.int32),
            "child_start": starts,
            "child_count": counts,
            "child_ids": flat_children,
            "child_keys": flat_keys,
            "node_cost": np.array([float(c) for c in self.node_cost], dtype=np.float64),
            "remove_cost": np.array([float(c) for c in self.remove_cost], dtype=np.float64),
            "numbers": numbers,
            "str_start": str_start,
            "str_len": str_len,
            "codepoints": codepoints,
            "relabel_code": codes,
            "relabel_cap": caps,
        }
