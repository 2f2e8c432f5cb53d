"""Random and exhaustive JSON document generators for testing."""

from __future__ import annotations

import itertools
import random
from decimal import Decimal
from typing import Iterator, Sequence

from .rlt import JsonValue, canonical_text, to_rlt

DEFAULT_VALUES: tuple = (
    None,
    True,
    False,
    Decimal(0),
    Decimal(1),
    Decimal(2),
    Decimal(9),
    Decimal("2.5"),
    "a",
    "ab",
    "b",
    "abc",
)
DEFAULT_KEYS: tuple = ("a", "b", "c", "d")


def random_document(
    rng: random.Random,
    max_nodes: int = 8,
    values: Sequence = DEFAULT_VALUES,
    keys: Sequence[str] = DEFAULT_KEYS,
    container_bias: float = 0.45,
) -> JsonValue:
    """A random document with at most ``max_nodes`` RLT nodes."""
    budget = [rng.randint(1, max_nodes)]

    def grow() -> JsonValue:
        budget[0] -= 1
        roll = rng.random()
        if budget[0] <= 0 or roll > container_bias:
            if budget[0] <= 0 and rng.random() < 0.15:
                return {} if rng.random() < 0.5 else []
            return rng.choice(values)
        if roll < container_bias / 2:
            out = {}
            for key in rng.sample(list(keys), k=len(keys)):
                if budget[0] <= 0 or rng.random() < 0.3:
                    break
                out[key] = grow()
            return out
        items = []
        while budget[0] > 0 and rng.random() < 0.75:
            items.append(grow())
        return items

    return grow()


RECORD_KEYS: tuple = (
    "id", "name", "kind", "tags", "score", "active", "owner", "items",
    "meta", "notes", "rank", "links", "size", "color",
)
RECORD_WORDS: tuple = ("red", "green", "blue", "alpha", "beta", "gamma", "delta", "x", "yy", "zeta")


def record_document(rng: random.Random, nodes: int) -> JsonValue:
    """A record-shaped document with exactly ``nodes`` RLT nodes.

    Models typical corpus entries: a top-level object whose members are
    scalars, nested objects and arrays (of scalars or small objects).
    """
    if nodes < 1:
        raise ValueError("nodes must be positive")

    def scalar():
        roll = rng.random()
        if roll < 0.4:
            return rng.choice(RECORD_WORDS)
        if roll < 0.75:
            return Decimal(rng.randint(0, 20))
        if roll < 0.9:
            return rng.random() < 0.5
        return None

    def build(budget: int, depth: int) -> JsonValue:
        # budget counts this node too
        if budget == 1:
            return scalar() if rng.random() < 0.9 else rng.choice(({}, []))
        rest = budget - 1
        if depth >= 3 or rng.random() < 0.5:
            as_object = depth == 0 or rng.random() < 0.4
        else:
            as_object = rng.random() < 0.6
        if as_object:
            width = min(rest, len(RECORD_KEYS), rng.randint(1, 6))
            keys = rng.sample(RECORD_KEYS, width)
            return dict(zip(keys, (build(s, depth + 1) for s in _split(rng, rest, width))))
        width = rng.randint(1, rest)
        return [build(s, depth + 1) for s in _split(rng, rest, width)]

    return build(nodes, 0)


def _split(rng: random.Random, total: int, parts: int) -> list[int]:
    cuts = sorted(rng.sample(range(1, total), parts - 1))
    return [b - a for a, b in zip([0] + cuts, cuts + [total])]


def shuffle_arrays(doc: JsonValue, rng: random.Random) -> JsonValue:
    """Copy of ``doc`` with every array randomly permuted."""
    if isinstance(doc, dict):
        return {k: shuffle_arrays(v, rng) for k, v in doc.items()}
    if isinstance(doc, list):
        items = [shuffle_arrays(v, rng) for v in doc]
        rng.shuffle(items)
        return items
    return doc


def count_nodes(doc: JsonValue) -> int:
    if isinstance(doc, dict):
        return 1 + sum(count_nodes(v) for v in doc.values())
    if isinstance(doc, list):
        return 1 + sum(count_nodes(v) for v in doc)
    return 1


def _documents_of_size(n: int, values: Sequence, keys: Sequence[str], memo: dict) -> list:
    if n in memo:
        return memo[n]
    out: list = []
    if n == 1:
        out.extend(values)
        out.extend([{}, []])
    else:
        # Bags: multisets of child documents whose sizes sum to n - 1
        for combo in _multisets(n - 1, values, keys, memo):
            out.append(list(combo))
        # Objects: injective key assignment, keys taken in sorted order
        for k in range(1, min(len(keys), n - 1) + 1):
            for ks in itertools.combinations(sorted(keys), k):
                for sizes in _compositions(n - 1, k):
                    pools = [_documents_of_size(s, values, keys, memo) for s in sizes]
                    for docs in itertools.product(*pools):
                        out.append(dict(zip(ks, docs)))
    memo[n] = out
    return out


def _multisets(total: int, values, keys, memo) -> Iterator[tuple]:
    # non-decreasing sequences of (size, index) pairs
    def rec(remaining: int, min_item: tuple) -> Iterator[tuple]:
        if remaining == 0:
            yield ()
            return
        for size in range(min_item[0], remaining + 1):
            pool = _documents_of_size(size, values, keys, memo)
            start = min_item[1] if size == min_item[0] else 0
            for idx in range(start, len(pool)):
                for rest in rec(remaining - size, (size, idx)):
                    yield (pool[idx],) + rest

    yield from rec(total, (1, 0))


def _compositions(total: int, parts: int) -> Iterator[tuple]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def all_documents(max_nodes: int, values: Sequence, keys: Sequence[str]) -> list:
    """Every distinct RLT with at most ``max_nodes`` nodes, as JSON documents.

    Arrays that differ only in element order are generated once.
    """
    memo: dict = {}
    out = []
    seen = set()
    for n in range(1, max_nodes + 1):
        for doc in _documents_of_size(n, values, keys, memo):
            text = canonical_text(to_rlt(doc))
            if text not in seen:
                seen.add(text)
                out.append(doc)
    return out
