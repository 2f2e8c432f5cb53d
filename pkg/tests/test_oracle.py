import random
from decimal import Decimal

import pytest

from conftest import doc, weighted
from hmil_ted import EMPTY, ResourceLimitError, brute_force_assignment, brute_force_distance, to_rlt
from hmil_ted.generate import all_documents, random_document
from hmil_ted.mapping import EditMapping, constraint_violations, mapping_cost
from hmil_ted.oracle import enumerate_mappings, enumerate_mappings_unpruned


def test_worked_example_oracle(worked_pair):
    assert brute_force_distance(*worked_pair) == 9


def test_identical_single_values():
    assert brute_force_distance(doc("1"), doc("1")) == 0


def test_both_empty():
    assert brute_force_distance(EMPTY, EMPTY) == 0


def test_node_bound():
    big = doc("[" + ",".join(["1"] * 15) + "]")
    with pytest.raises(ResourceLimitError):
        brute_force_distance(big, big)


def test_assignment_oracle():
    assert brute_force_assignment([[0]]) == 0
    assert brute_force_assignment([[1, 2], [2, 1]]) == 2
    with pytest.raises(ResourceLimitError):
        brute_force_assignment([[0] * 9 for _ in range(9)])


def test_top_down_generator_produces_only_valid_mappings():
    rng = random.Random(4)
    for _ in range(100):
        a, b = to_rlt(random_document(rng, 6)), to_rlt(random_document(rng, 6))
        for m in enumerate_mappings(a, b):
            assert constraint_violations(m, a, b) == []


def test_top_down_generator_is_complete():
    # every partial injection that passes the checks is generated top-down
    rng = random.Random(6)
    for _ in range(150):
        a, b = to_rlt(random_document(rng, 5)), to_rlt(random_document(rng, 5))
        assert set(enumerate_mappings(a, b)) == set(enumerate_mappings_unpruned(a, b))


def test_top_down_generator_is_complete_on_all_small_pairs():
    trees = [to_rlt(d) for d in all_documents(4, [Decimal(1), "a"], ["a", "b"])]
    checked = 0
    for a in trees:
        for b in trees:
            if a.node_count + b.node_count <= 5:
                assert set(enumerate_mappings(a, b)) == set(enumerate_mappings_unpruned(a, b))
                checked += 1
    assert checked > 1000


def test_unpruned_minimum_matches():
    rng = random.Random(8)
    model = weighted()
    for _ in range(60):
        a, b = to_rlt(random_document(rng, 4)), to_rlt(random_document(rng, 4))
        best = min(
            mapping_cost(EditMapping(tuple(m), (), (), 0), a, b, model) for m in enumerate_mappings_unpruned(a, b)
        )
        assert best == brute_force_distance(a, b, model)


def test_constraint_messages():
    a, b = doc('{"x": [1], "y": 2}'), doc('{"x": [1], "z": 2}')
    assert constraint_violations([((), ()), (("x",), ("x",))], a, b) == []
    assert any(m.startswith("constraint 5") for m in constraint_violations([((), ()), (("y",), ("z",))], a, b))
    assert any(m.startswith("constraint 3") for m in constraint_violations([(("y",), ("z",))], a, b))
    assert any(m.startswith("constraint 1") for m in constraint_violations([((), ()), (("x",), ("z",))], a, b))
    assert any(m.startswith("constraint 4") for m in constraint_violations([(("x", 0), ("x", 0))], a, b))
    assert any(
        m.startswith("constraint 2")
        for m in constraint_violations([((), ()), (("x",), ("x",)), (("x",), ("x",))], a, b)
    )
