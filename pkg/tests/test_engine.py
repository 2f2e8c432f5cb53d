import random
from decimal import Decimal
from fractions import Fraction

import pytest

from conftest import doc, weighted
from hmil_ted import (
    EMPTY,
    ContractViolation,
    CostModel,
    ResourceLimitError,
    RltNode,
    RltTree,
    bag_distance,
    brute_force_distance,
    custom,
    delete_tree_cost,
    distance,
    insert_tree_cost,
    model_from_config,
    object_distance,
    parse_json,
    to_rlt,
    value_distance,
    value_node,
)
from hmil_ted._backend import COMPILED_AVAILABLE
from hmil_ted.generate import random_document
from hmil_ted.rlt import DataType, NodeType

BACKENDS = ["python"] + (["compiled"] if COMPILED_AVAILABLE else [])


@pytest.mark.parametrize("backend", BACKENDS)
def test_worked_example_distance(worked_pair, backend):
    t1, t2 = worked_pair
    assert distance(t1, t2, backend=backend) == 9
    assert distance(t2, t1, backend=backend) == 9


def test_worked_example_object_decomposition(worked_pair):
    t1, t2 = worked_pair
    assert object_distance(t1.root, t2.root) == 9
    k1 = dict(t1.root.children)
    k2 = dict(t2.root.children)
    assert distance(k1["k2"], k2["k2"]) == 1
    assert delete_tree_cost(k1["k3"]) + delete_tree_cost(k1["k4"]) == 6
    assert insert_tree_cost(k2["k8"]) == 2


def test_worked_example_removed_bags(worked_pair):
    kids = dict(worked_pair[0].root.children)
    assert delete_tree_cost(kids["k3"]) == 5
    assert delete_tree_cost(kids["k4"]) == 1


def test_identity():
    rng = random.Random(1)
    for _ in range(100):
        t = to_rlt(random_document(rng, 15))
        assert distance(t, t) == 0
        assert distance(t, t, weighted()) == 0


def test_empty_trees():
    t = doc('{"a": [1, 2], "b": null}')
    assert distance(EMPTY, EMPTY) == 0
    assert distance(t, EMPTY) == 5
    assert distance(EMPTY, t) == 5
    assert distance(None, t) == 5


def test_delete_and_insert_costs():
    assert delete_tree_cost(value_node(1)) == 1
    t = doc('{"a": [1, {"b": "x"}], "c": {}}')
    assert delete_tree_cost(t) == t.node_count
    model = weighted()
    assert insert_tree_cost(t, model) == delete_tree_cost(t, model)
    # Object 1/2 twice, Bag 2, Number 5/4, String 1
    assert delete_tree_cost(t, model) == Fraction(1, 2) * 3 + 2 + Fraction(5, 4) + 1


def test_whole_tree_cost_rejects_empty():
    with pytest.raises(ContractViolation):
        delete_tree_cost(EMPTY)
    with pytest.raises(ContractViolation):
        insert_tree_cost(EMPTY)


def test_value_distance():
    assert value_distance(value_node("A"), value_node("B")) == 1
    assert value_distance(value_node(1), value_node(True)) == 2
    assert value_distance(value_node(2), value_node(2)) == 0
    with pytest.raises(ContractViolation):
        value_distance(doc("[]").root, value_node(1))


def test_value_relabel_never_exceeds_replacement():
    model = model_from_config({"relabel": {"Number": "numeric_absolute"}})
    assert value_distance(value_node(2), value_node(5), model) == 2
    assert value_distance(value_node(2), value_node(Decimal("2.5")), model) == Fraction(1, 2)


def test_object_distance_cases():
    a, b = doc('{"x": 1, "y": [1]}'), doc('{"x": 1, "y": [1]}')
    assert object_distance(a.root, b.root) == 0
    assert object_distance(doc('{"x": 1}').root, doc('{"y": 1}').root) == 2


def test_bag_distance_cases():
    assert bag_distance(doc("[1, 2]").root, doc("[2, 1]").root) == 0
    assert bag_distance(doc("[1]").root, doc("[1, 1, 1]").root) == 2
    assert bag_distance(doc("[]").root, doc("[]").root) == 0
    numeric = model_from_config({"relabel": {"Number": "numeric_absolute"}})
    a, b = doc("[1, 2]"), doc("[2, 9]")
    assert bag_distance(a.root, b.root, numeric) == brute_force_distance(a, b, numeric) == 2


def test_node_type_mismatch():
    assert distance(doc("[1]"), doc('{"a": 1}')) == 4
    assert distance(doc("[]"), doc("1")) == 2


def test_keys_do_not_cross():
    # same value under different keys is delete + insert, not a free match
    assert distance(doc('{"a": 1}'), doc('{"b": 1}')) == 2
    assert distance(doc('{"a": {"c": 1}}'), doc('{"b": {"c": 1}}')) == 4


def test_bag_children_can_be_matched_across_positions():
    assert distance(doc('[{"a": 1}, {"b": 2}]'), doc('[{"b": 2}, {"a": 3}]')) == 1


def test_invalid_tree_rejected():
    bad = RltNode(NodeType.VALUE, "x", DataType.NUMBER)
    with pytest.raises(ContractViolation):
        distance(RltTree(bad), EMPTY)
    with pytest.raises(ContractViolation):
        distance("not a tree", EMPTY)


@pytest.mark.parametrize("backend", BACKENDS)
def test_deep_trees(backend):
    deep_a = to_rlt(parse_json('{"a":' * 999 + "1" + "}" * 999))
    deep_b = to_rlt(parse_json('{"a":' * 999 + "2" + "}" * 999))
    assert distance(deep_a, deep_b, backend=backend) == 1
    with pytest.raises(ResourceLimitError):
        distance(deep_a, deep_b, backend=backend, max_depth=100)


@pytest.mark.parametrize("backend", BACKENDS)
def test_wide_bags(backend):
    a = to_rlt(list(range(300)))
    b = to_rlt(list(range(150, 450)))
    assert distance(a, b, backend=backend) == 150


def test_backends_agree_on_random_pairs():
    if not COMPILED_AVAILABLE:
        pytest.skip("compiled kernel not built")
    rng = random.Random(2)
    for _ in range(300):
        a, b = to_rlt(random_document(rng, 25)), to_rlt(random_document(rng, 25))
        assert distance(a, b, backend="python") == distance(a, b, backend="compiled")


def test_compiled_backend_refuses_inexact_models():
    if not COMPILED_AVAILABLE:
        pytest.skip("compiled kernel not built")
    with pytest.raises(ValueError):
        distance(doc("[1]"), doc("[2]"), weighted(), backend="compiled")


def test_large_numbers_stay_exact():
    model = model_from_config({"relabel": {"Number": "numeric_absolute"}, "node_cost": {"Number": 10**20}})
    a, b = doc("[100000000000000000001]"), doc("[1]")
    assert distance(a, b, model) == 10**20


def test_custom_float_relabel():
    model = CostModel.build(relabel={"Number": custom("half", lambda x, y: float(abs(x - y)) / 2)})
    a, b = doc("[1, 2.5]"), doc("[2, 3]")
    assert distance(a, b, model) == pytest.approx(float(brute_force_distance(a, b, model)))


def test_engine_matches_oracle_on_random_pairs():
    rng = random.Random(9)
    for model in (CostModel.unit(), weighted()):
        for _ in range(200):
            a, b = to_rlt(random_document(rng, 8)), to_rlt(random_document(rng, 8))
            assert distance(a, b, model) == brute_force_distance(a, b, model)
