import random

import pytest

from conftest import doc, weighted
from hmil_ted import EMPTY, ContractViolation, CostModel, EditScript, apply_script, brute_force_distance, distance, explain, to_rlt
from hmil_ted.generate import random_document
from hmil_ted.mapping import EditOp, constraint_violations, mapping_cost, script_reaches
from hmil_ted.rlt import format_path


def test_worked_example_explanation(worked_pair):
    t1, t2 = worked_pair
    mapping, script = explain(t1, t2)
    kinds = [op.kind for op in script.ops]
    assert kinds.count("relabel") == 1
    assert kinds.count("delete") == 6
    assert kinds.count("insert") == 2
    assert script.cost == mapping.cost == 9
    relabel, = [op for op in script.ops if op.kind == "relabel"]
    assert (relabel.old_label, relabel.label, relabel.cost) == ("A", "B", 1)
    assert format_path(relabel.path) == format_path(relabel.target_path) == "/k2/k5"
    assert sorted(format_path(p) for p in mapping.deleted) == ["/k3", "/k3/0", "/k3/1", "/k3/2", "/k3/3", "/k4"]
    assert [format_path(p) for p in mapping.inserted] == ["/k8", "/k8/k9"]
    assert constraint_violations(mapping.pairs, t1, t2) == []
    assert script_reaches(t1, t2, mapping, script)


def test_identical_trees():
    t = doc('{"a": [1, 2, {"b": null}]}')
    mapping, script = explain(t, t)
    assert len(script) == 0 and mapping.cost == 0
    assert len(mapping.pairs) == t.node_count


def test_empty_sides():
    t = doc("[1, [2]]")
    mapping, script = explain(t, EMPTY)
    assert [op.kind for op in script.ops] == ["delete"] * 4
    # leaves before parents
    assert format_path(script.ops[-1].path) == ""
    mapping, script = explain(EMPTY, t)
    assert format_path(script.ops[0].path) == ""
    assert script_reaches(EMPTY, t, mapping, script)
    assert explain(EMPTY, EMPTY)[1].ops == ()


@pytest.mark.parametrize("model_name", ["unit", "weighted"])
def test_random_explanations_are_optimal_and_valid(model_name):
    model = CostModel.unit() if model_name == "unit" else weighted()
    rng = random.Random(12)
    for _ in range(300):
        a, b = to_rlt(random_document(rng, 8)), to_rlt(random_document(rng, 8))
        mapping, script = explain(a, b, model)
        assert constraint_violations(mapping.pairs, a, b) == []
        assert mapping_cost(mapping, a, b, model) == mapping.cost == script.cost
        assert sum(op.cost for op in script.ops) == mapping.cost
        assert mapping.cost == distance(a, b, model) == brute_force_distance(a, b, model)
        assert script_reaches(a, b, mapping, script)


def test_larger_explanations_replay():
    rng = random.Random(13)
    for _ in range(50):
        a, b = to_rlt(random_document(rng, 40)), to_rlt(random_document(rng, 40))
        mapping, script = explain(a, b)
        assert mapping.cost == distance(a, b)
        assert script_reaches(a, b, mapping, script)


def test_replay_rejects_inner_node_deletion():
    t = doc("[1]")
    mapping, _ = explain(t, EMPTY)
    bad = EditScript((EditOp("delete", (), 1),))
    with pytest.raises(ContractViolation):
        apply_script(t, mapping, bad)


def test_describe():
    _, script = explain(doc('{"a": "x"}'), doc('{"a": "y", "b": 1}'))
    assert [op.describe() for op in script.ops] == ['relabel /a: "x" -> "y"', "insert /b: 1"]
