"""Self-check: engine against brute force, Hungarian against permutations, cost axioms.

Every case is drawn from a seeded generator, so a report is reproducible from
``(seed, iterations)`` and any failure carries enough data to replay it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Callable

from . import engine
from .assignment import min_cost_assignment
from .costs import CostModel, format_cost, model_from_config, verify_metric_axioms
from .generate import DEFAULT_VALUES, random_document
from .oracle import brute_force_assignment, brute_force_distance
from .rlt import to_rlt, value_node

DEFAULT_SEED = 0
DEFAULT_ITERATIONS = 1000
MAX_NODES = 8


def weighted_model() -> CostModel:
    """Non-unit model used alongside the unit model in validation runs."""
    return CostModel.build(
        relabel={"Number": "numeric_absolute", "String": "capped_levenshtein"},
        node_cost={"Object": Fraction(1, 2), "Bag": 2, "Number": Fraction(5, 4), "String": 1},
    )


MODELS: dict[str, Callable[[], CostModel]] = {"unit": CostModel.unit, "weighted": weighted_model}

# indirection so tests can swap in a faulty engine
_engine_distance = engine.distance


@dataclass
class Failure:
    check: str
    detail: dict

    def to_json(self) -> dict:
        return {"check": self.check, **self.detail}


@dataclass
class Report:
    seed: int
    iterations: int
    tree_cases: int = 0
    assignment_cases: int = 0
    axiom_models: int = 0
    failures: list[Failure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        status = "ok" if self.ok else f"FAILED ({len(self.failures)})"
        return (
            f"seed={self.seed} iterations={self.iterations} tree_pairs={self.tree_cases} "
            f"assignments={self.assignment_cases} axiom_models={self.axiom_models}: {status}"
        )


def _axiom_samples():
    labels = list(DEFAULT_VALUES) + [Decimal(-3), Decimal("0.5"), "", "abcd", "ba"]
    return [value_node(v) for v in labels]


def run_validation(seed: int = DEFAULT_SEED, iterations: int = DEFAULT_ITERATIONS, *, stop_on_failure: bool = True) -> Report:
    """Run ``iterations`` rounds; each round checks one random tree pair under
    every model and one random assignment matrix, then the axioms of each
    model's relabel functions are checked once."""
    rng = random.Random(seed)
    report = Report(seed, iterations)
    models = {name: make() for name, make in MODELS.items()}
    for it in range(iterations):
        doc_a = random_document(rng, MAX_NODES)
        doc_b = random_document(rng, MAX_NODES)
        ta, tb = to_rlt(doc_a), to_rlt(doc_b)
        for name, model in models.items():
            report.tree_cases += 1
            got = _engine_distance(ta, tb, model)
            want = brute_force_distance(ta, tb, model)
            if got != want:
                report.failures.append(Failure("tree_distance", {
                    "seed": seed, "iteration": it, "model": name,
                    "cost_config": model.to_config(), "a": doc_a, "b": doc_b,
                    "engine": format_cost(got), "oracle": format_cost(want),
                }))
                if stop_on_failure:
                    return report

        k = rng.randint(1, 6)
        matrix = [[rng.randint(0, 100) for _ in range(k)] for _ in range(k)]
        report.assignment_cases += 1
        got = min_cost_assignment(matrix).total_cost
        want = brute_force_assignment(matrix)
        if got != want:
            report.failures.append(Failure("assignment", {
                "seed": seed, "iteration": it, "matrix": matrix, "hungarian": got, "brute_force": want,
            }))
            if stop_on_failure:
                return report

    samples = _axiom_samples()
    for name, model in models.items():
        report.axiom_models += 1
        for v in verify_metric_axioms(model, samples):
            report.failures.append(Failure("axioms", {
                "model": name, "axiom": v.axiom, "labels": [n.label for n in v.nodes], "detail": v.detail,
            }))
            if stop_on_failure:
                return report
    return report


def replay(counterexample: dict):
    """Recompute ``(engine, oracle)`` for a serialized tree-distance failure."""
    model = model_from_config(counterexample["cost_config"])
    ta, tb = to_rlt(counterexample["a"]), to_rlt(counterexample["b"])
    return _engine_distance(ta, tb, model), brute_force_distance(ta, tb, model)
