from fractions import Fraction
from pathlib import Path

import pytest

from hmil_ted import CostModel, parse_json, to_rlt

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name):
    return to_rlt(parse_json((FIXTURES / name).read_bytes()))


@pytest.fixture
def worked_pair():
    return load_fixture("worked_t1.json"), load_fixture("worked_t2.json")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def weighted():
    return CostModel.build(
        relabel={"Number": "numeric_absolute", "String": "capped_levenshtein"},
        node_cost={"Object": Fraction(1, 2), "Bag": 2, "Number": Fraction(5, 4), "String": 1},
    )


def doc(text):
    return to_rlt(parse_json(text))
