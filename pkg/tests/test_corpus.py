import random

import pytest

from conftest import weighted
from hmil_ted import InputError, ResourceLimitError, distance, distance_matrix, read_corpus, to_rlt
from hmil_ted._backend import COMPILED_AVAILABLE
from hmil_ted.corpus import matrix_csv
from hmil_ted.generate import record_document


def test_ids_from_field_or_line_index():
    records = read_corpus(['{"_id": "first", "a": 1}', "", "[1, 2]", '{"_id": 7}', b'"x"'])
    assert [r.id for r in records] == ["first", "2", "7", "4"]
    # the id member is not part of the document
    assert records[0].doc == {"a": 1}
    assert records[2].doc == {}


def test_bad_line_names_line_number():
    with pytest.raises(InputError, match="line 3"):
        read_corpus(["1", "2", "{oops", "4"])


def test_duplicate_ids():
    with pytest.raises(InputError, match="duplicate id"):
        read_corpus(['{"_id": "a"}', '{"_id": "a"}'])
    with pytest.raises(InputError, match="line 2"):
        read_corpus(['{"_id": "1"}', "2", '{"_id": "1"}'])


def test_structured_id_rejected():
    with pytest.raises(InputError):
        read_corpus(['{"_id": [1]}'])


def test_depth_limit_in_corpus():
    with pytest.raises(ResourceLimitError):
        read_corpus(["[[[[1]]]]"], max_depth=3)


def test_single_document():
    assert distance_matrix([{"a": 1}]) == [[0]]


def test_identical_documents():
    m = distance_matrix([{"a": [1, 2]}] * 4)
    assert m == [[0] * 4 for _ in range(4)]


def test_matches_pairwise_distance():
    docs = [{"a": 1}, [1, 2, 3], {"a": "x", "b": [True]}]
    m = distance_matrix(docs)
    for i, a in enumerate(docs):
        for j, b in enumerate(docs):
            assert m[i][j] == distance(to_rlt(a), to_rlt(b))


def test_empty_corpus():
    assert distance_matrix([]) == []


@pytest.mark.parametrize("backend", ["python"] + (["compiled"] if COMPILED_AVAILABLE else []))
def test_parallelism_does_not_change_results(backend):
    rng = random.Random(21)
    docs = [record_document(rng, rng.randint(1, 20)) for _ in range(40)]
    base = distance_matrix(docs, backend=backend)
    for p in (2, 3, 8):
        assert distance_matrix(docs, parallelism=p, backend=backend) == base
    n = len(docs)
    assert all(base[i][i] == 0 and base[i][j] == base[j][i] for i in range(n) for j in range(n))


def test_exact_model_in_processes():
    rng = random.Random(22)
    docs = [record_document(rng, rng.randint(1, 12)) for _ in range(12)]
    model = weighted()
    assert distance_matrix(docs, model, parallelism=3) == distance_matrix(docs, model)


def test_csv_layout():
    text = matrix_csv(["a", "b,c"], [[0, 1], [1, 0]])
    assert text == 'a,"b,c"\r\n0,1\r\n1,0\r\n'


def test_record_document_size():
    rng = random.Random(0)
    from hmil_ted.generate import count_nodes

    for n in (1, 2, 5, 50):
        assert count_nodes(record_document(rng, n)) == n
