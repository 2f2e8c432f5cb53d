import random
from fractions import Fraction

import pytest

from hmil_ted import ContractViolation, DeltaMatrix, brute_force_assignment, min_cost_assignment, pad_to_square
from hmil_ted.assignment import DELETE, INSERT, PAIR, assignment_cost, hungarian
from hmil_ted.oracle import brute_force_permutation


def test_pad_more_rows_than_columns():
    delta = pad_to_square([[3], [4]], [1, 1], [7])
    assert delta.entries == ((3, 1), (4, 1))
    assert delta.tags[0] == ((PAIR, 0, 0), (DELETE, 0))
    assert delta.tags[1][1] == (DELETE, 1)


def test_pad_square_unchanged():
    delta = pad_to_square([[1, 2], [3, 4]], [9, 9], [9, 9])
    assert delta.entries == ((1, 2), (3, 4))
    assert all(tag[0] == PAIR for row in delta.tags for tag in row)


def test_pad_only_insertions():
    delta = pad_to_square([], [], [1, 1])
    assert delta.entries == ((1, 1), (1, 1))
    assert all(tag[0] == INSERT for row in delta.tags for tag in row)
    assert min_cost_assignment(delta).total_cost == 2
    assert brute_force_assignment(delta) == 2


def test_pad_rejects_bad_shapes():
    with pytest.raises(ContractViolation):
        pad_to_square([], [], [])
    with pytest.raises(ContractViolation):
        pad_to_square([[1, 2]], [1], [1])
    with pytest.raises(ContractViolation):
        pad_to_square([[-1]], [1], [1])


def test_one_by_one():
    result = min_cost_assignment([[0]])
    assert result.total_cost == 0 and result.permutation == (0,)


def test_two_by_two_identity():
    result = min_cost_assignment([[1, 2], [2, 1]])
    assert result.total_cost == 2 and result.permutation == (0, 1)


def test_empty_matrix():
    assert min_cost_assignment([]).total_cost == 0


def test_anti_diagonal():
    result = min_cost_assignment([[5, 1, 5], [5, 5, 1], [1, 5, 5]])
    assert result.total_cost == 3 and result.permutation == (1, 2, 0)


def test_ties_pick_smallest_permutation():
    assert min_cost_assignment([[1, 1], [1, 1]]).permutation == (0, 1)
    assert min_cost_assignment([[0] * 4 for _ in range(4)]).permutation == (0, 1, 2, 3)


def test_fractions_stay_exact():
    m = [[Fraction(1, 3), Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 3)]]
    assert min_cost_assignment(m).total_cost == Fraction(2, 3)


def test_potentials_certify_optimum():
    rng = random.Random(3)
    for _ in range(50):
        k = rng.randint(1, 6)
        m = [[rng.randint(0, 20) for _ in range(k)] for _ in range(k)]
        assignment, u, v = hungarian(m)
        for i in range(k):
            for j in range(k):
                assert m[i][j] - u[i] - v[j] >= 0
            assert m[i][assignment[i]] - u[i] - v[assignment[i]] == 0


def test_random_against_permutations():
    rng = random.Random(11)
    for _ in range(300):
        k = rng.randint(1, 6)
        m = [[rng.randint(0, 100) for _ in range(k)] for _ in range(k)]
        want = brute_force_assignment(m)
        assert min_cost_assignment(m).total_cost == want
        assert assignment_cost(m) == want


def test_tie_heavy_against_permutations():
    rng = random.Random(5)
    for _ in range(500):
        k = rng.randint(1, 6)
        m = [[rng.randint(0, 2) for _ in range(k)] for _ in range(k)]
        result = min_cost_assignment(m)
        assert result.total_cost == brute_force_assignment(m)
        assert result.permutation == brute_force_permutation(m)


def test_accepts_delta_matrix():
    delta = DeltaMatrix(((2, 0), (0, 2)), ((("pair", 0, 0), ("pair", 0, 1)), (("pair", 1, 0), ("pair", 1, 1))))
    assert min_cost_assignment(delta).permutation == (1, 0)


def test_floats_tolerated():
    m = [[0.1 + 0.2, 0.3], [0.3, 0.1 + 0.2]]
    result = min_cost_assignment(m)
    assert result.permutation == (0, 1)
    assert result.total_cost == pytest.approx(0.6)
