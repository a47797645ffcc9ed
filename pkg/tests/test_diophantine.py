import random

import pytest
from hypothesis import given, strategies as st

from seplab.diophantine import (
    EqSystem, SupportConstraint, SystemBuilder, cutoff_bound, feasible, minimal_solutions, rank, solve_nat,
    system_member,
)
from seplab.oracles import brute_minimal_solutions, random_system
from seplab.vecnum import DimensionError, leq


def test_feasible_examples():
    w = feasible(EqSystem([[1, -2]], [0], 2), SupportConstraint(must_be_positive=frozenset([0])))
    assert w is not None and w[0] == 2 * w[1] and w[1] >= 1
    assert feasible(EqSystem([[1, 1]], [0], 2), SupportConstraint(must_be_positive=frozenset([0]))) is None
    assert feasible(EqSystem([[3, 2]], [7], 2)) == (1, 2)


def test_feasible_must_be_zero():
    sys = EqSystem([[1, 1]], [2], 2)
    assert feasible(sys, SupportConstraint(must_be_zero=frozenset([0]))) == (0, 2)
    assert feasible(sys, SupportConstraint(must_be_zero=frozenset([0, 1]))) is None


def test_minimal_solutions_examples():
    assert minimal_solutions(EqSystem([[1, -2]], [0], 2)) == (((0, 0),), ((2, 1),))
    assert minimal_solutions(EqSystem([[1, 1]], [2], 2)) == (((0, 2), (1, 1), (2, 0)), ())
    assert minimal_solutions(EqSystem([[0]], [0], 1)) == (((0,),), ((1,),))


def test_infeasible_system_has_no_solutions():
    inhom, _ = minimal_solutions(EqSystem([[1, 1]], [-1], 2))
    assert inhom == ()
    assert feasible(EqSystem([[1, 1]], [-1], 2)) is None


def test_eqsystem_validation_and_json():
    with pytest.raises(DimensionError):
        EqSystem([[1, 2], [1]], [0, 0], 2)
    sys = EqSystem([[1, -1, 2]], [3], 2)
    assert EqSystem.from_json(sys.to_json()) == sys
    assert sys.solves((3, 0, 0)) and not sys.solves((0, 0, 0))


def test_rank_and_cutoff():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1]]) == 2
    assert cutoff_bound(EqSystem([[1, -2]], [0], 2)) >= 3


def test_large_coefficients_use_exact_path():
    big = 2**45
    sys = EqSystem([[big, -big]], [0], 2)
    w = feasible(sys, SupportConstraint(must_be_positive=frozenset([0])))
    assert w is not None and w[0] == w[1] >= 1


def test_system_member():
    sys = EqSystem([[1, -1, -1]], [0], 2, 3)
    assert system_member(sys, (3, 2)) is not None
    assert system_member(sys, (2, 3)) is None


def test_builder():
    sb = SystemBuilder()
    x = sb.block(2)
    y = sb.block(1)
    sb.add_row({x[0]: 1, x[1]: 1, y[0]: -1}, 0)
    sys = sb.system(2)
    assert sys.ncols == 3 and sys.proj_dim == 2


@pytest.mark.parametrize("seed", range(25))
def test_minimal_solutions_match_brute_force(seed):
    sys = random_system(random.Random(seed), max_rows=2, max_cols=3)
    assert minimal_solutions(sys) == brute_minimal_solutions(sys)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=2),
       st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_minimal_solutions_are_solutions_and_antichains(matrix, rhs):
    rhs = rhs[:len(matrix)]
    sys = EqSystem(matrix, rhs, 3)
    inhom, hilbert = minimal_solutions(sys)
    for x in inhom:
        assert sys.solves(x)
    for h in hilbert:
        assert any(h) and EqSystem(matrix, [0] * len(matrix), 3).solves(h)
    for group in (inhom, hilbert):
        for a in group:
            assert not any(a != b and leq(b, a) for b in group)
    assert (feasible(sys) is None) == (not inhom)


@given(st.lists(st.integers(-4, 4), min_size=3, max_size=3), st.integers(-6, 6))
def test_solve_nat_witness_replays(row, b):
    w = solve_nat([row], [b], 3)
    if w is not None:
        assert sum(a * x for a, x in zip(row, w)) == b and min(w) >= 0
