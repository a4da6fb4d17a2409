import json

import pytest
from gmpy2 import mpq

from geopart.generate import gen_instance
from geopart.partition import (PartitionTuple, RetriesExhausted, acceptable, alpha_target,
                               build_partition, cells_per_axis, default_sample_size,
                               degree_bound, epsilon_sample_size,
                               solve_small_instance, subspace_basis, verify_partition)
from geopart.semialg import X, Y, closed_disk, point_set


def test_cells_per_axis():
    assert [cells_per_axis(k) for k in (1, 2, 3, 4, 5)] == [2, 2, 3, 4, 6]


def test_subspace_sizes_and_degrees():
    for j in range(1, 7):
        basis = subspace_basis(j)
        assert len(basis) == 2 ** (j - 1) + 1
        assert max(a + b for a, b in basis) <= degree_bound(j)


def test_tuple_rejects_out_of_subspace_polys():
    with pytest.raises(ValueError):
        PartitionTuple((X ** 2,))
    with pytest.raises(ValueError):
        PartitionTuple((X, Y - Y))
    assert PartitionTuple((X - 1, Y + X)).k == 2


def test_tuple_json_round_trip():
    t = PartitionTuple((X - mpq(1, 3), Y + 2 * X))
    assert PartitionTuple.from_json(json.loads(json.dumps(t.to_json()))) == t


def test_verify_two_lines_on_points():
    pts = [point_set(i, x, y) for i, (x, y) in enumerate([(1, 1), (2, 3), (-1, 2), (-2, -2),
                                                          (3, -1), (0, 5)])]
    rep = verify_partition(PartitionTuple((X, Y)), pts)
    assert rep.conditions[(1, 1)].meeting == [0, 1]
    assert rep.conditions[(-1, 1)].meeting == [2]
    assert rep.residue == [5]  # on the y-axis
    assert rep.uncovered == [5]
    assert rep.achieved_alpha == 3


def test_verify_counts_containment():
    # (+, +, -) is the triangle x > 0, y > 0, x + y < 1
    tup = PartitionTuple((X, Y, X * Y + X ** 2 - X))
    big = closed_disk(0, 0, 0, 100)
    small = closed_disk(1, 5, 5, 1)
    rep = verify_partition(tup, [big, small])
    assert rep.conditions[(1, 1, -1)].containing == [0]
    assert rep.conditions[(1, 1, -1)].crossing == 0
    assert rep.conditions[(1, 1, 1)].meeting == [0, 1]
    assert not rep.conditions[(-1, -1, -1)].realizable


def test_points_partition_is_balanced():
    sets = gen_instance("points", 64, 3).sets
    tup, rep = build_partition(sets, 2, 2, seed=3)
    assert acceptable(rep, alpha_target(2, sets, 2))
    assert verify_partition(tup, sets).max_meeting == rep.max_meeting
    assert rep.max_meeting <= 32


def test_report_is_reproducible_from_json_tuple():
    sets = gen_instance("circles", 40, 2).sets
    tup, rep = build_partition(sets, 2, 1, seed=1)
    again = verify_partition(PartitionTuple.from_json(tup.to_json()), sets)
    assert again.to_json() == rep.to_json() | {"attempts": again.attempts}


def test_retries_exhausted_carries_best():
    # every concentric disk contains the origin, so nothing can split them
    sets = [closed_disk(i, 0, 0, i + 1) for i in range(12)]
    with pytest.raises(RetriesExhausted) as err:
        build_partition(sets, 2, 1, max_retries=3, seed=0)
    # the sample is the whole family, so repeats stop early
    assert err.value.retries == 2


def test_solver_reaches_target_on_small_sample():
    sets = gen_instance("points", 20, 5).sets
    tup, rep = solve_small_instance(sets, 2, mpq(2), seed=5)
    assert rep.alpha_at_least(2)
    assert verify_partition(tup, sets).max_crossing == rep.max_crossing


def test_default_sample_size():
    assert default_sample_size(50, 2) == 50
    assert default_sample_size(10 ** 6, 4) == 8 * 4 ** 4


def test_epsilon_sample_size_monotone():
    assert epsilon_sample_size(3, mpq(1, 10), mpq(1, 2)) > epsilon_sample_size(3, mpq(1, 5),
                                                                               mpq(1, 2))
    with pytest.raises(ValueError):
        epsilon_sample_size(3, 2, mpq(1, 2))


def test_bad_arguments():
    with pytest.raises(ValueError):
        build_partition([], 2)
    with pytest.raises(ValueError):
        build_partition([point_set(0, 0, 0)], 0)
