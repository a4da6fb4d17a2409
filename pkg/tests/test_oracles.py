import random

from gmpy2 import mpq

from geopart.generate import gen_instance, gen_points, gen_queries
from geopart.oracles import (as_alg, brute_force_first_hit, brute_force_range,
                             brute_force_weight, compare_alg, real_roots, sign_at_alg,
                             term_sum)
from geopart.rangesearch import DISK_TRANSLATE, HALFPLANE
from geopart.semialg import circle, closed_disk


def test_weight_neutral_and_single():
    assert brute_force_weight([], (0, 0)) == 0
    assert brute_force_weight([closed_disk(0, 0, 0, 1, weight="5")], (0, 1), "sum") == 5
    assert brute_force_weight([closed_disk(0, 0, 0, 1)], (0, 2)) == 0


def test_weight_is_permutation_invariant():
    sets = gen_instance("disks", 60, 1).sets
    shuffled = sets[:]
    random.Random(0).shuffle(shuffled)
    for q in gen_queries(40, 1):
        for sg in ("count", "sum", "min-id"):
            ws = {s.id: s.id for s in sets} if sg == "min-id" else None
            assert brute_force_weight(sets, q, sg, ws) == brute_force_weight(shuffled, q, sg, ws)


def test_range_neutral_and_total():
    pts = gen_points(30, 2)
    assert brute_force_range([], (0, 0), HALFPLANE) == 0
    # the range is the closed halfplane below the line; every point lies below y = 100
    assert brute_force_range(pts, (0, 100), HALFPLANE) == 30
    assert brute_force_range(pts, (0, -100), HALFPLANE) == 0
    assert brute_force_range([(mpq(3), mpq(4))], (0, 0), DISK_TRANSLATE) == 0


def test_first_hit_circle():
    c = circle(4, 0, 0, 1)
    sid, (x, y) = brute_force_first_hit([c], (0, -2))
    assert (sid, x) == (4, 0) and compare_alg(y, as_alg(-1)) == 0
    assert brute_force_first_hit([c], (0, 2)) is None
    hit = brute_force_first_hit([c], (0, 0))
    assert compare_alg(hit[1][1], 1) == 0


def test_first_hit_reordering_keeps_answer():
    sets = gen_instance("arcs", 30, 4).sets
    rev = list(reversed(sets))
    for q in gen_queries(30, 4):
        a, b = brute_force_first_hit(sets, q), brute_force_first_hit(rev, q)
        assert (a is None) == (b is None)
        if a is not None:
            assert a[0] == b[0] and compare_alg(a[1][1], b[1][1]) == 0


def test_sturm_roots_and_comparisons():
    roots = real_roots([-2, 0, 1])  # y^2 - 2
    assert len(roots) == 2
    assert compare_alg(roots[0], roots[1]) < 0
    assert compare_alg(roots[1], mpq(141, 100)) > 0 and compare_alg(roots[1], mpq(3, 2)) < 0
    other = real_roots([-8, 0, 4])[1]  # same root, different polynomial
    assert compare_alg(roots[1], other) == 0
    assert sign_at_alg([-2, 0, 1], roots[1]) == 0
    assert sign_at_alg([-1, 1], roots[1]) == 1
    assert [compare_alg(r, v) for r, v in zip(real_roots([0, -1, 1]), (0, 1))] == [0, 0]


def test_term_sum():
    assert term_sum({(2, 0): 1, (0, 1): -3, (0, 0): 2}, (3, 1)) == 8
