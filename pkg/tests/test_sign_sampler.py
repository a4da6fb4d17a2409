import random

import pytest
from gmpy2 import mpq

from geopart import cad
from geopart.algebraic import sign_at
from geopart.semialg import X, Y

from _support import eval_signs, line_sign_oracle, oracle_abscissae, random_poly


def strict(samples):
    return {s.signs for s in samples if cad.is_strict(s.signs)}


def test_circle_realizes_inside_outside_and_on():
    samples = cad.sample_sign_conditions([X ** 2 + Y ** 2 - 1])
    assert cad.realized(samples) == {(-1,), (0,), (1,)}


def test_two_lines_give_four_quadrants():
    samples = cad.sample_sign_conditions([X, Y])
    assert strict(samples) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert (0, 0) in cad.realized(samples)


def test_parallel_lines_miss_one_vector():
    assert strict(cad.sample_sign_conditions([Y, Y - 1])) == {(1, 1), (1, -1), (-1, -1)}


def test_nested_circles():
    polys = [X ** 2 + Y ** 2 - 1, X ** 2 + Y ** 2 - 4]
    assert strict(cad.sample_sign_conditions(polys)) == {(-1, -1), (1, -1), (1, 1)}


def test_samples_carry_their_true_signs():
    rng = random.Random(4)
    polys = [random_poly(rng, 3), random_poly(rng, 2)]
    for s in cad.sample_sign_conditions(polys):
        assert s.signs == tuple(sign_at(p, s.point) for p in polys)


def test_rational_samples_match_independent_evaluation():
    rng = random.Random(6)
    polys = [random_poly(rng, 2), random_poly(rng, 2)]
    for s in cad.sample_sign_conditions(polys):
        if s.point.is_rational:
            assert s.signs == eval_signs(polys, (s.point.x, s.point.y_value()))


def test_tangent_curves():
    # y = x^2 touches y = 0 at the origin only
    polys = [Y - X ** 2, Y]
    realized = cad.realized(cad.sample_sign_conditions(polys))
    assert (0, 0) in realized
    assert (-1, 0) in realized and (1, 1) in realized and (-1, 1) in realized
    assert (1, -1) not in realized


def test_vertical_line_component():
    realized = cad.realized(cad.sample_sign_conditions([X * (Y - X)]))
    assert realized == {(-1,), (0,), (1,)}


def test_sign_vectors_against_line_oracle():
    rng = random.Random(2026)
    xs = oracle_abscissae(box=6, step=16)
    for _ in range(10):
        polys = [random_poly(rng, rng.randint(1, 2)) for _ in range(2)]
        assert strict(cad.sample_sign_conditions(polys)) == line_sign_oracle(polys, xs)


def test_empty_input_rejected():
    with pytest.raises(ValueError):
        cad.sample_sign_conditions([])


def test_mt_bound_values():
    assert cad.mt_bound(1, 2, 2) == 2500
    assert cad.mt_bound(3, 3, 2) == (50 * 3 * 3 // 2) ** 2
    with pytest.raises(ValueError):
        cad.mt_bound(2, 1, 2)


def test_sign_key_round_trip():
    for sv in [(1, -1, 0), (0,), (-1, -1)]:
        assert cad.parse_sign_key(cad.sign_key(sv)) == sv


def test_restrict_to_curve_stays_on_curve():
    circle = X ** 2 + Y ** 2 - 2
    samples = cad.restrict_to_curve([Y - X, Y + X], circle)
    assert all(sign_at(circle, s.point) == 0 for s in samples)
    assert {(1, 1), (1, -1), (-1, 1), (-1, -1)} <= cad.realized(samples)
    assert (0, 0) not in cad.realized(samples)


def test_sampler_handles_rational_critical_values():
    polys = [X - mpq(1, 3), Y ** 2 - X]
    realized = cad.realized(cad.sample_sign_conditions(polys))
    assert (0, 0) in realized  # x = 1/3 on the parabola
