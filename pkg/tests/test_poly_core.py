import random

import pytest
from gmpy2 import mpq

from geopart import upoly as U
from geopart.algebraic import AlgebraicPoint, compare_ordinates, sign_at
from geopart.elim import discriminant, resultant
from geopart.oracles import real_roots, term_sum
from geopart.poly import MultiPoly
from geopart.semialg import X, Y

from _support import random_poly


def test_arithmetic_matches_term_evaluation():
    rng = random.Random(3)
    for _ in range(50):
        p, q = random_poly(rng, 3), random_poly(rng, 2)
        pt = (mpq(rng.randint(-9, 9), 7), mpq(rng.randint(-9, 9), 5))
        assert (p * q).eval(pt) == term_sum(p.terms, pt) * term_sum(q.terms, pt)
        assert (p - q).eval(pt) == term_sum(p.terms, pt) - term_sum(q.terms, pt)


def test_cancellation_drops_terms():
    p = X ** 2 + Y
    assert (p - p).is_zero()
    assert (p - Y).terms == {(2, 0): 1}


def test_exponent_arity_checked():
    with pytest.raises(ValueError):
        MultiPoly(2, {(1,): 1})
    with pytest.raises(ValueError):
        MultiPoly(0)


def test_terms_round_trip():
    p = 3 * X ** 2 * Y - mpq(1, 3) * Y + 7
    assert MultiPoly.from_terms(p.to_terms(), num_vars=2) == p


def test_eval_point_rational():
    p = X ** 2 + Y ** 2 - 1
    assert p.eval((mpq(3, 5), mpq(4, 5))) == 0


def test_resultant_of_circle_and_line_in_y():
    # x^2 + y^2 - 1 and y - x meet where 2x^2 - 1 = 0
    r = resultant(X ** 2 + Y ** 2 - 1, Y - X, 1)
    assert r.degree_in(1) == 0
    roots = U.isolate_real_roots(r.upoly if r.num_vars == 1 else r.at_y(0))
    assert len(roots) == 2
    assert all(abs(float(root.refine(mpq(1, 2 ** 40))) ** 2 - 0.5) < 1e-9 for root in roots)


def test_resultant_with_graph_substitutes():
    # res_y(y - a(x), q) = +-q(x, a(x))
    rng = random.Random(8)
    for _ in range(20):
        a = MultiPoly(2, {(i, 0): rng.randint(-4, 4) for i in range(3)})
        q = random_poly(rng, 3)
        if q.degree_in(1) < 1:
            continue
        r = resultant(Y - a, q, 1)
        x0 = mpq(rng.randint(-20, 20), 3)
        expect = q.eval((x0, a.eval((x0, 0))))
        assert r.eval((x0, 0)) in (expect, -expect)


def test_resultant_of_shared_factor_vanishes():
    rng = random.Random(9)
    for _ in range(10):
        f = random_poly(rng, 1)
        if f.degree_in(1) < 1:
            continue
        assert resultant(f * random_poly(rng, 2), f * random_poly(rng, 1), 1).is_zero()


def test_resultant_three_variables():
    a, b, c = (MultiPoly.var(i, 3) for i in range(3))
    r = resultant(a * c - b, c - 2, 2)
    # eliminating c = 2 from a c - b gives 2a - b up to sign
    assert r == 2 * a - b or r == b - 2 * a


def test_resultant_rejects_constants():
    with pytest.raises(ValueError):
        resultant(X + 1, X - 1, 1)


def test_discriminant_of_quadratic():
    d = discriminant(Y ** 2 + X * Y + 1, 1)
    assert d == X ** 2 - 4


def test_discriminant_linear_is_one():
    assert discriminant(Y - X, 1) == MultiPoly.const(1)


def test_isolation_square_free_and_multiple_roots():
    p = U.mul(U.make([-2, 0, 1]), U.make([-2, 0, 1]))  # (x^2-2)^2
    roots = U.isolate_real_roots(p)
    assert len(roots) == 2
    assert roots[0].hi <= 0 <= roots[1].lo


def test_isolation_accepts_univariate_multipoly():
    roots = U.isolate_real_roots(MultiPoly.from_upoly(U.make([-2, 0, 1])))
    assert [r.lo < 0 for r in roots] == [True, False]


def test_isolation_matches_sturm_oracle():
    rng = random.Random(19)
    for _ in range(150):
        deg = rng.randint(1, 6)
        p = U.make([rng.randint(-6, 6) for _ in range(deg)] + [rng.choice([-3, -1, 1, 2])])
        ours = U.isolate_real_roots(p)
        ref = real_roots(p)
        assert len(ours) == len(ref)
        for a, b in zip(ours, ref):
            while b.hi - b.lo > mpq(1, 2 ** 30):
                b = b.halve()
            a = a.refine(mpq(1, 2 ** 30))
            assert abs(a.approx() - b.hi) <= mpq(1, 2 ** 29)


def test_isolation_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        U.isolate_real_roots(())


def test_exact_root_hit_by_bisection():
    roots = U.isolate_real_roots(U.make([0, -1, 0, 1]))  # x^3 - x
    assert [r.lo for r in roots if r.is_rational] == [-1, 0, 1]


def test_sign_at_on_curve_is_zero():
    circle = X ** 2 + Y ** 2 - 3
    (root,) = [r for r in U.isolate_real_roots(circle.at_x(mpq(1))) if r.lo > 0]
    pt = AlgebraicPoint(mpq(1), root)
    assert sign_at(circle, pt) == 0
    assert sign_at(Y ** 2 - 2, pt) == 0
    assert sign_at(Y - mpq(141, 100), pt) == 1
    assert sign_at(Y - mpq(142, 100), pt) == -1


def test_sign_at_irrational_ordinate():
    (r,) = [r for r in U.isolate_real_roots(U.make([-2, 0, 1])) if r.lo > 0]
    pt = AlgebraicPoint(mpq(0), r)
    assert sign_at(Y ** 2 - 2, pt) == 0
    assert sign_at(Y ** 3 - 2 * Y, pt) == 0
    assert sign_at(Y - mpq(3, 2), pt) == -1


def test_compare_ordinates_mixed():
    (r,) = [r for r in U.isolate_real_roots(U.make([-3, 0, 1])) if r.lo > 0]
    assert compare_ordinates(r, mpq(17, 10)) == 1
    assert compare_ordinates(mpq(7, 4), r) == 1
    assert compare_ordinates(r, r) == 0
