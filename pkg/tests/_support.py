"""Helpers shared by the test modules: random data and independent sampling oracles."""
from __future__ import annotations

import random

import numpy as np
from gmpy2 import mpq

from geopart.oracles import term_sum
from geopart.poly import MultiPoly


def rq(rng: random.Random, span: int = 2 ** 16, denom: int = 2 ** 10) -> mpq:
    return mpq(rng.randint(-span, span), denom)


def random_poly(rng: random.Random, degree: int, coef: int = 5, num_vars: int = 2) -> MultiPoly:
    """Dense-ish random integer polynomial of exact total degree `degree`."""
    while True:
        terms = {}
        for i in range(degree + 1):
            for j in range(degree + 1 - i):
                if rng.random() < 0.7:
                    exp = (i, j) if num_vars == 2 else (i,)
                    if num_vars == 1 and j:
                        continue
                    terms[exp] = rng.randint(-coef, coef)
        p = MultiPoly(num_vars, terms)
        if not p.is_zero() and p.total_degree() == degree:
            return p


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _y_coeffs(p: MultiPoly, x) -> list:
    rows: dict = {}
    for (i, j), c in p.terms.items():
        rows[j] = rows.get(j, mpq(0)) + c * mpq(x) ** i
    n = max(rows, default=0)
    return [rows.get(j, mpq(0)) for j in range(n + 1)]


def _horner(cs, y) -> mpq:
    v = mpq(0)
    for c in reversed(cs):
        v = v * y + c
    return v


def line_sign_oracle(polys, xs) -> set:
    """Strict sign vectors seen on the vertical lines x in xs.

    Floating-point roots only suggest where to look; every recorded vector
    comes from exact evaluation at a rational point.
    """
    found = set()
    for x in xs:
        rows = [_y_coeffs(p, x) for p in polys]
        ys = []
        for cs in rows:
            if len(cs) > 1 and any(cs[1:]):
                deg = max(k for k, c in enumerate(cs) if c)
                roots = np.roots([float(c) for c in reversed(cs[:deg + 1])])
                ys.extend(float(r.real) for r in roots if abs(r.imag) < 1e-7)
        ys.sort()
        cands = [mpq(0)]
        if ys:
            cands += [mpq(round(ys[0] * 4096) - 4096, 4096), mpq(round(ys[-1] * 4096) + 4096, 4096)]
        for a, b in zip(ys, ys[1:]):
            cands.append(mpq(round((a + b) / 2 * 2 ** 30), 2 ** 30))
        for y in ys:
            for off in (2 ** -20, 2 ** -12):
                cands.append(mpq(round((y + off) * 2 ** 30), 2 ** 30))
                cands.append(mpq(round((y - off) * 2 ** 30), 2 ** 30))
        for y in cands:
            sv = tuple(_sgn(_horner(cs, y)) for cs in rows)
            if all(sv):
                found.add(sv)
    return found


def oracle_abscissae(box: int = 8, step: int = 64) -> list:
    xs = [mpq(i, step) for i in range(-box * step, box * step + 1)]
    xs += [mpq(s * (box + 2 ** j)) for j in range(0, 12) for s in (-1, 1)]
    return xs


def circle_points(cx, cy, r, count: int) -> list:
    """Rational points on a circle from the rational parametrization."""
    out = [(cx - r, cy)]
    for i in range(count + 1):
        t = mpq(2 * i - count, count)
        # t in [-1, 1] covers the right half; 1/t covers the left half
        for u in ((t, 1 / t) if t else (t,)):
            d = 1 + u * u
            out.append((cx + r * (1 - u * u) / d, cy + r * 2 * u / d))
    return out


def eval_signs(polys, pt) -> tuple:
    return tuple(_sgn(term_sum(p.terms, pt)) for p in polys)


def points_on_line(p: MultiPoly, xs) -> list:
    """Rational points on the zero set of a polynomial of degree at most one."""
    a, b, c = p.terms.get((1, 0), 0), p.terms.get((0, 1), 0), p.terms.get((0, 0), 0)
    if b:
        return [(mpq(x), -(a * mpq(x) + c) / b) for x in xs]
    if a:
        return [(-c / a, mpq(y)) for y in xs]
    return []


def tree_zero_points(tree, per_poly: int = 2, rng: random.Random | None = None) -> list:
    """Rational points on linear tuple polynomials of a location tree's nodes."""
    rng = rng or random.Random(0)
    out = []
    for node in tree.nodes():
        for p in getattr(getattr(node, "tuple", None), "polys", ()):
            if p.total_degree() == 1:
                xs = [rq(rng) for _ in range(per_poly)]
                out.extend(points_on_line(p, xs))
    return out


def exact_sqrt(v) -> mpq:
    """Square root of a rational that is a square on the 2^-10 grid."""
    r = mpq(round(float(v) ** 0.5 * 1024), 1024)
    assert r * r == v
    return r


def disk_params(s) -> tuple:
    """(centre x, centre y, radius) of a generated disk or circle."""
    t = s.polys[0].terms
    cx, cy = -t.get((1, 0), 0) / 2, -t.get((0, 1), 0) / 2
    return cx, cy, exact_sqrt(cx * cx + cy * cy - t.get((0, 0), 0))


def arc_params(s) -> tuple:
    """(centre x, centre y, radius, x_lo, x_hi) of a generated arc."""
    cx, cy, r = disk_params(s)
    return cx, cy, r, -s.polys[1].terms.get((0, 0), 0), -s.polys[2].terms.get((0, 0), 0)


# criterion number -> (passed, detail); filled by the acceptance suite
ACCEPTANCE: dict = {}


def record(number: int, passed: bool, detail: str) -> bool:
    ACCEPTANCE[number] = (passed, detail)
    print(acceptance_line(number))
    return passed


def acceptance_line(number: int) -> str:
    passed, detail = ACCEPTANCE[number]
    return f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
