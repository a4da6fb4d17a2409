"""Brute-force answers used to audit the query structures.

Nothing here goes through the structures' algebra: polynomials are evaluated
by summing their terms, formulas are walked from their JSON form, and real
roots are isolated with Sturm sequences rather than Descartes bisection.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .locate import semigroup as _semigroup

_RELS = {"lt0": (-1,), "eq0": (0,), "gt0": (1,), "le0": (-1, 0), "ge0": (0, 1)}


# --- direct evaluation -----------------------------------------------------------

def term_sum(terms: dict, values: Sequence) -> mpq:
    total = mpq(0)
    for exp, c in terms.items():
        v = mpq(c)
        for base, e in zip(values, exp):
            if e:
                v *= mpq(base) ** e
        total += v
    return total


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def eval_formula(obj: dict, signs: Sequence[int]) -> bool:
    if "atom" in obj:
        return signs[obj["atom"]] in _RELS[obj["rel"]]
    vals = [eval_formula(a, signs) for a in obj["args"]]
    if obj["op"] == "and":
        return all(vals)
    if obj["op"] == "or":
        return any(vals)
    return not vals[0]


def set_contains(s, x, y) -> bool:
    """Membership of a rational point by direct evaluation."""
    signs = [_sgn(term_sum(p.terms, (x, y))) for p in s.polys]
    return eval_formula(s.formula.to_json(), signs)


def brute_force_weight(sets, q, semigroup: str = "count", weights: dict | None = None):
    sg = _semigroup(semigroup)
    x, y = (mpq(v) for v in q)
    acc = sg.neutral
    for s in sets:
        if set_contains(s, x, y):
            w = weights[s.id] if weights is not None else sg.parse(s.weight)
            acc = sg.combine(acc, w)
    return acc


def brute_force_range(points, x, family, weights: Sequence | None = None,
                      semigroup: str = "count"):
    """Aggregate weight of points p with p in the range of parameters x."""
    sg = _semigroup(semigroup)
    a, b = (mpq(v) for v in x)
    form = family.formula.to_json()
    acc = sg.neutral
    for i, (p1, p2) in enumerate(points):
        signs = [_sgn(term_sum(t.terms, (a, b, mpq(p1), mpq(p2)))) for t in family.templates]
        if eval_formula(form, signs):
            w = sg.parse(weights[i]) if weights is not None else sg.parse("1")
            acc = sg.combine(acc, w)
    return acc


# --- univariate polynomials, Sturm isolation -------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _eval(p: Sequence, x) -> mpq:
    v = mpq(0)
    for c in reversed(p):
        v = v * x + c
    return v


def _rem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
        _trim(a)
    return a


def _gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _rem(a, b)
    return [c / a[-1] for c in a] if a else a


def _deriv(p: Sequence) -> list:
    return _trim([mpq(i) * c for i, c in enumerate(p)][1:])


def sturm_chain(p: Sequence) -> list:
    chain = [_trim(list(p)), _deriv(p)]
    while chain[-1]:
        r = _rem(chain[-2], chain[-1])
        chain.append([-c for c in r])
    return chain[:-1]


def _variations(chain, x) -> int:
    signs = [s for s in (_sgn(_eval(f, x)) for f in chain) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(chain, lo, hi) -> int:
    """Distinct roots in (lo, hi]."""
    return _variations(chain, lo) - _variations(chain, hi)


def _squarefree(p: list) -> list:
    g = _gcd(p, _deriv(p))
    if len(g) <= 1:
        return p
    q, r = _divmod(p, g)
    return q


def _divmod(a: list, b: list):
    a = list(a)
    q = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] -= f * c
        a.pop()
        _trim(a)
    return q, a


@dataclass(frozen=True)
class Alg:
    """A real root of `poly` (square-free) in the half-open interval (lo, hi], or exactly lo == hi."""

    poly: tuple
    lo: mpq
    hi: mpq

    def halve(self) -> "Alg":
        if self.lo == self.hi:
            return self
        if _eval(self.poly, self.hi) == 0:
            return Alg(self.poly, self.hi, self.hi)
        m = (self.lo + self.hi) / 2
        if _eval(self.poly, m) == 0:
            return Alg(self.poly, m, m)
        chain = sturm_chain(self.poly)
        if count_roots(chain, self.lo, m) == 1:
            return Alg(self.poly, self.lo, m)
        return Alg(self.poly, m, self.hi)


def real_roots(p: Sequence) -> list[Alg]:
    """Sorted distinct real roots of p by Sturm bisection."""
    p = _trim([mpq(c) for c in p])
    if len(p) <= 1:
        return []
    p = _squarefree(p)
    chain = sturm_chain(p)
    bound = 1 + max(abs(c) for c in p[:-1]) / abs(p[-1])
    out = []

    def isolate(lo, hi, n):
        if n == 0:
            return
        if n == 1:
            out.append(Alg(tuple(p), lo, hi))
            return
        m = (lo + hi) / 2
        if _eval(p, m) == 0:
            # step left of m until m is the only root in (left, m]
            left = m - (m - lo) / 2
            while count_roots(chain, left, m) > 1:
                left = m - (m - left) / 2
            isolate(lo, left, count_roots(chain, lo, left))
            out.append(Alg(tuple(p), m, m))
            isolate(m, hi, count_roots(chain, m, hi))
            return
        isolate(lo, m, count_roots(chain, lo, m))
        isolate(m, hi, count_roots(chain, m, hi))

    isolate(-bound, bound, count_roots(chain, -bound, bound))
    out = [r if _eval(p, r.hi) != 0 else Alg(r.poly, r.hi, r.hi) for r in out]
    out.sort(key=lambda r: r.hi)
    return out


def as_alg(y) -> Alg:
    """Wrap a rational or anything with (defining, lo, hi) as an Alg."""
    if hasattr(y, "defining"):
        if y.lo == y.hi:
            return Alg((-mpq(y.lo), mpq(1)), mpq(y.lo), mpq(y.lo))
        return Alg(tuple(mpq(c) for c in y.defining), mpq(y.lo), mpq(y.hi))
    if isinstance(y, Alg):
        return y
    v = mpq(y)
    return Alg((-v, mpq(1)), v, v)


def compare_alg(a, b) -> int:
    a, b = as_alg(a), as_alg(b)
    while True:
        if a.lo == a.hi and b.lo == b.hi:
            return _sgn(a.lo - b.lo)
        if a.hi < b.lo or (a.hi == b.lo and b.lo != b.hi):
            return -1
        if b.hi < a.lo or (b.hi == a.lo and a.lo != a.hi):
            return 1
        g = _gcd(list(a.poly), list(b.poly))
        if len(g) > 1:
            chain = sturm_chain(g)
            lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
            in_a = a.lo == a.hi and _eval(g, a.lo) == 0 or count_roots(chain, a.lo, a.hi) > 0
            in_b = b.lo == b.hi and _eval(g, b.lo) == 0 or count_roots(chain, b.lo, b.hi) > 0
            span = count_roots(chain, lo - (hi - lo + 1) / 2 ** 40, hi)
            if in_a and in_b and span == 1:
                return 0
        a, b = a.halve(), b.halve()


def sign_at_alg(p: Sequence, r: Alg) -> int:
    """Sign of univariate p at the root r."""
    p = _trim([mpq(c) for c in p])
    if not p:
        return 0
    if r.lo == r.hi:
        return _sgn(_eval(p, r.lo))
    g = _gcd(p, list(r.poly))
    if len(g) > 1 and count_roots(sturm_chain(g), r.lo, r.hi) > 0:
        return 0
    while True:
        if count_roots(sturm_chain(p), r.lo, r.hi) == 0 and _eval(p, r.lo) != 0:
            return _sgn(_eval(p, r.hi))
        r = r.halve()
        if r.lo == r.hi:
            return _sgn(_eval(p, r.lo))


def _y_poly(terms: dict, x) -> list:
    """Coefficients in y of p(x, y) at a fixed rational x, by term summation."""
    out: dict = {}
    for (i, j), c in terms.items():
        out[j] = out.get(j, mpq(0)) + mpq(c) * mpq(x) ** i
    n = max(out, default=-1)
    return _trim([out.get(j, mpq(0)) for j in range(n + 1)])


def contains_at(s, x, y: Alg) -> bool:
    signs = [sign_at_alg(_y_poly(p.terms, x), y) for p in s.polys]
    return eval_formula(s.formula.to_json(), signs)


def brute_force_first_hit(sets, q):
    """(id, (x, y)) of the first set met by the upward ray from q, or None.

    Curves are hit at roots strictly above q; a region containing q is hit at q.
    Vertical pieces of carriers are not handled.
    """
    x, qy = (mpq(v) for v in q)
    best = None
    for s in sorted(sets, key=lambda s: s.id):
        cands = []
        if s.dim == 2 and set_contains(s, x, qy):
            cands.append(as_alg(qy))
        for p in s.polys:
            g = _y_poly(p.terms, x)
            if len(g) <= 1:
                continue
            for r in real_roots(g):
                if compare_alg(r, qy) > 0 and contains_at(s, x, r):
                    cands.append(r)
        for c in cands:
            if best is None or compare_alg(c, best[1]) < 0:
                best = (s.id, c)
    if best is None:
        return None
    return best[0], (x, best[1])
