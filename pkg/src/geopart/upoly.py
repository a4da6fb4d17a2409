"""Dense univariate polynomials over the rationals.

Polynomials are tuples of ``mpq`` coefficients, lowest degree first, with no
trailing zeros (the zero polynomial is the empty tuple).  Everything here is
exact; the only "approximate" objects are isolating intervals, and those have
rational endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Sequence

from gmpy2 import mpq

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)

UPoly = tuple


def make(coeffs: Iterable) -> UPoly:
    c = [mpq(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def deg(p: UPoly) -> int:
    return len(p) - 1


def add(p: UPoly, q: UPoly) -> UPoly:
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, b in enumerate(q):
        out[i] += b
    return make(out)


def sub(p: UPoly, q: UPoly) -> UPoly:
    n = max(len(p), len(q))
    out = [ZERO] * n
    for i, a in enumerate(p):
        out[i] = a
    for i, b in enumerate(q):
        out[i] -= b
    return make(out)


def neg(p: UPoly) -> UPoly:
    return tuple(-a for a in p)


def scale(p: UPoly, c) -> UPoly:
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return tuple(out)


def divmod_(p: UPoly, q: UPoly) -> tuple[UPoly, UPoly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lc = q[-1]
    if len(r) - 1 < dq:
        return (), make(r)
    quo = [ZERO] * (len(r) - dq)
    for k in range(len(r) - 1 - dq, -1, -1):
        c = r[k + dq] / lc
        quo[k] = c
        if c != 0:
            for j in range(dq + 1):
                r[k + j] -= c * q[j]
    return make(quo), make(r[:dq])


def exact_div(p: UPoly, q: UPoly) -> UPoly:
    quo, rem = divmod_(p, q)
    if rem:
        raise ArithmeticError("inexact polynomial division")
    return quo


def monic(p: UPoly) -> UPoly:
    if not p:
        return p
    lc = p[-1]
    return tuple(a / lc for a in p)


def gcd(p: UPoly, q: UPoly) -> UPoly:
    while q:
        p, q = q, divmod_(p, q)[1]
    return monic(p)


def deriv(p: UPoly) -> UPoly:
    return make(i * p[i] for i in range(1, len(p)))


def squarefree(p: UPoly) -> UPoly:
    """Square-free part, made monic."""
    if len(p) <= 2:
        return monic(p)
    g = gcd(p, deriv(p))
    if len(g) <= 1:
        return monic(p)
    return monic(exact_div(p, g))


def evaluate(p: UPoly, x):
    acc = ZERO
    for a in reversed(p):
        acc = acc * x + a
    return acc


def sign(v) -> int:
    return (v > 0) - (v < 0)


def taylor_shift(p: UPoly, c) -> list:
    """Coefficients of p(x + c)."""
    a = list(p)
    n = len(a)
    if c == 0:
        return a
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += c * a[j + 1]
    return a


def sign_variations(coeffs: Iterable) -> int:
    count = 0
    last = 0
    for a in coeffs:
        s = sign(a)
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def descartes_bound(p: UPoly, lo, hi) -> int:
    """Descartes bound on the number of roots of p in the open interval (lo, hi).

    Exact when the result is 0 or 1.
    """
    n = len(p) - 1
    if n <= 0:
        return 0
    # q(t) = p(lo + (hi - lo) t), roots in (0, 1)
    q = taylor_shift(p, lo)
    w = hi - lo
    f = ONE
    for i in range(len(q)):
        q[i] *= f
        f *= w
    # (1 + t)^n q(1 / (1 + t)): reverse, then shift by one
    q.reverse()
    return sign_variations(taylor_shift(q, ONE))


def cauchy_bound(p: UPoly):
    lc = abs(p[-1])
    return ONE + max(abs(a) for a in p[:-1]) / lc if len(p) > 1 else ONE


def root_bound(p: UPoly):
    """Power of two exceeding the absolute value of every root (Fujiwara-style)."""
    n = len(p) - 1
    lc = abs(p[-1])
    best = 0
    for i in range(1, n + 1):
        a = abs(p[n - i])
        if a == 0:
            continue
        r = a / lc
        if i == n:
            r = r / 2
        num, den = r.numerator, r.denominator
        e = max(0, (num.bit_length() - den.bit_length()) // i)
        while (den << (e * i)) < num:
            e += 1
        best = max(best, e)
    return mpq(2) ** (best + 1)


def _isolate_low_degree(f: UPoly) -> list:
    """Closed-form isolation for square-free polynomials of degree 1 or 2."""
    if len(f) == 2:
        return [RootInterval(f, -f[0] / f[1], -f[0] / f[1])]
    c, b, a = f
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    num, den = disc.numerator, disc.denominator
    nd = num * den
    root = isqrt(nd)
    if root * root == nd:
        s = mpq(root, den)
        rs = sorted(((-b - s) / (2 * a), (-b + s) / (2 * a)))
        return [RootInterval(f, r, r) for r in rs]
    k = 4
    while True:
        r = isqrt(nd << (2 * k))
        if r >= 4:
            break
        k += 4
    s_lo, s_hi = mpq(r, den << k), mpq(r + 1, den << k)
    out = []
    for lo, hi in ((-b - s_hi, -b - s_lo), (-b + s_lo, -b + s_hi)):
        lo, hi = lo / (2 * a), hi / (2 * a)
        if lo > hi:
            lo, hi = hi, lo
        out.append(RootInterval(f, lo, hi))
    out.sort(key=lambda r: r.lo)
    return out


def _floor(x) -> int:
    return x.numerator // x.denominator


def simplest_between(lo, hi):
    """Simplest rational strictly inside (lo, hi); requires lo < hi."""
    lo, hi = mpq(lo), mpq(hi)
    if lo >= hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return ZERO
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    fl = _floor(lo)
    if fl + 1 < hi:
        return mpq(fl + 1)
    if lo == fl:
        k = _floor(1 / (hi - fl)) + 1
        return fl + mpq(1, k)
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


@dataclass(frozen=True)
class RootInterval:
    """A real root of a square-free polynomial, isolated by rational endpoints.

    Either ``lo == hi`` (an exact rational root) or ``lo < hi`` with the
    defining polynomial nonzero and of opposite signs at the two endpoints.
    """

    defining: UPoly
    lo: mpq
    hi: mpq

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi

    def width(self):
        return self.hi - self.lo

    def bisect(self) -> "RootInterval":
        if self.lo == self.hi:
            return self
        m = (self.lo + self.hi) / 2
        vm = evaluate(self.defining, m)
        if vm == 0:
            return RootInterval(self.defining, m, m)
        if sign(vm) == sign(evaluate(self.defining, self.lo)):
            return RootInterval(self.defining, m, self.hi)
        return RootInterval(self.defining, self.lo, m)

    def refine(self, width) -> "RootInterval":
        r = self
        while r.hi - r.lo > width:
            r = r.bisect()
        return r

    def approx(self):
        """Rational midpoint (exact when the root is rational)."""
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.approx())


def isolate_real_roots(p: UPoly) -> list[RootInterval]:
    """Isolate the distinct real roots of p, in increasing order.

    Vincent-Collins-Akritas bisection on the square-free part.  Each interval is
    tagged with a square-free polynomial vanishing at the root; when a bisection
    point hits a root exactly, that root is emitted as a degenerate interval and
    deflated out so later endpoints never sit on a root.  A univariate
    MultiPoly is accepted as well as a dense tuple.
    """
    p = getattr(p, "upoly", p)
    if not p:
        raise ValueError("zero polynomial has no isolated roots")
    f = squarefree(p)
    if len(f) <= 1:
        return []
    out: list[RootInterval] = []
    if evaluate(f, ZERO) == 0:
        out.append(RootInterval(f, ZERO, ZERO))
        f = exact_div(f, (ZERO, ONE))
        if len(f) <= 1:
            return out
    if len(f) <= 3:
        return out + _isolate_low_degree(f) if not out else sorted(
            out + _isolate_low_degree(f), key=lambda r: r.lo)
    b = root_bound(f)
    # split at 0 (never a root of the deflated f)
    stack = [(ZERO, b), (-b, ZERO)]
    while stack:
        lo, hi = stack.pop()
        v = descartes_bound(f, lo, hi)
        if v == 0:
            continue
        if v == 1:
            out.append(RootInterval(f, lo, hi))
            continue
        m = (lo + hi) / 2
        if evaluate(f, m) == 0:
            out.append(RootInterval(f, m, m))
            f = exact_div(f, (-m, ONE))
        stack.append((m, hi))
        stack.append((lo, m))
    out.sort(key=lambda r: r.lo)
    return out


def has_root_in(p: UPoly, r: RootInterval) -> bool:
    """True iff the root described by r is a root of p."""
    if not p:
        return True
    if r.is_rational:
        return evaluate(p, r.lo) == 0
    g = gcd(p, r.defining)
    if len(g) <= 1:
        return False
    # g divides a square-free polynomial with a single root inside (lo, hi)
    return sign(evaluate(g, r.lo)) != sign(evaluate(g, r.hi))


def sign_at_root(p: UPoly, r: RootInterval) -> tuple[int, RootInterval]:
    """Exact sign of p at the root r; also returns the (possibly refined) interval."""
    if not p:
        return 0, r
    if r.is_rational:
        return sign(evaluate(p, r.lo)), r
    if len(p) == 1:
        return sign(p[0]), r
    if has_root_in(p, r):
        return 0, r
    while True:
        vlo = evaluate(p, r.lo)
        if vlo != 0 and descartes_bound(p, r.lo, r.hi) == 0:
            vhi = evaluate(p, r.hi)
            if sign(vhi) == sign(vlo):
                return sign(vlo), r
        r = r.bisect()
        if r.is_rational:
            return sign(evaluate(p, r.lo)), r


def compare_roots(a: RootInterval, b: RootInterval) -> int:
    """Exact comparison of two real algebraic numbers: -1, 0 or +1."""
    if a.is_rational and b.is_rational:
        return sign(a.lo - b.lo)
    if a.is_rational:
        return compare_rational(a.lo, b)[0]
    if b.is_rational:
        return -compare_rational(b.lo, a)[0]
    g = None
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        if g is None:
            g = gcd(a.defining, b.defining)
        if len(g) > 1 and has_root_in(g, a) and has_root_in(g, b):
            lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
            if evaluate(g, lo) != 0 and evaluate(g, hi) != 0 and descartes_bound(g, lo, hi) == 1:
                return 0
        a, b = a.bisect(), b.bisect()
        if a.is_rational or b.is_rational:
            return compare_roots(a, b)


def compare_rational(x, r: RootInterval) -> tuple[int, RootInterval]:
    """sign(x - r) for rational x, plus the interval of r refined against x."""
    if r.is_rational:
        return sign(x - r.lo), r
    if x <= r.lo:
        return -1, r
    if x >= r.hi:
        return 1, r
    vx = evaluate(r.defining, x)
    if vx == 0:
        return 0, RootInterval(r.defining, x, x)
    if sign(vx) == sign(evaluate(r.defining, r.lo)):
        return -1, RootInterval(r.defining, x, r.hi)
    return 1, RootInterval(r.defining, r.lo, x)


def coprime_basis(polys: Sequence[UPoly]) -> list[UPoly]:
    """Pairwise coprime, square-free, monic polynomials with the same roots as polys."""
    basis: list[UPoly] = []
    for p in polys:
        if len(p) <= 1:
            continue
        pending = [squarefree(p)]
        while pending:
            f = pending.pop()
            if len(f) <= 1:
                continue
            for i, b in enumerate(basis):
                g = gcd(f, b)
                if len(g) > 1:
                    basis.pop(i)
                    for part in (g, exact_div(b, g)):
                        if len(part) > 1:
                            basis.append(monic(part))
                    rest = exact_div(f, g)
                    if len(rest) > 1:
                        pending.append(monic(rest))
                    break
            else:
                basis.append(f)
    return basis


def sorted_distinct_roots(polys: Sequence[UPoly]) -> list[RootInterval]:
    """All distinct real roots of the given polynomials, sorted, with disjoint intervals."""
    roots: list[RootInterval] = []
    for b in coprime_basis(polys):
        roots.extend(isolate_real_roots(b))
    # roots of coprime factors are distinct, so refining overlaps terminates
    roots.sort(key=lambda r: r.lo)
    changed = True
    while changed:
        changed = False
        roots.sort(key=lambda r: (r.lo, r.hi))
        for i in range(len(roots) - 1):
            a, b = roots[i], roots[i + 1]
            if _overlap(a, b):
                roots[i], roots[i + 1] = a.bisect(), b.bisect()
                changed = True
    return roots


def _overlap(a: RootInterval, b: RootInterval) -> bool:
    if a.hi < b.lo or b.hi < a.lo:
        return False
    if a.hi == b.lo:
        return a.is_rational and b.is_rational
    if b.hi == a.lo:
        return a.is_rational and b.is_rational
    return True


def point_between(a: RootInterval | None, b: RootInterval | None):
    """A simple rational strictly between two distinct sorted roots (None = infinity)."""
    if a is None and b is None:
        return ZERO
    if a is None:
        return mpq(_floor(b.lo) - 1)
    if b is None:
        return mpq(-_floor(-a.hi) + 1)
    while not a.hi < b.lo:
        if a.is_rational and b.is_rational:
            raise ValueError("roots are not distinct")
        a, b = a.bisect(), b.bisect()
    return simplest_between(a.hi, b.lo)
