"""Resultants, discriminants and y-gcds for eliminating a variable."""
from __future__ import annotations

from typing import Callable, Sequence

from . import upoly as U
from .poly import MultiPoly


def bareiss_det(m: list[list], mul: Callable, sub: Callable, div: Callable,
                is_zero: Callable, neg: Callable, one):
    """Fraction-free determinant over an integral domain; None when it vanishes."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return one
    flip = False
    prev = one
    for k in range(n - 1):
        if is_zero(a[k][k]):
            for i in range(k + 1, n):
                if not is_zero(a[i][k]):
                    a[k], a[i] = a[i], a[k]
                    flip = not flip
                    break
            else:
                return None
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = div(sub(mul(row_i[j], akk), mul(aik, row_k[j])), prev)
        prev = akk
    det = a[n - 1][n - 1]
    if is_zero(det):
        return None
    return neg(det) if flip else det


def _sylvester(p: Sequence, q: Sequence, zero) -> list[list]:
    """Sylvester matrix from coefficient lists given highest degree first."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(p) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(q) + [zero] * (size - n - 1 - i))
    return rows


def _upoly_ring():
    return dict(mul=U.mul, sub=U.sub, div=U.exact_div, is_zero=lambda a: not a,
                neg=U.neg, one=(U.ONE,))


def _mpoly_ring(nv: int):
    return dict(mul=lambda a, b: a * b, sub=lambda a, b: a - b,
                div=lambda a, b: a.exact_div(b), is_zero=lambda a: a.is_zero(),
                neg=lambda a: -a, one=MultiPoly.const(1, nv))


def _det(rows, ring):
    return bareiss_det(rows, **ring)


def _coeffs_in(p: MultiPoly, var: int) -> list[MultiPoly]:
    """Coefficients of p viewed as a polynomial in `var` (lowest first), var kept as 0."""
    d = p.degree_in(var)
    out = [dict() for _ in range(d + 1)]
    for e, c in p.terms.items():
        e2 = list(e)
        k = e2[var]
        e2[var] = 0
        out[k][tuple(e2)] = c
    return [MultiPoly(p.num_vars, t) for t in out]


def resultant(p: MultiPoly, q: MultiPoly, var: int) -> MultiPoly:
    """Resultant of p and q with respect to variable ``var``.

    The result lives in the same ring (the eliminated variable simply no longer
    occurs).  Bivariate inputs take a fast path with dense x-coefficients.
    """
    p._check(q)
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of the zero polynomial")
    dp, dq = p.degree_in(var), q.degree_in(var)
    if dp < 1 or dq < 1:
        raise ValueError("both polynomials need positive degree in the eliminated variable")
    nv = p.num_vars
    if nv == 1:
        rows = _sylvester(tuple(reversed(p.upoly)), tuple(reversed(q.upoly)), U.ZERO)
        rows = [[(c,) if c != 0 else () for c in r] for r in rows]
        det = _det(rows, _upoly_ring())
        return MultiPoly.const(det[0] if det else 0, 1)
    if nv == 2:
        if var == 1:
            det = ures_y(p.ycoeffs, q.ycoeffs)
            return MultiPoly.from_upoly(det, var=0, num_vars=2)
        swap = lambda f: MultiPoly(2, {(j, i): c for (i, j), c in f.terms.items()})
        det = ures_y(swap(p).ycoeffs, swap(q).ycoeffs)
        return MultiPoly.from_upoly(det, var=1, num_vars=2)
    cp = list(reversed(_coeffs_in(p, var)))
    cq = list(reversed(_coeffs_in(q, var)))
    det = _det(_sylvester(cp, cq, MultiPoly(nv)), _mpoly_ring(nv))
    return det if det is not None else MultiPoly(nv)


def ures_y(pc: Sequence, qc: Sequence) -> tuple:
    """Resultant in y of two polynomials given as tuples of x-coefficients (low y first)."""
    rows = _sylvester(tuple(reversed(pc)), tuple(reversed(qc)), ())
    det = _det(rows, _upoly_ring())
    return det if det is not None else ()


def discriminant(p: MultiPoly, var: int) -> MultiPoly:
    """Discriminant with respect to ``var``: (-1)^(n(n-1)/2) res(p, dp) / lc(p)."""
    if p.is_zero():
        raise ValueError("discriminant of the zero polynomial")
    n = p.degree_in(var)
    if n < 1:
        raise ValueError("degree in the eliminated variable must be positive")
    if n == 1:
        return MultiPoly.const(1, p.num_vars)
    r = resultant(p, p.diff(var), var)
    lc = _coeffs_in(p, var)[-1]
    out = r.exact_div(lc)
    return -out if (n * (n - 1) // 2) % 2 else out


# --- polynomials in y over Q[x] -------------------------------------------------
# Represented as tuples (low y-degree first) of dense x-polynomials.

def yc_trim(rows) -> tuple:
    rows = list(rows)
    while rows and not rows[-1]:
        rows.pop()
    return tuple(rows)


def y_content(rows) -> tuple:
    g = ()
    for r in rows:
        if r:
            g = U.gcd(g, r) if g else U.monic(r)
            if len(g) == 1:
                break
    return g


def y_primitive(rows) -> tuple:
    rows = yc_trim(rows)
    if not rows:
        return rows
    c = y_content(rows)
    if len(c) > 1:
        rows = tuple(U.exact_div(r, c) if r else () for r in rows)
    # normalize the leading coefficient's leading term to 1
    lead = rows[-1][-1]
    if lead != 1:
        rows = tuple(U.scale(r, 1 / lead) for r in rows)
    return rows


def _prem(a, b) -> tuple:
    """Pseudo-remainder of a by b in y."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        new = [U.mul(c, lb) for c in r]
        for j, bc in enumerate(b):
            new[j + shift] = U.sub(new[j + shift], U.mul(lr, bc))
        r = list(yc_trim(new))
    return tuple(r)


def ygcd(a, b) -> tuple:
    """Primitive gcd in y of two y-polynomials over Q[x] (x-content dropped)."""
    a, b = y_primitive(a), y_primitive(b)
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return a
    while True:
        if len(b) == 1:
            return ((U.ONE,),)
        r = _prem(a, b)
        if not r:
            return y_primitive(b)
        a, b = b, y_primitive(r)


def ydiv(a, b) -> tuple:
    """Exact division of y-polynomials over Q[x]."""
    r = [list(c) for c in a]
    r = [tuple(c) for c in r]
    r = list(yc_trim(r))
    db = len(b) - 1
    lb = b[-1]
    quo = [()] * max(len(r) - db, 0)
    while r and len(r) - 1 >= db:
        shift = len(r) - 1 - db
        c = U.exact_div(r[-1], lb)
        quo[shift] = c
        for j, bc in enumerate(b):
            r[j + shift] = U.sub(r[j + shift], U.mul(c, bc))
        r = list(yc_trim(r))
    if r:
        raise ArithmeticError("inexact y-division")
    return yc_trim(quo)


def yderiv(rows) -> tuple:
    return yc_trim(U.scale(rows[j], j) for j in range(1, len(rows)))


def y_squarefree(rows) -> tuple:
    """Square-free part in y of a primitive y-polynomial."""
    rows = y_primitive(rows)
    if len(rows) <= 2:
        return rows
    g = ygcd(rows, yderiv(rows))
    if len(g) <= 1:
        return rows
    return y_primitive(ydiv(rows, g))
