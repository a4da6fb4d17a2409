"""Sign-condition sampling for bivariate polynomials via a cylindrical decomposition.

The plane is cut into vertical slabs at the critical x-values of the input (roots
of leading coefficients, discriminants, pairwise resultants and y-free factors).
Above one rational abscissa per slab the y-roots of the square-free basis are
isolated and a sample is taken on each root and in each gap between roots.

Critical values that are irrational get no stack, because sample points carry
a rational abscissa; only sign vectors living exclusively over such an x are
missed (never strict ones).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from math import ceil
from typing import Iterable, Iterator, Sequence

from gmpy2 import mpq

from . import elim as E
from . import upoly as U
from .algebraic import AlgebraicPoint, sign_of_upoly
from .poly import MultiPoly
from .upoly import RootInterval

SignVector = tuple

_SEP = mpq(1, 256)  # isolating intervals of critical values are refined to this width


def sign_key(sv: Sequence[int]) -> str:
    return "".join("+" if s > 0 else "-" if s < 0 else "0" for s in sv)


def parse_sign_key(key: str) -> SignVector:
    table = {"+": 1, "-": -1, "0": 0}
    return tuple(table[c] for c in key)


def is_strict(sv: Sequence[int]) -> bool:
    return all(s != 0 for s in sv)


@dataclass(frozen=True)
class CellSample:
    point: AlgebraicPoint
    signs: SignVector
    component_tag: tuple


def mt_bound(s: int, l: int, d: int) -> int:
    """Ceiling of (50 s l / d)^d, the bound on realizable sign conditions."""
    if not (2 <= d <= l) or s < 1:
        raise ValueError("need 2 <= d <= l and s >= 1")
    v = (mpq(50 * s * l, d)) ** d
    return int(ceil(v)) if v.denominator != 1 else int(v)


# --- cached algebra ------------------------------------------------------------

@lru_cache(maxsize=None)
def poly_parts(p: MultiPoly) -> tuple[tuple, tuple]:
    """(x-content, square-free primitive y-part) of a bivariate polynomial.

    A y-free polynomial is returned entirely as content with an empty y-part.
    """
    if p.num_vars != 2:
        raise ValueError("bivariate polynomial expected")
    if p.is_zero():
        raise ValueError("zero polynomial")
    rows = p.ycoeffs
    if len(rows) == 1:
        return U.squarefree(rows[0]), ()
    content = E.y_content(rows)
    prim = E.y_squarefree(rows)
    return U.squarefree(content), prim


@lru_cache(maxsize=None)
def x_roots(p: tuple) -> tuple:
    """Isolated real roots of a univariate polynomial, refined for cheap comparisons."""
    if len(p) <= 1:
        return ()
    return tuple(r.refine(_SEP) for r in U.isolate_real_roots(p))


@lru_cache(maxsize=None)
def _self_roots(rows: tuple) -> tuple:
    xs = list(x_roots(U.squarefree(rows[-1])))
    if len(rows) > 2:
        disc = E.ures_y(rows, E.yderiv(rows))
        xs.extend(x_roots(U.squarefree(disc)))
    return tuple(xs)


@lru_cache(maxsize=None)
def _pair_roots(a: tuple, b: tuple):
    """Roots of res_y(a, b), or None when a and b share a y-factor."""
    if b < a:
        a, b = b, a
    r = E.ures_y(a, b)
    if not r:
        return None
    return x_roots(U.squarefree(r))


@lru_cache(maxsize=None)
def _specialize(rows: tuple, x0: mpq) -> tuple:
    return U.make(U.evaluate(c, x0) for c in rows)


def merge_roots(groups: Iterable[Iterable[RootInterval]]) -> list[RootInterval]:
    """Sort and deduplicate real algebraic numbers coming from several sources."""
    allr = [r for g in groups for r in g]
    allr.sort(key=cmp_to_key(U.compare_roots))
    out: list[RootInterval] = []
    for r in allr:
        if out and U.compare_roots(out[-1], r) == 0:
            if r.is_rational and not out[-1].is_rational:
                out[-1] = r
            continue
        out.append(r)
    return out


# --- basis with provenance ------------------------------------------------------

class _Basis:
    """Square-free primitive y-factors of the input, each tagged with its owners."""

    def __init__(self, polys: Sequence[MultiPoly]):
        self.lines: list[tuple[tuple, int]] = []
        self.elems: list[tuple] = []
        self.owners: list[frozenset] = []
        for idx, p in enumerate(polys):
            content, rows = poly_parts(p)
            if len(content) > 1:
                self.lines.append((content, idx))
            if rows:
                self._add(rows, frozenset([idx]))

    def _add(self, rows, owners):
        for i, e in enumerate(self.elems):
            if e == rows:
                self.owners[i] = self.owners[i] | owners
                return
        self.elems.append(rows)
        self.owners.append(owners)

    def split(self, i: int, j: int) -> None:
        """Replace two elements sharing a y-factor by coprime pieces."""
        a, b = self.elems[i], self.elems[j]
        oa, ob = self.owners[i], self.owners[j]
        g = E.ygcd(a, b)
        for k in sorted((i, j), reverse=True):
            del self.elems[k]
            del self.owners[k]
        pieces = [(g, oa | ob)]
        for f, o in ((a, oa), (b, ob)):
            rest = E.y_primitive(E.ydiv(f, g))
            if len(rest) > 1:
                pieces.append((rest, o))
        for rows, o in pieces:
            self._add(E.y_primitive(rows), o)

    def critical(self, focus: int | None = None) -> list[RootInterval]:
        """Critical x-values; with `focus`, only those relevant along that input's curve."""
        while True:
            groups = [x_roots(c) for c, _ in self.lines]
            retry = False
            n = len(self.elems)
            for i in range(n):
                on_i = focus is None or focus in self.owners[i]
                if not on_i:
                    continue
                groups.append(_self_roots(self.elems[i]))
                for j in range(n):
                    if j == i:
                        continue
                    if j < i and (focus is None or focus in self.owners[j]):
                        continue
                    roots = _pair_roots(self.elems[i], self.elems[j])
                    if roots is None:
                        self.split(i, j)
                        retry = True
                        break
                    groups.append(roots)
                if retry:
                    break
            if not retry:
                return merge_roots(groups)

    def stack(self, x0: mpq, focus: int | None = None) -> list[RootInterval]:
        """Sorted distinct y-roots above x0 of the (focused) basis elements."""
        ps = [_specialize(e, x0) for e, o in zip(self.elems, self.owners)
              if focus is None or focus in o]
        return U.sorted_distinct_roots([p for p in ps if len(p) > 1])


def slab_abscissae(critical: Sequence[RootInterval]) -> list[tuple[int, mpq]]:
    """(slab index, rational x) for every open slab and every rational critical value.

    Even indices are open slabs, odd indices are critical values.
    """
    out = []
    m = len(critical)
    for i in range(m + 1):
        lo = critical[i - 1] if i > 0 else None
        hi = critical[i] if i < m else None
        out.append((2 * i, U.point_between(lo, hi)))
        if i < m and critical[i].is_rational:
            out.append((2 * i + 1, critical[i].lo))
    return out


def stack_ordinates(roots: Sequence[RootInterval]) -> list:
    """Sample ordinates: below, on, and between the given sorted roots."""
    if not roots:
        return [U.ZERO]
    out = [U.point_between(None, roots[0])]
    for k, r in enumerate(roots):
        out.append(r.lo if r.is_rational else r)
        nxt = roots[k + 1] if k + 1 < len(roots) else None
        out.append(U.point_between(r, nxt))
    return out


@lru_cache(maxsize=1 << 16)
def at_x(p: MultiPoly, x0: mpq) -> tuple:
    return p.at_x(x0)


def _signs(polys: Sequence[MultiPoly], x0: mpq, y) -> SignVector:
    return tuple(sign_of_upoly(at_x(p, x0), y) for p in polys)


def iter_cells(polys: Sequence[MultiPoly]) -> Iterator[tuple[tuple, AlgebraicPoint]]:
    """(component tag, sample point) for every cell of the decomposition."""
    basis = _Basis(polys)
    for slab, x0 in slab_abscissae(basis.critical()):
        for k, y in enumerate(stack_ordinates(basis.stack(x0))):
            yield (slab, k), AlgebraicPoint(x0, y)


def sample_sign_conditions(polys: Sequence[MultiPoly]) -> list[CellSample]:
    """One sample per cell of a cylindrical decomposition adapted to polys."""
    polys = list(polys)
    if not polys:
        raise ValueError("need at least one polynomial")
    out = []
    for tag, pt in iter_cells(polys):
        out.append(CellSample(pt, _signs(polys, pt.x, pt.y), tag))
    return out


def iter_curve_points(polys: Sequence[MultiPoly], curve: MultiPoly
                      ) -> Iterator[tuple[tuple, AlgebraicPoint]]:
    """(tag, point) samples on Z(curve), one per cell of its decomposition by polys."""
    if curve.is_zero():
        raise ValueError("curve is identically zero")
    allp = list(polys) + [curve]
    focus = len(allp) - 1
    basis = _Basis(allp)
    content, _ = poly_parts(curve)
    for slab, x0 in slab_abscissae(basis.critical(focus)):
        if len(content) > 1 and U.evaluate(content, x0) == 0:
            # a vertical line of the curve: sample the full stack along it
            roots = basis.stack(x0)
            ords = stack_ordinates(roots)
        else:
            ords = [r.lo if r.is_rational else r for r in basis.stack(x0, focus)]
        for k, y in enumerate(ords):
            yield (slab, k), AlgebraicPoint(x0, y)


def restrict_to_curve(polys: Sequence[MultiPoly], curve: MultiPoly) -> list[CellSample]:
    """Samples on Z(curve) meeting every component of every sign condition of polys there."""
    polys = list(polys)
    return [CellSample(pt, _signs(polys, pt.x, pt.y), tag)
            for tag, pt in iter_curve_points(polys, curve)]


def realized(samples: Iterable[CellSample]) -> set:
    return {s.signs for s in samples}
