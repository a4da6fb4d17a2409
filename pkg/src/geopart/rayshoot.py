"""Vertical ray shooting: the first set hit by the upward ray from a query point.

Each internal node partitions its family with a polynomial tuple and decomposes
the plane into cylindrical cells adapted to the tuple.  Per cell it keeps

* a union-membership location tree over the cell's column sets (the points
  from which the upward ray meets a set inside the cell), and
* the merged x-shadows of the sets inside the cell.

A query locates its cell, asks the first structure whether the hit lies in
that cell, otherwise climbs the stack until a shadow covers q.x, and recurses
into the child for the sign condition of the cell found.

Hits are strict: a curve is hit at the least y > q.y on it.  Regions are
rewritten to their boundary curves plus a containment check at q, so a query
inside a region hits it at distance zero.  Ties go to the lowest input id.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Sequence

from gmpy2 import mpq

from . import cad
from . import upoly as U
from .algebraic import AlgebraicPoint, compare_ordinates
from .locate import (LocateConfig, LocationTree, build_tree, query_weight,
                     tree_from_json, tree_to_json)
from .partition import PartitionTuple, RetriesExhausted, build_partition
from .poly import MultiPoly, q_str
from .semialg import (SemiAlgSet, boundary_carriers, dump_instance, load_instance,
                      sample_points_on)
from .upoly import RootInterval

FORMAT = "geopart-rayshoot/1"
INF = "inf"


# --- root descriptors in JSON ----------------------------------------------------

def root_to_json(r: RootInterval | None):
    if r is None:
        return None
    if r.is_rational:
        return q_str(r.lo)
    return {"poly": [q_str(c) for c in r.defining], "lo": q_str(r.lo), "hi": q_str(r.hi)}


def root_from_json(obj) -> RootInterval | None:
    if obj is None:
        return None
    if isinstance(obj, str):
        v = mpq(obj)
        return RootInterval((-v, mpq(1)), v, v)
    return RootInterval(tuple(mpq(c) for c in obj["poly"]), mpq(obj["lo"]), mpq(obj["hi"]))


def _as_root(y) -> RootInterval:
    if isinstance(y, RootInterval):
        return y
    return RootInterval((-y, mpq(1)), y, y)


def _ordinate_json(y):
    if isinstance(y, RootInterval) and not y.is_rational:
        return [q_str(y.lo), q_str(y.hi)]
    return q_str(y.lo if isinstance(y, RootInterval) else y)


# --- first-stage decomposition ---------------------------------------------------

@dataclass(eq=False)
class CadCell:
    slab: int
    stack: int
    kind: str  # "band" or "section"
    lower: RootInterval | None  # None means -infinity
    upper: RootInterval | None  # None means +infinity
    sample: AlgebraicPoint
    sign: tuple

    @property
    def key(self) -> tuple:
        return (self.slab, self.stack)

    def to_json(self) -> dict:
        return {"slab": self.slab, "stack": self.stack, "kind": self.kind,
                "lower": root_to_json(self.lower), "upper": root_to_json(self.upper),
                "sample": self.sample.to_json(), "sign": cad.sign_key(self.sign)}


class FirstStageCad:
    """Cylindrical cells of the plane adapted to a list of polynomials.

    Iterating yields the cells slab by slab, bottom to top within each stack.
    """

    def __init__(self, polys: Sequence[MultiPoly]):
        self.polys = [p for p in polys]
        live = [p for p in self.polys if not p.is_constant()]
        self.basis = cad._Basis(live)
        self.critical = self.basis.critical()
        self._stacks: dict = {}
        self.by_slab: dict[int, list[CadCell]] = {}
        for slab, x0 in cad.slab_abscissae(self.critical):
            roots = self.basis.stack(x0)
            cells = []
            for k, y in enumerate(cad.stack_ordinates(roots)):
                if k % 2:
                    r = roots[k // 2]
                    lower = upper = r
                else:
                    lower = roots[k // 2 - 1] if k else None
                    upper = roots[k // 2] if k // 2 < len(roots) else None
                pt = AlgebraicPoint(x0, y)
                cells.append(CadCell(slab, k, "section" if k % 2 else "band", lower, upper,
                                     pt, cad._signs(self.polys, x0, y)))
            self.by_slab[slab] = cells

    def __iter__(self):
        for slab in sorted(self.by_slab):
            yield from self.by_slab[slab]

    def __len__(self) -> int:
        return sum(len(c) for c in self.by_slab.values())

    def __getitem__(self, key: tuple) -> CadCell:
        return self.by_slab[key[0]][key[1]]

    def slab_of(self, x) -> int:
        """Slab index of a rational abscissa."""
        crit = self.critical
        lo, hi = 0, len(crit)
        while lo < hi:
            mid = (lo + hi) // 2
            s, _ = U.compare_rational(x, crit[mid])
            if s == 0:
                return 2 * mid + 1
            if s < 0:
                hi = mid
            else:
                lo = mid + 1
        return 2 * lo

    def stack_roots(self, x) -> list[RootInterval]:
        x = mpq(x)
        roots = self._stacks.get(x)
        if roots is None:
            if len(self._stacks) > 4096:
                self._stacks.clear()
            roots = self._stacks[x] = self.basis.stack(x)
        return roots

    def locate(self, x, y) -> CadCell:
        """The cell containing (x, y), for rational x and any ordinate y."""
        slab = self.slab_of(x)
        roots = self.stack_roots(x)
        below = 0
        for r in roots:
            c = compare_ordinates(y, r.lo if r.is_rational else r)
            if c == 0:
                return self.by_slab[slab][2 * below + 1]
            if c < 0:
                break
            below += 1
        return self.by_slab[slab][2 * below]


def first_stage_cad(f) -> FirstStageCad:
    """Decomposition for one polynomial f, or for a list whose product plays f's role."""
    polys = list(f) if isinstance(f, (list, tuple)) else [f]
    if any(p.is_zero() for p in polys):
        raise ValueError("polynomial must be nonzero")
    return FirstStageCad(polys)


# --- x-intervals with algebraic endpoints ---------------------------------------

@dataclass(frozen=True)
class XInterval:
    lo: RootInterval | None
    lo_closed: bool
    hi: RootInterval | None
    hi_closed: bool

    def contains(self, x) -> bool:
        if self.lo is not None:
            s, _ = U.compare_rational(x, self.lo)
            if s < 0 or (s == 0 and not self.lo_closed):
                return False
        if self.hi is not None:
            s, _ = U.compare_rational(x, self.hi)
            if s > 0 or (s == 0 and not self.hi_closed):
                return False
        return True

    def to_json(self) -> dict:
        return {"lo": root_to_json(self.lo), "lo_closed": self.lo_closed,
                "hi": root_to_json(self.hi), "hi_closed": self.hi_closed}

    @classmethod
    def from_json(cls, obj: dict) -> "XInterval":
        return cls(root_from_json(obj["lo"]), obj["lo_closed"],
                   root_from_json(obj["hi"]), obj["hi_closed"])


def _cmp_lo(a: RootInterval | None, b: RootInterval | None) -> int:
    if a is None or b is None:
        return (a is not None) - (b is not None)
    return U.compare_roots(a, b)


def _cmp_hi(a: RootInterval | None, b: RootInterval | None) -> int:
    if a is None or b is None:
        return (a is None) - (b is None)
    return U.compare_roots(a, b)


def merge_intervals(ivs: Sequence[XInterval]) -> list[XInterval]:
    """Disjoint sorted union of x-intervals."""
    def order(a, b):
        c = _cmp_lo(a.lo, b.lo)
        return c if c else (b.lo_closed - a.lo_closed)
    out: list[XInterval] = []
    for iv in sorted(ivs, key=cmp_to_key(order)):
        if out:
            cur = out[-1]
            touch = 1 if cur.hi is None or iv.lo is None else U.compare_roots(iv.lo, cur.hi)
            if touch < 0 or (touch == 0 and (cur.hi_closed or iv.lo_closed)):
                c = _cmp_hi(iv.hi, cur.hi)
                if c > 0:
                    out[-1] = XInterval(cur.lo, cur.lo_closed, iv.hi, iv.hi_closed)
                elif c == 0 and iv.hi_closed and not cur.hi_closed:
                    out[-1] = XInterval(cur.lo, cur.lo_closed, cur.hi, True)
                continue
        out.append(iv)
    return out


class ShadowIndex:
    """Sorted disjoint x-intervals answering membership by binary search."""

    def __init__(self, intervals: Sequence[XInterval]):
        self.intervals = merge_intervals(intervals)

    def contains(self, x) -> bool:
        ivs = self.intervals
        lo, hi = 0, len(ivs)
        # last interval whose lower end is <= x
        while lo < hi:
            mid = (lo + hi) // 2
            low = ivs[mid].lo
            if low is None or U.compare_rational(x, low)[0] >= 0:
                lo = mid + 1
            else:
                hi = mid
        return lo > 0 and ivs[lo - 1].contains(x)

    def __len__(self) -> int:
        return len(self.intervals)


# --- traces of sets over a decomposition ------------------------------------------

def _ordinates_on(s: SemiAlgSet, g: MultiPoly, extra: Sequence[MultiPoly], x0) -> list:
    """Samples of Z(g) on the line x = x0 as (y, lower, upper) triples.

    For an ordinary root lower and upper are the point itself.  When g vanishes
    on the whole line, the line is cut at the roots of S's and `extra`'s
    polynomials and each open band is reported with its end roots (None means
    infinite), each root as a point.
    """
    content, rows = cad.poly_parts(g)
    out = []
    if len(content) > 1 and U.evaluate(content, x0) == 0:
        basis = cad._Basis([p for p in list(s.polys) + list(extra) if not p.is_constant()])
        roots = [r.lo if r.is_rational else r for r in basis.stack(x0)]
        for k, y in enumerate(cad.stack_ordinates(basis.stack(x0))):
            if k % 2:
                out.append((y, y, y))
            else:
                j = k // 2
                out.append((y, roots[j - 1] if j else None,
                            roots[j] if j < len(roots) else None))
        return out
    if not rows:
        return out
    fiber = U.make(U.evaluate(c, x0) for c in g.ycoeffs)
    if len(fiber) > 1:
        for r in U.sorted_distinct_roots([fiber]):
            y = r.lo if r.is_rational else r
            out.append((y, y, y))
    return out


def trace_set(s: SemiAlgSet, fsc: FirstStageCad) -> dict:
    """Cell key -> sorted list of x-intervals covered by S inside that cell."""
    pieces: dict = {}
    if s.dim == 0:
        pt = s.point
        if pt is not None:
            r = _as_root(pt.x)
            pieces[fsc.locate(pt.x, pt.y).key] = [XInterval(r, True, r, True)]
        return pieces
    if s.dim != 1:
        raise ValueError("trace_set expects sets of dimension at most 1")
    runs: dict = {}
    tuple_live = [p for p in fsc.polys if not p.is_constant()]
    for g in s.boundary_polys():
        allp = tuple_live + [p for p in s.polys if not p.is_constant()] + [g]
        basis = cad._Basis(allp)
        comb = cad.merge_roots([fsc.critical, basis.critical(len(allp) - 1)])
        for slab, x0 in cad.slab_abscissae(comb):
            for y, _, _ in _ordinates_on(s, g, fsc.polys, x0):
                pt = AlgebraicPoint(x0, y)
                if s.contains(pt):
                    runs.setdefault(fsc.locate(x0, y).key, {})[slab] = comb
    for key, slabs in runs.items():
        ivs = []
        for slab in sorted(slabs):
            comb = slabs[slab]
            i = slab // 2
            if slab % 2:
                iv = XInterval(comb[i], True, comb[i], True)
            else:
                iv = XInterval(comb[i - 1] if i else None, False,
                               comb[i] if i < len(comb) else None, False)
            ivs.append(iv)
        pieces[key] = merge_intervals(ivs)
    return pieces


def shadow_set(s: SemiAlgSet, cell: CadCell, fsc: FirstStageCad) -> list[XInterval]:
    """x-projection of S ∩ cell as sorted disjoint intervals."""
    return trace_set(s, fsc).get(cell.key, [])


class ColumnSet(SemiAlgSet):
    """Points of a cell from which the upward ray meets S inside that cell.

    Membership is decided on the query's vertical line; it is constant on the
    cells of a decomposition adapted to S's and the tuple's polynomials, which
    is what the partition verifier relies on.
    """

    def __init__(self, base: SemiAlgSet, cell: CadCell, fsc: FirstStageCad,
                 trace: Sequence[XInterval] | None = None):
        super().__init__(base.id, tuple(base.polys) + tuple(fsc.polys), base.formula, 2,
                         base.weight)
        self.base = base
        self.cell = cell
        self.fsc = fsc
        self._trace = trace
        self._sup: dict = {}

    def supremum(self, x0):
        """sup of y over S ∩ cell on the line x = x0; None when empty, INF when unbounded."""
        x0 = mpq(x0)
        if x0 in self._sup:
            return self._sup[x0]
        best = None
        s, fsc = self.base, self.fsc
        if s.dim == 0:
            pt = s.point
            if pt is not None and pt.x == x0 and fsc.locate(x0, pt.y).key == self.cell.key:
                best = pt.y
        else:
            for g in s.boundary_polys():
                for y, _, top in _ordinates_on(s, g, fsc.polys, x0):
                    pt = AlgebraicPoint(x0, y)
                    if not (s.contains(pt) and fsc.locate(x0, y).key == self.cell.key):
                        continue
                    if top is None:
                        best = INF
                        break
                    if best is None or compare_ordinates(top, best) > 0:
                        best = top
                if best is INF:
                    break
        self._sup[x0] = best
        return best

    def contains(self, q: AlgebraicPoint) -> bool:
        if self.fsc.locate(q.x, q.y).key != self.cell.key:
            return False
        sup = self.supremum(q.x)
        if sup is None:
            return False
        return sup is INF or compare_ordinates(sup, q.y) > 0

    def member(self, q: AlgebraicPoint, own_signs) -> bool:
        return self.contains(q)

    def surrogates(self, count: int) -> list[tuple[mpq, mpq]]:
        """Points of S in the cell together with points of the column below them."""
        pts = [p for p in sample_points_on(self.base, max(count, 1))
               if self.fsc.locate(p.x, p.y).key == self.cell.key]
        if not pts and self.cell.sample.is_rational:
            pts = [self.cell.sample]
        out = []
        for p in pts:
            x, y = p.approx(mpq(1, 4096))
            out.append((x, y))
            lower = self.fsc.locate(x, y).lower
            if lower is not None and not self.cell.kind == "section":
                floor = lower.refine(mpq(1, 4096)).approx()
                if floor < y:
                    out.extend((x, y - (y - floor) * mpq(j, 4)) for j in (1, 2, 3))
            else:
                out.extend((x, y - 2 ** e) for e in (0, 2, 4))
        return out


def column_set(s: SemiAlgSet, cell: CadCell, fsc: FirstStageCad) -> ColumnSet:
    return ColumnSet(s, cell, fsc)


# --- the structure ------------------------------------------------------------------

@dataclass
class RayConfig:
    k: int = 2
    c0_prime: object = 1
    n0: int = 16
    retries: int = 10
    sample_size: int | None = None
    seed: int = 0
    column: LocateConfig = field(default_factory=lambda: LocateConfig(
        k=2, c0_prime=mpq(3, 2), n0=16, retries=3))

    def __post_init__(self):
        self.c0_prime = mpq(self.c0_prime)
        if self.n0 < 2 ** self.k:
            raise ValueError("n0 must be at least 2^k")

    def to_json(self) -> dict:
        return {"k": self.k, "c0_prime": q_str(self.c0_prime), "n0": self.n0,
                "retries": self.retries, "sample_size": self.sample_size, "seed": self.seed,
                "column": self.column.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "RayConfig":
        return cls(obj["k"], mpq(obj["c0_prime"]), obj["n0"], obj["retries"],
                   obj["sample_size"], obj["seed"], LocateConfig.from_json(obj["column"]))


@dataclass
class CellAux:
    members: list  # item ids meeting the cell
    columns: LocationTree | None
    shadow: ShadowIndex


@dataclass
class RayLeaf:
    family: list


@dataclass
class RayNode:
    family: list
    tuple: PartitionTuple
    cad: FirstStageCad
    aux: dict  # cell key -> CellAux
    children: dict  # sign vector -> RayLeaf | RayNode
    degraded: bool = False


@dataclass
class Hit:
    id: int
    point: AlgebraicPoint

    def to_json(self) -> dict:
        return {"set": self.id, "x": q_str(self.point.x), "y": _ordinate_json(self.point.y)}


@dataclass
class RayShootStructure:
    sets: list  # the input sets
    items: list  # curve pieces actually shot at; item.meta["origin"] is the input id
    regions: LocationTree | None
    root: object
    config: RayConfig
    degraded: bool = False

    def nodes(self) -> list:
        out = []

        def go(n):
            out.append(n)
            if isinstance(n, RayNode):
                for sv in sorted(n.children, reverse=True):
                    go(n.children[sv])
        go(self.root)
        return out

    def depth(self) -> int:
        def go(n):
            if isinstance(n, RayLeaf):
                return 1
            return 1 + max((go(c) for c in n.children.values()), default=0)
        return go(self.root)


def _items_of(sets: Sequence[SemiAlgSet]) -> tuple[list, list]:
    items, regions = [], []
    for s in sorted(sets, key=lambda s: s.id):
        if s.dim == 2:
            regions.append(s)
            pieces = [(c, i) for i, c in enumerate(boundary_carriers(s))]
        else:
            pieces = [(s, None)]
        for piece, carrier in pieces:
            items.append(SemiAlgSet(len(items), piece.polys, piece.formula, piece.dim,
                                    s.weight, {"origin": s.id, "carrier": carrier}))
    return items, regions


def _aux_for(members: list, cell: CadCell, fsc: FirstStageCad, traces: dict,
             by_id: dict, config: RayConfig) -> CellAux:
    ivs = [iv for i in members for iv in traces[i].get(cell.key, [])]
    columns = [ColumnSet(by_id[i], cell, fsc) for i in members]
    tree = build_tree(columns, {i: True for i in members}, "or", config.column)
    return CellAux(members, tree, ShadowIndex(ivs))


def build_rayshoot(sets: Sequence[SemiAlgSet], config: RayConfig | None = None
                   ) -> RayShootStructure:
    config = config or RayConfig()
    sets = sorted(sets, key=lambda s: s.id)
    ids = [s.id for s in sets]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate set ids")
    items, regions = _items_of(sets)
    by_id = {it.id: it for it in items}
    region_tree = None
    if regions:
        region_tree = build_tree(regions, {s.id: s.id for s in regions}, "min-id",
                                 LocateConfig(k=2, c0_prime=1, n0=16, seed=config.seed))
    rng = random.Random(config.seed)
    st = RayShootStructure(list(sets), items, region_tree, None, config)

    def build(family: list):
        if len(family) <= config.n0:
            return RayLeaf(list(family))
        node_seed = rng.getrandbits(32)
        members = [by_id[i] for i in family]
        degraded = False
        try:
            tup, _ = build_partition(members, config.k, config.c0_prime, config.sample_size,
                                     config.retries, node_seed, config.c0_prime)
        except RetriesExhausted as exc:
            degraded = True
            tup = exc.best_tuple
            if tup is None:
                st.degraded = True
                return RayLeaf(list(family))
        fsc = FirstStageCad(tup.polys)
        traces = {i: trace_set(by_id[i], fsc) for i in family}
        meeting: dict = {}
        for i in family:
            for key in traces[i]:
                meeting.setdefault(key, []).append(i)
        groups: dict = {}
        for key, mem in meeting.items():
            groups.setdefault(fsc[key].sign, set()).update(mem)
        if any(len(g) >= len(family) for g in groups.values()):
            st.degraded = True
            return RayLeaf(list(family))
        st.degraded |= degraded
        aux = {key: _aux_for(sorted(mem), fsc[key], fsc, traces, by_id, config)
               for key, mem in sorted(meeting.items())}
        node = RayNode(list(family), tup, fsc, aux, {}, degraded)
        for sv in sorted(groups, reverse=True):
            node.children[sv] = build(sorted(groups[sv]))
        return node

    st.root = build([it.id for it in items])
    return st


# --- queries -------------------------------------------------------------------------

def first_hit_of(s: SemiAlgSet, q: AlgebraicPoint):
    """Least ordinate y > q.y with (q.x, y) in S (an infimum for vertical pieces)."""
    if s.dim == 0:
        pt = s.point
        if pt is not None and pt.x == q.x and compare_ordinates(pt.y, q.y) > 0:
            return pt.y
        return None
    best = None
    for g in s.boundary_polys():
        for y, lower, upper in _ordinates_on(s, g, (), q.x):
            if upper is not None and compare_ordinates(upper, q.y) <= 0:
                continue
            if not s.contains(AlgebraicPoint(q.x, y)):
                continue
            if lower is not y:
                # open vertical piece: its infimum above q.y
                cand = q.y if lower is None or compare_ordinates(lower, q.y) <= 0 else lower
            else:
                cand = y
            if best is None or compare_ordinates(cand, best) < 0:
                best = cand
    return best


def _brute(st: RayShootStructure, family, q: AlgebraicPoint) -> Hit | None:
    best = None
    for i in family:
        it = st.items[i]
        y = first_hit_of(it, q)
        if y is None:
            continue
        origin = it.meta["origin"]
        if best is None:
            best = (y, origin)
            continue
        c = compare_ordinates(y, best[0])
        if c < 0 or (c == 0 and origin < best[1]):
            best = (y, origin)
    if best is None:
        return None
    return Hit(best[1], AlgebraicPoint(q.x, best[0]))


@dataclass
class ShootResult:
    hit: Hit | None
    visits: int


def shoot_traced(st: RayShootStructure, q) -> ShootResult:
    if not isinstance(q, AlgebraicPoint):
        q = AlgebraicPoint.rational(*q)
    if st.regions is not None:
        r = query_weight(st.regions, q)
        if r is not None:
            return ShootResult(Hit(r, q), 1)
    node = st.root
    visits = 0
    while True:
        visits += 1
        if isinstance(node, RayLeaf):
            return ShootResult(_brute(st, node.family, q), visits)
        fsc = node.cad
        cell = fsc.locate(q.x, q.y)
        aux = node.aux.get(cell.key)
        target = None
        if aux is not None and query_weight(aux.columns, q):
            target = cell
        else:
            for above in fsc.by_slab[cell.slab][cell.stack + 1:]:
                a = node.aux.get(above.key)
                if a is not None and a.shadow.contains(q.x):
                    target = above
                    break
        if target is None:
            return ShootResult(None, visits)
        node = node.children[target.sign]


def shoot(st: RayShootStructure, q) -> Hit | None:
    """First set hit by the upward vertical ray from q, or None."""
    return shoot_traced(st, q).hit


# --- serialization ----------------------------------------------------------------

def structure_to_json(st: RayShootStructure) -> dict:
    nodes = st.nodes()
    index = {id(n): i for i, n in enumerate(nodes)}
    out = []
    for n in nodes:
        if isinstance(n, RayLeaf):
            out.append({"kind": "leaf", "family": n.family})
            continue
        cells = []
        for cell in n.cad:
            entry = cell.to_json()
            a = n.aux.get(cell.key)
            if a is not None:
                entry["members"] = a.members
                entry["shadow"] = [iv.to_json() for iv in a.shadow.intervals]
                entry["columns"] = tree_to_json(a.columns, include_instance=False)
            cells.append(entry)
        out.append({
            "kind": "internal",
            "family": n.family,
            "tuple": n.tuple.to_json(),
            "degraded": n.degraded,
            "critical": [root_to_json(r) for r in n.cad.critical],
            "cells": cells,
            "children": [{"sign": cad.sign_key(sv), "child": index[id(c)]}
                         for sv, c in sorted(n.children.items(), reverse=True)],
        })
    return {
        "format": FORMAT,
        "config": st.config.to_json(),
        "degraded": st.degraded,
        "depth": st.depth(),
        "instance": dump_instance(st.sets),
        "items": [{"id": it.id, "origin": it.meta["origin"], "carrier": it.meta["carrier"]}
                  for it in st.items],
        "regions": (tree_to_json(st.regions, include_instance=False)
                    if st.regions is not None else None),
        "nodes": out,
    }


def structure_from_json(obj: dict) -> RayShootStructure:
    if obj.get("format") != FORMAT:
        raise ValueError("not a ray-shooting structure file")
    sets = load_instance(obj["instance"])
    items, regions = _items_of(sets)
    if [(it.id, it.meta["origin"], it.meta["carrier"]) for it in items] != [
            (e["id"], e["origin"], e["carrier"]) for e in obj["items"]]:
        raise ValueError("item table does not match the instance")
    by_id = {it.id: it for it in items}
    region_tree = tree_from_json(obj["regions"], regions) if obj["regions"] else None
    raw = obj["nodes"]

    def make(i: int):
        n = raw[i]
        if n["kind"] == "leaf":
            return RayLeaf(list(n["family"]))
        tup = PartitionTuple.from_json(n["tuple"])
        fsc = FirstStageCad(tup.polys)
        aux = {}
        for c in n["cells"]:
            if "members" not in c:
                continue
            cell = fsc[(c["slab"], c["stack"])]
            cols = [ColumnSet(by_id[j], cell, fsc) for j in c["members"]]
            aux[cell.key] = CellAux(list(c["members"]), tree_from_json(c["columns"], cols),
                                    ShadowIndex([XInterval.from_json(v) for v in c["shadow"]]))
        node = RayNode(list(n["family"]), tup, fsc, aux, {}, n["degraded"])
        for c in n["children"]:
            node.children[cad.parse_sign_key(c["sign"])] = make(c["child"])
        return node

    return RayShootStructure(sets, items, region_tree, make(0),
                             RayConfig.from_json(obj["config"]), obj["degraded"])
