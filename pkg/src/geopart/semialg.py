"""Semi-algebraic sets in the plane and their incidence with sign-condition realizations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from gmpy2 import mpq

from . import cad
from . import upoly as U
from .algebraic import AlgebraicPoint, sign_at
from .poly import MultiPoly, X, Y

RELATIONS = ("lt0", "eq0", "gt0", "le0", "ge0")
_REL_OK = {
    "lt0": (-1,), "eq0": (0,), "gt0": (1,), "le0": (-1, 0), "ge0": (0, 1),
}


class Formula:
    def evaluate(self, signs: Sequence[int]) -> bool:
        raise NotImplementedError

    def atoms(self) -> set[int]:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_json(obj: dict) -> "Formula":
        if "atom" in obj:
            return Atom(int(obj["atom"]), obj["rel"])
        op = obj["op"]
        args = [Formula.from_json(a) for a in obj["args"]]
        if op == "and":
            return And(tuple(args))
        if op == "or":
            return Or(tuple(args))
        if op == "not":
            if len(args) != 1:
                raise ValueError("'not' takes exactly one argument")
            return Not(args[0])
        raise ValueError(f"unknown formula op {op!r}")


@dataclass(frozen=True)
class Atom(Formula):
    index: int
    rel: str

    def __post_init__(self):
        if self.rel not in _REL_OK:
            raise ValueError(f"unknown relation {self.rel!r}")
        if self.index < 0:
            raise ValueError("negative atom index")

    def evaluate(self, signs):
        return signs[self.index] in _REL_OK[self.rel]

    def atoms(self):
        return {self.index}

    def to_json(self):
        return {"atom": self.index, "rel": self.rel}


@dataclass(frozen=True)
class And(Formula):
    args: tuple

    def evaluate(self, signs):
        return all(a.evaluate(signs) for a in self.args)

    def atoms(self):
        return set().union(*(a.atoms() for a in self.args))

    def to_json(self):
        return {"op": "and", "args": [a.to_json() for a in self.args]}


@dataclass(frozen=True)
class Or(Formula):
    args: tuple

    def evaluate(self, signs):
        return any(a.evaluate(signs) for a in self.args)

    def atoms(self):
        return set().union(*(a.atoms() for a in self.args))

    def to_json(self):
        return {"op": "or", "args": [a.to_json() for a in self.args]}


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def evaluate(self, signs):
        return not self.arg.evaluate(signs)

    def atoms(self):
        return self.arg.atoms()

    def to_json(self):
        return {"op": "not", "args": [self.arg.to_json()]}


_NEGATED = {"lt0": "ge0", "ge0": "lt0", "gt0": "le0", "le0": "gt0"}


def push_negations(f: Formula, negate: bool = False) -> Formula:
    """Equivalent formula with NOT only directly above eq0 atoms (De Morgan)."""
    if isinstance(f, Not):
        return push_negations(f.arg, not negate)
    if isinstance(f, Atom):
        if not negate:
            return f
        if f.rel == "eq0":
            return Not(f)
        return Atom(f.index, _NEGATED[f.rel])
    cls = type(f)
    if negate:
        cls = Or if isinstance(f, And) else And
    return cls(tuple(push_negations(a, negate) for a in f.args))


@dataclass(eq=False)
class SemiAlgSet:
    """A set {v : formula(signs of polys at v)} with a trusted dimension tag."""

    id: int
    polys: tuple
    formula: Formula
    dim: int
    weight: str = "1"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.polys = tuple(self.polys)
        if self.dim not in (0, 1, 2):
            raise ValueError("dim must be 0, 1 or 2")
        if any(p.num_vars != 2 for p in self.polys):
            raise ValueError("set polynomials must be bivariate")
        if self.formula.atoms() and max(self.formula.atoms()) >= len(self.polys):
            raise ValueError("formula references a missing polynomial")

    def complexity(self) -> int:
        return max(len(self.polys), max((p.total_degree() for p in self.polys), default=0))

    def signs_at(self, q: AlgebraicPoint) -> tuple:
        return tuple(sign_at(p, q) for p in self.polys)

    def contains(self, q: AlgebraicPoint) -> bool:
        return self.formula.evaluate(self.signs_at(q))

    def member(self, q: AlgebraicPoint, own_signs: Sequence[int]) -> bool:
        """Membership given the signs of this set's polynomials at q."""
        return self.formula.evaluate(own_signs)

    def boundary_polys(self) -> list[MultiPoly]:
        return [p for p in self.polys if not p.is_constant()]

    @cached_property
    def point(self) -> AlgebraicPoint | None:
        """The single point of a dim-0 set (None when the set is empty)."""
        if self.dim != 0:
            raise ValueError("only dim-0 sets have a point")
        fast = _explicit_point(self)
        if fast is not None:
            return fast if self.contains(fast) else None
        for tag, pt in _set_cells(self, ()):
            if self.contains(pt):
                return pt
        return None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "dim": self.dim,
            "weight": self.weight,
            "polys": [p.to_terms() for p in self.polys],
            "formula": self.formula.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SemiAlgSet":
        polys = tuple(MultiPoly.from_terms(t, num_vars=2) for t in obj["polys"])
        return cls(int(obj["id"]), polys, Formula.from_json(obj["formula"]),
                   int(obj["dim"]), str(obj.get("weight", "1")))


def _explicit_point(s: SemiAlgSet) -> AlgebraicPoint | None:
    """Fast path for the common encoding x - a = 0 and y - b = 0."""
    xs, ys = None, None
    for p in s.polys:
        t = p.terms
        if p.total_degree() == 1 and len(t) <= 2:
            if t.get((1, 0)) and not t.get((0, 1)):
                xs = -t.get((0, 0), 0) / t[(1, 0)]
            elif t.get((0, 1)) and not t.get((1, 0)):
                ys = -t.get((0, 0), 0) / t[(0, 1)]
    if xs is None or ys is None:
        return None
    return AlgebraicPoint(mpq(xs), mpq(ys))


# --- constructors -----------------------------------------------------------

def point_set(id: int, x, y, weight: str = "1") -> SemiAlgSet:
    x, y = mpq(x), mpq(y)
    return SemiAlgSet(id, (X - x, Y - y),
                      And((Atom(0, "eq0"), Atom(1, "eq0"))), 0, weight)


def disk_poly(cx, cy, r) -> MultiPoly:
    cx, cy, r = mpq(cx), mpq(cy), mpq(r)
    return (X - cx) ** 2 + (Y - cy) ** 2 - r * r


def closed_disk(id: int, cx, cy, r, weight: str = "1") -> SemiAlgSet:
    return SemiAlgSet(id, (disk_poly(cx, cy, r),), Atom(0, "le0"), 2, weight)


def circle(id: int, cx, cy, r, weight: str = "1") -> SemiAlgSet:
    return SemiAlgSet(id, (disk_poly(cx, cy, r),), Atom(0, "eq0"), 1, weight)


def halfplane(id: int, a, b, c, weight: str = "1") -> SemiAlgSet:
    """Closed halfplane a*x + b*y + c >= 0."""
    p = X.scale(a) + Y.scale(b) + mpq(c)
    return SemiAlgSet(id, (p,), Atom(0, "ge0"), 2, weight)


def segment(id: int, x0, y0, x1, y1, weight: str = "1") -> SemiAlgSet:
    """Closed segment between two distinct rational points."""
    x0, y0, x1, y1 = map(mpq, (x0, y0, x1, y1))
    line = (Y - y0).scale(x1 - x0) - (X - x0).scale(y1 - y0)
    dx, dy = x1 - x0, y1 - y0
    # projection parameter t = ((v - p0) . d) / |d|^2 in [0, 1]
    t = (X - x0).scale(dx) + (Y - y0).scale(dy)
    return SemiAlgSet(id, (line, t, t - (dx * dx + dy * dy)),
                      And((Atom(0, "eq0"), Atom(1, "ge0"), Atom(2, "le0"))), 1, weight)


def arc(id: int, cx, cy, r, x_lo, x_hi, weight: str = "1") -> SemiAlgSet:
    """Part of a circle with x in [x_lo, x_hi]."""
    return SemiAlgSet(id, (disk_poly(cx, cy, r), X - mpq(x_lo), X - mpq(x_hi)),
                      And((Atom(0, "eq0"), Atom(1, "ge0"), Atom(2, "le0"))), 1, weight)


# --- incidence against a tuple ------------------------------------------------

def _set_cells(s: SemiAlgSet, tuple_polys: Sequence[MultiPoly]):
    """Cell samples adapted to the set's and the tuple's polynomials.

    Dim-2 sets use the full decomposition; lower-dimensional sets only need
    samples on the zero sets of their own polynomials.
    """
    polys = list(tuple_polys) + list(s.polys)
    if not polys:
        yield (0, 0), AlgebraicPoint(U.ZERO, U.ZERO)
        return
    if s.dim == 2:
        yield from cad.iter_cells(polys)
        return
    for g in s.boundary_polys():
        yield from cad.iter_curve_points(polys, g)


@dataclass
class Incidence:
    """How one set meets the strict sign conditions of a tuple."""

    nonempty: bool
    meets: dict  # strict sign vector -> witness point in S with those tuple signs
    contains: set  # strict sign vectors whose realization lies inside S
    meets_zero: bool = False  # some sampled member point lies on a tuple zero set


def incidence(s: SemiAlgSet, tuple_polys: Sequence[MultiPoly]) -> Incidence:
    tuple_polys = list(tuple_polys)
    k = len(tuple_polys)
    meets: dict = {}
    if s.dim == 0:
        pt = s.point
        if pt is None:
            return Incidence(False, {}, set())
        sv = tuple(sign_at(p, pt) for p in tuple_polys)
        if cad.is_strict(sv):
            meets[sv] = pt
        return Incidence(True, meets, set(), not cad.is_strict(sv))
    nonempty = zero = False
    seen: set = set()
    spoiled: set = set()  # strict conditions with a sample outside S or on S's boundary
    for _, pt in _set_cells(s, tuple_polys):
        allsigns = cad._signs(tuple_polys + list(s.polys), pt.x, pt.y)
        sv, own = allsigns[:k], allsigns[k:]
        inside = s.member(pt, own)
        nonempty |= inside
        if not cad.is_strict(sv):
            zero |= inside
            continue
        seen.add(sv)
        if inside:
            meets.setdefault(sv, pt)
        if not inside or any(v == 0 for v, p in zip(own, s.polys) if not p.is_constant()):
            spoiled.add(sv)
    contains = set()
    if s.dim == 2:
        contains = {sv for sv in seen if sv not in spoiled}
    return Incidence(nonempty, meets, contains, zero)


def meets_condition(s: SemiAlgSet, tuple_polys, sigma) -> bool:
    return tuple(sigma) in incidence(s, _polys_of(tuple_polys)).meets


DISJOINT, MEETS_BOUNDARY, CONTAINS = "disjoint", "meets_boundary", "contains_realization"


def classify_against_realization(s: SemiAlgSet, tuple_polys, sigma) -> str:
    inc = incidence(s, _polys_of(tuple_polys))
    sigma = tuple(sigma)
    if sigma in inc.contains:
        return CONTAINS
    if sigma in inc.meets:
        return MEETS_BOUNDARY
    return DISJOINT


def _polys_of(t) -> list:
    return list(getattr(t, "polys", t))


# --- sample points ------------------------------------------------------------

UNBOUNDED_WINDOW = mpq(64)


def _x_extent(s: SemiAlgSet, pts: Sequence[AlgebraicPoint]) -> tuple[mpq, mpq]:
    lo, hi, _, _ = _x_extent_flags(s, pts)
    return lo, hi


def _x_extent_flags(s: SemiAlgSet, pts: Sequence[AlgebraicPoint]):
    xs = [p.x for p in pts]
    lo, hi = min(xs), max(xs)
    crit = cad._Basis(list(s.polys)).critical()
    # widen to the neighbouring critical values, where the set's x-range may end;
    # a member sample in an outer slab means the set runs off to infinity
    below = [r for r in crit if r.hi <= lo]
    above = [r for r in crit if r.lo >= hi]
    lo = below[-1].refine(mpq(1, 1024)).approx() if below else lo - UNBOUNDED_WINDOW
    hi = above[0].refine(mpq(1, 1024)).approx() if above else hi + UNBOUNDED_WINDOW
    return lo, hi, not below, not above


def far_points(s: SemiAlgSet, exponents=(8, 12, 16, 20)) -> list[AlgebraicPoint]:
    """Member points at geometrically growing distance along unbounded directions."""
    if s.dim == 0:
        return []
    base = [pt for _, pt in _set_cells(s, ()) if s.contains(pt)]
    if not base:
        return []
    lo, hi, open_lo, open_hi = _x_extent_flags(s, base)
    xs = [lo - 2 ** e for e in exponents] if open_lo else []
    xs += [hi + 2 ** e for e in exponents] if open_hi else []
    basis = cad._Basis(list(s.polys))
    out = []
    for x0 in xs:
        roots = basis.stack(x0)
        ords = cad.stack_ordinates(roots) if s.dim == 2 else [
            r.lo if r.is_rational else r for r in roots]
        out.extend(pt for pt in (AlgebraicPoint(mpq(x0), y) for y in ords) if s.contains(pt))
    return out


def sample_points_on(s: SemiAlgSet, count: int) -> list[AlgebraicPoint]:
    """Up to `count` member points of S spread across its x-extent."""
    if count < 1:
        raise ValueError("count must be positive")
    if s.dim == 0:
        return [s.point] if s.point is not None else []
    base = [pt for _, pt in _set_cells(s, ()) if s.contains(pt)]
    if not base:
        return []
    lo, hi = _x_extent(s, base)
    found = list(base)
    if hi > lo:
        basis = cad._Basis(list(s.polys))
        for i in range(count + 1):
            x0 = lo + (hi - lo) * mpq(i, count)
            roots = basis.stack(x0)
            if s.dim == 2:
                ords = cad.stack_ordinates(roots)
            else:
                ords = [r.lo if r.is_rational else r for r in roots]
            for y in ords:
                pt = AlgebraicPoint(x0, y)
                if s.contains(pt):
                    found.append(pt)
    return _spread(found, count)


def _point_key(p: AlgebraicPoint) -> tuple:
    y = p.y
    if isinstance(y, U.RootInterval):
        return (p.x, y.lo, y.hi)
    return (p.x, y, y)


def _spread(pts: list, count: int) -> list:
    uniq, keys = [], set()
    for p in pts:
        key = _point_key(p)
        if key not in keys:
            keys.add(key)
            uniq.append(p)
    uniq.sort(key=_point_key)
    if len(uniq) <= count:
        return uniq
    if count == 1:
        return [uniq[len(uniq) // 2]]
    n = len(uniq)
    return [uniq[(i * (n - 1)) // (count - 1)] for i in range(count)]


def boundary_carriers(s: SemiAlgSet) -> list[SemiAlgSet]:
    """The parts of S on the zero set of each of its polynomials."""
    return [SemiAlgSet(s.id, s.polys + (g,), And((s.formula, Atom(len(s.polys), "eq0"))), 1)
            for g in s.boundary_polys()]


def boundary_points(s: SemiAlgSet, count: int) -> list[AlgebraicPoint]:
    """Member points lying on zero sets of the set's polynomials."""
    out = []
    for carrier in boundary_carriers(s):
        out.extend(sample_points_on(carrier, count))
    return _spread(out, count)


# --- instance files -------------------------------------------------------------

def dump_instance(sets: Iterable[SemiAlgSet]) -> dict:
    return {"dimension": 2, "sets": [s.to_json() for s in sets]}


def load_instance(obj) -> list[SemiAlgSet]:
    if isinstance(obj, str):
        with open(obj) as fh:
            obj = json.load(fh)
    if obj.get("dimension", 2) != 2:
        raise ValueError("only planar instances are supported")
    sets = [SemiAlgSet.from_json(o) for o in obj["sets"]]
    ids = [s.id for s in sets]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate set ids")
    return sets


def dumps(obj) -> str:
    """Canonical JSON text used for every file the package writes."""
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"
