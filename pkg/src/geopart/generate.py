"""Seeded random instances with exact rational data."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .semialg import (And, Atom, SemiAlgSet, X, Y, arc, circle, closed_disk, dump_instance,
                      load_instance, point_set, segment)

DENOM = 2 ** 10
NUM_RANGE = 2 ** 16
KINDS = ("points", "disks", "circles", "arcs", "segments", "conic-arcs")


@dataclass
class Instance:
    sets: list
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        obj = dump_instance(self.sets)
        obj["metadata"] = self.metadata
        return obj

    @classmethod
    def from_json(cls, obj) -> "Instance":
        meta = obj.get("metadata", {}) if isinstance(obj, dict) else {}
        return cls(load_instance(obj), meta)


class RationalSource:
    """Numerators uniform in [-2^16, 2^16] over 2^10, scaled so the box is [-box, box]."""

    def __init__(self, seed: int, box=64):
        self.rng = random.Random(seed)
        self.scale = mpq(box) / 64

    def coord(self) -> mpq:
        return mpq(self.rng.randint(-NUM_RANGE, NUM_RANGE), DENOM) * self.scale

    def between(self, lo, hi) -> mpq:
        """Uniform on the 2^-10 grid of [lo, hi] (before scaling)."""
        k = self.rng.randint(int(mpq(lo) * DENOM), int(mpq(hi) * DENOM))
        return mpq(k, DENOM) * self.scale

    def fraction(self) -> mpq:
        return mpq(self.rng.randint(0, DENOM), DENOM)


def conic_arc(id: int, cx, cy, a, b, x_lo, x_hi, weight: str = "1") -> SemiAlgSet:
    """Part of the ellipse a(x-cx)^2 + b(y-cy)^2 = 1 with x in [x_lo, x_hi]."""
    cx, cy, a, b = mpq(cx), mpq(cy), mpq(a), mpq(b)
    ell = a * (X - cx) ** 2 + b * (Y - cy) ** 2 - 1
    return SemiAlgSet(id, (ell, X - mpq(x_lo), X - mpq(x_hi)),
                      And((Atom(0, "eq0"), Atom(1, "ge0"), Atom(2, "le0"))), 1, weight)


def _arc_span(src: RationalSource, cx, half_width):
    lo = cx - half_width + src.fraction() * half_width
    hi = min(lo + src.fraction() * half_width + mpq(1, DENOM), cx + half_width)
    return lo, hi


def gen_instance(kind: str, n: int, seed: int = 0, box=64, radius=None) -> Instance:
    """n random sets of one kind; `radius` fixes circle and disk radii."""
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    if n < 0:
        raise ValueError("n must be non-negative")
    src = RationalSource(seed, box)
    sets = []
    for i in range(n):
        if kind == "points":
            s = point_set(i, src.coord(), src.coord())
        elif kind == "disks":
            r = mpq(radius) if radius is not None else src.between(1, 8)
            s = closed_disk(i, src.coord(), src.coord(), r)
        elif kind == "circles":
            s = circle(i, src.coord(), src.coord(), mpq(radius) if radius is not None else 1)
        elif kind == "arcs":
            cx, cy = src.coord(), src.coord()
            r = mpq(radius) if radius is not None else src.between(1, 16)
            lo, hi = _arc_span(src, cx, r)
            s = arc(i, cx, cy, r, lo, hi)
        elif kind == "segments":
            x0, y0 = src.coord(), src.coord()
            dx, dy = src.between(-8, 8), src.between(-8, 8)
            if dx == 0 and dy == 0:
                dx = mpq(1, DENOM)
            s = segment(i, x0, y0, x0 + dx, y0 + dy)
        else:
            cx, cy = src.coord(), src.coord()
            ra, rb = src.between(1, 16), src.between(1, 16)
            lo, hi = _arc_span(src, cx, ra)
            s = conic_arc(i, cx, cy, 1 / ra ** 2, 1 / rb ** 2, lo, hi)
        sets.append(s)
    meta = {"generator": kind, "seed": seed, "n": n, "box": str(mpq(box))}
    if radius is not None:
        meta["radius"] = str(mpq(radius))
    return Instance(sets, meta)


def gen_points(n: int, seed: int = 0, box=64) -> list[tuple[mpq, mpq]]:
    src = RationalSource(seed, box)
    return [(src.coord(), src.coord()) for _ in range(n)]


def gen_queries(n: int, seed: int = 0, box=64) -> list[tuple[mpq, mpq]]:
    return gen_points(n, seed + 7919, box)
