"""Range searching by duality: each input point becomes the set of ranges containing it.

A family is a list of polynomial templates in four variables ordered
(a, b, p1, p2): the two query parameters followed by the point coordinates,
combined by a formula.  Fixing the point gives a planar set in the (a, b)
parameter plane, so a range query becomes a point-location query there.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .locate import (LocateConfig, LocationTree, build_tree, query, tree_from_json,
                     tree_to_json)
from .poly import MultiPoly, q_str
from .semialg import Atom, Formula, SemiAlgSet

A, B, P1, P2 = (MultiPoly.var(i, 4) for i in range(4))

# Dual halfplanes are lines; with k=2 every line crosses three of four cells, so the
# per-level shrink cannot beat 4/3 and leaves must stay large to keep the tree small.
FAMILY_CONFIGS = {
    "halfplane": dict(k=2, c0_prime=mpq(7, 4), n0=176),
    "disk-translate": dict(k=2, c0_prime=mpq(1), n0=16),
}
DEFAULT_CONFIG = dict(k=2, c0_prime=mpq(3, 2), n0=16)


def default_config(fam: "DualFamily", seed: int = 0) -> LocateConfig:
    return LocateConfig(**FAMILY_CONFIGS.get(fam.name, DEFAULT_CONFIG), seed=seed)


@dataclass(frozen=True)
class DualFamily:
    name: str
    templates: tuple
    formula: Formula
    dim: int = 2

    def __post_init__(self):
        if any(t.num_vars != 4 for t in self.templates):
            raise ValueError("templates use the variables (a, b, p1, p2)")

    def dualize(self, p, id: int = 0, weight: str = "1") -> SemiAlgSet:
        p1, p2 = mpq(p[0]), mpq(p[1])
        polys = tuple(t.substitute({2: p1, 3: p2}) for t in self.templates)
        return SemiAlgSet(id, polys, self.formula, self.dim, weight)

    def to_json(self) -> dict:
        return {"name": self.name, "dim": self.dim,
                "templates": [t.to_terms() for t in self.templates],
                "formula": self.formula.to_json()}

    @classmethod
    def from_json(cls, obj: dict) -> "DualFamily":
        return cls(obj.get("name", "custom"),
                   tuple(MultiPoly.from_terms(t, num_vars=4) for t in obj["templates"]),
                   Formula.from_json(obj["formula"]), int(obj.get("dim", 2)))


# y <= a*x + b
HALFPLANE = DualFamily("halfplane", (A * P1 + B - P2,), Atom(0, "ge0"))
# unit disk centred at (a, b)
DISK_TRANSLATE = DualFamily("disk-translate", ((P1 - A) ** 2 + (P2 - B) ** 2 - 1,),
                            Atom(0, "le0"))

FAMILIES = {f.name: f for f in (HALFPLANE, DISK_TRANSLATE)}


def family(name: str) -> DualFamily:
    """Resolve 'halfplane', 'disk-translate' or 'custom:<file>'."""
    if name.startswith("custom:"):
        with open(name[len("custom:"):]) as fh:
            return DualFamily.from_json(json.load(fh))
    try:
        return FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}") from None


FORMAT = "geopart-range/1"


@dataclass
class RangeStructure:
    tree: LocationTree
    family: DualFamily
    points: list
    weights: list | None = None

    def to_json(self) -> dict:
        return {"format": FORMAT, "family": self.family.to_json(),
                "points": [[q_str(x), q_str(y)] for x, y in self.points],
                "weights": self.weights,
                "tree": tree_to_json(self.tree, include_instance=False)}

    @classmethod
    def from_json(cls, obj: dict) -> "RangeStructure":
        if obj.get("format") != FORMAT:
            raise ValueError("not a range-search structure file")
        fam = DualFamily.from_json(obj["family"])
        points = [(mpq(x), mpq(y)) for x, y in obj["points"]]
        weights = obj.get("weights")
        ws = weights if weights is not None else ["1"] * len(points)
        duals = [fam.dualize(p, i, w) for i, (p, w) in enumerate(zip(points, ws))]
        return cls(tree_from_json(obj["tree"], duals), fam, points, weights)


def build_range_structure(points: Sequence, weights: Sequence[str] | None = None,
                          fam: DualFamily = HALFPLANE, config: LocateConfig | None = None,
                          semigroup: str = "count") -> RangeStructure:
    points = [(mpq(x), mpq(y)) for x, y in points]
    given = list(weights) if weights is not None else None
    ws = given if given is not None else ["1"] * len(points)
    duals = [fam.dualize(p, i, w) for i, (p, w) in enumerate(zip(points, ws))]
    config = config or default_config(fam)
    return RangeStructure(build_tree(duals, None, semigroup, config), fam, points, given)


def range_query(structure: RangeStructure, x):
    """Aggregate weight of the points inside the range with parameters x = (a, b)."""
    return query(structure.tree, x).weight
