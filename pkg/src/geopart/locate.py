"""Hierarchical point location: cumulative semigroup weight of the sets containing a point."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from gmpy2 import mpq

from . import cad
from .algebraic import AlgebraicPoint
from .partition import (PartitionReport, PartitionTuple, RetriesExhausted, alpha_target,
                        build_partition)
from .poly import q_str
from .semialg import SemiAlgSet, dump_instance, load_instance

FORMAT = "geopart-locate/1"


@dataclass(frozen=True)
class Semigroup:
    """Commutative semigroup with neutral element; weights are parsed from strings."""

    name: str
    combine: Callable
    neutral: object
    parse: Callable
    fmt: Callable = str

    def fold(self, values) -> object:
        acc = self.neutral
        for v in values:
            acc = self.combine(acc, v)
        return acc


def _min_id(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


SEMIGROUPS = {
    "count": Semigroup("count", lambda a, b: a + b, 0, int),
    "sum": Semigroup("sum", lambda a, b: a + b, mpq(0), mpq, q_str),
    "or": Semigroup("or", lambda a, b: a or b, False,
                    lambda s: s.strip().lower() in ("1", "true"),
                    lambda v: "true" if v else "false"),
    "min-id": Semigroup("min-id", _min_id, None, int,
                        lambda v: "none" if v is None else str(v)),
}


def semigroup(name: str) -> Semigroup:
    try:
        return SEMIGROUPS[name]
    except KeyError:
        raise ValueError(f"unknown semigroup {name!r}") from None


# With k=2 a tuple has four cells; clustered families of a few dozen disks rarely
# split better than 3/2, so the default acceptance target is D/C0' = 3/2.
DEFAULT_C0_PRIME = mpq(4, 3)


@dataclass
class LocateConfig:
    k: int = 2
    c0_prime: object = DEFAULT_C0_PRIME
    c0: object = None
    n0: int = 16
    retries: int = 10
    sample_size: int | None = None
    seed: int = 0

    def __post_init__(self):
        self.c0_prime = mpq(self.c0_prime)
        self.c0 = self.c0_prime if self.c0 is None else mpq(self.c0)
        if self.n0 < 2 ** self.k:
            raise ValueError("n0 must be at least 2^k")

    def to_json(self) -> dict:
        return {"k": self.k, "c0_prime": q_str(self.c0_prime), "c0": q_str(self.c0),
                "n0": self.n0, "retries": self.retries, "sample_size": self.sample_size,
                "seed": self.seed}

    @classmethod
    def from_json(cls, obj: dict) -> "LocateConfig":
        return cls(obj["k"], mpq(obj["c0_prime"]), mpq(obj["c0"]), obj["n0"],
                   obj["retries"], obj["sample_size"], obj["seed"])


@dataclass
class Leaf:
    ids: list


@dataclass
class Child:
    node: object
    weight: object
    containing: list


@dataclass
class Internal:
    tuple: PartitionTuple
    family: list
    residue: list
    children: dict  # strict sign vector -> Child
    report: PartitionReport | None = None
    degraded: bool = False
    alpha: str = "inf"


@dataclass
class LocationTree:
    root: object
    sets: dict  # id -> SemiAlgSet
    semigroup: Semigroup
    config: LocateConfig
    weights: dict = field(default_factory=dict)
    degraded: bool = False

    # -- statistics ----------------------------------------------------------
    def depth(self) -> int:
        def go(node):
            if isinstance(node, Leaf):
                return 1
            return 1 + max((go(c.node) for c in node.children.values()), default=0)
        return go(self.root)

    def storage(self) -> int:
        """Total id references stored across all nodes."""
        def go(node):
            if isinstance(node, Leaf):
                return len(node.ids)
            total = len(node.family) + len(node.residue)
            for c in node.children.values():
                total += len(c.containing) + go(c.node)
            return total
        return go(self.root)

    def nodes(self) -> list:
        out = []

        def go(node):
            out.append(node)
            if isinstance(node, Internal):
                for sv in sorted(node.children, reverse=True):
                    go(node.children[sv].node)
        go(self.root)
        return out

    def depth_bound(self) -> int:
        n = len(self.sets)
        n0 = self.config.n0
        if n <= n0:
            return 1
        target = alpha_target(self.config.k, list(self.sets.values()), self.config.c0_prime)
        if target <= 1:
            raise ValueError("configuration gives no shrinkage per level")
        return math.ceil(math.log(n / n0) / math.log(float(target))) + 1


def _weights_of(sets, sg: Semigroup, weights) -> dict:
    if weights is None:
        return {s.id: sg.parse(s.weight) for s in sets}
    return {s.id: weights[s.id] for s in sets}


def build_tree(sets: Sequence[SemiAlgSet], weights: dict | None = None,
               semigroup_: Semigroup | str = "count",
               config: LocateConfig | None = None) -> LocationTree:
    """Recursive partition tree; families at or below n0 become leaves."""
    sg = semigroup(semigroup_) if isinstance(semigroup_, str) else semigroup_
    config = config or LocateConfig()
    sets = sorted(sets, key=lambda s: s.id)
    by_id = {s.id: s for s in sets}
    w = _weights_of(sets, sg, weights)
    rng = random.Random(config.seed)
    tree = LocationTree(None, by_id, sg, config, w)

    def build(family: list) -> object:
        if len(family) <= config.n0:
            return Leaf(list(family))
        node_seed = rng.getrandbits(32)
        members = [by_id[i] for i in family]
        degraded = False
        try:
            tup, report = build_partition(members, config.k, config.c0, config.sample_size,
                                          config.retries, node_seed, config.c0_prime)
        except RetriesExhausted as exc:
            degraded = True
            tup, report = exc.best_tuple, exc.best_report
            if tup is None:
                tree.degraded = True
                return Leaf(list(family))
        children = {}
        for sv in sorted(report.conditions, reverse=True):
            entry = report.conditions[sv]
            if not entry.realizable:
                continue
            inside = set(entry.containing)
            sub = [i for i in entry.meeting if i not in inside]
            children[sv] = [sub, sorted(inside)]
        if any(len(sub) >= len(family) for sub, _ in children.values()):
            tree.degraded = True
            return Leaf(list(family))
        tree.degraded |= degraded
        a = report.achieved_alpha
        node = Internal(tup, list(family), list(report.residue), {}, report, degraded,
                        "inf" if a is None else q_str(a))
        for sv, (sub, inside) in children.items():
            weight = sg.fold(w[i] for i in inside)
            node.children[sv] = Child(build(sub), weight, inside)
        return node

    tree.root = build([s.id for s in sets])
    return tree


def _brute(tree: LocationTree, ids, q: AlgebraicPoint):
    sg = tree.semigroup
    return sg.fold(tree.weights[i] for i in ids if tree.sets[i].contains(q))


@dataclass
class QueryResult:
    weight: object
    visits: int
    degenerate: bool


def query(tree: LocationTree, q) -> QueryResult:
    """Walk from the root accumulating the weights of cells' containing sets."""
    if not isinstance(q, AlgebraicPoint):
        q = AlgebraicPoint.rational(*q)
    sg = tree.semigroup
    acc = sg.neutral
    node = tree.root
    visits = 0
    while True:
        visits += 1
        if isinstance(node, Leaf):
            return QueryResult(sg.combine(acc, _brute(tree, node.ids, q)), visits, False)
        sv = tuple(cad._signs(node.tuple.polys, q.x, q.y))
        child = node.children.get(sv) if cad.is_strict(sv) else None
        if child is None:
            return QueryResult(sg.combine(acc, _brute(tree, node.family, q)), visits, True)
        acc = sg.combine(acc, child.weight)
        node = child.node


def query_weight(tree: LocationTree, q):
    return query(tree, q).weight


# --- serialization ----------------------------------------------------------------

def tree_to_json(tree: LocationTree, include_instance: bool = True) -> dict:
    nodes = tree.nodes()
    index = {id(n): i for i, n in enumerate(nodes)}
    out = []
    for n in nodes:
        if isinstance(n, Leaf):
            out.append({"kind": "leaf", "ids": n.ids})
            continue
        out.append({
            "kind": "internal",
            "tuple": n.tuple.to_json(),
            "family": n.family,
            "residue": n.residue,
            "achieved_alpha": n.alpha,
            "degraded": n.degraded,
            "children": [
                {"sign": cad.sign_key(sv), "child": index[id(c.node)],
                 "weight": tree.semigroup.fmt(c.weight), "containing": c.containing}
                for sv, c in sorted(n.children.items(), reverse=True)
            ],
        })
    obj = {
        "format": FORMAT,
        "semigroup": tree.semigroup.name,
        "config": tree.config.to_json(),
        "degraded": tree.degraded,
        "depth": tree.depth(),
        "storage": tree.storage(),
        "weights": {str(i): tree.semigroup.fmt(v) for i, v in sorted(tree.weights.items())},
    }
    if include_instance:
        obj["instance"] = dump_instance(tree.sets[i] for i in sorted(tree.sets))
    obj["nodes"] = out
    return obj


def tree_from_json(obj: dict, sets: Sequence[SemiAlgSet] | None = None) -> LocationTree:
    """Rebuild a tree; `sets` replaces the embedded instance when given."""
    if obj.get("format") != FORMAT:
        raise ValueError("not a location tree file")
    sg = semigroup(obj["semigroup"])
    if sets is None:
        sets = load_instance(obj["instance"])
    weights = {int(i): sg.parse(v) if v != "none" else None for i, v in obj["weights"].items()}
    raw = obj["nodes"]

    def make(i: int):
        n = raw[i]
        if n["kind"] == "leaf":
            node = Leaf(list(n["ids"]))
        else:
            node = Internal(PartitionTuple.from_json(n["tuple"]), list(n["family"]),
                            list(n["residue"]), {}, None, n["degraded"], n["achieved_alpha"])
            for c in n["children"]:
                w = sg.parse(c["weight"]) if c["weight"] != "none" else None
                node.children[cad.parse_sign_key(c["sign"])] = Child(
                    make(c["child"]), w, list(c["containing"]))
        return node

    tree = LocationTree(make(0), {s.id: s for s in sets}, sg,
                        LocateConfig.from_json(obj["config"]), weights, obj["degraded"])
    return tree
