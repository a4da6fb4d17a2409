"""Build/query statistics for location trees over growing random instances."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .generate import gen_instance, gen_queries
from .locate import Internal, LocateConfig, build_tree, query


@dataclass
class BenchRecord:
    n: int
    build_seconds: float
    visits_min: int
    visits_mean: str
    visits_max: int
    storage: int
    depth: int
    retries: int
    alpha_per_level: list = field(default_factory=list)

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "n": self.n,
            "visits": {"min": self.visits_min, "mean": self.visits_mean, "max": self.visits_max},
            "storage": self.storage,
            "depth": self.depth,
            "retries": self.retries,
            "alpha_per_level": self.alpha_per_level,
        }
        if timing:
            out["build_seconds"] = round(self.build_seconds, 3)
        return out


def _levels(tree) -> tuple[int, list]:
    """Retries spent over the whole tree and the weakest achieved alpha per level."""
    retries = 0
    worst: dict = {}

    def go(node, level):
        nonlocal retries
        if not isinstance(node, Internal):
            return
        if node.report is not None:
            retries += node.report.attempts - 1
        a = None if node.alpha == "inf" else mpq(node.alpha)
        cur = worst.get(level, "unset")
        if cur == "unset" or (a is not None and (cur is None or a < cur)):
            worst[level] = a
        for c in node.children.values():
            go(c.node, level + 1)

    go(tree.root, 0)
    return retries, ["inf" if worst[k] is None else str(worst[k]) for k in sorted(worst)]


def run_bench(kind: str = "disks", sizes=(128,), queries: int = 100, seed: int = 0,
              config: LocateConfig | None = None) -> list[BenchRecord]:
    """One record per n: build a counting location tree and time a query batch."""
    config = config or LocateConfig(seed=seed)
    qs = gen_queries(queries, seed)
    records = []
    for n in sizes:
        inst = gen_instance(kind, n, seed)
        t0 = time.perf_counter()
        tree = build_tree(inst.sets, None, "count", config)
        elapsed = time.perf_counter() - t0
        visits = [query(tree, q).visits for q in qs] or [0]
        retries, alphas = _levels(tree)
        records.append(BenchRecord(n, elapsed, min(visits), str(mpq(sum(visits), len(visits))),
                                   max(visits), tree.storage(), tree.depth(), retries, alphas))
    return records
