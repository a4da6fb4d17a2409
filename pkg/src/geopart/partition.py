"""Partitioning tuples: construction, exact verification and the random-sample loop."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

from . import cad
from . import upoly as U
from .poly import MultiPoly, q_str
from .semialg import (SemiAlgSet, boundary_carriers, boundary_points, far_points, incidence,
                      sample_points_on)


class Exhausted(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"no partitioning tuple found within {budget} attempts")
        self.budget = budget


class RetriesExhausted(RuntimeError):
    def __init__(self, retries: int, best_tuple, best_report):
        super().__init__(f"no acceptable partition within {retries} attempts")
        self.retries = retries
        self.best_tuple = best_tuple
        self.best_report = best_report


# --- degree and subspace bookkeeping ------------------------------------------------

def degree_bound(j: int) -> int:
    """Smallest D >= 1 with (D+2)(D+1)/2 > 2^(j-1)."""
    if j < 1:
        raise ValueError("level must be >= 1")
    d = 1
    while (d + 2) * (d + 1) // 2 <= 2 ** (j - 1):
        d += 1
    return d


def graded_lex(count: int) -> list[tuple[int, int]]:
    out = []
    deg = 0
    while len(out) < count:
        for i in range(deg, -1, -1):
            out.append((i, deg - i))
            if len(out) == count:
                break
        deg += 1
    return out


def subspace_basis(j: int) -> list[tuple[int, int]]:
    """Exponents of the first 2^(j-1)+1 monomials in graded-lex order."""
    if j < 1:
        raise ValueError("level must be >= 1")
    return graded_lex(2 ** (j - 1) + 1)


def cells_per_axis(k: int) -> int:
    """D = ceil(2^(k/2))."""
    if k % 2 == 0:
        return 2 ** (k // 2)
    r = math.isqrt(2 ** k)
    return r if r * r == 2 ** k else r + 1


@dataclass(frozen=True)
class PartitionTuple:
    polys: tuple

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        for j, p in enumerate(self.polys, start=1):
            if p.is_zero():
                raise ValueError(f"polynomial {j} is identically zero")
            allowed = set(subspace_basis(j))
            if not set(p.terms) <= allowed:
                raise ValueError(f"polynomial {j} leaves its subspace")

    @property
    def k(self) -> int:
        return len(self.polys)

    @property
    def D(self) -> int:
        return cells_per_axis(self.k)

    def signs_at(self, pt) -> tuple:
        return cad._signs(self.polys, pt.x, pt.y)

    def to_json(self) -> dict:
        return {"k": self.k, "polys": [p.to_terms() for p in self.polys]}

    @classmethod
    def from_json(cls, obj: dict) -> "PartitionTuple":
        return cls(tuple(MultiPoly.from_terms(t, num_vars=2) for t in obj["polys"]))


# --- verification --------------------------------------------------------------

@dataclass
class ConditionEntry:
    realizable: bool
    representatives: list
    meeting: list = field(default_factory=list)
    containing: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)

    @property
    def crossing(self) -> int:
        return len(self.meeting) - len(self.containing)


@dataclass
class PartitionReport:
    n_sets: int
    conditions: dict  # strict sign vector -> ConditionEntry
    residue: list
    uncovered: list
    empty: list
    attempts: int = 1

    @property
    def max_crossing(self) -> int:
        return max((e.crossing for e in self.conditions.values()), default=0)

    @property
    def max_meeting(self) -> int:
        return max((len(e.meeting) for e in self.conditions.values()), default=0)

    @property
    def achieved_alpha(self):
        """|S| / max crossing count; None stands for infinity."""
        m = self.max_crossing
        return None if m == 0 else mpq(self.n_sets, m)

    def alpha_at_least(self, target) -> bool:
        a = self.achieved_alpha
        return a is None or a >= target

    def to_json(self) -> dict:
        conds = {}
        for sv in sorted(self.conditions, reverse=True):
            e = self.conditions[sv]
            conds[cad.sign_key(sv)] = {
                "realizable": e.realizable,
                "representatives": [p.to_json() for p in e.representatives],
                "meeting": e.meeting,
                "containing": e.containing,
                "witnesses": {str(i): e.witnesses[i].to_json() for i in e.meeting},
            }
        a = self.achieved_alpha
        return {
            "n_sets": self.n_sets,
            "conditions": conds,
            "residue": self.residue,
            "uncovered": self.uncovered,
            "empty": self.empty,
            "max_meeting": self.max_meeting,
            "max_crossing": self.max_crossing,
            "achieved_alpha": "inf" if a is None else q_str(a),
            "attempts": self.attempts,
        }


def _strict_vectors(k: int) -> list[tuple]:
    out = [()]
    for _ in range(k):
        out = [v + (s,) for v in out for s in (1, -1)]
    return out


def verify_partition(tup: PartitionTuple, sets: Sequence[SemiAlgSet]) -> PartitionReport:
    """Exact per-condition incidence lists of the sets against the tuple."""
    polys = list(tup.polys)
    reps: dict = {}
    for s in cad.sample_sign_conditions(polys):
        if cad.is_strict(s.signs):
            reps.setdefault(s.signs, []).append(s.point)
    conds = {sv: ConditionEntry(sv in reps, reps.get(sv, [])) for sv in _strict_vectors(tup.k)}
    residue, uncovered, empty = [], [], []
    for s in sorted(sets, key=lambda s: s.id):
        inc = incidence(s, polys)
        if not inc.nonempty:
            empty.append(s.id)
            continue
        for sv, pt in inc.meets.items():
            e = conds[sv]
            e.meeting.append(s.id)
            e.witnesses[s.id] = pt
        for sv in inc.contains:
            conds[sv].containing.append(s.id)
        if inc.meets_zero:
            residue.append(s.id)
        if not inc.meets:
            uncovered.append(s.id)
    return PartitionReport(len(sets), conds, residue, uncovered, empty)


# --- small-instance solver ----------------------------------------------------------

_GRID = mpq(1, 2 ** 12)


def _round(v) -> mpq:
    return mpq(round(v / _GRID)) * _GRID if v.denominator > 2 ** 12 else v


@lru_cache(maxsize=1 << 14)
def surrogate_points(s: SemiAlgSet, count: int) -> tuple[tuple[mpq, mpq], ...]:
    """Rational stand-ins for a set used by the heuristic solver (cached per set object)."""
    custom = getattr(s, "surrogates", None)
    if custom is not None:
        return tuple(custom(count))
    if s.dim == 0:
        pts = sample_points_on(s, 1)
    elif s.dim == 1:
        pts = sample_points_on(s, count) + far_points(s)
    else:
        # a region crosses a cell without containing it only through its boundary
        pts = boundary_points(s, count) or sample_points_on(s, 1)
        for carrier in boundary_carriers(s):
            pts += far_points(carrier)
    out = []
    for p in pts:
        x, y = p.approx(_GRID)
        out.append((_round(x), _round(y)))
    return tuple(out)


def _mono(pt, e) -> mpq:
    return pt[0] ** e[0] * pt[1] ** e[1]


class _Sweep:
    """Coordinate descent over one level's coefficients on surrogate points."""

    def __init__(self, pts, owner, cls, basis, rng):
        self.pts, self.owner, self.cls, self.rng = pts, owner, cls, rng
        self.basis = basis
        self.mv = [[_mono(p, e) for e in basis] for p in pts]

    def optimize(self, coeffs: list, rounds: int) -> list:
        n = len(self.pts)
        values = [sum((c * m for c, m in zip(coeffs, mv)), mpq(0)) for mv in self.mv]
        for _ in range(rounds):
            for i in range(len(coeffs)):
                base = [values[p] - coeffs[i] * self.mv[p][i] for p in range(n)]
                t = self._best_t(i, base, coeffs[i])
                if t is None:
                    continue
                trial = coeffs[:i] + [t] + coeffs[i + 1:]
                if all(c == 0 for c in trial):
                    continue
                coeffs = trial
                values = [base[p] + t * self.mv[p][i] for p in range(n)]
        return coeffs

    def _best_t(self, i, base, current):
        n = len(self.pts)
        fixed, moving = [], []
        for p in range(n):
            m = self.mv[p][i]
            if m == 0:
                fixed.append(p)
            else:
                moving.append((-base[p] / m, p))
        if not moving:
            return None
        moving.sort()
        counts: dict = {}
        distinct: dict = {}
        side_pts: dict = {}
        imbalance = [0]

        def put(p, side, delta):
            c = self.cls[p]
            key = (c, side)
            cnt = counts.setdefault(key, {})
            o = self.owner[p]
            before = cnt.get(o, 0)
            cnt[o] = before + delta
            if before == 0 and delta > 0:
                distinct[key] = distinct.get(key, 0) + 1
            elif before + delta == 0:
                distinct[key] -= 1
            plus, minus = side_pts.get((c, 1), 0), side_pts.get((c, -1), 0)
            imbalance[0] -= abs(plus - minus)
            side_pts[key] = side_pts.get(key, 0) + delta
            plus, minus = side_pts.get((c, 1), 0), side_pts.get((c, -1), 0)
            imbalance[0] += abs(plus - minus)

        for p in fixed:
            s = U.sign(base[p])
            if s == 0:
                put(p, 1, 1)
                put(p, -1, 1)
            else:
                put(p, s, 1)
        for _, p in moving:
            put(p, -U.sign(self.mv[p][i]), 1)

        def score():
            return max(distinct.values(), default=0), imbalance[0]

        gaps = [(None, moving[0][0], score())]
        k = 0
        while k < len(moving):
            t0 = moving[k][0]
            while k < len(moving) and moving[k][0] == t0:
                p = moving[k][1]
                s = U.sign(self.mv[p][i])
                put(p, -s, -1)
                put(p, s, 1)
                k += 1
            hi = moving[k][0] if k < len(moving) else None
            gaps.append((t0, hi, score()))
        best = min(g[2] for g in gaps)
        cands = [g for g in gaps if g[2] == best]
        for lo, hi, _ in cands:
            if (lo is None or lo < current) and (hi is None or current < hi):
                return current
        lo, hi, _ = cands[self.rng.randrange(len(cands))]
        if lo is None:
            return mpq(math.floor(hi) - 1)
        if hi is None:
            return mpq(math.floor(lo) + 1)
        return U.simplest_between(lo, hi)


def _random_coeffs(rng, size: int) -> list:
    c = [mpq(rng.randint(-4, 4), rng.randint(1, 4)) for _ in range(size)]
    if all(v == 0 for v in c[1:]):
        c[1 + rng.randrange(size - 1)] = mpq(1)
    return c


def solve_small_instance(sample: Sequence[SemiAlgSet], k: int, alpha_target,
                         budget: int = 20, seed: int = 0, rounds: int = 3,
                         points_per_set: int = 8, rng: random.Random | None = None,
                         floor=None) -> tuple[PartitionTuple, PartitionReport]:
    """Heuristic search for a tuple whose exact report reaches alpha_target on sample.

    With `floor`, the best verified tuple reaching floor is returned once the
    budget runs out instead of giving up.
    """
    sample = list(sample)
    if not sample:
        raise ValueError("empty sample")
    if alpha_target < 1:
        raise ValueError("alpha_target must be at least 1")
    rng = rng or random.Random(seed)
    pts, owner = [], []
    for s in sample:
        for p in surrogate_points(s, points_per_set):
            pts.append(p)
            owner.append(s.id)
    if not pts:
        pts, owner = [(mpq(0), mpq(0))], [sample[0].id]
    lowest = alpha_target if floor is None else min(mpq(floor), mpq(alpha_target))
    best = None
    for _ in range(budget):
        cls = [0] * len(pts)
        polys = []
        for j in range(1, k + 1):
            basis = subspace_basis(j)
            sweep = _Sweep(pts, owner, cls, basis, rng)
            coeffs = sweep.optimize(_random_coeffs(rng, len(basis)), rounds)
            polys.append(MultiPoly(2, dict(zip(basis, coeffs))))
            cls = [(c << 1) | (1 if sum((a * m for a, m in zip(coeffs, mv)), mpq(0)) > 0 else 0)
                   for c, mv in zip(cls, sweep.mv)]
        worst = max(len(v) for v in _group(owner, cls).values())
        if mpq(len(sample), worst) < lowest:
            continue
        tup = PartitionTuple(tuple(polys))
        report = verify_partition(tup, sample)
        if report.alpha_at_least(alpha_target):
            return tup, report
        if report.alpha_at_least(lowest) and (best is None or _rank(report) < _rank(best[1])):
            best = (tup, report)
    if best is not None:
        return best
    raise Exhausted(budget)


def _group(owner, cls) -> dict:
    g: dict = {}
    for o, c in zip(owner, cls):
        g.setdefault(c, set()).add(o)
    return g


# --- random-sample loop -------------------------------------------------------------

FULL_SAMPLE_ATTEMPTS = 2


def effective_dim(sets: Sequence[SemiAlgSet]) -> int:
    """Dimension governing the alpha target; regions count by their boundary."""
    return max((min(s.dim, 1) if s.dim == 2 else s.dim for s in sets), default=0)


def alpha_target(k: int, sets: Sequence[SemiAlgSet], c0) -> mpq:
    return mpq(cells_per_axis(k) ** (2 - effective_dim(sets))) / mpq(c0)


def default_sample_size(n: int, k: int) -> int:
    return min(n, 8 * cells_per_axis(k) ** 4)


def build_partition(sets: Sequence[SemiAlgSet], k: int, c0=4, sample_size: int | None = None,
                    max_retries: int = 10, seed: int = 0, c0_prime=None,
                    solver_budget: int = 20) -> tuple[PartitionTuple, PartitionReport]:
    """Sample, solve, verify on the full family; retry until the report is acceptable."""
    sets = list(sets)
    if k < 1:
        raise ValueError("k must be >= 1")
    if not sets:
        raise ValueError("no sets to partition")
    c0 = mpq(c0)
    c0_prime = c0 if c0_prime is None else mpq(c0_prime)
    accept = alpha_target(k, sets, c0_prime)
    solve_for = max(mpq(1), alpha_target(k, sets, c0))
    size = default_sample_size(len(sets), k) if sample_size is None else sample_size
    size = max(1, min(size, len(sets)))
    rng = random.Random(seed)
    best = None
    made = 0
    for attempt in range(1, max_retries + 1):
        if size >= len(sets) and attempt > FULL_SAMPLE_ATTEMPTS:
            # the sample is the whole family, so further attempts repeat the same search
            break
        made = attempt
        if size >= len(sets):
            sample = sets
        else:
            idx = sorted(rng.sample(range(len(sets)), size))
            sample = [sets[i] for i in idx]
        try:
            tup, rep = solve_small_instance(sample, k, solve_for, solver_budget, rng=rng,
                                            floor=accept)
        except Exhausted:
            continue
        report = rep if sample is sets else verify_partition(tup, sets)
        report.attempts = attempt
        if best is None or _rank(report) < _rank(best[1]):
            best = (tup, report)
        if acceptable(report, accept):
            return tup, report
    raise RetriesExhausted(made, *(best or (None, None)))


def acceptable(report: PartitionReport, target) -> bool:
    """Alpha reaches the target and sets meeting no strict condition stay few."""
    if not report.alpha_at_least(target):
        return False
    return len(report.uncovered) * target <= report.n_sets


def _rank(report: PartitionReport):
    return (report.max_crossing, len(report.uncovered))


# --- sample-size formulas ------------------------------------------------------------

def epsilon_sample_size(vc: int, eps, delta) -> int:
    eps, delta = Fraction(eps), Fraction(delta)
    if not (0 < eps < 1 and 0 < delta < 1) or vc < 1:
        raise ValueError("need 0 < eps, delta < 1 and vc >= 1")
    return math.ceil(8 * vc / float(eps * eps) * math.log(1 / float(eps * delta)))


def vc_dim_bound(n: int, b: int) -> int:
    if n < 1 or b < 2:
        raise ValueError("need n >= 1 and b >= 2")
    return math.ceil(200 * n * n * math.log2(b))


def shatter_to_vc(c, rho) -> int:
    c, rho = Fraction(c), Fraction(rho)
    if c * rho <= 1:
        raise ValueError("need C * rho > 1")
    return math.ceil(4 * float(rho) * math.log2(float(c * rho)))
