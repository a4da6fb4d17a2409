"""Sparse multivariate polynomials with exact rational coefficients."""
from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from . import upoly as U


def to_q(value) -> mpq:
    """Parse an int, Fraction, mpq or 'p/q' string into an mpq."""
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


def q_str(value) -> str:
    return str(mpq(value))


class MultiPoly:
    """Immutable sparse polynomial in ``num_vars`` variables.

    ``terms`` maps exponent tuples to nonzero rational coefficients.  Variable 0
    is x and variable 1 is y; range-search templates use four variables.
    """

    def __init__(self, num_vars: int, terms: Mapping[tuple, object] | None = None):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for {num_vars} variables")
            c = to_q(c)
            if c != 0:
                clean[exp] = clean.get(exp, 0) + c
                if clean[exp] == 0:
                    del clean[exp]
        self.num_vars = num_vars
        self.terms = clean

    # construction -----------------------------------------------------------
    @classmethod
    def const(cls, c, num_vars: int = 2) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: c})

    @classmethod
    def var(cls, i: int, num_vars: int = 2) -> "MultiPoly":
        e = [0] * num_vars
        e[i] = 1
        return cls(num_vars, {tuple(e): 1})

    @classmethod
    def from_upoly(cls, p: Sequence, var: int = 0, num_vars: int = 1) -> "MultiPoly":
        terms = {}
        for k, c in enumerate(p):
            e = [0] * num_vars
            e[var] = k
            terms[tuple(e)] = c
        return cls(num_vars, terms)

    @classmethod
    def from_terms(cls, items: Iterable[Mapping], num_vars: int | None = None) -> "MultiPoly":
        """Parse the JSON term-list form ``[{"coef": "p/q", "exp": [..]}, ...]``."""
        items = list(items)
        if num_vars is None:
            num_vars = len(items[0]["exp"]) if items else 2
        terms: dict = {}
        for it in items:
            exp = tuple(int(e) for e in it["exp"])
            if len(exp) != num_vars:
                raise ValueError("inconsistent exponent lengths")
            terms[exp] = terms.get(exp, 0) + to_q(it["coef"])
        return cls(num_vars, terms)

    def to_terms(self) -> list[dict]:
        return [{"coef": q_str(self.terms[e]), "exp": list(e)} for e in sorted(self.terms)]

    # basic queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = self.__dict__["_hash"] = hash((self.num_vars, frozenset(self.terms.items())))
        return h

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        names = "xyzw" if self.num_vars <= 4 else [f"x{i}" for i in range(self.num_vars)]
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(
                names[i] + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k
            )
            if not mono:
                parts.append(q_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{q_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if self.num_vars != other.num_vars:
            raise ValueError("arity mismatch")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(other, self.num_vars)

    def __add__(self, other) -> "MultiPoly":
        other = self._lift(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return MultiPoly(self.num_vars, t)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._lift(other) - self

    def __mul__(self, other) -> "MultiPoly":
        other = self._lift(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.num_vars, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        out = MultiPoly.const(1, self.num_vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "MultiPoly":
        c = to_q(c)
        return MultiPoly(self.num_vars, {e: v * c for e, v in self.terms.items()})

    def diff(self, var: int) -> "MultiPoly":
        t = {}
        for e, c in self.terms.items():
            if e[var]:
                e2 = list(e)
                e2[var] -= 1
                t[tuple(e2)] = c * e[var]
        return MultiPoly(self.num_vars, t)

    def leading_term(self) -> tuple[tuple, mpq]:
        """Lexicographically largest exponent and its coefficient."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient self / other; raises ArithmeticError when not exact."""
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        le, lc = other.leading_term()
        rem = self
        quo: dict = {}
        while not rem.is_zero():
            e, c = rem.leading_term()
            d = tuple(a - b for a, b in zip(e, le))
            if any(k < 0 for k in d):
                raise ArithmeticError("inexact multivariate division")
            coef = c / lc
            quo[d] = coef
            rem = rem - other * MultiPoly(self.num_vars, {d: coef})
        return MultiPoly(self.num_vars, quo)

    # evaluation -------------------------------------------------------------
    def eval(self, at: Sequence) -> mpq:
        if len(at) != self.num_vars:
            raise ValueError(f"expected {self.num_vars} coordinates, got {len(at)}")
        pt = [to_q(a) for a in at]
        total = mpq(0)
        for e, c in self.terms.items():
            v = c
            for a, k in zip(pt, e):
                if k:
                    v *= a ** k
            total += v
        return total

    def substitute(self, values: Mapping[int, object]) -> "MultiPoly":
        """Fix some variables to rationals; remaining variables keep their order."""
        keep = [i for i in range(self.num_vars) if i not in values]
        if not keep:
            raise ValueError("substitute would leave no variables; use eval")
        vals = {i: to_q(v) for i, v in values.items()}
        t: dict = {}
        for e, c in self.terms.items():
            v = c
            for i, a in vals.items():
                if e[i]:
                    v *= a ** e[i]
            ne = tuple(e[i] for i in keep)
            t[ne] = t.get(ne, 0) + v
        return MultiPoly(len(keep), t)

    # dense views (cached; instances are never mutated) -----------------------
    @cached_property
    def upoly(self) -> tuple:
        """Dense coefficients of a univariate polynomial."""
        if self.num_vars != 1:
            raise ValueError("not univariate")
        n = self.degree_in(0)
        c = [mpq(0)] * (n + 1)
        for (k,), v in self.terms.items():
            c[k] = v
        return U.make(c)

    @cached_property
    def ycoeffs(self) -> tuple:
        """Bivariate view: tuple over powers of y of dense x-polynomials."""
        if self.num_vars != 2:
            raise ValueError("not bivariate")
        dy = self.degree_in(1)
        rows = [dict() for _ in range(max(dy + 1, 0))]
        for (i, j), c in self.terms.items():
            rows[j][i] = c
        out = []
        for r in rows:
            n = max(r, default=-1)
            out.append(U.make(r.get(i, 0) for i in range(n + 1)))
        return tuple(out)

    def at_x(self, x0) -> tuple:
        """Univariate polynomial in y obtained by fixing x = x0."""
        return U.make(U.evaluate(c, x0) for c in self.ycoeffs)

    def at_y(self, y0) -> tuple:
        """Univariate polynomial in x obtained by fixing y = y0."""
        out = ()
        p = U.ONE
        for c in self.ycoeffs:
            if c:
                out = U.add(out, U.scale(c, p))
            p = p * y0
        return out

    @classmethod
    def from_ycoeffs(cls, rows: Sequence[Sequence]) -> "MultiPoly":
        t = {}
        for j, r in enumerate(rows):
            for i, c in enumerate(r):
                if c != 0:
                    t[(i, j)] = c
        return cls(2, t)


def x_poly(p: Sequence) -> MultiPoly:
    """Embed a univariate x-polynomial as a bivariate polynomial."""
    return MultiPoly.from_upoly(p, var=0, num_vars=2)


X = MultiPoly.var(0, 2)
Y = MultiPoly.var(1, 2)
