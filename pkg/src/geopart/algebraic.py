"""Points with a rational abscissa and a rational-or-algebraic ordinate."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from gmpy2 import mpq

from . import upoly as U
from .poly import MultiPoly, q_str, to_q
from .upoly import RootInterval

Ordinate = Union[mpq, RootInterval]


@dataclass(frozen=True)
class AlgebraicPoint:
    """(x, y) with x rational and y either rational or an isolated real root.

    When y is a RootInterval its defining polynomial is a factor of some
    bivariate polynomial specialized at x, so the point is pinned down exactly.
    """

    x: mpq
    y: Ordinate

    @classmethod
    def rational(cls, x, y) -> "AlgebraicPoint":
        return cls(to_q(x), to_q(y))

    @property
    def is_rational(self) -> bool:
        return not isinstance(self.y, RootInterval) or self.y.is_rational

    def y_value(self):
        """Exact rational ordinate; only valid when ``is_rational``."""
        return self.y.lo if isinstance(self.y, RootInterval) else self.y

    def approx(self, width=mpq(1, 2**20)) -> tuple[mpq, mpq]:
        """A rational point within `width` of this one (exact if rational)."""
        if isinstance(self.y, RootInterval):
            return self.x, self.y.refine(width).approx()
        return self.x, self.y

    def compare_y(self, other_y: Ordinate) -> int:
        """sign(self.y - other_y), exactly."""
        return compare_ordinates(self.y, other_y)

    def to_json(self) -> dict:
        if isinstance(self.y, RootInterval) and not self.y.is_rational:
            y = [q_str(self.y.lo), q_str(self.y.hi)]
        else:
            y = q_str(self.y_value())
        return {"x": q_str(self.x), "y": y}


def compare_ordinates(a: Ordinate, b: Ordinate) -> int:
    ar = not isinstance(a, RootInterval)
    br = not isinstance(b, RootInterval)
    if ar and br:
        return U.sign(a - b)
    if ar:
        return U.compare_rational(a, b)[0]
    if br:
        return -U.compare_rational(b, a)[0]
    return U.compare_roots(a, b)


def sign_of_upoly(p: tuple, y: Ordinate) -> int:
    """Sign of a univariate polynomial at a rational or algebraic value."""
    if isinstance(y, RootInterval):
        return U.sign_at_root(p, y)[0]
    return U.sign(U.evaluate(p, y))


def sign_at(p: MultiPoly, pt: AlgebraicPoint) -> int:
    """Exact sign of a bivariate polynomial at pt; zero is certified by a gcd test."""
    if p.num_vars != 2:
        raise ValueError("sign_at expects a bivariate polynomial")
    return sign_of_upoly(p.at_x(pt.x), pt.y)
