"""Integer polynomial weights for strand-count bookkeeping.

A weight is either a concrete nonnegative integer or a polynomial with
integer coefficients in the magnitude variables m(i, j) = |t_i^j|.  Signs of
twist numbers never enter a weight; they only select over/under flags, so
every weight evaluates to a nonnegative integer on any actual twist grid.

Polynomials are kept in a canonical sparse form (sorted monomial tuples), so
structural equality of two independently built expressions is plain `==`.
Ordering queries ("is this weight strictly larger than that one for every
grid with all magnitudes >= lo?") are answered exactly by re-expanding the
difference around the lower bound: substituting m = lo + u termwise gives a
polynomial in u >= 0 whose coefficient signs decide the question whenever
they agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Iterable, Mapping

from .errors import AmbiguousOrder

# A monomial maps variable (i, j) -> exponent, stored as a sorted tuple.
Monomial = tuple[tuple[tuple[int, int], int], ...]


def _mul_monomials(a: Monomial, b: Monomial) -> Monomial:
    d = dict(a)
    for var, e in b:
        d[var] = d.get(var, 0) + e
    return tuple(sorted(d.items()))


@dataclass(frozen=True)
class Weight:
    """Sparse integer polynomial in magnitude variables."""

    terms: tuple[tuple[Monomial, int], ...]

    # -- construction -------------------------------------------------

    @staticmethod
    def const(c: int) -> "Weight":
        return Weight(((tuple(), int(c)),)) if c else Weight(tuple())

    @staticmethod
    def magnitude(i: int, j: int) -> "Weight":
        return Weight((((((i, j), 1),), 1),))

    @staticmethod
    def _from_dict(d: Mapping[Monomial, int]) -> "Weight":
        return Weight(tuple(sorted((m, c) for m, c in d.items() if c)))

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "Weight":
        other = _coerce(other)
        d = dict(self.terms)
        for m, c in other.terms:
            d[m] = d.get(m, 0) + c
        return Weight._from_dict(d)

    __radd__ = __add__

    def __sub__(self, other) -> "Weight":
        return self + _coerce(other) * -1

    def __rsub__(self, other) -> "Weight":
        return _coerce(other) - self

    def __mul__(self, other) -> "Weight":
        other = _coerce(other)
        d: dict[Monomial, int] = {}
        for ma, ca in self.terms:
            for mb, cb in other.terms:
                m = _mul_monomials(ma, mb)
                d[m] = d.get(m, 0) + ca * cb
        return Weight._from_dict(d)

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    # -- queries -------------------------------------------------------

    @property
    def is_const(self) -> bool:
        return all(m == tuple() for m, _ in self.terms)

    def const_value(self) -> int:
        if not self.is_const:
            raise ValueError(f"not a constant weight: {self}")
        return self.terms[0][1] if self.terms else 0

    def variables(self) -> set[tuple[int, int]]:
        return {v for m, _ in self.terms for v, _ in m}

    def evaluate(self, magnitudes: Mapping[tuple[int, int], int]) -> int:
        total = 0
        for m, c in self.terms:
            prod = c
            for var, e in m:
                prod *= magnitudes[var] ** e
            total += prod
        return total

    def shifted(self, lo: int) -> "Weight":
        """Re-expand around m = lo: returns the polynomial in u = m - lo."""
        out: dict[Monomial, int] = {}
        for m, c in self.terms:
            # expand prod_v (lo + u_v)^e_v one variable at a time
            partial: dict[Monomial, int] = {tuple(): c}
            for var, e in m:
                nxt: dict[Monomial, int] = {}
                for k in range(e + 1):
                    coeff = comb(e, k) * lo ** (e - k)
                    mono = (((var, k),) if k else tuple())
                    for pm, pc in partial.items():
                        key = _mul_monomials(pm, mono)
                        nxt[key] = nxt.get(key, 0) + pc * coeff
                partial = nxt
            for pm, pc in partial.items():
                out[pm] = out.get(pm, 0) + pc
        return Weight._from_dict(out)

    def sign_over(self, lo: int) -> int | None:
        """Sign of the weight over the box {all magnitudes >= lo}.

        Returns +1 / -1 / 0 when decidable from the shifted expansion,
        None when coefficient signs are mixed.
        """
        sh = self.shifted(lo).terms
        if not sh:
            return 0
        # Strictness needs the constant term: with it zero the polynomial
        # vanishes at the box corner even if every other coefficient agrees.
        const = dict(sh).get(tuple(), 0)
        if const > 0 and all(c >= 0 for _, c in sh):
            return 1
        if const < 0 and all(c <= 0 for _, c in sh):
            return -1
        return None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            factors = [f"m({i},{j})" + (f"^{e}" if e > 1 else "") for (i, j), e in m]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


def _coerce(x) -> Weight:
    if isinstance(x, Weight):
        return x
    if isinstance(x, int):
        return Weight.const(x)
    raise TypeError(f"cannot treat {x!r} as a weight")


ZERO = Weight.const(0)
ONE = Weight.const(1)


def compare(a: Weight | int, b: Weight | int, lo: int = 2) -> str:
    """Order two weights over the box {magnitudes >= lo}: '<', '>', or '='.

    Raises AmbiguousOrder when the shifted expansion of the difference has
    mixed coefficient signs, i.e. the order genuinely depends on where in
    the box you evaluate (or is beyond this sufficient criterion).
    """
    a, b = _coerce(a), _coerce(b)
    d = a - b
    if d.is_const:
        v = d.const_value()
        return "=" if v == 0 else (">" if v > 0 else "<")
    s = d.sign_over(lo)
    if s == 0:
        return "="
    if s == 1:
        return ">"
    if s == -1:
        return "<"
    raise AmbiguousOrder(f"cannot order {a} vs {b} over magnitudes >= {lo}")


def magnitude_grid(spec) -> dict[tuple[int, int], int]:
    """Magnitude assignment |t_i^j| read off a concrete twist spec."""
    return {key: abs(t) for key, t in spec.twists.items()}
