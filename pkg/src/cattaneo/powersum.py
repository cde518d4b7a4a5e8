"""Finite sums ``sum_k c_k mu**e_k`` with exact rational exponents and coefficients.

Combinations of characteristic-polynomial coefficients such as
``c4*c1**2 - c1*c2*c3 + c0*c3**2`` cancel massively at large ``mu``.  Doing the
algebra on exact monomials first removes the cancelling terms before any
floating-point evaluation happens.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Union

Scalar = Union[int, Fraction]


class PowerSum:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Fraction, Fraction] | None = None):
        clean: dict[Fraction, Fraction] = {}
        for e, c in (terms or {}).items():
            if c != 0:
                clean[Fraction(e)] = Fraction(c)
        self.terms = clean

    @classmethod
    def monomial(cls, coeff: Scalar, exponent: Scalar) -> "PowerSum":
        return cls({Fraction(exponent): Fraction(coeff)})

    @classmethod
    def constant(cls, coeff: Scalar) -> "PowerSum":
        return cls.monomial(coeff, 0)

    def _coerce(self, other) -> "PowerSum":
        return other if isinstance(other, PowerSum) else PowerSum.constant(other)

    def __add__(self, other) -> "PowerSum":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return PowerSum(out)

    __radd__ = __add__

    def __neg__(self) -> "PowerSum":
        return PowerSum({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "PowerSum":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "PowerSum":
        return self._coerce(other) - self

    def __mul__(self, other) -> "PowerSum":
        other = self._coerce(other)
        out: dict[Fraction, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return PowerSum(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PowerSum":
        out = PowerSum.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, PowerSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{c}*mu^{e}" for e, c in sorted(self.terms.items(), reverse=True)]
        return " + ".join(parts)

    def leading(self) -> tuple[Fraction, Fraction]:
        """(exponent, coefficient) of the dominant term as ``mu -> oo``."""
        if not self.terms:
            return Fraction(0), Fraction(0)
        e = max(self.terms)
        return e, self.terms[e]

    def __call__(self, mu: float) -> float:
        if not self.terms:
            return 0.0
        logmu = math.log(mu)
        return math.fsum(float(c) * math.exp(float(e) * logmu) for e, c in self.terms.items())
