"""Leading-order eigenvalue branches for sigma = 2, tau = 1.

Each table row lists the asymptotic form of the four roots of the
characteristic quartic as ``mu -> oo`` inside one region.  A branch is either a
conjugate pair ``-a mu^p +- i b mu^q`` or a real root ``-a mu^p``; exponents are
affine in ``(alpha, beta, gamma)``.

``TABLE_INERTIAL`` (m = 1) and ``TABLE_NONINERTIAL`` (m = 0) hold the rows as
printed.  ``ERRATA`` overrides individual printed constants that disagree with
the computed spectrum; ``row(label)`` applies them unless ``errata=False``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .atlas import ParameterPoint, RegionLabel
from .quartic import solve_cubic

SQ2 = math.sqrt(2.0)
F = Fraction


@dataclass(frozen=True)
class Exponent:
    """``const + a*alpha + b*beta + g*gamma``."""

    const: Fraction = F(0)
    a: Fraction = F(0)
    b: Fraction = F(0)
    g: Fraction = F(0)

    def at(self, point: ParameterPoint) -> Fraction:
        return self.const + self.a * point.alpha + self.b * point.beta + self.g * point.gamma_eff

    def is_zero(self) -> bool:
        return self.const == self.a == self.b == self.g == 0


def E(const=0, a=0, b=0, g=0) -> Exponent:
    return Exponent(F(const), F(a), F(b), F(g))


ZERO = E()


@dataclass(frozen=True)
class Branch:
    """``re_coef * mu^re_exp +- i im_coef * mu^im_exp`` (one root if ``im_coef == 0``)."""

    re_coef: float
    re_exp: Exponent
    im_coef: float = 0.0
    im_exp: Exponent = ZERO

    @property
    def is_pair(self) -> bool:
        return self.im_coef != 0

    def values(self, point: ParameterPoint, mu: float) -> list[complex]:
        re = self.re_coef * mu ** float(self.re_exp.at(point))
        if not self.is_pair:
            return [complex(re, 0.0)]
        im = self.im_coef * mu ** float(self.im_exp.at(point))
        return [complex(re, im), complex(re, -im)]


def pair(re_coef, re_exp, im_coef, im_exp) -> Branch:
    return Branch(float(re_coef), re_exp, float(im_coef), im_exp)


def real(re_coef, re_exp) -> Branch:
    return Branch(float(re_coef), re_exp)


@functools.lru_cache(maxsize=1)
def p234_constants() -> tuple[float, float, float]:
    """Roots ``j1 < j2 < j3`` of ``j^3 + 29 j^2 + 115 j - 81 = 0``."""
    roots = solve_cubic(29.0, 115.0, -81.0)
    return tuple(sorted(r.real for r in roots))


def _p234_row() -> tuple:
    j1, j2, j3 = p234_constants()
    s1, s2, s3 = math.sqrt(-j1), math.sqrt(-j2), math.sqrt(j3)
    return (pair(-(1 - s3) / 4, ZERO, (s1 + s2) / 4, ZERO),
            pair(-(1 + s3) / 4, ZERO, (s1 - s2) / 4, ZERO))


HALF_1MG = E(F(1, 2), g=F(-1, 2))  # (1 - gamma) / 2
HALF_B = E(b=F(1, 2))

R = RegionLabel
TABLE_INERTIAL: dict[RegionLabel, tuple] = {
    R.T1: (pair(-F(1, 2), E(0, -2, 1, 1), 1, E(0, 1, 0, F(-1, 2))),
           pair(-F(1, 2), ZERO, SQ2, E(F(1, 2), -1, F(1, 2)))),
    R.T2: (pair(-F(1, 8), E(-2, 2, 1, 1), SQ2, HALF_1MG),
           pair(-F(1, 2), ZERO, 1, HALF_B)),
    R.T3: (pair(-F(1, 2), ZERO, 1, HALF_B),
           pair(-F(1, 2), E(0, 2, -1, -1), SQ2, HALF_1MG)),
    R.T4: (pair(-F(1, 2), E(0, -2, 1, 1), 1, E(0, 1, 0, F(-1, 2))),
           real(-2, E(1, -2, 1)),
           real(-1, ZERO)),
    R.F12: (pair(-F(1, 18), E(-1, 0, 1, 1), math.sqrt(3), HALF_1MG),
            pair(-F(1, 2), ZERO, math.sqrt(6) / 3, HALF_B)),
    R.F13: (pair(-F(1, 4), ZERO, SQ2, HALF_B),
            pair(-F(1, 4), ZERO, 1, HALF_1MG)),
    R.F14: (pair(-F(1, 2), E(-1, g=1), 1, E(F(1, 2), 0, F(1, 2), F(-1, 2))),
            pair(-F(1, 2), ZERO, math.sqrt(7) / 2, ZERO)),
    R.F2: (pair(-F(1, 8), E(-2, 2, 0, 1), SQ2, HALF_1MG),
           pair(-F(1, 2), ZERO, math.sqrt(3) / 2, ZERO)),
    R.F23: (pair(-F(1, 2), E(-1, 2), SQ2, HALF_1MG),
            pair(-F(1, 2), ZERO, 1, HALF_1MG)),
    R.L123: (pair(-0.25 + SQ2 / 8, ZERO, math.sqrt(2 + SQ2), HALF_1MG),
             pair(-0.25 - SQ2 / 8, ZERO, math.sqrt(2 - SQ2), HALF_1MG)),
    R.L124: (pair(-F(1, 18), E(-1, g=1), math.sqrt(3), HALF_1MG),
             pair(-F(1, 2), ZERO, math.sqrt(15) / 6, ZERO)),
    R.L2: (pair(-F(1, 6), E(-1, 2), SQ2, ZERO),
           pair(-F(1, 2), ZERO, math.sqrt(3) / 2, ZERO)),
    R.L34: (pair(-F(1, 4), ZERO, SQ2, HALF_B),
            pair(-F(1, 4), ZERO, math.sqrt(15) / 4, ZERO)),
    R.P234: _p234_row(),
}

HALF_E = E(F(1, 2))
TABLE_NONINERTIAL: dict[RegionLabel, tuple] = {
    R.T1s: (pair(-F(1, 2), E(0, -2, 1), 1, E(0, 1)),
            pair(-F(1, 2), ZERO, SQ2, E(F(1, 2), -1, F(1, 2)))),
    R.T2s: (pair(-F(1, 8), E(-2, 2, 1), SQ2, HALF_E),
            pair(-F(1, 2), ZERO, 1, HALF_B)),
    R.T4s: (pair(-F(1, 2), E(0, -2, 1), 1, E(0, 1)),
            real(-2, E(1, -2, 1)),
            real(-1, ZERO)),
    R.F12s: (pair(-F(1, 18), E(-1, 0, 1), math.sqrt(3), HALF_E),
             pair(-F(1, 2), ZERO, math.sqrt(6) / 3, HALF_B)),
    R.F14s: (pair(-F(1, 2), E(-1), 1, E(F(1, 2), 0, F(1, 2))),
             pair(-F(1, 2), ZERO, math.sqrt(7) / 2, ZERO)),
    R.F2s: (pair(-F(1, 8), E(-2, 2), 1, HALF_E),
            pair(-F(1, 2), ZERO, math.sqrt(3) / 2, ZERO)),
    R.L124s: (pair(-F(1, 18), E(-1), math.sqrt(3), HALF_E),
              pair(-F(1, 2), ZERO, math.sqrt(15) / 6, ZERO)),
    R.L23s: (pair(-F(1, 2), E(-1, 2), SQ2, HALF_E),
             pair(-F(1, 2), ZERO, 1, HALF_E)),
    R.P123s: (pair(-0.25 + 1 / (4 * SQ2), ZERO, math.sqrt(2 + SQ2), HALF_E),
              pair(-0.25 - 1 / (4 * SQ2), ZERO, math.sqrt(2 - SQ2), HALF_E)),
}

# (label, branch index) -> corrected branch.  The printed F2s pair has
# imaginary coefficient 1; the dominant balance lam^2 ~ -sigma*mu gives sqrt(2),
# as in the neighbouring T2s and L23s rows.
ERRATA: dict[tuple[RegionLabel, int], Branch] = {
    (R.F2s, 0): replace(TABLE_NONINERTIAL[R.F2s][0], im_coef=SQ2),
}


class UnsupportedRegion(KeyError):
    """No table row exists for the requested region / inertia combination."""


def table_for(inertial: bool) -> dict:
    return TABLE_INERTIAL if inertial else TABLE_NONINERTIAL


def row(label: RegionLabel, errata: bool = True, overrides: dict | None = None) -> tuple:
    """Branches of one table row.

    ``overrides`` maps branch index to a replacement ``Branch`` (used for fault
    injection in tests).
    """
    label = RegionLabel(label)
    if label in TABLE_INERTIAL:
        branches = list(TABLE_INERTIAL[label])
    elif label in TABLE_NONINERTIAL:
        branches = list(TABLE_NONINERTIAL[label])
    else:
        raise UnsupportedRegion(f"no table row for region {label.value}")
    if errata:
        for (lab, i), br in ERRATA.items():
            if lab == label:
                branches[i] = br
    for i, br in (overrides or {}).items():
        branches[i] = br
    return tuple(branches)


def constant_only(label: RegionLabel) -> bool:
    """True when every branch of the row is independent of ``mu``."""
    return all(br.re_exp.is_zero() and br.im_exp.is_zero() for br in row(label))
