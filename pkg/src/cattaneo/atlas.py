"""Parameter-region atlas and predicted stability verdicts.

A parameter point ``(alpha, beta, gamma; m, sigma, tau)`` describes one abstract
thermoelastic system with Cattaneo heat flux.  The exponent cube is partitioned
into open regions (``T*``), planes (``F*``), lines (``L*``) and points (``P*``);
each piece carries a known long-time behaviour.  All boundary tests run on
``fractions.Fraction`` values so that points such as ``alpha = 1/2`` land on the
plane and never in a neighbouring open region.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
import numbers
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

Number = Union[int, float, str, Fraction]

HALF = Fraction(1, 2)


class DomainError(ValueError):
    """A parameter lies outside the admissible region."""


def as_fraction(value: Number) -> Fraction:
    """Convert to an exact rational.

    Floats go through their shortest decimal repr, so ``0.6`` becomes ``3/5``
    rather than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a parameter value")
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, numbers.Real):
        value = float(value)
        if not math.isfinite(value):
            raise DomainError(f"non-finite parameter {value!r}")
        return Fraction(repr(value))
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class ParameterPoint:
    """One abstract system.  Every field is stored as an exact ``Fraction``."""

    alpha: Fraction
    beta: Fraction
    gamma: Optional[Fraction] = None
    m: Fraction = Fraction(1)
    sigma: Fraction = Fraction(2)
    tau: Fraction = Fraction(1)

    def __post_init__(self):
        for name in ("alpha", "beta", "m", "sigma", "tau"):
            object.__setattr__(self, name, as_fraction(getattr(self, name)))
        if self.gamma is not None:
            object.__setattr__(self, "gamma", as_fraction(self.gamma))
        if not (0 <= self.alpha <= 1 and 0 <= self.beta <= 1):
            raise DomainError(f"alpha, beta must lie in [0, 1]: got {self.alpha}, {self.beta}")
        if self.m < 0:
            raise DomainError(f"m must be >= 0, got {self.m}")
        if self.sigma <= 0 or self.tau <= 0:
            raise DomainError("sigma and tau must be strictly positive")
        if self.m > 0:
            if self.gamma is None:
                raise DomainError("gamma is required when m > 0")
            if not (0 < self.gamma <= 1):
                raise DomainError(f"gamma must lie in (0, 1], got {self.gamma}")

    @classmethod
    def make(cls, alpha, beta, gamma=None, m=1, sigma=2, tau=1) -> "ParameterPoint":
        if as_fraction(m) == 0:
            gamma = None
        return cls(alpha, beta, gamma, m, sigma, tau)

    @property
    def inertial(self) -> bool:
        return self.m > 0

    @property
    def gamma_eff(self) -> Fraction:
        """Exponent of the inertial weight; irrelevant (taken as 0) when m = 0."""
        return self.gamma if (self.inertial and self.gamma is not None) else Fraction(0)

    def as_dict(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "beta": str(self.beta),
            "gamma": None if self.gamma is None else str(self.gamma),
            "m": str(self.m),
            "sigma": str(self.sigma),
            "tau": str(self.tau),
        }


class RegionLabel(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"
    T3 = "T3"
    T4 = "T4"
    F12 = "F12"
    F13 = "F13"
    F14 = "F14"
    F2 = "F2"
    F23 = "F23"
    L123 = "L123"
    L124 = "L124"
    L2 = "L2"
    L34 = "L34"
    P234 = "P234"
    T1s = "T1s"
    T2s = "T2s"
    T4s = "T4s"
    F12s = "F12s"
    F14s = "F14s"
    F2s = "F2s"
    L124s = "L124s"
    L23s = "L23s"
    P123s = "P123s"
    Unclassified = "Unclassified"

    def __str__(self) -> str:
        return self.value


INERTIAL_LABELS = tuple(RegionLabel[n] for n in (
    "T1", "T2", "T3", "T4", "F12", "F13", "F14", "F2", "F23",
    "L123", "L124", "L2", "L34", "P234"))
NONINERTIAL_LABELS = tuple(RegionLabel[n] for n in (
    "T1s", "T2s", "T4s", "F12s", "F14s", "F2s", "L124s", "L23s", "P123s"))


class VerdictKind(str, enum.Enum):
    Exponential = "Exponential"
    Polynomial = "Polynomial"
    Unknown = "Unknown"
    OutOfTheory = "OutOfTheory"
    IllPosedFramework = "IllPosedFramework"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class StabilityVerdict:
    kind: VerdictKind
    region: RegionLabel
    order: Optional[Fraction] = None

    def __post_init__(self):
        if (self.order is not None) != (self.kind is VerdictKind.Polynomial):
            raise ValueError("order is present exactly for polynomial verdicts")
        if self.order is not None and self.order <= 0:
            raise ValueError(f"polynomial order must be positive, got {self.order}")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "region": self.region.value,
            "order": None if self.order is None else str(self.order),
        }


class _Cmp:
    """Exact comparisons with an optional equality band of half-width ``eps``."""

    def __init__(self, eps: Number = 0):
        self.eps = as_fraction(eps)
        if self.eps < 0:
            raise ValueError("eps must be non-negative")

    def eq(self, a, b) -> bool:
        return abs(a - b) <= self.eps

    def lt(self, a, b) -> bool:
        return a - b < -self.eps

    def le(self, a, b) -> bool:
        return a - b <= self.eps


def _check_unit(name: str, value: Fraction, *, open_low: bool = False) -> None:
    ok = (0 < value <= 1) if open_low else (0 <= value <= 1)
    if not ok:
        bounds = "(0, 1]" if open_low else "[0, 1]"
        raise DomainError(f"{name} = {value} outside {bounds}")


def _inertial_predicates(a, b, g, c: _Cmp) -> dict:
    lt, le, eq = c.lt, c.le, c.eq
    h = HALF
    return {
        RegionLabel.T1: lt(h, a) and lt(a, (b + 1) / 2) and lt(0, b) and le(b, 1)
        and lt(0, g) and lt(g, 2 * a - b),
        RegionLabel.T2: le(0, a) and lt(a, h) and lt(0, b) and lt(b, 1)
        and lt(0, g) and lt(g, 1 - b),
        RegionLabel.T3: le(0, a) and lt(a, (b + g) / 2) and lt(1 - g, b) and le(b, 1)
        and lt(0, g) and le(g, 1),
        RegionLabel.T4: lt((b + 1) / 2, a) and le(a, 1) and le(0, b) and lt(b, 1)
        and lt(0, g) and le(g, 1),
        RegionLabel.F12: eq(a, h) and lt(0, b) and lt(b, 1 - g) and lt(0, g) and lt(g, 1),
        RegionLabel.F13: eq(a, (b + g) / 2) and lt(1 - g, b) and le(b, 1)
        and lt(0, g) and lt(g, 1),
        RegionLabel.F14: eq(a, (b + 1) / 2) and lt(0, b) and le(b, 1) and lt(0, g) and lt(g, 1),
        RegionLabel.F2: le(0, a) and lt(a, h) and eq(b, 0) and lt(0, g) and lt(g, 1),
        RegionLabel.F23: le(0, a) and lt(a, h) and eq(b, 1 - g) and lt(0, g) and lt(g, 1),
        RegionLabel.L123: eq(a, h) and eq(b, 1 - g) and lt(0, g) and lt(g, 1),
        RegionLabel.L124: eq(a, h) and eq(b, 0) and lt(0, g) and lt(g, 1),
        RegionLabel.L2: le(0, a) and lt(a, h) and eq(b, 0) and eq(g, 1),
        RegionLabel.L34: eq(a, (b + 1) / 2) and lt(0, b) and le(b, 1) and eq(g, 1),
        RegionLabel.P234: eq(a, h) and eq(b, 0) and eq(g, 1),
    }


def _noninertial_predicates(a, b, c: _Cmp) -> dict:
    lt, le, eq = c.lt, c.le, c.eq
    h = HALF
    return {
        RegionLabel.T1s: lt(h, a) and lt(a, (b + 1) / 2) and lt(0, b) and le(b, 1),
        RegionLabel.T2s: le(0, a) and lt(a, h) and lt(0, b) and lt(b, 1),
        RegionLabel.T4s: lt((b + 1) / 2, a) and le(a, 1) and le(0, b) and lt(b, 1),
        RegionLabel.F12s: eq(a, h) and lt(0, b) and lt(b, 1),
        RegionLabel.F14s: eq(a, (b + 1) / 2) and lt(0, b) and le(b, 1),
        RegionLabel.F2s: le(0, a) and lt(a, h) and eq(b, 0),
        RegionLabel.L124s: eq(a, h) and eq(b, 0),
        RegionLabel.L23s: le(0, a) and lt(a, h) and eq(b, 1),
        RegionLabel.P123s: eq(a, h) and eq(b, 1),
    }


def _pick(preds: dict) -> RegionLabel:
    hits = [label for label, ok in preds.items() if ok]
    if len(hits) > 1:
        # only reachable with a wide equality band
        raise DomainError(f"overlapping regions {[str(h) for h in hits]}; reduce eps")
    return hits[0] if hits else RegionLabel.Unclassified


def inertial_memberships(alpha, beta, gamma, eps: Number = 0) -> list[RegionLabel]:
    """All inertial labels whose predicate holds (disjointness diagnostics)."""
    a, b, g = map(as_fraction, (alpha, beta, gamma))
    return [k for k, v in _inertial_predicates(a, b, g, _Cmp(eps)).items() if v]


def noninertial_memberships(alpha, beta, eps: Number = 0) -> list[RegionLabel]:
    a, b = map(as_fraction, (alpha, beta))
    return [k for k, v in _noninertial_predicates(a, b, _Cmp(eps)).items() if v]


def classify_inertial(alpha: Number, beta: Number, gamma: Number, eps: Number = 0) -> RegionLabel:
    """Label of ``(alpha, beta, gamma)`` in the partition used when ``m > 0``.

    Returns ``RegionLabel.Unclassified`` when no subregion predicate holds.
    """
    a, b, g = map(as_fraction, (alpha, beta, gamma))
    _check_unit("alpha", a)
    _check_unit("beta", b)
    _check_unit("gamma", g, open_low=True)
    return _pick(_inertial_predicates(a, b, g, _Cmp(eps)))


def classify_noninertial(alpha: Number, beta: Number, eps: Number = 0) -> RegionLabel:
    """Label of ``(alpha, beta)`` in the partition used when ``m = 0``."""
    a, b = map(as_fraction, (alpha, beta))
    _check_unit("alpha", a)
    _check_unit("beta", b)
    return _pick(_noninertial_predicates(a, b, _Cmp(eps)))


def classify(point: ParameterPoint, eps: Number = 0) -> RegionLabel:
    if point.inertial:
        return classify_inertial(point.alpha, point.beta, point.gamma, eps)
    return classify_noninertial(point.alpha, point.beta, eps)


def wellposed(point: ParameterPoint) -> bool:
    """True iff ``beta >= 2 alpha - 1`` (zero lies in the resolvent set)."""
    return point.beta >= 2 * point.alpha - 1


V1 = frozenset({RegionLabel.T1, RegionLabel.F12, RegionLabel.F14, RegionLabel.L124})
V2 = frozenset({RegionLabel.T2, RegionLabel.F2})
V3 = frozenset({RegionLabel.T3, RegionLabel.F23})
V1S = frozenset({RegionLabel.T1s, RegionLabel.F12s, RegionLabel.F14s, RegionLabel.L124s})
V2S = frozenset({RegionLabel.T2s, RegionLabel.F2s, RegionLabel.L23s})
EXPONENTIAL = frozenset({RegionLabel.F13, RegionLabel.L123, RegionLabel.L34,
                         RegionLabel.P234, RegionLabel.P123s})


def k1(a, b, g) -> Fraction:
    return (2 * a - g) / (2 * (2 * a - b - g))


def k2(a, b, g) -> Fraction:
    return (1 - g) / (2 * (2 - 2 * a - b - g))


def k3(a, b, g) -> Fraction:
    return (1 - g) / (2 * (-2 * a + b + g))


def k1_star(a, b) -> Fraction:
    return a / (2 * a - b)


def k2_star(a, b) -> Fraction:
    return 1 / (2 * (2 - 2 * a - b))


def region_group(label: RegionLabel) -> Optional[str]:
    """Name of the polynomial-rate family containing ``label`` (``"V1"`` ...)."""
    for name, group in (("V1", V1), ("V2", V2), ("V3", V3), ("V1*", V1S), ("V2*", V2S)):
        if label in group:
            return name
    return None


def decay_order(point: ParameterPoint, eps: Number = 0) -> StabilityVerdict:
    """Predicted asymptotic behaviour of the semigroup at ``point``.

    Rates are exact ``Fraction`` values.  Points with ``beta < 2 alpha - 1``
    report ``IllPosedFramework`` (the T4 family lies entirely in that set).
    """
    region = classify(point, eps)
    if not wellposed(point):
        return StabilityVerdict(VerdictKind.IllPosedFramework, region)
    a, b, g = point.alpha, point.beta, point.gamma_eff
    order: Optional[Fraction] = None
    if region in V1:
        order = k1(a, b, g)
    elif region in V2:
        order = k2(a, b, g)
    elif region in V3:
        order = k3(a, b, g)
    elif region in V1S:
        order = k1_star(a, b)
    elif region in V2S:
        order = k2_star(a, b)
    elif region in EXPONENTIAL:
        return StabilityVerdict(VerdictKind.Exponential, region)
    elif region in (RegionLabel.T4, RegionLabel.T4s):
        return StabilityVerdict(VerdictKind.OutOfTheory, region)
    else:
        return StabilityVerdict(VerdictKind.Unknown, region)
    if order <= 0:
        # T3 with gamma = 1: the rate formula degenerates to zero
        return StabilityVerdict(VerdictKind.Unknown, region)
    return StabilityVerdict(VerdictKind.Polynomial, region, order)


# ---------------------------------------------------------------------------
# grid sampling and region representatives

@dataclass(frozen=True)
class AtlasRow:
    alpha: Fraction
    beta: Fraction
    gamma: Optional[Fraction]
    label: RegionLabel
    verdict: StabilityVerdict

    def csv_fields(self) -> list[str]:
        order = self.verdict.order
        return [
            _fmt_real(self.alpha),
            _fmt_real(self.beta),
            "" if self.gamma is None else _fmt_real(self.gamma),
            self.label.value,
            self.verdict.kind.value,
            "" if order is None else str(order.numerator),
            "" if order is None else str(order.denominator),
        ]


ATLAS_HEADER = ("alpha", "beta", "gamma", "label", "kind", "order_num", "order_den")


def _fmt_real(x: Fraction) -> str:
    return "%.17g" % float(x)


def _axis(n: int, open_low: bool = False) -> list[Fraction]:
    if n < 2:
        raise ValueError("grid resolution must be at least 2 per axis")
    if open_low:
        return [Fraction(i, n) for i in range(1, n + 1)]
    return [Fraction(i, n - 1) for i in range(n)]


def sample_atlas(resolution: int, gamma: Optional[Number] = None, m_flag: bool = True,
                 eps: Number = 0) -> Iterator[AtlasRow]:
    """Label every node of a uniform grid.

    With ``m_flag`` and no ``gamma`` the full cube is sampled (the gamma axis
    skips 0); with ``gamma`` given, a single slice; without ``m_flag`` the
    square of the non-inertial atlas.
    """
    axis = _axis(resolution)
    if not m_flag:
        gammas: list[Optional[Fraction]] = [None]
    elif gamma is None:
        gammas = _axis(resolution, open_low=True)
    else:
        gammas = [as_fraction(gamma)]
    for g in gammas:
        for a, b in itertools.product(axis, axis):
            point = ParameterPoint.make(a, b, g, m=1 if m_flag else 0)
            verdict = decay_order(point, eps)
            yield AtlasRow(a, b, g, verdict.region, verdict)


# free-coordinate parametrisations of each piece: free values -> (alpha, beta, gamma)
def _cube(a, b, g):
    return (a, b, g)


def _square(a, b):
    return (a, b, None)


_PARAM: dict[RegionLabel, tuple[int, Callable]] = {
    RegionLabel.T1: (3, _cube),
    RegionLabel.T2: (3, _cube),
    RegionLabel.T3: (3, _cube),
    RegionLabel.T4: (3, _cube),
    RegionLabel.F12: (2, lambda b, g: (HALF, b, g)),
    RegionLabel.F13: (2, lambda b, g: ((b + g) / 2, b, g)),
    RegionLabel.F14: (2, lambda b, g: ((b + 1) / 2, b, g)),
    RegionLabel.F2: (2, lambda a, g: (a, Fraction(0), g)),
    RegionLabel.F23: (2, lambda a, g: (a, 1 - g, g)),
    RegionLabel.L123: (1, lambda g: (HALF, 1 - g, g)),
    RegionLabel.L124: (1, lambda g: (HALF, Fraction(0), g)),
    RegionLabel.L2: (1, lambda a: (a, Fraction(0), Fraction(1))),
    RegionLabel.L34: (1, lambda b: ((b + 1) / 2, b, Fraction(1))),
    RegionLabel.P234: (0, lambda: (HALF, Fraction(0), Fraction(1))),
    RegionLabel.T1s: (2, _square),
    RegionLabel.T2s: (2, _square),
    RegionLabel.T4s: (2, _square),
    RegionLabel.F12s: (1, lambda b: (HALF, b, None)),
    RegionLabel.F14s: (1, lambda b: ((b + 1) / 2, b, None)),
    RegionLabel.F2s: (1, lambda a: (a, Fraction(0), None)),
    RegionLabel.L124s: (0, lambda: (HALF, Fraction(0), None)),
    RegionLabel.L23s: (1, lambda a: (a, Fraction(1), None)),
    RegionLabel.P123s: (0, lambda: (HALF, Fraction(1), None)),
}


def _label_of(coords: tuple) -> RegionLabel:
    a, b, g = coords
    if not (0 <= a <= 1 and 0 <= b <= 1):
        return RegionLabel.Unclassified
    if g is None:
        return classify_noninertial(a, b)
    if not (0 < g <= 1):
        return RegionLabel.Unclassified
    return classify_inertial(a, b, g)


@functools.lru_cache(maxsize=None)
def _labelled_grid(fn: Callable, dim: int, samples: int) -> tuple:
    mids = [Fraction(2 * i + 1, 2 * samples) for i in range(samples)]
    return tuple((free, _label_of(fn(*free))) for free in itertools.product(mids, repeat=dim))


@functools.lru_cache(maxsize=None)
def representative(label: RegionLabel, samples: int = 16) -> ParameterPoint:
    """Deterministic interior point of a region piece.

    The centroid of the piece is estimated on a midpoint grid of its free
    coordinates and rounded to the 1/8 lattice.  If rounding leaves the piece,
    the nearest lattice node inside it is used (ties broken lexicographically).
    Dependent coordinates follow from the defining equalities, so they may sit
    on the 1/16 lattice.  The returned point uses ``sigma = 2, tau = 1`` and
    ``m = 1`` (inertial labels) or ``m = 0``.
    """
    if label not in _PARAM:
        raise ValueError(f"no representative for {label}")
    dim, fn = _PARAM[label]
    m = 0 if label in NONINERTIAL_LABELS else 1
    if dim == 0:
        a, b, g = fn()
        return ParameterPoint.make(a, b, g, m=m)
    inside = [free for free, lab in _labelled_grid(fn, dim, samples) if lab == label]
    if not inside:
        raise ValueError(f"region {label} not resolved at {samples} samples")
    centroid = [sum(c[k] for c in inside) / len(inside) for k in range(dim)]
    eighth = Fraction(1, 8)

    def snap(x: Fraction) -> Fraction:
        return Fraction(round(x / eighth)) * eighth

    lattice = [Fraction(i, 8) for i in range(9)]
    candidates = sorted(
        itertools.product(lattice, repeat=dim),
        key=lambda free: (sum((f - c) ** 2 for f, c in zip(free, centroid)), free),
    )
    first = tuple(snap(c) for c in centroid)
    for free in [first] + candidates:
        if _label_of(fn(*free)) == label:
            a, b, g = fn(*free)
            return ParameterPoint.make(a, b, g, m=m)
    raise ValueError(f"no 1/8-lattice point inside {label}")
