"""Concrete PDE presets and eigenvalue sequences of ``A``.

The presets are plate systems written in the abstract form.  All use
``sigma = 2``, ``tau = 1`` (a different-wave-speed choice, not part of the PDE
statements) and the eigenvalue law ``mu_n = n^4`` of the bi-Laplacian on
``(0, pi)`` with hinged ends.  For the clamped plate of the third example the
true eigenvalues are only asymptotically ``n^4``; the abstract rates depend on
``mu_n -> oo`` alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .atlas import DomainError, ParameterPoint, StabilityVerdict, VerdictKind, decay_order


@dataclass(frozen=True)
class SpectralSequence:
    """Eigenvalues ``mu_1 <= mu_2 <= ...`` of ``A`` used as modes."""

    kind: str  # "power" or "list"
    c: float = 1.0
    p: float = 4.0
    count: int = 1
    explicit: tuple = field(default=())

    def values(self) -> np.ndarray:
        if self.kind == "list":
            return np.array(self.explicit, dtype=float)
        n = np.arange(1, self.count + 1, dtype=float)
        return self.c * n ** self.p

    def __len__(self) -> int:
        return len(self.explicit) if self.kind == "list" else self.count

    def describe(self) -> str:
        if self.kind == "list":
            return "list:" + ",".join(repr(float(v)) for v in self.explicit)
        return f"{self.c!r}*n^{self.p!r}:{self.count}"


def mu_sequence(kind: str = "power", *, c: float = 1.0, p: float = 4.0, count: int = 1,
                values: Sequence[float] = ()) -> SpectralSequence:
    """Build a mode sequence: a power law ``c n^p`` or a sorted explicit list."""
    if kind == "power":
        if count < 1:
            raise DomainError(f"count must be >= 1, got {count}")
        if not (c > 0) or not (p > 0):
            raise DomainError(f"power law needs c > 0 and p > 0, got c={c}, p={p}")
        return SpectralSequence("power", float(c), float(p), int(count))
    if kind == "list":
        vals = sorted(float(v) for v in values)
        if not vals:
            raise DomainError("explicit sequence is empty")
        if vals[0] <= 0 or not np.all(np.isfinite(vals)):
            raise DomainError("explicit sequence must be positive and finite")
        return SpectralSequence("list", count=len(vals), explicit=tuple(vals))
    raise DomainError(f"unknown sequence kind {kind!r}")


class UnknownPreset(KeyError):
    pass


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    point: ParameterPoint
    sequence: SpectralSequence
    expected_verdict: StabilityVerdict

    def as_dict(self) -> dict:
        v = self.expected_verdict
        return {
            "name": self.name,
            "description": self.description,
            "point": self.point.as_dict(),
            "sequence": self.sequence.describe(),
            "verdict": {"kind": v.kind.value, "region": v.region.value,
                        "order": None if v.order is None else str(v.order)},
        }


_H = Fraction(1, 2)
_SPECS = {
    "example1": ("Rayleigh plate with Cattaneo heat flux",
                 (0, 1, _H, 1), Fraction(1, 6)),
    "example1-m0": ("Euler-Bernoulli plate with Cattaneo heat flux",
                    (0, 1, None, 0), Fraction(1, 2)),
    "example2": ("Rayleigh plate, Laplacian thermal coupling",
                 (_H, 0, _H, 1), Fraction(1, 2)),
    "example2-m0": ("Euler-Bernoulli plate, Laplacian thermal coupling",
                    (_H, 0, None, 0), Fraction(1, 2)),
    "example3": ("clamped Rayleigh plate, bi-Laplacian thermal coupling",
                 (1, 1, _H, 1), Fraction(3, 2)),
    "example3-m0": ("clamped Euler-Bernoulli plate, bi-Laplacian thermal coupling",
                    (1, 1, None, 0), Fraction(1)),
}
PRESET_NAMES = tuple(_SPECS)
DEFAULT_MODES = 400


def preset(name: str, modes: int = DEFAULT_MODES) -> Preset:
    try:
        desc, (a, b, g, m), k = _SPECS[name]
    except KeyError:
        raise UnknownPreset(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}") from None
    point = ParameterPoint.make(a, b, g, m=m, sigma=2, tau=1)
    verdict = decay_order(point)
    if verdict.kind is not VerdictKind.Polynomial or verdict.order != k:
        raise AssertionError(f"preset {name}: atlas gives {verdict}, expected order {k}")
    return Preset(name, desc, point, mu_sequence("power", c=1.0, p=4.0, count=modes), verdict)
