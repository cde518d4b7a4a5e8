"""Closed-form cubic and quartic root finders with Newton polishing.

The quartic path is Ferrari's: depress, factor through one root of the
resolvent cubic, solve two quadratics, then polish each root with Newton steps
on a rescaled polynomial.  Real coefficient sets take a real factorisation so
that the output is exactly closed under conjugation.

``companion_roots`` is an independent eigenvalue-based oracle used by tests.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

EPS = np.finfo(float).eps


class DegenerateLeadingCoefficient(ValueError):
    """The leading coefficient vanishes (or the root scale overflows)."""


@dataclass(frozen=True)
class QuarticCoeffs:
    """``c4 x^4 + c3 x^3 + c2 x^2 + c1 x + c0``."""

    c4: complex
    c3: complex
    c2: complex
    c1: complex
    c0: complex

    def descending(self) -> tuple:
        return (self.c4, self.c3, self.c2, self.c1, self.c0)

    def is_real(self) -> bool:
        return all(complex(c).imag == 0 for c in self.descending())

    def __call__(self, x: complex) -> complex:
        acc = 0j
        for c in self.descending():
            acc = acc * x + c
        return acc

    def derivative(self, x: complex) -> complex:
        c4, c3, c2, c1, _ = self.descending()
        return ((4 * c4 * x + 3 * c3) * x + 2 * c2) * x + c1

    def magnitude(self, x: complex) -> float:
        """``sum |c_k| |x|^k``: the natural scale for backward residuals."""
        r = abs(x)
        return sum(abs(c) * r ** (4 - k) for k, c in enumerate(self.descending()))


def _quadratic(b: complex, c: complex) -> tuple[complex, complex]:
    """Roots of ``x^2 + b x + c`` without cancellation."""
    disc = cmath.sqrt(b * b - 4 * c)
    # pick the sign making |b + s| large
    s = disc if (b.conjugate() * disc).real >= 0 else -disc
    q = -(b + s) / 2
    if q == 0:
        return 0j, 0j
    return q, c / q


def _quadratic_real(b: float, c: float) -> tuple[complex, complex]:
    disc = b * b - 4 * c
    if disc >= 0:
        q = -(b + math.copysign(math.sqrt(disc), b)) / 2
        if q == 0:
            return 0j, 0j
        return complex(q), complex(c / q)
    re = -b / 2
    im = math.sqrt(-disc) / 2
    return complex(re, im), complex(re, -im)


def solve_cubic(a: complex, b: complex, c: complex, polish: int = 3) -> list[complex]:
    """All roots of the monic cubic ``x^3 + a x^2 + b x + c`` (Cardano)."""
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + c
    disc = cmath.sqrt((q / 2) ** 2 + (p / 3) ** 3)
    w1, w2 = -q / 2 + disc, -q / 2 - disc
    w = w1 if abs(w1) >= abs(w2) else w2
    omega = complex(-0.5, math.sqrt(3) / 2)
    if w == 0:
        ts = [0j, 0j, 0j]
    else:
        u = w ** (1 / 3)
        ts = []
        for k in range(3):
            uk = u * omega ** k
            ts.append(uk - p / (3 * uk))
    roots = [t - a / 3 for t in ts]

    def f(x):
        return ((x + a) * x + b) * x + c

    def df(x):
        return (3 * x + 2 * a) * x + b

    out = []
    for x in roots:
        for _ in range(polish):
            d = df(x)
            if d == 0:
                break
            step = f(x) / d
            nxt = x - step
            if abs(f(nxt)) > abs(f(x)):
                break
            x = nxt
        out.append(x)
    return out


def _resolvent_root(p, q, r, real: bool):
    """A root ``m`` of ``m^3 + p m^2 + (p^2/4 - r) m - q^2/8``.

    For real data the largest real root is taken; it is positive whenever
    ``q != 0`` because the cubic is negative at zero.
    """
    roots = solve_cubic(p, p * p / 4 - r, -q * q / 8)
    if not real:
        return max(roots, key=abs)
    reals = [z.real for z in roots if abs(z.imag) <= 1e-8 * max(1.0, abs(z))]
    m = max(reals) if reals else max(roots, key=lambda z: z.real).real
    # polish in real arithmetic
    for _ in range(4):
        f = ((m + p) * m + (p * p / 4 - r)) * m - q * q / 8
        d = (3 * m + 2 * p) * m + (p * p / 4 - r)
        if d == 0:
            break
        m -= f / d
    return m


def _ferrari_monic(a, b, c, d, real: bool) -> list[complex]:
    p = b - 3 * a * a / 8
    q = c - a * b / 2 + a ** 3 / 8
    r = d - a * c / 4 + a * a * b / 16 - 3 * a ** 4 / 256
    shift = -a / 4
    if q == 0:
        if real:
            z1, z2 = _quadratic_real(p, r)
        else:
            z1, z2 = _quadratic(complex(p), complex(r))
        ws = []
        for z in (z1, z2):
            s = cmath.sqrt(z)
            ws.extend([s, -s])
        return [w + shift for w in ws]
    m = _resolvent_root(p, q, r, real)
    if real:
        if m <= 0:
            m = abs(m) or EPS
        s = math.sqrt(2 * m)
        k = q / (2 * s)
        w = list(_quadratic_real(-s, p / 2 + m + k)) + list(_quadratic_real(s, p / 2 + m - k))
    else:
        s = cmath.sqrt(2 * m)
        k = q / (2 * s)
        w = list(_quadratic(-s, p / 2 + m + k)) + list(_quadratic(s, p / 2 + m - k))
    return [x + shift for x in w]


def root_scale(coeffs: QuarticCoeffs) -> float:
    """Fujiwara-type magnitude of the largest root."""
    c4 = coeffs.c4
    if c4 == 0:
        raise DegenerateLeadingCoefficient("leading coefficient is zero")
    ratios = [abs(c / c4) ** (1.0 / k) for k, c in enumerate(coeffs.descending()) if k > 0]
    s = max(ratios)
    if not math.isfinite(s):
        raise DegenerateLeadingCoefficient("root scale overflows; leading coefficient negligible")
    return s


def _newton(coeffs: QuarticCoeffs, x: complex, steps: int, real: bool) -> complex:
    best, best_res = x, abs(coeffs(x))
    for _ in range(steps):
        d = coeffs.derivative(x)
        if d == 0:
            break
        x = x - coeffs(x) / d
        if real:
            x = complex(x.real, 0.0)
        res = abs(coeffs(x))
        if res < best_res:
            best, best_res = x, res
        if res == 0:
            break
    return best


def _pair_conjugates(roots: list[complex]) -> list[complex]:
    """Enforce exact conjugate symmetry on roots of a real polynomial."""
    upper = [z for z in roots if z.imag > 0]
    real = [complex(z.real, 0.0) for z in roots if z.imag == 0]
    lower = [z for z in roots if z.imag < 0]
    if len(upper) != len(lower):
        return roots
    out = list(real)
    for z in upper:
        out.extend([z, z.conjugate()])
    return out


def _closed_form(desc: tuple, polish: int, real: bool) -> list[complex]:
    c4, c3, c2, c1, c0 = desc
    s = root_scale(QuarticCoeffs(*desc))
    if s == 0:
        return [0j] * 4
    # x = s * nu
    a = c3 / c4 / s
    b = c2 / c4 / s ** 2
    c = c1 / c4 / s ** 3
    d = c0 / c4 / s ** 4
    scaled = QuarticCoeffs(1.0, a, b, c, d)
    nus = _ferrari_monic(a, b, c, d, real)
    polished = []
    for nu in nus:
        if real and nu.imag < 0:
            continue
        nu = _newton(scaled, nu, polish, real and nu.imag == 0)
        polished.append(nu)
        if real and nu.imag != 0:
            polished.append(nu.conjugate())
    if len(polished) != 4:
        # a conjugate partner lost its sign through rounding
        polished = [_newton(scaled, nu, polish, False) for nu in nus]
    return [s * nu for nu in polished]


def _conjugate_closed(roots: list[complex]) -> bool:
    upper = sorted((z for z in roots if z.imag > 0), key=lambda z: (z.real, z.imag))
    lower = sorted((z.conjugate() for z in roots if z.imag < 0), key=lambda z: (z.real, z.imag))
    return upper == lower


def _consistency(coeffs: QuarticCoeffs, roots: list[complex]) -> float:
    """Worst of the backward residuals and the per-coefficient Vieta mismatch."""
    worst = max(backward_residual(coeffs, z) for z in roots)
    rebuilt = np.poly(roots)
    scale = np.poly(-np.abs(roots)).real
    target = np.array(coeffs.descending(), dtype=complex) / coeffs.c4
    for k in range(1, 5):
        if scale[k] != 0:
            worst = max(worst, abs(rebuilt[k] - target[k]) / abs(scale[k]))
    return float(worst)


def solve_quartic(coeffs: QuarticCoeffs | Sequence, polish: int = 3) -> list[complex]:
    """Four roots (with multiplicity) of a quartic.

    The closed form is applied to the polynomial and to its reversal; the
    latter resolves roots much smaller than the largest one.  The split
    between the two root sets that best reproduces the coefficients wins.

    Parameters
    ----------
    coeffs : QuarticCoeffs or sequence ``(c4, c3, c2, c1, c0)``
    polish : int
        Newton steps applied to each root after the closed form.

    Returns
    -------
    list of complex
        Sorted by imaginary part, then real part.  Conjugate-symmetric when
        every coefficient is real.
    """
    if not isinstance(coeffs, QuarticCoeffs):
        coeffs = QuarticCoeffs(*coeffs)
    if not all(cmath.isfinite(complex(c)) for c in coeffs.descending()):
        raise ValueError("non-finite coefficient")
    real = coeffs.is_real()
    desc = tuple(complex(c).real if real else complex(c) for c in coeffs.descending())
    if real:
        coeffs = QuarticCoeffs(*desc)
    direct = _closed_form(desc, polish, real)
    if desc[4] == 0:
        roots = direct
    else:
        recip = [1 / z for z in _closed_form(desc[::-1], polish, real) if z != 0]
        big = sorted(direct, key=lambda z: (-abs(z), z.imag))
        small = sorted(recip, key=lambda z: (abs(z), z.imag))
        best, best_score = direct, _consistency(coeffs, direct)
        for k in range(0, 4):
            if 4 - k > len(small):
                continue
            cand = big[:k] + small[: 4 - k]
            if real and not _conjugate_closed(cand):
                continue
            score = _consistency(coeffs, cand)
            if score < best_score:
                best, best_score = cand, score
        roots = best
        if best_score > ABERTH_TRIGGER:
            roots = _aberth(coeffs, roots)
    if real:
        roots = _pair_conjugates(roots)
    return sorted(roots, key=lambda z: (z.imag, z.real))


ABERTH_TRIGGER = 1e-12


def _aberth(coeffs: QuarticCoeffs, roots: list[complex], iters: int = 60) -> list[complex]:
    """Simultaneous refinement for roots that neither closed-form pass resolved."""
    z = list(roots)
    # break exact coincidences so the pairwise sums stay finite
    for i in range(4):
        for j in range(i):
            if z[i] == z[j]:
                z[i] = z[i] * (1 + 1e-7) + 1e-12j * (1 + abs(z[i]))
    for _ in range(iters):
        moved = 0.0
        for i in range(4):
            d = coeffs.derivative(z[i])
            f = coeffs(z[i])
            if f == 0:
                continue
            if d == 0:
                continue
            ratio = f / d
            repulse = sum(1 / (z[i] - z[j]) for j in range(4) if j != i and z[i] != z[j])
            denom = 1 - ratio * repulse
            step = ratio / denom if denom != 0 else ratio
            z[i] -= step
            moved = max(moved, abs(step) / max(abs(z[i]), 1e-300))
        if moved < 4 * EPS:
            break
    if coeffs.is_real():
        # snap near-real estimates, then restore exact conjugate pairs
        z = [complex(w.real, 0.0) if abs(w.imag) <= 8 * EPS * abs(w) else w for w in z]
        upper = sorted((w for w in z if w.imag > 0), key=lambda w: w.real)
        lower = sorted((w.conjugate() for w in z if w.imag < 0), key=lambda w: w.real)
        if len(upper) == len(lower):
            reals = [w for w in z if w.imag == 0]
            z = reals + [v for u, l in zip(upper, lower) for v in ((u + l) / 2, ((u + l) / 2).conjugate())]
    return z


def backward_residual(coeffs: QuarticCoeffs, root: complex) -> float:
    scale = coeffs.magnitude(root)
    return abs(coeffs(root)) / scale if scale else 0.0


def companion_roots(coeffs: QuarticCoeffs | Sequence) -> np.ndarray:
    """Eigenvalues of the companion matrix (reference oracle)."""
    if isinstance(coeffs, QuarticCoeffs):
        coeffs = coeffs.descending()
    c = np.asarray(coeffs, dtype=complex)
    if c[0] == 0:
        raise DegenerateLeadingCoefficient("leading coefficient is zero")
    comp = np.zeros((4, 4), dtype=complex)
    comp[0, :] = -c[1:] / c[0]
    comp[1:, :-1] = np.eye(3)
    return np.linalg.eigvals(comp)


def match_roots(a: Iterable[complex], b: Iterable[complex]) -> list[tuple[complex, complex]]:
    """Pair two root multisets by minimum total distance."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(list(a), dtype=complex)
    b = np.asarray(list(b), dtype=complex)
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return [(complex(a[i]), complex(b[j])) for i, j in zip(rows, cols)]
