"""Modal blocks, the quartic characteristic polynomial and its roots.

Restricting the abstract system to one eigenvector of ``A`` (eigenvalue ``mu``)
leaves a 4x4 real system in the state ``(u, v, theta, q)``.  Its eigenvalues are
the roots of

    f(lam, mu) = c4 lam^4 + c3 lam^3 + c2 lam^2 + c1 lam + c0.

At large ``mu`` one root pair sits extremely close to the imaginary axis: the
real part can be twenty orders of magnitude below the imaginary part, far below
what double precision resolves in ``f`` directly.  Such pairs are re-solved from
the split of ``f(x + iy) = 0`` into real and imaginary parts, where the large
cancelling combination of coefficients is formed exactly on monomials first
(see ``powersum``).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .atlas import DomainError, ParameterPoint
from .powersum import PowerSum
from .quartic import QuarticCoeffs, match_roots, solve_quartic

CROSS_CHECK_RTOL = 1e-6
# pairs with |Re| / |lam| below this are refined on the imaginary-axis split
REFINE_RATIO = 1e-3


class CrossCheckError(RuntimeError):
    """Quartic roots and block eigenvalues disagree."""


def _check_mu(mu: float) -> float:
    mu = float(mu)
    if not (mu > 0) or not math.isfinite(mu):
        raise DomainError(f"mu must be a positive finite number, got {mu!r}")
    return mu


@dataclass(frozen=True)
class ModalBlock:
    """Dynamics of one mode.  ``weights`` define the energy inner product."""

    mu: float
    matrix: np.ndarray
    weights: np.ndarray
    orthonormal: np.ndarray

    def energy_norm(self, state: np.ndarray) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(state) ** 2)))


def modal_block(point: ParameterPoint, mu: float) -> ModalBlock:
    """Build the 4x4 block together with its weighted (orthonormal) form.

    ``orthonormal`` is ``W^{1/2} A W^{-1/2}``: a skew tridiagonal matrix with the
    single dissipative entry ``-1/tau``.  Operator norms in the energy space are
    ordinary 2-norms of functions of this matrix.
    """
    mu = _check_mu(mu)
    sigma, tau, m = float(point.sigma), float(point.tau), float(point.m)
    a, b = float(point.alpha), float(point.beta)
    rho = 1.0 + m * mu ** float(point.gamma_eff) if point.inertial else 1.0
    mu_a, mu_hb = mu ** a, mu ** (b / 2)
    mat = np.array([
        [0.0, 1.0, 0.0, 0.0],
        [-sigma * mu / rho, 0.0, mu_a / rho, 0.0],
        [0.0, -mu_a, 0.0, mu_hb],
        [0.0, 0.0, -mu_hb / tau, -1.0 / tau],
    ])
    weights = np.array([sigma * mu, rho, 1.0, tau])
    s1 = math.sqrt(sigma * mu / rho)
    s2 = mu_a / math.sqrt(rho)
    s3 = mu_hb / math.sqrt(tau)
    ortho = np.array([
        [0.0, s1, 0.0, 0.0],
        [-s1, 0.0, s2, 0.0],
        [0.0, -s2, 0.0, s3],
        [0.0, 0.0, -s3, -1.0 / tau],
    ])
    return ModalBlock(mu, mat, weights, ortho)


def orthonormal_blocks(point: ParameterPoint, mus: Sequence[float]) -> np.ndarray:
    """Weighted blocks for many modes at once, shape ``(len(mus), 4, 4)``."""
    mu = np.asarray(mus, dtype=float)
    if mu.ndim != 1 or np.any(~(mu > 0)) or not np.all(np.isfinite(mu)):
        raise DomainError("mode eigenvalues must be positive and finite")
    sigma, tau = float(point.sigma), float(point.tau)
    rho = 1.0 + float(point.m) * mu ** float(point.gamma_eff) if point.inertial else np.ones_like(mu)
    s1 = np.sqrt(sigma * mu / rho)
    s2 = mu ** float(point.alpha) / np.sqrt(rho)
    s3 = mu ** (float(point.beta) / 2) / np.sqrt(tau)
    out = np.zeros((len(mu), 4, 4))
    out[:, 0, 1], out[:, 1, 0] = s1, -s1
    out[:, 1, 2], out[:, 2, 1] = s2, -s2
    out[:, 2, 3], out[:, 3, 2] = s3, -s3
    out[:, 3, 3] = -1.0 / tau
    return out


@dataclass(frozen=True)
class SymbolicQuartic:
    """Coefficients as exact power sums in ``mu`` plus two derived combinations.

    ``K = c4 c1^2 - c1 c2 c3 + c0 c3^2`` and ``M = c2 c3 - 2 c1 c4`` drive the
    near-imaginary refinement.  ``-K`` is also the third Hurwitz determinant, so
    ``K < 0`` certifies stability together with positive coefficients.
    """

    c: tuple
    K: PowerSum
    M: PowerSum

    def coeffs(self, mu: float) -> QuarticCoeffs:
        return QuarticCoeffs(*(ci(mu) for ci in self.c))


@functools.lru_cache(maxsize=8192)
def symbolic_quartic(point: ParameterPoint) -> SymbolicQuartic:
    m, s, t = point.m, point.sigma, point.tau
    a, b = point.alpha, point.beta
    mono = PowerSum.monomial
    g = point.gamma_eff
    inert = mono(m, g) if point.inertial else PowerSum()
    c4 = t * inert + t
    c3 = inert + 1
    c2 = mono(t, 2 * a) + (mono(m, b + g) if point.inertial else PowerSum()) + mono(s * t, 1) + mono(1, b)
    c1 = mono(1, 2 * a) + mono(s, 1)
    c0 = mono(s, 1 + b)
    K = c4 * c1 * c1 - c1 * c2 * c3 + c0 * c3 * c3
    M = c2 * c3 - 2 * c1 * c4
    return SymbolicQuartic((c4, c3, c2, c1, c0), K, M)


def characteristic_coeffs(point: ParameterPoint, mu: float) -> QuarticCoeffs:
    """Coefficients ``(c4, c3, c2, c1, c0)`` of ``f(., mu)``.

    Equal powers of ``mu`` are merged exactly before evaluation.
    """
    return symbolic_quartic(point).coeffs(_check_mu(mu))


@dataclass(frozen=True)
class RootSet:
    """Four roots of one characteristic polynomial, ordered by (imag, real)."""

    roots: tuple
    coeffs: QuarticCoeffs

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    def array(self) -> np.ndarray:
        return np.array(self.roots, dtype=complex)

    def upper(self) -> list[complex]:
        """Roots with ``Im >= 0``: one representative per conjugate pair."""
        return [z for z in self.roots if z.imag >= 0]

    def vieta_residuals(self) -> tuple[float, float]:
        """Relative residuals of the sum and product identities."""
        c = self.coeffs
        z = self.array()
        s_ref = -c.c3 / c.c4
        p_ref = c.c0 / c.c4
        s_scale = max(abs(s_ref), float(np.sum(np.abs(z))) * np.finfo(float).eps * 4, 1e-300)
        return (abs(z.sum() - s_ref) / max(abs(s_ref), s_scale),
                abs(np.prod(z) - p_ref) / max(abs(p_ref), 1e-300))


def _refine_pair(sym: SymbolicQuartic, mu: float, root: complex, iters: int = 40) -> complex:
    """Re-solve one upper-half root on ``(x, D) = (Re lam, c1 - c3 (Im lam)^2)``.

    Returns the input unchanged if the iteration does not settle close to it.
    """
    c4, c3, c2, c1, _ = (ci(mu) for ci in sym.c)
    K, M = sym.K(mu), sym.M(mu)
    x, y0 = root.real, root.imag
    D = c1 - c3 * y0 * y0
    e2 = (c2 * c3 - 6 * c1 * c4) / c3
    prev = math.inf
    for _ in range(iters):
        f1 = D + x * (2 * M + 4 * c4 * D) / c3 + 3 * c3 * x * x + 4 * c4 * x ** 3
        f2 = ((K + M * D + c4 * D * D) / (c3 * c3) + x * (3 * D - 2 * c1)
              + x * x * (e2 + 6 * c4 * D / c3) + c3 * x ** 3 + c4 * x ** 4)
        j11 = (2 * M + 4 * c4 * D) / c3 + 6 * c3 * x + 12 * c4 * x * x
        j12 = 1 + 4 * c4 * x / c3
        j21 = (3 * D - 2 * c1) + 2 * x * (e2 + 6 * c4 * D / c3) + 3 * c3 * x * x + 4 * c4 * x ** 3
        j22 = (M + 2 * c4 * D) / (c3 * c3) + 3 * x + 6 * c4 * x * x / c3
        det = j11 * j22 - j12 * j21
        if det == 0 or not math.isfinite(det):
            return root
        dx = (f1 * j22 - f2 * j12) / det
        dD = (j11 * f2 - j21 * f1) / det
        x -= dx
        D -= dD
        step = abs(dx) / max(abs(x), 1e-300) + abs(dD) / max(abs(D), abs(c1) * 1e-16, 1e-300)
        if step < 1e-15 or step >= prev and step < 1e-10:
            break
        prev = step
    y2 = (c1 - D) / c3
    if not (y2 > 0) or not math.isfinite(x):
        return root
    refined = complex(x, math.sqrt(y2))
    if abs(refined - root) > 1e-6 * abs(root):
        return root
    return refined


def quartic_roots(point: ParameterPoint, mu: float, refine: bool = True) -> RootSet:
    """Roots of ``f(., mu)`` without the matrix cross-check."""
    mu = _check_mu(mu)
    sym = symbolic_quartic(point)
    coeffs = sym.coeffs(mu)
    roots = solve_quartic(coeffs)
    if refine:
        out = []
        for z in roots:
            if z.imag > 0:
                w = _refine_pair(sym, mu, z) if abs(z.real) < REFINE_RATIO * abs(z) else z
                out += [w, w.conjugate()]
            elif z.imag == 0:
                out.append(z)
        roots = sorted(out, key=lambda z: (z.imag, z.real)) if len(out) == 4 else roots
    return RootSet(tuple(roots), coeffs)


def block_eigenvalues(point: ParameterPoint, mu: float) -> np.ndarray:
    """Eigenvalues of the weighted block (LAPACK): the independent path."""
    return np.linalg.eigvals(modal_block(point, mu).orthonormal)


def modal_eigenvalues(point: ParameterPoint, mu: float, check: bool = True) -> RootSet:
    """Eigenvalues of one modal block from the quartic, cross-checked.

    The roots are compared against LAPACK eigenvalues of the weighted block;
    each pair must agree to ``CROSS_CHECK_RTOL`` relative to the root modulus
    (with a floor at the eigen-solver's own resolution ``~eps * ||B||``).
    """
    rs = quartic_roots(point, mu)
    if check:
        z = np.array(rs.roots)
        ortho = modal_block(point, mu).orthonormal
        ev = np.linalg.eigvals(ortho)
        floor = 1e3 * np.finfo(float).eps * np.linalg.norm(ortho, 2)
        for r, e in match_roots(z, ev):
            if abs(r - e) > CROSS_CHECK_RTOL * max(abs(r), floor):
                raise CrossCheckError(
                    f"quartic root {r} vs block eigenvalue {e} at mu={mu} for {point}")
    return rs


def hurwitz_stable(point: ParameterPoint, mu: float) -> bool:
    """Routh-Hurwitz certificate, using the exact third determinant."""
    mu = _check_mu(mu)
    sym = symbolic_quartic(point)
    c4, c3, c2, c1, c0 = (ci(mu) for ci in sym.c)
    pos = min(c4, c3, c2, c1, c0) > 0
    return pos and (c3 * c2 - c4 * c1) > 0 and -sym.K(mu) > 0


# ---------------------------------------------------------------------------
# comparison with the tabulated leading-order branches

from .atlas import RegionLabel, classify  # noqa: E402
from . import tables  # noqa: E402

MATCH_SCALE = 1e-30


class MatchingAmbiguity(RuntimeError):
    """Two distinct computed roots are equally close to one predicted branch."""


class FitDegeneracy(ValueError):
    """Too few usable samples for a regression."""


@dataclass(frozen=True)
class AsymptoticPrediction:
    region: RegionLabel
    mu: float
    values: tuple
    branch_of: tuple  # table branch index for each value


def _require_table_defaults(point: ParameterPoint, region: RegionLabel) -> None:
    if point.sigma != 2 or point.tau != 1:
        raise tables.UnsupportedRegion("tables assume sigma = 2 and tau = 1")
    inertial_row = region in tables.TABLE_INERTIAL
    if inertial_row and point.m != 1:
        raise tables.UnsupportedRegion(f"row {region.value} requires m = 1")
    if not inertial_row and region in tables.TABLE_NONINERTIAL and point.m != 0:
        raise tables.UnsupportedRegion(f"row {region.value} requires m = 0")


def predicted_roots(region: RegionLabel, point: ParameterPoint, mu: float, *,
                    errata: bool = True, overrides: dict | None = None) -> AsymptoticPrediction:
    """Leading-order branch values of one table row at ``mu``."""
    region = RegionLabel(region)
    branches = tables.row(region, errata=errata, overrides=overrides)
    _require_table_defaults(point, region)
    mu = _check_mu(mu)
    values, owner = [], []
    for i, br in enumerate(branches):
        for v in br.values(point, mu):
            values.append(v)
            owner.append(i)
    return AsymptoticPrediction(region, mu, tuple(values), tuple(owner))


def _log_coords(z: np.ndarray) -> np.ndarray:
    """Sign-preserving log coordinates ``(asinh(Re/s), asinh(Im/s))``."""
    z = np.asarray(z, dtype=complex)
    return np.stack([np.arcsinh(z.real / MATCH_SCALE), np.arcsinh(z.imag / MATCH_SCALE)], axis=-1)


def match_branches(computed: Sequence[complex], predicted: Sequence[complex]) -> list[int]:
    """For each predicted value, the index of its computed root.

    Assignment minimises total Euclidean distance in log coordinates.
    """
    from scipy.optimize import linear_sum_assignment

    cp = _log_coords(np.asarray(computed))
    pp = _log_coords(np.asarray(predicted))
    cost = np.linalg.norm(pp[:, None, :] - cp[None, :, :], axis=-1)
    rows, cols = linear_sum_assignment(cost)
    assign = [0] * len(predicted)
    for r, c in zip(rows, cols):
        assign[r] = int(c)
    comp = np.asarray(computed, dtype=complex)
    for r, c in zip(rows, cols):
        d = cost[r]
        for k in range(len(comp)):
            if k == c or abs(comp[k] - comp[c]) <= 1e-9 * abs(comp[c]):
                continue
            if abs(d[k] - d[c]) <= 1e-12 * max(d[c], 1.0):
                raise MatchingAmbiguity(
                    f"roots {comp[c]} and {comp[k]} are equidistant from branch {predicted[r]}")
    return assign


@dataclass(frozen=True)
class BranchError:
    mu: float
    root_index: int
    branch: int
    computed: complex
    predicted: complex
    err_re: float | None
    err_im: float | None

    @property
    def worst(self) -> float:
        return max(e for e in (self.err_re, self.err_im, 0.0) if e is not None)


def _rel(c: float, p: float) -> float | None:
    return None if p == 0 else abs(c - p) / abs(p)


def asymptotic_error(point: ParameterPoint, mu_list: Iterable[float], *,
                     region: RegionLabel | None = None, errata: bool = True,
                     overrides: dict | None = None) -> list[BranchError]:
    """Relative error of every computed root against its matched table branch.

    Real and imaginary parts are compared separately; a part whose prediction is
    identically zero is skipped (``None``).
    """
    region = classify(point) if region is None else RegionLabel(region)
    out = []
    for mu in mu_list:
        pred = predicted_roots(region, point, mu, errata=errata, overrides=overrides)
        roots = modal_eigenvalues(point, mu).roots
        assign = match_branches(roots, pred.values)
        for j, i in enumerate(assign):
            c, p = roots[i], pred.values[j]
            out.append(BranchError(float(mu), i, pred.branch_of[j], c, p,
                                   _rel(c.real, p.real), _rel(c.imag, p.imag)))
    return out


def max_error_by_mu(errors: Iterable[BranchError]) -> dict[float, float]:
    worst: dict[float, float] = {}
    for e in errors:
        worst[e.mu] = max(worst.get(e.mu, 0.0), e.worst)
    return worst


def critical_root(roots: Iterable[complex]) -> complex:
    """Upper-half root closest to the imaginary axis."""
    upper = [z for z in roots if z.imag > 0]
    if not upper:
        raise FitDegeneracy("no complex root pair")
    return min(upper, key=lambda z: abs(z.real))


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope and intercept of ``log y`` against ``log x``."""
    x = np.log(np.asarray(x, dtype=float))
    y = np.log(np.asarray(y, dtype=float))
    if len(x) < 3:
        raise FitDegeneracy(f"need at least 3 samples, got {len(x)}")
    slope, icept = np.polyfit(x, y, 1)
    return float(slope), float(icept)


def critical_branch(point: ParameterPoint, mu_list: Iterable[float]) -> list[complex]:
    return [critical_root(modal_eigenvalues(point, mu).roots) for mu in mu_list]


def optimality_exponent(point: ParameterPoint, mu_list: Iterable[float]) -> float:
    """Slope of ``log(-Re lam)`` against ``log |Im lam|`` on the critical branch.

    For a polynomial verdict of order ``k`` the slope approaches ``-1/k``.
    """
    crit = [z for z in critical_branch(point, mu_list) if z.real < 0]
    if len(crit) < 3:
        raise FitDegeneracy("fewer than 3 usable critical-branch samples")
    return loglog_slope([abs(z.imag) for z in crit], [-z.real for z in crit])[0]
