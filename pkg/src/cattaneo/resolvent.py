"""Resolvent norms of the modal blocks along the imaginary axis.

The energy-space norm of ``(i lam - A_mu)^{-1}`` equals the spectral norm of
``(i lam - B_mu)^{-1}`` with ``B_mu`` the weighted (orthonormal) block.  Growth
of the supremum over modes like ``lam^{1/k}`` corresponds to polynomial decay
of order ``k``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import linalg4
from .atlas import ParameterPoint
from .catalog import SpectralSequence
from .spectrum import critical_branch, loglog_slope, modal_block, orthonormal_blocks, symbolic_quartic

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ResolventSample:
    lam: float
    norm: float
    argmax_mu: float


def _resolvent_norms(point: ParameterPoint, mus: Sequence[float], lam: float) -> np.ndarray:
    blocks = orthonormal_blocks(point, mus)
    shifted = 1j * lam * np.eye(4) - blocks
    inv, _ = linalg4.inverse(shifted, det_scale=det_scale(point, mus, lam))
    return linalg4.norm2(inv)


def det_scale(point: ParameterPoint, mus: Sequence[float], lam: float) -> np.ndarray:
    """``sum_k |c_k / c4| |lam|^k``: rounding scale of ``det(i lam - A_mu)``."""
    sym = symbolic_quartic(point)
    out = np.empty(len(mus))
    for n, mu in enumerate(mus):
        c = sym.coeffs(float(mu))
        out[n] = c.magnitude(lam) / abs(c.c4)
    return out


def modal_resolvent_norm(point: ParameterPoint, mu: float, lam: float) -> float:
    """``||(i lam - A_mu)^{-1}||`` in the energy norm of one mode."""
    return float(_resolvent_norms(point, [mu], lam)[0])


def weighted_resolvent_direct(point: ParameterPoint, mu: float, lam: float) -> float:
    """Reference path: SVD of ``W^{1/2} (i lam - A)^{-1} W^{-1/2}`` built from the raw block."""
    blk = modal_block(point, mu)
    w = np.sqrt(blk.weights)
    inv = np.linalg.inv(1j * lam * np.eye(4) - blk.matrix)
    return float(np.linalg.svd(w[:, None] * inv / w[None, :], compute_uv=False)[0])


def _golden_max(f, lo: float, hi: float, tol: float = 1e-14, maxiter: int = 200) -> tuple[float, float]:
    """Maximise a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if abs(b - a) <= tol * max(1.0, abs(a), abs(b)):
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def resolvent_sup(point: ParameterPoint, lam: float, modes: SpectralSequence | Sequence[float],
                  envelope: str = "continuous", refine_top: int = 3) -> ResolventSample:
    """Supremum of the modal resolvent norm over the supplied modes.

    With ``envelope="continuous"`` the discrete maximum is refined by a
    golden-section search over ``log mu`` between the neighbours of the
    ``refine_top`` best modes, so ``mu`` ranges over a superset of the modes.
    """
    mus = np.asarray(modes.values() if isinstance(modes, SpectralSequence) else modes, dtype=float)
    if mus.size == 0:
        raise ValueError("no modes supplied")
    norms = _resolvent_norms(point, mus, lam)
    best = int(np.argmax(norms))
    best_mu, best_val = float(mus[best]), float(norms[best])
    if envelope == "discrete" or mus.size == 1:
        return ResolventSample(float(lam), best_val, best_mu)
    if envelope != "continuous":
        raise ValueError(f"envelope must be 'continuous' or 'discrete', got {envelope!r}")

    def f(logmu: float) -> float:
        return modal_resolvent_norm(point, math.exp(logmu), lam)

    for idx in np.argsort(norms)[::-1][:refine_top]:
        lo = math.log(mus[max(idx - 1, 0)])
        hi = math.log(mus[min(idx + 1, mus.size - 1)])
        if hi <= lo:
            continue
        x, val = _golden_max(f, lo, hi)
        if val > best_val:
            best_mu, best_val = math.exp(x), val
    return ResolventSample(float(lam), best_val, best_mu)


@dataclass(frozen=True)
class GrowthFit:
    slope: float
    intercept: float
    samples: tuple


def critical_frequencies(point: ParameterPoint, lam_lo: float, lam_hi: float,
                         count: int, mu_lo: float = 1.0, mu_hi: float = 1e16) -> list[float]:
    """Log-spaced frequencies lying on the critical branch ``Im lam(mu)``.

    The branch is inverted by bisection in ``log mu`` (it is increasing in
    ``mu`` for every polynomial region); the returned values are the imaginary
    parts actually attained, so each is an exact spectral peak frequency.
    """
    targets = np.geomspace(lam_lo, lam_hi, count)

    def im_at(logmu: float) -> float:
        return critical_branch(point, [math.exp(logmu)])[0].imag

    lo, hi = math.log(mu_lo), math.log(mu_hi)
    out = []
    for target in targets:
        a, b = lo, hi
        if im_at(a) > target or im_at(b) < target:
            continue
        for _ in range(80):
            mid = 0.5 * (a + b)
            if im_at(mid) < target:
                a = mid
            else:
                b = mid
        out.append(im_at(0.5 * (a + b)))
    return out


def growth_exponent(point: ParameterPoint, lambda_range: tuple[float, float, int],
                    modes: SpectralSequence | Sequence[float],
                    envelope: str = "continuous") -> GrowthFit:
    """Fit ``log sup_mu ||(i lam - A_mu)^{-1}||`` against ``log lam``.

    Frequencies are taken on the critical branch, where the supremum peaks.
    For a polynomial verdict of order ``k`` the slope approaches ``1/k``.
    """
    lo, hi, count = lambda_range
    lams = critical_frequencies(point, lo, hi, count)
    samples = tuple(resolvent_sup(point, lam, modes, envelope) for lam in lams)
    slope, icept = loglog_slope([s.lam for s in samples], [s.norm for s in samples])
    return GrowthFit(slope, icept, samples)
