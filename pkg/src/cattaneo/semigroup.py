"""Exact modal time evolution, energy, and block-wise semigroup norms.

Everything runs in the weighted coordinates ``x = W^{1/2} U`` where the energy
is ``|x|^2 / 2`` and the generator is the weighted block ``B``.  Exponentials
come from an eigendecomposition of ``B``; blocks whose eigenvector matrix is
badly conditioned fall back to scaling and squaring.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import expm

from . import linalg4
from .atlas import ParameterPoint, wellposed
from .catalog import SpectralSequence
from .spectrum import modal_block, orthonormal_blocks

EIGVEC_COND_LIMIT = 1e8


class SingularBlock(ArithmeticError):
    """``0`` lies in the spectrum of the full operator (``beta < 2 alpha - 1``)."""


class WindowTooNarrow(ValueError):
    pass


@dataclass(frozen=True)
class ModalState:
    u: complex
    v: complex
    theta: complex
    q: complex

    def array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.theta, self.q], dtype=complex)

    @classmethod
    def from_array(cls, x: Sequence[complex]) -> "ModalState":
        u, v, th, q = (complex(c) for c in x)
        return cls(u, v, th, q)


class _Propagator:
    """``exp(t B)`` for one weighted block, reusable across times."""

    def __init__(self, b: np.ndarray):
        self.b = b
        lam, vec = np.linalg.eig(b)
        self.defective = np.linalg.cond(vec) > EIGVEC_COND_LIMIT
        if not self.defective:
            self.lam, self.vec, self.vinv = lam, vec, np.linalg.inv(vec)

    def expm(self, t: float) -> np.ndarray:
        if self.defective:
            return expm(t * self.b)
        return (self.vec * np.exp(self.lam * t)) @ self.vinv

    def sinh_cosh(self, h: float) -> tuple[np.ndarray, np.ndarray]:
        if self.defective:
            ep, em = expm(h * self.b), expm(-h * self.b)
            return (ep - em) / 2, (ep + em) / 2
        sh = (self.vec * np.sinh(self.lam * h)) @ self.vinv
        ch = (self.vec * np.cosh(self.lam * h)) @ self.vinv
        return sh, ch


def _weights(point: ParameterPoint, mu: float) -> np.ndarray:
    return modal_block(point, mu).weights


def evolve_mode(point: ParameterPoint, mu: float, state: ModalState, t: float) -> ModalState:
    """``exp(t A_mu) state`` in the original ``(u, v, theta, q)`` coordinates."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    blk = modal_block(point, mu)
    w = np.sqrt(blk.weights)
    x = w * state.array()
    y = _Propagator(blk.orthonormal).expm(t) @ x
    return ModalState.from_array(y / w)


def energy(point: ParameterPoint, modes: Iterable[tuple[float, ModalState]]) -> float:
    """``sum_n (sigma mu |u|^2 + (1 + m mu^gamma) |v|^2 + |theta|^2 + tau |q|^2) / 2``."""
    total = 0.0
    for mu, st in modes:
        total += 0.5 * float(np.sum(_weights(point, mu) * np.abs(st.array()) ** 2))
    return total


@dataclass(frozen=True)
class EnergyTrace:
    times: tuple
    energies: tuple
    q_norms: tuple

    def monotone_violation(self) -> float:
        """Largest increase of energy between consecutive samples (0 if none)."""
        e = np.asarray(self.energies)
        return float(max(np.max(np.diff(e)), 0.0)) if e.size > 1 else 0.0


def energy_trace(point: ParameterPoint, modes: Sequence[tuple[float, ModalState]],
                 times: Sequence[float]) -> EnergyTrace:
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0) or np.any(times < 0):
        raise ValueError("times must be non-negative and ascending")
    energies = np.zeros(len(times))
    qsq = np.zeros(len(times))
    for mu, st in modes:
        blk = modal_block(point, mu)
        w = np.sqrt(blk.weights)
        x0 = w * st.array()
        prop = _Propagator(blk.orthonormal)
        for i, t in enumerate(times):
            x = prop.expm(t) @ x0
            energies[i] += 0.5 * float(np.vdot(x, x).real)
            qsq[i] += abs(x[3]) ** 2 / blk.weights[3]
    return EnergyTrace(tuple(times), tuple(energies), tuple(np.sqrt(qsq)))


def dissipation_residual(point: ParameterPoint, modes: Sequence[tuple[float, ModalState]],
                         t: float, h: float) -> float:
    """``|dE/dt + sum |q(t)|^2|`` with ``dE/dt`` a central difference of step ``h``.

    The difference ``E(t+h) - E(t-h)`` is formed as
    ``2 Re <sinh(hB) x(t), cosh(hB) x(t)>``, which equals it exactly but avoids
    subtracting two nearly equal energies.
    """
    total_rate = 0.0
    qsq = 0.0
    lam_max = 0.0
    for mu, st in modes:
        blk = modal_block(point, mu)
        w = np.sqrt(blk.weights)
        prop = _Propagator(blk.orthonormal)
        x = prop.expm(t) @ (w * st.array())
        sh, ch = prop.sinh_cosh(h)
        total_rate += float(np.vdot(ch @ x, sh @ x).real) / h
        qsq += abs(x[3]) ** 2 / blk.weights[3]
        lam_max = max(lam_max, float(np.max(np.abs(np.linalg.eigvals(blk.orthonormal)))))
    if h > 0.1 / lam_max:
        warnings.warn(f"step h={h} exceeds 0.1/|lambda_max| = {0.1 / lam_max:.3g}", RuntimeWarning)
    return abs(total_rate + qsq)


@dataclass(frozen=True)
class NormSample:
    t: float
    norm: float
    argmax_mode: int  # 1-based index into the mode sequence
    argmax_mu: float


def _mode_values(modes: SpectralSequence | Sequence[float]) -> np.ndarray:
    return np.asarray(modes.values() if isinstance(modes, SpectralSequence) else modes, dtype=float)


class SemigroupNorms:
    """Evaluates ``sup_n ||exp(t A_n) A_n^{-1}||`` for many ``t`` on fixed modes."""

    def __init__(self, point: ParameterPoint, modes: SpectralSequence | Sequence[float]):
        if not wellposed(point):
            raise SingularBlock("beta < 2 alpha - 1: 0 is in the spectrum of the full operator")
        self.mus = _mode_values(modes)
        blocks = orthonormal_blocks(point, self.mus)
        self.binv, _ = linalg4.inverse(blocks)
        lam, vec = np.linalg.eig(blocks)
        cond = np.linalg.cond(vec)
        self.fallback = cond > EIGVEC_COND_LIMIT
        self.blocks, self.lam, self.vec = blocks, lam, vec
        self.vinv_binv = np.linalg.inv(vec) @ self.binv

    def norms(self, t: float) -> np.ndarray:
        if t == 0:
            return linalg4.norm2(self.binv)
        prod = (self.vec * np.exp(self.lam * t)[:, None, :]) @ self.vinv_binv
        for n in np.nonzero(self.fallback)[0]:
            prod[n] = expm(t * self.blocks[n]) @ self.binv[n]
        return linalg4.norm2(prod)

    def sample(self, t: float) -> NormSample:
        vals = self.norms(t)
        i = int(np.argmax(vals))
        return NormSample(float(t), float(vals[i]), i + 1, float(self.mus[i]))


def semigroup_norm(point: ParameterPoint, t: float, modes: SpectralSequence | Sequence[float]) -> NormSample:
    """Energy-norm of ``exp(t A) A^{-1}`` restricted to the supplied modes.

    Exact for the block-diagonal truncation; a lower bound for the full operator.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return SemigroupNorms(point, modes).sample(t)


def norm_series(point: ParameterPoint, times: Sequence[float],
                modes: SpectralSequence | Sequence[float]) -> list[NormSample]:
    engine = SemigroupNorms(point, modes)
    return [engine.sample(t) for t in times]


@dataclass(frozen=True)
class DecayFit:
    slope: float
    intercept: float
    rss_power: float
    rss_exponential: float
    exp_rate: float
    samples: int

    @property
    def prefers_exponential(self) -> bool:
        """Linear-in-``t`` fit of ``log value`` beats the log-log fit."""
        return self.rss_exponential < self.rss_power


def decay_fit(times: Sequence[float], values: Sequence[float],
              window: tuple[float, float] | None = None, min_samples: int = 5) -> DecayFit:
    """Least-squares slope of ``log value`` against ``log t`` inside ``window``.

    Also fits ``log value`` linearly in ``t`` and records both residual sums so
    that exponential decay can be told apart from a power law.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if window is not None:
        keep = (t >= window[0]) & (t <= window[1])
        t, v = t[keep], v[keep]
    keep = (t > 0) & (v > 0)
    t, v = t[keep], v[keep]
    if t.size < min_samples:
        raise WindowTooNarrow(f"{t.size} usable samples in window, need {min_samples}")
    lv = np.log(v)
    (slope, icept), rss_p, *_ = np.polyfit(np.log(t), lv, 1, full=True)
    (rate, _), rss_e, *_ = np.polyfit(t, lv, 1, full=True)
    return DecayFit(float(slope), float(icept), _rss(rss_p), _rss(rss_e), float(rate), int(t.size))


def _rss(res: np.ndarray) -> float:
    return float(res[0]) if np.size(res) else 0.0


def argmax_window(samples: Sequence[NormSample], n_modes: int) -> tuple[float, float] | None:
    """Longest run of consecutive times whose argmax mode lies in ``[2, N - 1]``."""
    best, cur = None, []
    for s in samples:
        if 2 <= s.argmax_mode <= n_modes - 1:
            cur.append(s.t)
            if best is None or len(cur) > len(best):
                best = list(cur)
        else:
            cur = []
    return (best[0], best[-1]) if best else None
