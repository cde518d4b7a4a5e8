"""Batched closed-form kernels for 4x4 matrices.

The inverse is the transposed cofactor matrix over the determinant, followed by
one step of iterative refinement.  The 2-norm is the square root of the largest
eigenvalue of the Hermitian product ``X^H X``.
"""

from __future__ import annotations

import itertools

import numpy as np

EPS = np.finfo(float).eps
SINGULAR_FACTOR = 16.0


class NearSingularBlock(ArithmeticError):
    """The determinant is at rounding level relative to the entries."""


def _det3(m: np.ndarray) -> np.ndarray:
    """Determinants of a batch of 3x3 matrices (shape ``(..., 3, 3)``)."""
    return (m[..., 0, 0] * (m[..., 1, 1] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 1])
            - m[..., 0, 1] * (m[..., 1, 0] * m[..., 2, 2] - m[..., 1, 2] * m[..., 2, 0])
            + m[..., 0, 2] * (m[..., 1, 0] * m[..., 2, 1] - m[..., 1, 1] * m[..., 2, 0]))


_KEEP = [[i for i in range(4) if i != k] for k in range(4)]


def cofactors(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    cof = np.empty(a.shape, dtype=np.result_type(a.dtype, float))
    for i, j in itertools.product(range(4), repeat=2):
        minor = a[..., _KEEP[i], :][..., :, _KEEP[j]]
        cof[..., i, j] = (-1) ** (i + j) * _det3(minor)
    return cof


def inverse(a: np.ndarray, det_scale: np.ndarray | float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Inverse and determinant of one matrix or a batch.

    If ``det_scale`` is given, raises ``NearSingularBlock`` when
    ``|det| < 16 eps det_scale`` for any member of the batch.
    """
    a = np.asarray(a)
    cof = cofactors(a)
    det = np.einsum("...j,...j->...", a[..., 0, :], cof[..., 0, :])
    if det_scale is not None:
        bad = np.abs(det) < SINGULAR_FACTOR * EPS * np.asarray(det_scale)
        if np.any(bad):
            raise NearSingularBlock(
                f"|det| = {float(np.min(np.abs(det))):.3g} at rounding level of the coefficient scale")
    inv = np.swapaxes(cof, -1, -2) / det[..., None, None]
    eye = np.eye(4)
    inv = inv + inv @ (eye - a @ inv)
    return inv, det


def norm2(x: np.ndarray) -> np.ndarray:
    """Largest singular value via the dominant eigenvalue of ``X^H X``."""
    x = np.asarray(x)
    gram = np.swapaxes(x.conj(), -1, -2) @ x
    top = np.linalg.eigvalsh(gram)[..., -1]
    return np.sqrt(np.maximum(top, 0.0))
