"""Unitarity checking and seeded Haar-random unitary generation."""

from __future__ import annotations

import numpy as np


def is_unitary(matrix, tol: float) -> bool:
    """True iff the max-norm of M^dagger M - I is at most tol."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"unitarity check needs a square matrix, got shape {m.shape}")
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    gram = m.conj().T @ m
    return bool(np.max(np.abs(gram - np.eye(m.shape[0]))) <= tol)


def random_unitary(m: int, seed: int) -> np.ndarray:
    """Haar-distributed m x m unitary, reproducible from the seed.

    Draws a complex Ginibre matrix, QR-factorizes it, and absorbs the
    phases of the R diagonal into Q, which makes the distribution
    right-invariant (plain QR alone is not Haar).
    """
    if m < 1:
        raise ValueError("mode count must be a positive integer")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))
