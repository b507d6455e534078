"""Seeded random streams and Haar-distributed unitaries."""
from __future__ import annotations

import numpy as np

from .linalg import NumericalError, qr_decompose

__all__ = ["GENERATOR_ID", "Rng", "trial_seed", "standard_normal_pair",
           "ginibre", "haar_unitary"]

GENERATOR_ID = "numpy.PCG64/box-muller"
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MASK64 = (1 << 64) - 1


def trial_seed(base_seed: int, trial_id: int) -> int:
    """Seed of trial ``trial_id``: ``base_seed XOR (0x9E3779B97F4A7C15 * trial_id) mod 2**64``."""
    return (int(base_seed) ^ ((GOLDEN_GAMMA * int(trial_id)) & _MASK64)) & _MASK64


class Rng:
    """A PCG64 stream drawing normals by the Box-Muller transform."""

    def __init__(self, seed: int):
        self.seed = int(seed) & _MASK64
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, size=None):
        return self._gen.random(size)

    def normal_pairs(self, n: int) -> np.ndarray:
        """``n`` Box-Muller pairs as an ``(n, 2)`` array of independent N(0, 1)."""
        u1 = 1.0 - self._gen.random(n)  # (0, 1], keeps the log finite
        u2 = self._gen.random(n)
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        return np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=-1)


def standard_normal_pair(rng: Rng) -> tuple[float, float]:
    a, b = rng.normal_pairs(1)[0]
    return float(a), float(b)


def ginibre(d: int, rng: Rng) -> np.ndarray:
    """``d x d`` matrix with independent real and imaginary parts N(0, 1)."""
    if d < 1:
        raise ValueError("dimension must be positive")
    pairs = rng.normal_pairs(d * d)
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(d, d)


def haar_unitary(d: int, rng: Rng) -> np.ndarray:
    """Haar-random unitary: ``Q diag(R_jj/|R_jj|)`` from the QR of a Ginibre matrix."""
    for attempt in range(2):
        try:
            q, r = qr_decompose(ginibre(d, rng))
        except NumericalError:
            if attempt:
                raise
            continue
        diag = np.diagonal(r)
        return q * (diag / np.abs(diag))
