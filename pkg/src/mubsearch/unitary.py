"""Real parameterisation of Hermitian generators and the maps U = exp(iH), H = -i log U.

A generator of a ``d x d`` unitary is stored as ``d**2`` reals: the ``d``
diagonal entries first, then for every pair ``m < n`` in lexicographic order
the real and imaginary parts of ``H[m, n]``.
"""
from __future__ import annotations

import numpy as np

from .linalg import MatrixError, adjoint, hermitian_eig

__all__ = [
    "params_to_hermitian",
    "hermitian_to_params",
    "exp_i",
    "log_unitary",
    "unitarity_defect",
]

_INDEX_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _upper_pairs(d: int) -> tuple[np.ndarray, np.ndarray]:
    if d not in _INDEX_CACHE:
        _INDEX_CACHE[d] = np.triu_indices(d, 1)
    return _INDEX_CACHE[d]


def params_to_hermitian(segment, d: int) -> np.ndarray:
    """Build Hermitian matrices from packed real segments.

    ``segment`` has trailing length ``d**2``; any leading axes are kept, so a
    ``(batch, N, d*d)`` array yields ``(batch, N, d, d)`` matrices.
    """
    segment = np.asarray(segment, dtype=np.float64)
    if segment.shape[-1:] != (d * d,):
        raise MatrixError(
            f"segment must have trailing length {d * d}, got {segment.shape}")
    lead = segment.shape[:-1]
    rows, cols = _upper_pairs(d)
    off = segment[..., d:]
    upper = off[..., 0::2] + 1j * off[..., 1::2]
    h = np.zeros(lead + (d, d), dtype=np.complex128)
    diag = np.arange(d)
    h[..., diag, diag] = segment[..., :d]
    h[..., rows, cols] = upper
    h[..., cols, rows] = np.conj(upper)
    return h


def hermitian_to_params(h, tol: float = 1e-10) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise MatrixError(f"expected square matrices, got shape {h.shape}")
    d = h.shape[-1]
    defect = np.max(np.abs(h - adjoint(h)), initial=0.0)
    if defect > tol:
        raise MatrixError(f"matrix is not Hermitian (defect {defect:.3e})")
    rows, cols = _upper_pairs(d)
    upper = h[..., rows, cols]
    out = np.empty(h.shape[:-2] + (d * d,), dtype=np.float64)
    out[..., :d] = np.real(np.diagonal(h, axis1=-2, axis2=-1))
    out[..., d::2] = upper.real
    out[..., d + 1::2] = upper.imag
    return out


def exp_i(h) -> np.ndarray:
    """Return ``exp(i H)`` for a Hermitian matrix or a stack of them."""
    w, v = hermitian_eig(h)
    return (v * np.exp(1j * w)[..., None, :]) @ adjoint(v)


def unitarity_defect(u) -> float:
    """Largest entry of ``|U^dagger U - 1|``."""
    u = np.asarray(u)
    eye = np.eye(u.shape[-1])
    return float(np.max(np.abs(adjoint(u) @ u - eye), initial=0.0))


def log_unitary(u, tol: float = 1e-10, cluster_tol: float = 1e-6) -> np.ndarray:
    """Principal Hermitian logarithm: ``H`` with ``exp(iH) = U``.

    Eigenphases are returned in ``(-pi, pi]``.  The unitary is split into the
    commuting Hermitian parts ``C = (U + U^dagger)/2`` and
    ``S = (U - U^dagger)/(2i)``.  ``C`` is diagonalised first; inside each
    cluster of (nearly) equal eigenvalues of ``C`` the block of ``S`` is
    diagonalised to separate phases ``theta`` and ``-theta``.  The phase of
    each eigenvector is ``atan2(<S>, <C>)``.
    """
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {u.shape}")
    defect = unitarity_defect(u)
    if defect > tol:
        raise MatrixError(f"matrix is not unitary (defect {defect:.3e})")
    d = u.shape[0]
    ua = adjoint(u)
    cos_part = 0.5 * (u + ua)
    sin_part = -0.5j * (u - ua)

    c_vals, v = hermitian_eig(cos_part)
    start = 0
    while start < d:
        stop = start + 1
        while stop < d and c_vals[stop] - c_vals[stop - 1] <= cluster_tol:
            stop += 1
        if stop - start > 1:
            block = v[:, start:stop]
            s_block = adjoint(block) @ sin_part @ block
            _, w = hermitian_eig(0.5 * (s_block + adjoint(s_block)))
            v[:, start:stop] = block @ w
        start = stop

    c = np.real(np.einsum("ik,ij,jk->k", np.conj(v), cos_part, v))
    s = np.real(np.einsum("ik,ij,jk->k", np.conj(v), sin_part, v))
    theta = np.arctan2(s, c)
    theta[theta <= -np.pi] = np.pi
    h = (v * theta) @ adjoint(v)
    return 0.5 * (h + adjoint(h))
