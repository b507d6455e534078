"""Dense complex linear algebra for small square matrices.

Matrices are plain ``numpy`` complex arrays.  Everything here accepts a
single ``(d, d)`` matrix; :func:`hermitian_eig` additionally works on stacks
of shape ``(..., d, d)`` so the objective can diagonalise many generators in
one call.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

__all__ = [
    "MatrixError",
    "NumericalError",
    "HermitianEig",
    "multiply",
    "adjoint",
    "hermitian_eig",
    "qr_decompose",
]


class MatrixError(ValueError):
    """Raised when an input violates a shape or structure precondition."""


class NumericalError(ArithmeticError):
    """Raised when an iterative routine fails or a factorization breaks down."""


class HermitianEig(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _as_matrix(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2:
        raise MatrixError(f"expected a 2-d matrix, got shape {a.shape}")
    return a


def multiply(a, b) -> np.ndarray:
    a, b = _as_matrix(a), _as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise MatrixError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(a), -1, -2))


def _check_hermitian(h: np.ndarray, tol: float) -> None:
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise MatrixError(f"expected square matrices, got shape {h.shape}")
    defect = np.max(np.abs(h - adjoint(h)), initial=0.0)
    if defect > tol:
        raise MatrixError(f"matrix is not Hermitian (defect {defect:.3e})")


def hermitian_eig(h, tol: float = 1e-14, max_sweeps: int = 100,
                  check: float = 1e-10) -> HermitianEig:
    """Eigendecomposition of Hermitian matrices by cyclic Jacobi rotations.

    Parameters
    ----------
    h : array_like, shape (..., d, d)
        Hermitian matrix or stack of matrices.
    tol : float
        Sweeping stops once the off-diagonal Frobenius norm of every matrix
        is at most ``tol`` times its Frobenius norm.
    max_sweeps : int
        Sweep budget; exceeding it raises :class:`NumericalError`.
    check : float
        Largest tolerated entrywise deviation from Hermitian symmetry.

    Returns
    -------
    HermitianEig
        Ascending eigenvalues of shape ``(..., d)`` and unitary eigenvector
        matrices whose columns are the eigenvectors.
    """
    h = np.asarray(h)
    _check_hermitian(h, check)
    shape = h.shape
    d = shape[-1]
    a = np.array(h, dtype=np.complex128).reshape((-1, d, d))
    a = 0.5 * (a + adjoint(a))
    v = np.broadcast_to(np.eye(d, dtype=np.complex128), a.shape).copy()

    # work on matrices scaled to unit max-entry; undone on the eigenvalues
    scale = np.max(np.abs(a), axis=(1, 2))
    scale = np.where(scale > 0.0, scale, 1.0)
    a /= scale[:, None, None]
    limit = tol ** 2 * np.sum(np.abs(a) ** 2, axis=(1, 2))
    negligible = 1e-18 * np.sqrt(np.sum(np.abs(a) ** 2, axis=(1, 2)))
    pairs = [(p, q) for p in range(d) for q in range(p + 1, d)]
    offdiag = ~np.eye(d, dtype=bool)

    for sweep in range(max_sweeps + 1):
        off = np.sum(np.abs(a[:, offdiag]) ** 2, axis=1)
        if np.all(off <= limit):
            break
        if sweep == max_sweeps:
            worst = float(np.sqrt(np.max(off - limit)))
            raise NumericalError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps "
                f"(residual off-diagonal norm {worst:.3e})")
        for p, q in pairs:
            apq = a[:, p, q]
            mag = np.abs(apq)
            active = mag > negligible
            if not active.any():
                continue
            app = a[:, p, p].real
            aqq = a[:, q, q].real
            safe = np.where(active, mag, 1.0)
            phase = np.where(active, apq / safe, 1.0)
            theta = (aqq - app) / (2.0 * safe)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t = np.where(theta == 0.0, 1.0, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            sp = s * np.conj(phase)

            # A <- A R with R_pp = c, R_qp = -s e^{-i phi}, R_pq = s, R_qq = c e^{-i phi}
            colp = a[:, :, p].copy()
            colq = a[:, :, q]
            a[:, :, p] = c[:, None] * colp - sp[:, None] * colq
            a[:, :, q] = s[:, None] * colp + (c * np.conj(phase))[:, None] * colq
            rowp = a[:, p, :].copy()
            rowq = a[:, q, :]
            a[:, p, :] = c[:, None] * rowp - np.conj(sp)[:, None] * rowq
            a[:, q, :] = s[:, None] * rowp + (c * phase)[:, None] * rowq
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0

            colp = v[:, :, p].copy()
            colq = v[:, :, q]
            v[:, :, p] = c[:, None] * colp - sp[:, None] * colq
            v[:, :, q] = s[:, None] * colp + (c * np.conj(phase))[:, None] * colq

    w = np.real(np.diagonal(a, axis1=1, axis2=2)) * scale[:, None]
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return HermitianEig(w.reshape(shape[:-1]), v.reshape(shape))


def qr_decompose(a, rank_tol: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Householder QR factorization of a square complex matrix.

    Each reflector maps the pivot column onto ``-exp(i*arg(x0)) * |x|`` times
    the unit vector, so the phases of ``R``'s diagonal are fixed by the input
    and the result is reproducible bit for bit.

    Raises
    ------
    NumericalError
        If a pivot falls below ``rank_tol`` times the Frobenius norm of ``a``.
    """
    a = _as_matrix(a)
    n, m = a.shape
    if n != m:
        raise MatrixError(f"expected a square matrix, got shape {a.shape}")
    r = np.array(a, dtype=np.complex128)
    q = np.eye(n, dtype=np.complex128)
    floor = rank_tol * np.linalg.norm(r)

    for j in range(n):
        x = r[j:, j]
        norm = np.linalg.norm(x)
        if norm <= floor:
            raise NumericalError(f"matrix is rank deficient at column {j}")
        x0 = x[0]
        phase = x0 / abs(x0) if x0 != 0 else 1.0
        u = x.copy()
        u[0] += phase * norm
        u /= np.linalg.norm(u)
        r[j:, j:] -= 2.0 * np.outer(u, np.conj(u) @ r[j:, j:])
        q[:, j:] -= 2.0 * np.outer(q[:, j:] @ u, np.conj(u))
        r[j + 1:, j] = 0.0
    return q, r
