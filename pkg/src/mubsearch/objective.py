"""Non-unbiasedness functional of a set of orthonormal bases.

A set of ``N`` unitaries ``U_1 .. U_N`` is completed by the standard basis
``U_{N+1} = 1``.  For every pair ``k < l`` and every entry ``(m, n)`` the
residual ``|(U_k^dagger U_l)_{mn}|**2 - 1/d`` is formed; the objective is the
sum of their squares and vanishes exactly for mutually unbiased bases.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .linalg import MatrixError, adjoint
from .unitary import exp_i, params_to_hermitian, unitarity_defect

__all__ = [
    "BasisSet",
    "MubCheck",
    "MubResiduals",
    "fourier_matrix",
    "gram_moduli_sq",
    "residuals",
    "objective_value",
    "is_mub_set",
    "is_prime",
    "prime_mub_construction",
    "residual_count",
    "pair_index",
]


@dataclass(frozen=True, eq=False)
class BasisSet:
    """``N`` unitaries whose columns are basis vectors, plus the implicit identity.

    ``bases`` has shape ``(N, d, d)``.
    """

    bases: np.ndarray
    unitary_tol: float = field(default=1e-10, repr=False)

    def __post_init__(self):
        b = np.array(self.bases, dtype=np.complex128)
        if b.ndim == 2:
            b = b[None]
        if b.ndim != 3 or b.shape[1] != b.shape[2] or b.shape[0] < 1:
            raise MatrixError(f"bases must have shape (N, d, d), got {b.shape}")
        if not np.all(np.isfinite(b)):
            raise MatrixError("bases contain non-finite entries")
        for k, u in enumerate(b):
            defect = unitarity_defect(u)
            if defect > self.unitary_tol:
                raise MatrixError(
                    f"basis {k} is not unitary (defect {defect:.3e})")
        b.setflags(write=False)
        object.__setattr__(self, "bases", b)

    @property
    def d(self) -> int:
        return self.bases.shape[1]

    @property
    def n_bases(self) -> int:
        return self.bases.shape[0]

    def all_bases(self) -> np.ndarray:
        """The stored unitaries followed by the identity, shape ``(N+1, d, d)``."""
        return np.concatenate([self.bases, np.eye(self.d)[None]], axis=0)

    def to_json(self) -> dict:
        pairs = np.stack([self.bases.real, self.bases.imag], axis=-1)
        return {"d": self.d, "bases": pairs.tolist()}

    @classmethod
    def from_json(cls, payload: dict, unitary_tol: float = 1e-10) -> "BasisSet":
        try:
            d = int(payload["d"])
            raw = np.asarray(payload["bases"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise MatrixError(f"malformed basis-set document: {exc}") from exc
        if raw.ndim != 4 or raw.shape[1:] != (d, d, 2):
            raise MatrixError(
                f"bases must be nested as [N][{d}][{d}][re, im], got {raw.shape}")
        return cls(raw[..., 0] + 1j * raw[..., 1], unitary_tol=unitary_tol)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json()) + "\n")

    @classmethod
    def load(cls, path, unitary_tol: float = 1e-10) -> "BasisSet":
        with open(path) as fh:
            payload = json.load(fh)
        if not isinstance(payload, dict):
            raise MatrixError("basis-set document must be a JSON object")
        return cls.from_json(payload, unitary_tol=unitary_tol)


def fourier_matrix(d: int) -> np.ndarray:
    """Unitary DFT matrix with entries ``omega**(m n) / sqrt(d)``."""
    k = np.arange(d)
    return np.exp(2j * np.pi * np.outer(k, k) / d) / np.sqrt(d)


def gram_moduli_sq(a, b) -> np.ndarray:
    """``|(A^dagger B)_{mn}|**2``; broadcasts over leading axes."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape[-2:] != b.shape[-2:]:
        raise MatrixError(f"dimension mismatch: {a.shape} vs {b.shape}")
    g = adjoint(a) @ b
    return g.real ** 2 + g.imag ** 2


def residual_count(d: int, n_bases: int) -> int:
    return d * d * n_bases * (n_bases + 1) // 2


def pair_index(n_bases: int) -> tuple[np.ndarray, np.ndarray]:
    """Basis pairs ``(k, l)``, ``k < l``, over ``N+1`` bases in lexicographic order."""
    return np.triu_indices(n_bases + 1, 1)


def _stack_residuals(us: np.ndarray) -> np.ndarray:
    # us: (..., N+1, d, d) -> (..., L) ordered by (k, l, m, n)
    d = us.shape[-1]
    k, l = pair_index(us.shape[-3] - 1)
    moduli = gram_moduli_sq(us[..., k, :, :], us[..., l, :, :])
    return moduli.reshape(us.shape[:-3] + (-1,)) - 1.0 / d


def residuals(basis_set: BasisSet) -> np.ndarray:
    return _stack_residuals(basis_set.all_bases())


def objective_value(basis_set: BasisSet) -> float:
    r = residuals(basis_set)
    return float(r @ r)


@dataclass(frozen=True)
class MubCheck:
    is_mub: bool
    objective: float
    max_deviation: float
    threshold: float

    def __bool__(self) -> bool:
        return self.is_mub


def is_mub_set(basis_set: BasisSet, threshold: float = 1e-6) -> MubCheck:
    """Decide mutual unbiasedness by ``objective <= threshold``.

    ``max_deviation`` is the largest ``| |<psi_km|psi_ln>| - 1/sqrt(d) |``
    over all cross-basis pairs.
    """
    if threshold <= 0:
        raise ValueError("threshold must be positive")
    value = objective_value(basis_set)
    moduli = residuals(basis_set) + 1.0 / basis_set.d
    dev = np.abs(np.sqrt(np.clip(moduli, 0.0, None)) - 1.0 / np.sqrt(basis_set.d))
    return MubCheck(value <= threshold, value, float(dev.max()), threshold)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, int(n ** 0.5) + 1))


def prime_mub_construction(d: int) -> BasisSet:
    """``d`` bases which with the standard basis form ``d + 1`` MUBs, ``d`` prime.

    For odd ``d`` basis ``r`` has components ``omega**(r n**2 + m n) / sqrt(d)``
    (``n`` the row, ``m`` the vector label).  For ``d = 2`` the eigenbases of
    the Pauli X and Y matrices are used.
    """
    if not isinstance(d, (int, np.integer)) or not is_prime(int(d)):
        raise ValueError(f"dimension {d!r} is not prime")
    if d == 2:
        s = 1 / np.sqrt(2)
        return BasisSet(np.array([[[s, s], [s, -s]],
                                  [[s, s], [1j * s, -1j * s]]]))
    n = np.arange(d)[:, None]
    m = np.arange(d)[None, :]
    r = np.arange(d)[:, None, None]
    exponent = (r * n * n + m * n) % d
    return BasisSet(np.exp(2j * np.pi * exponent / d) / np.sqrt(d))


class MubResiduals:
    """Residual vector as a function of packed generator parameters.

    Calling with ``x`` of shape ``(..., d*d*N)`` returns residuals of shape
    ``(..., L)``; the leading axes let finite differences evaluate all probe
    points in one batch.
    """

    def __init__(self, d: int, n_bases: int):
        self.d = d
        self.n_bases = n_bases
        self.n_params = d * d * n_bases
        self.n_residuals = residual_count(d, n_bases)

    def unitaries(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        seg = x.reshape(x.shape[:-1] + (self.n_bases, self.d * self.d))
        return exp_i(params_to_hermitian(seg, self.d))

    def __call__(self, x) -> np.ndarray:
        u = self.unitaries(x)
        eye = np.broadcast_to(np.eye(self.d), u.shape[:-3] + (1, self.d, self.d))
        return _stack_residuals(np.concatenate([u, eye], axis=-3))

    def basis_set(self, x) -> BasisSet:
        return BasisSet(self.unitaries(x))
