"""Levenberg-Marquardt minimisation of a sum of squared residuals.

The Jacobian is approximated by forward differences.  Damping is
Marquardt's scaled form ``lambda * diag(J^T J)``; a step that lowers the
objective is accepted and shrinks ``lambda``, otherwise ``lambda`` grows and
the step is retried with the same Jacobian.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .linalg import NumericalError

__all__ = ["LmOptions", "LmResult", "Termination", "fd_jacobian", "lm_minimize"]

ResidualFn = Callable[[np.ndarray], np.ndarray]


class Termination(str, enum.Enum):
    FUNCTION_CHANGE_TOL = "FunctionChangeTol"
    MAX_ITERATIONS = "MaxIterations"
    DAMPING_OVERFLOW = "DampingOverflow"
    GRADIENT_VANISHED = "GradientVanished"
    NUMERICAL_ERROR = "NumericalError"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LmOptions:
    func_change_tol: float = 1e-8
    max_iterations: int = 400
    fd_step: float = float(np.sqrt(np.finfo(float).eps))
    damping_init: float = 1e-3
    damping_up: float = 10.0
    damping_down: float = 0.1
    damping_max: float = 1e16
    gradient_tol: float = 1e-12
    damping: str = "identity"

    def __post_init__(self):
        for name in ("func_change_tol", "fd_step", "damping_init",
                     "damping_max", "gradient_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.damping not in ("scaled", "identity"):
            raise ValueError("damping must be 'scaled' or 'identity'")
        if not self.damping_up > 1.0 > self.damping_down > 0.0:
            raise ValueError("need damping_up > 1 > damping_down > 0")


@dataclass
class LmResult:
    x_final: np.ndarray
    objective_final: float
    iterations: int
    termination: Termination
    objective_trace: list[float] = field(default_factory=list)
    n_evaluations: int = 0


def fd_jacobian(fun: ResidualFn, x, fd_step: float = LmOptions.fd_step,
                f0=None, vectorized: bool = False) -> np.ndarray:
    """Forward-difference Jacobian ``J[i, j] = (f_i(x + h_j e_j) - f_i(x)) / h_j``.

    ``h_j = fd_step * max(|x_j|, 1)``.  With ``vectorized=True`` ``fun`` must
    map an ``(m, k)`` array of points to ``(m, L)`` residuals, and the base
    point is evaluated in the same batch as the probes (``f0`` is ignored).
    """
    x = np.asarray(x, dtype=np.float64)
    h = fd_step * np.maximum(np.abs(x), 1.0)
    probes = x + np.diag(h)
    # the actually representable step
    h = np.diagonal(probes) - x
    if vectorized:
        values = np.asarray(fun(np.vstack([x[None], probes])))
        f0, fp = values[0], values[1:]
    else:
        if f0 is None:
            f0 = np.asarray(fun(x))
        fp = np.array([fun(p) for p in probes])
    if not np.all(np.isfinite(f0)):
        raise NumericalError("non-finite residual at the base point")
    bad = ~np.all(np.isfinite(fp), axis=1)
    if bad.any():
        raise NumericalError(
            f"non-finite residual when perturbing coordinate {int(np.argmax(bad))}")
    return ((fp - f0) / h[:, None]).T


def lm_minimize(fun: ResidualFn, x0, opts: LmOptions | None = None,
                vectorized: bool = False) -> LmResult:
    """Minimise ``sum(fun(x)**2)`` starting from ``x0``.

    Terminates with ``FunctionChangeTol`` once an accepted step changes the
    objective by less than ``opts.func_change_tol``.  ``vectorized`` is passed
    through to :func:`fd_jacobian`.
    """
    opts = opts or LmOptions()
    x = np.array(x0, dtype=np.float64)

    def evaluate(point):
        if vectorized:
            return np.asarray(fun(point[None]))[0]
        return np.asarray(fun(point))

    f = evaluate(x)
    n_eval = 1
    if not np.all(np.isfinite(f)):
        raise NumericalError("non-finite residual at the starting point")
    obj = float(f @ f)
    trace = [obj]
    lam = opts.damping_init
    k = x.size

    def finish(term, iterations):
        return LmResult(x, obj, iterations, term, trace, n_eval)

    for iteration in range(opts.max_iterations):
        jac = fd_jacobian(fun, x, opts.fd_step, f0=f, vectorized=vectorized)
        n_eval += k + (1 if vectorized else 0)
        grad = jac.T @ f
        if np.max(np.abs(grad)) < opts.gradient_tol:
            return finish(Termination.GRADIENT_VANISHED, iteration)
        jtj = jac.T @ jac
        if opts.damping == "scaled":
            scale = np.diagonal(jtj).copy()
        else:
            scale = np.ones(k)

        while True:
            step = _damped_step(jtj, scale, lam, grad)
            if step is not None:
                trial = x + step
                f_new = evaluate(trial)
                n_eval += 1
                obj_new = float(f_new @ f_new)
                if np.isfinite(obj_new) and obj_new < obj:
                    break
            lam *= opts.damping_up
            if lam > opts.damping_max:
                return finish(Termination.DAMPING_OVERFLOW, iteration)

        lam = max(lam * opts.damping_down, np.finfo(float).tiny)
        change = obj - obj_new
        x, f, obj = trial, f_new, obj_new
        trace.append(obj)
        if change < opts.func_change_tol:
            return finish(Termination.FUNCTION_CHANGE_TOL, iteration + 1)

    return finish(Termination.MAX_ITERATIONS, opts.max_iterations)


def _damped_step(jtj, scale, lam, grad):
    """Solve ``(J^T J + lam diag(J^T J)) step = -J^T f``; ``None`` if singular."""
    a = jtj + np.diag(lam * scale)
    for shift in (0.0, 1e-12):
        if shift:
            a = a + shift * np.eye(len(a))
        try:
            step = cho_solve(cho_factor(a, check_finite=False), -grad,
                             check_finite=False)
        except LinAlgError:
            continue
        if np.all(np.isfinite(step)):
            return step
    return None
