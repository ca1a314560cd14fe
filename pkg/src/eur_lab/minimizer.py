"""Projected gradient descent for the minimal entropy sum over pure states.

The objective F(psi) = sum_i H(p^(i)) is smooth away from zero outcome
probabilities, which is exactly where its minima like to sit, so descent uses
a clamped logarithm and declares convergence on value stagnation rather than
on the gradient alone. Results are upper values: any local minimum is a valid
upper bound on the true minimum, which is all the bound-validity checks need.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrices import require_unitary
from .sampling import RngStream, sample_pure_state

_LOG_FLOOR = 1e-300
_ARMIJO = 1e-4
_MIN_STEP = 1e-14
_STALL_WINDOW = 20


@dataclass(frozen=True)
class MinimizeOptions:
    restarts: int = 32
    max_iterations: int = 500
    step_init: float = 0.5
    tol_gradient: float = 1e-8
    tol_value: float = 1e-9
    rng: RngStream = field(default_factory=lambda: RngStream(0))
    include_basis_states: bool = True

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("need at least one restart")
        if self.tol_gradient <= 0 or self.tol_value <= 0 or self.step_init <= 0:
            raise ValueError("tolerances and the initial step must be positive")


@dataclass(frozen=True)
class MinimizeResult:
    value: float
    state: np.ndarray
    iterations_used: int
    converged: bool


def _stack(us) -> np.ndarray:
    mats = [require_unitary(u) for u in us]
    if not mats:
        raise ValueError("need at least one measurement")
    dim = mats[0].shape[0]
    if any(m.shape != (dim, dim) for m in mats):
        raise ValueError("all measurement matrices must share one dimension")
    return np.hstack(mats)


def entropy_sum(us, psi) -> float:
    """F(psi) = sum over measurements of the outcome-distribution entropy."""
    w = _stack(us)
    return _value(w, np.asarray(psi, dtype=np.complex128))


def _value(w: np.ndarray, psi: np.ndarray) -> float:
    p = np.abs(w.conj().T @ psi) ** 2
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def entropy_gradient(us, psi, return_clamped: bool = False):
    """Tangent-space gradient of F at psi (Euclidean gradient projected).

    Outcome probabilities below the clamping floor make the true gradient
    singular; ln p is clamped at ln(1e-300) and the result is a subgradient,
    reported through the optional flag.
    """
    w = _stack(us)
    vec = np.asarray(psi, dtype=np.complex128)
    if vec.shape != (w.shape[0],):
        raise ValueError("state dimension does not match the measurements")
    grad, clamped = _tangent_gradient(w, vec)
    if return_clamped:
        return grad, clamped
    return grad


def _tangent_gradient(w: np.ndarray, psi: np.ndarray):
    amps = w.conj().T @ psi
    p = np.abs(amps) ** 2
    clamped = bool(np.any(p < 1e-12))
    logp = np.log(np.maximum(p, _LOG_FLOOR))
    euclid = -2.0 * (w @ ((1.0 + logp) * amps))
    tangent = euclid - psi * np.vdot(psi, euclid)
    return tangent, clamped


def _descend(w: np.ndarray, psi: np.ndarray, opts: MinimizeOptions):
    """One restart of projected gradient descent with Armijo backtracking."""
    value = _value(w, psi)
    history = [value]
    converged = False
    iterations = 0
    for _ in range(opts.max_iterations):
        iterations += 1
        grad, _ = _tangent_gradient(w, psi)
        gnorm = float(np.linalg.norm(grad))
        if gnorm < opts.tol_gradient:
            converged = True
            break
        step = opts.step_init
        accepted = False
        while step > _MIN_STEP:
            cand = psi - step * grad
            cand = cand / np.linalg.norm(cand)
            cand_value = _value(w, cand)
            if cand_value <= value - _ARMIJO * step * gnorm * gnorm:
                psi, value = cand, cand_value
                accepted = True
                break
            step *= 0.5
        if not accepted:
            # No descent direction at any step size: numerically stationary.
            converged = True
            break
        history.append(value)
        if len(history) > _STALL_WINDOW and history[-_STALL_WINDOW - 1] - value < opts.tol_value:
            converged = True
            break
    return value, psi, iterations, converged


def minimize_entropy_sum(us, opts: MinimizeOptions | None = None) -> MinimizeResult:
    """Best local minimum of the entropy sum over multi-restart descent.

    Starts always cover the basis states of every measurement (the columns of
    each input) when include_basis_states is set, plus random pure states.
    The returned value is an upper bound on the true minimum; ties between
    restarts resolve to the earliest.
    """
    if opts is None:
        opts = MinimizeOptions()
    w = _stack(us)
    dim = w.shape[0]
    starts = []
    if opts.include_basis_states:
        starts.extend(np.ascontiguousarray(w[:, j]) for j in range(w.shape[1]))
    for r in range(opts.restarts):
        starts.append(sample_pure_state(opts.rng.child(r), dim))
    best_value = np.inf
    best_state = starts[0]
    best_converged = False
    total_iterations = 0
    for psi in starts:
        value, state, iters, conv = _descend(w, psi, opts)
        total_iterations += iters
        if value < best_value - 1e-15:
            best_value, best_state, best_converged = value, state, conv
    # Certificate: the reported value is recomputed from the reported state.
    best_value = _value(w, best_state)
    return MinimizeResult(best_value, best_state, total_iterations, best_converged)
