"""Extremizing weighted certainty sums over the pure-state sphere.

Projected gradient ascent/descent with an Armijo backtracking line search
and projection retraction (normalize after stepping). The objective
sum_j w_j C_j^2 is a smooth phase-invariant polynomial, multimodal through
its eigenstate maxima, so the optimizer restarts from seeded Haar-random
states and keeps the best run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .basis import Basis
from .certainty import PureState, haar_states
from .errors import DimensionMismatchError

GRAD_TOL = 1e-7
ARMIJO_C = 1e-4
SHRINK = 0.5
INITIAL_STEP = 1.0
MAX_ITERS = 2000


@dataclass
class ExtremizationProblem:
    """What to extremize: bases, weights, direction, and search controls."""

    bases: list[Basis]
    weights: list[float] | None = None
    sense: str = "max"
    restarts: int = 32
    step_tolerance: float = 1e-12
    seed: int = 0
    max_iters: int = MAX_ITERS

    def __post_init__(self) -> None:
        if not self.bases:
            raise ValueError("need at least one basis")
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")
        if self.weights is None:
            self.weights = [1.0] * len(self.bases)
        if len(self.weights) != len(self.bases):
            raise ValueError("one weight per basis")
        if not all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite")


@dataclass
class ExtremizationResult:
    state: PureState
    value: float
    per_basis: list[float]
    converged: bool
    iterations: int
    gradient_norm_at_exit: float
    restart_index: int = 0
    bound: float | None = None
    extras: dict = field(default_factory=dict)


def _value_and_grad(psi: np.ndarray, bases: list[Basis], weights) -> tuple[float, np.ndarray, list[float]]:
    """Objective, Riemannian gradient (tangent to the sphere), per-basis C^2."""
    value = 0.0
    grad = np.zeros_like(psi)
    per_basis = []
    for w, basis in zip(weights, bases):
        amps = basis.vectors.conj() @ psi
        p = np.abs(amps) ** 2
        c2 = float((p**2).sum())
        per_basis.append(c2)
        value += w * c2
        grad += w * 2.0 * (basis.vectors.T @ (p * amps))
    grad -= np.vdot(psi, grad) * psi
    return value, grad, per_basis


def objective_and_gradient(state: PureState, problem: ExtremizationProblem) -> dict:
    """Evaluate the weighted certainty objective and its sphere gradient."""
    if state.dim != problem.bases[0].dim:
        raise DimensionMismatchError("state and bases dimensions differ")
    value, grad, per_basis = _value_and_grad(state.amplitudes, problem.bases, problem.weights)
    return {"value": value, "riemannian_gradient": grad, "per_basis": per_basis}


def _ascend(psi, bases, weights, sign, max_iters, step_tolerance):
    """Gradient ascent of sign*objective from psi; returns end point + stats.

    The accepted step seeds the next line search (doubled): near flat ridges
    of the certainty objective the usable step grows by orders of magnitude,
    which plain unit-step backtracking crawls along.
    """
    value, grad, _ = _value_and_grad(psi, bases, weights)
    fval = sign * value
    iters = 0
    gnorm = float(np.linalg.norm(grad))
    alpha_seed = INITIAL_STEP
    while iters < max_iters:
        gnorm = float(np.linalg.norm(grad))
        if gnorm < GRAD_TOL:
            break
        direction = sign * grad
        slope = 2.0 * gnorm * gnorm  # directional derivative along the gradient
        alpha = alpha_seed
        while True:
            trial = psi + alpha * direction
            trial /= np.linalg.norm(trial)
            tval, tgrad, _ = _value_and_grad(trial, bases, weights)
            if sign * tval >= fval + ARMIJO_C * alpha * slope:
                psi, fval, grad = trial, sign * tval, tgrad
                break
            alpha *= SHRINK
            if alpha < step_tolerance:
                break
        iters += 1
        if alpha < step_tolerance:
            break
        alpha_seed = min(2.0 * alpha, 1e8)
    return psi, sign * fval, gnorm, iters


def _vertex_starts(bases: list[Basis], weights, sign, count: int = 4) -> list[np.ndarray]:
    """Best few basis vectors as extra starting points.

    Eigenstates are the stationary points that saturate the certainty
    bounds; plain ascent approaches them only sublinearly along the
    degenerate ridge, while starting on one costs nothing.
    """
    m = bases[0].dim
    candidates = np.concatenate([b.vectors for b in bases])
    values = np.zeros(len(candidates))
    for w, basis in zip(weights, bases):
        p = np.abs(candidates @ basis.vectors.conj().T) ** 2
        values += w * (p**2).sum(axis=1)
    order = np.argsort(-sign * values, kind="stable")
    return [candidates[i].copy() for i in order[:count]]


def extremize(problem: ExtremizationProblem) -> ExtremizationResult:
    """Best gradient run over seeded Haar restarts plus eigenstate starts.

    Ties keep the earliest start; eigenstate starts are tried first, then
    the `restarts` random ones.
    """
    m = problem.bases[0].dim
    sign = 1.0 if problem.sense == "max" else -1.0
    starts = _vertex_starts(problem.bases, problem.weights, sign) + list(
        haar_states(m, problem.restarts, problem.seed)
    )
    best = None
    total_iters = 0
    for idx, start in enumerate(starts):
        psi, value, gnorm, iters = _ascend(
            start.copy(),
            problem.bases,
            problem.weights,
            sign,
            problem.max_iters,
            problem.step_tolerance,
        )
        total_iters += iters
        if best is None or sign * value > sign * best[1]:
            best = (psi, value, gnorm, idx)
    psi, value, gnorm, idx = best
    state = PureState.from_vector(psi)
    check = _value_and_grad(state.amplitudes, problem.bases, problem.weights)
    assert abs(check[0] - value) < 1e-10
    return ExtremizationResult(
        state=state,
        value=value,
        per_basis=check[2],
        converged=gnorm < GRAD_TOL,
        iterations=total_iters,
        gradient_norm_at_exit=gnorm,
        restart_index=idx,
    )


def certainty_region_scan(
    a: Basis,
    b: Basis,
    grid: int = 9,
    *,
    restarts: int = 8,
    seed: int = 0,
    constraint_tol: float = 1e-4,
) -> list[tuple[float, float]]:
    """Empirical Pareto frontier of (C_a^2, C_b^2) for a MUB pair.

    For each grid target t of C_a^2, maximizes C_b^2 - mu (C_a^2 - t)^2,
    doubling the quadratic-penalty multiplier from 10 (warm-started) until
    the constraint error drops below tolerance, and keeps the best feasible
    point. Five doubling rounds are a floor; the multiplier keeps growing
    while the iterate is infeasible, since mu ~ 1/tolerance is needed.
    """
    m = a.dim
    targets = np.linspace(1.0 / m, 1.0, grid)
    points = []
    rng_states = haar_states(m, restarts * grid, seed)
    for gi, t in enumerate(targets):
        best = None
        for r in range(restarts):
            psi = rng_states[gi * restarts + r].copy()
            for round_ in range(16):
                mu = 10.0 * 2.0**round_
                psi = _penalty_ascend(psi, a, b, t, mu)
                ca, _ = _pair_certainties(psi, a, b)
                if round_ >= 4 and abs(ca - t) <= constraint_tol / 4:
                    break
            ca, cb = _pair_certainties(psi, a, b)
            if abs(ca - t) <= constraint_tol and (best is None or cb > best[1]):
                best = (ca, cb)
        if best is not None:
            points.append(best)
    return points


def _pair_certainties(psi, a: Basis, b: Basis) -> tuple[float, float]:
    pa = np.abs(a.vectors.conj() @ psi) ** 2
    pb = np.abs(b.vectors.conj() @ psi) ** 2
    return float((pa**2).sum()), float((pb**2).sum())


def _penalty_ascend(psi, a: Basis, b: Basis, t: float, mu: float, max_iters: int = 400):
    """Maximize C_b^2 - mu (C_a^2 - t)^2 by projected gradient ascent."""

    def eval_(p):
        amps_a = a.vectors.conj() @ p
        amps_b = b.vectors.conj() @ p
        pa = np.abs(amps_a) ** 2
        pb = np.abs(amps_b) ** 2
        ca = float((pa**2).sum())
        cb = float((pb**2).sum())
        val = cb - mu * (ca - t) ** 2
        grad_a = 2.0 * (a.vectors.T @ (pa * amps_a))
        grad_b = 2.0 * (b.vectors.T @ (pb * amps_b))
        grad = grad_b - 2.0 * mu * (ca - t) * grad_a
        grad -= np.vdot(p, grad) * p
        return val, grad

    fval, grad = eval_(psi)
    alpha_seed = INITIAL_STEP
    for _ in range(max_iters):
        gnorm = float(np.linalg.norm(grad))
        if gnorm < GRAD_TOL:
            break
        alpha = alpha_seed
        slope = 2.0 * gnorm * gnorm
        while True:
            trial = psi + alpha * grad
            trial /= np.linalg.norm(trial)
            tval, tgrad = eval_(trial)
            if tval >= fval + ARMIJO_C * alpha * slope:
                psi, fval, grad = trial, tval, tgrad
                break
            alpha *= SHRINK
            if alpha < 1e-12:
                break
        if alpha < 1e-12:
            break
        alpha_seed = min(2.0 * alpha, 1e8)
    return psi
