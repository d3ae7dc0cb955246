"""Projection probabilities, certainty measures, and their trade-off bounds.

The certainty of a measurement on a pure state is the sum of squared
outcome probabilities: 1/M for a basis unbiased to the state, 1 for an
eigenstate. Across mutually unbiased bases the certainties obey a ladder
of inequalities (pairwise, any J, the sharper prime-dimension form, and
the full-set bound of 2), all checked here with signed margins so noise-
level near-violations stay visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .basis import Basis, MubSet, certify_unbiased, require_complete
from .errors import DimensionMismatchError
from .weyl import PrimeDim

PROB_SUM_TOL = 1e-10
CERTAINTY_SLACK = 1e-12
INVARIANT_TOL = 1e-8


@dataclass(frozen=True)
class PureState:
    """A normalized state vector of the composite system."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1:
            raise ValueError("amplitudes must be a vector")
        if abs(np.vdot(amp, amp).real - 1.0) > 1e-12:
            raise ValueError("state is not normalized")
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    @classmethod
    def basis_state(cls, dim: int, index: int) -> "PureState":
        amp = np.zeros(dim, dtype=complex)
        amp[index] = 1.0
        return cls(amp)

    @classmethod
    def from_vector(cls, vec) -> "PureState":
        vec = np.asarray(vec, dtype=complex)
        return cls(vec / np.linalg.norm(vec))


def haar_states(dim: int, count: int, seed: int | np.random.Generator = 0) -> np.ndarray:
    """(count, dim) stack of Haar-random pure states: normalized complex Gaussians."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def probabilities(state: PureState, basis: Basis) -> np.ndarray:
    """P(m) = |<basis_m|state>|^2."""
    if state.dim != basis.dim:
        raise DimensionMismatchError("state and basis dimensions differ")
    p = np.abs(basis.vectors.conj() @ state.amplitudes) ** 2
    assert abs(p.sum() - 1.0) < PROB_SUM_TOL
    return p


def certainty(state: PureState, basis: Basis) -> float:
    """C^2 = sum_m P(m)^2, in [1/M, 1]."""
    p = probabilities(state, basis)
    c2 = float((p**2).sum())
    m = basis.dim
    assert 1.0 / m - CERTAINTY_SLACK <= c2 <= 1.0 + CERTAINTY_SLACK
    return c2


def certainties_many(states: np.ndarray, bases: list[Basis]) -> np.ndarray:
    """(n_states, n_bases) matrix of C^2 values; vectorized sweep core."""
    out = np.empty((states.shape[0], len(bases)))
    for j, basis in enumerate(bases):
        p = np.abs(states @ basis.vectors.conj().T) ** 2
        out[:, j] = (p**2).sum(axis=1)
    return out


def pair_bound(m: int) -> float:
    return 1.0 + 1.0 / m


def general_bound(j: int, m: int) -> float:
    return 1.0 + (j - 1) / math.sqrt(m)


def prime_bound(j: int, m: int) -> float:
    return 1.0 + (j - 1) / m


def check_pair(state: PureState, a: Basis, b: Basis) -> dict:
    """Pairwise inequality C_a^2 + C_b^2 <= 1 + 1/M, with signed margin.

    An uncertified (non-unbiased) pair is flagged rather than rejected:
    the inequality is then not guaranteed.
    """
    lhs = certainty(state, a) + certainty(state, b)
    bound = pair_bound(a.dim)
    return {
        "lhs": lhs,
        "bound": bound,
        "margin": bound - lhs,
        "certified": certify_unbiased(a, b).passed,
    }


def check_sum(state: PureState, bases: list[Basis], prime_case: bool) -> dict:
    """Sum inequality over J bases: sqrt(M) bound, or the sharper prime form."""
    if len(bases) < 2:
        raise ValueError("need at least two bases")
    j, m = len(bases), bases[0].dim
    lhs = float(sum(certainty(state, basis) for basis in bases))
    bound = prime_bound(j, m) if prime_case else general_bound(j, m)
    certified = all(
        certify_unbiased(bases[i], bases[k]).passed
        for i in range(j)
        for k in range(i + 1, j)
    )
    return {"lhs": lhs, "bound": bound, "margin": bound - lhs, "certified": certified}


def check_full_invariant(state: PureState, mub: MubSet) -> dict:
    """Sum of certainties over a complete prime-dimension set; equals 2 for pure states."""
    require_complete(mub)
    lhs = float(sum(certainty(state, basis) for basis in mub.bases))
    return {"lhs": lhs, "deviation_from_2": abs(lhs - 2.0)}


@dataclass
class CertaintyReport:
    """Per-basis certainties of one state plus every applicable bound/margin."""

    m: int
    n_bases: int
    prime_case: bool
    complete: bool
    per_basis: list[float]
    sums: dict = field(default_factory=dict)
    bounds: dict = field(default_factory=dict)
    margins: dict = field(default_factory=dict)


def certainty_report(state: PureState, mub: MubSet) -> CertaintyReport:
    """Evaluate every applicable certainty relation for one state."""
    m = mub.m
    prime_case = isinstance(mub.dims, PrimeDim)
    complete = mub.is_complete()
    c2 = [certainty(state, basis) for basis in mub.bases]
    j = len(c2)
    report = CertaintyReport(
        m=m,
        n_bases=j,
        prime_case=prime_case,
        complete=complete,
        per_basis=c2,
    )
    total = float(sum(c2))
    worst_pair = max(
        (c2[i] + c2[k] for i in range(j) for k in range(i + 1, j)), default=None
    )
    report.bounds = {
        "pair": pair_bound(m),
        "general_J": general_bound(j, m),
        "prime_J": prime_bound(j, m) if prime_case else None,
        "full": 2.0 if complete else None,
    }
    report.sums = {"pair_worst": worst_pair, "total": total}
    if worst_pair is not None:
        report.margins["pair"] = report.bounds["pair"] - worst_pair
    if j >= 2:
        report.margins["general_J"] = report.bounds["general_J"] - total
        if prime_case:
            report.margins["prime_J"] = report.bounds["prime_J"] - total
    if complete:
        report.margins["full"] = 2.0 - total
    return report


def sweep_margins(mub: MubSet, n_states: int, seed: int = 0) -> dict:
    """Monte-Carlo worst-case margins over seeded Haar-random states.

    Returns minima of the signed margins for the pairwise, general-J and
    prime-J inequalities, and the largest deviation of the full-set sum
    from 2 when the set is complete.
    """
    m = mub.m
    states = haar_states(m, n_states, seed)
    c2 = certainties_many(states, mub.bases)
    j = c2.shape[1]
    pair_lhs_max = max(
        float((c2[:, i] + c2[:, k]).max()) for i in range(j) for k in range(i + 1, j)
    )
    total = c2.sum(axis=1)
    prime_case = isinstance(mub.dims, PrimeDim)
    out = {
        "n_states": n_states,
        "seed": seed,
        "per_basis_min": float(c2.min()),
        "per_basis_max": float(c2.max()),
        "pair": {"bound": pair_bound(m), "min_margin": pair_bound(m) - pair_lhs_max},
        "general_J": {
            "bound": general_bound(j, m),
            "min_margin": float(general_bound(j, m) - total.max()),
        },
    }
    if prime_case:
        out["prime_J"] = {
            "bound": prime_bound(j, m),
            "min_margin": float(prime_bound(j, m) - total.max()),
        }
    if mub.is_complete():
        out["full_invariant"] = {"max_deviation": float(np.abs(total - 2.0).max())}
    return out
