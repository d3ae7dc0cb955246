"""Sphere optimizer: gradients against finite differences, saturation values."""

import numpy as np
import pytest

from mubkit import (
    ExtremizationProblem,
    PrimeDim,
    PureState,
    certainty,
    certainty_region_scan,
    extremize,
    haar_states,
    objective_and_gradient,
)


def random_problem(mub, rng, j=None):
    n = len(mub.bases)
    j = j or int(rng.integers(2, n + 1))
    idx = rng.choice(n, size=j, replace=False)
    weights = rng.uniform(-1.0, 1.5, size=j).tolist()
    return ExtremizationProblem(bases=[mub.bases[i] for i in idx], weights=weights, seed=0)


def fd_directional(problem, psi, eta, h=1e-5):
    def f(v):
        v = v / np.linalg.norm(v)
        return objective_and_gradient(PureState(v), problem)["value"]

    return (f(psi + h * eta) - f(psi - h * eta)) / (2 * h)


@pytest.mark.parametrize("fixture", ["mub4", "mub8", "mub9"])
def test_gradient_matches_central_differences(request, fixture):
    mub = request.getfixturevalue(fixture)
    m = mub.m
    rng = np.random.default_rng(m)
    for _ in range(15):
        problem = random_problem(mub, rng)
        psi = haar_states(m, 1, rng)[0]
        out = objective_and_gradient(PureState(psi), problem)
        grad = out["riemannian_gradient"]
        eta = haar_states(m, 1, rng)[0]
        eta = eta - np.vdot(psi, eta) * psi
        eta /= np.linalg.norm(eta)
        fd = fd_directional(problem, psi, eta)
        analytic = 2 * np.vdot(grad, eta).real
        assert abs(fd - analytic) <= 1e-5 * max(abs(analytic), 1e-3)


def test_gradient_tangent_to_sphere(mub8):
    rng = np.random.default_rng(0)
    for _ in range(20):
        problem = random_problem(mub8, rng)
        psi = haar_states(8, 1, rng)[0]
        out = objective_and_gradient(PureState(psi), problem)
        assert abs(np.vdot(psi, out["riemannian_gradient"])) < 1e-10


def test_full_set_objective_is_flat(mub4):
    problem = ExtremizationProblem(bases=mub4.bases, seed=0)
    states = haar_states(4, 100, seed=21)
    for psi in states:
        out = objective_and_gradient(PureState(psi), problem)
        assert abs(out["value"] - 2.0) < 1e-10
        assert np.linalg.norm(out["riemannian_gradient"]) < 1e-8


def test_single_basis_eigenstate_is_stationary_maximum(mub4):
    basis = mub4.bases[0]
    problem = ExtremizationProblem(bases=[basis], seed=0)
    out = objective_and_gradient(PureState(basis.vectors[1].copy()), problem)
    assert abs(out["value"] - 1.0) < 1e-12
    assert np.linalg.norm(out["riemannian_gradient"]) < 1e-10


def test_objective_invariant_under_global_phase(mub4):
    problem = ExtremizationProblem(bases=mub4.bases[:3], weights=[1.0, 0.5, 2.0], seed=0)
    psi = haar_states(4, 1, seed=8)[0]
    a = objective_and_gradient(PureState(psi), problem)["value"]
    b = objective_and_gradient(PureState(np.exp(1j * 1.1) * psi), problem)["value"]
    assert abs(a - b) < 1e-12


def test_maximize_pair_saturates_bound(mub4):
    result = extremize(ExtremizationProblem(bases=mub4.bases[:2], sense="max", restarts=8, seed=2))
    assert abs(result.value - 1.25) < 1e-6
    assert result.converged


def test_minimize_full_set_is_two(mub4):
    result = extremize(ExtremizationProblem(bases=mub4.bases, sense="min", restarts=4, seed=2))
    assert abs(result.value - 2.0) < 1e-6


def test_result_value_reproducible_from_state(mub8):
    problem = ExtremizationProblem(bases=mub8.bases[:4], sense="max", restarts=4, seed=5)
    result = extremize(problem)
    recomputed = sum(certainty(result.state, b) for b in problem.bases)
    assert abs(recomputed - result.value) < 1e-10
    assert result.per_basis == pytest.approx(
        [certainty(result.state, b) for b in problem.bases], abs=1e-12
    )


def test_extremize_seed_determinism(mub4):
    a = extremize(ExtremizationProblem(bases=mub4.bases[:2], restarts=4, seed=3))
    b = extremize(ExtremizationProblem(bases=mub4.bases[:2], restarts=4, seed=3))
    assert a.value == b.value
    assert np.array_equal(a.state.amplitudes, b.state.amplitudes)


def test_problem_validation(mub4):
    with pytest.raises(ValueError, match="at least one basis"):
        ExtremizationProblem(bases=[])
    with pytest.raises(ValueError, match="max.*min"):
        ExtremizationProblem(bases=mub4.bases[:1], sense="upward")
    with pytest.raises(ValueError, match="one weight"):
        ExtremizationProblem(bases=mub4.bases[:2], weights=[1.0])
    with pytest.raises(ValueError, match="finite"):
        ExtremizationProblem(bases=mub4.bases[:2], weights=[1.0, np.inf])


def test_certainty_region_scan_endpoints_and_midpoint(mub4):
    points = certainty_region_scan(mub4.bases[0], mub4.bases[1], grid=3, restarts=4, seed=0)
    assert len(points) == 3
    for ca, cb in points:
        assert ca + cb <= 1.25 + 1e-6
    # eigenstate endpoints: full certainty in one basis pins 1/M in the other
    assert points[0] == pytest.approx((0.25, 1.0), abs=2e-4)
    assert points[-1] == pytest.approx((1.0, 0.25), abs=2e-4)
    # frozen regression value for the t = 0.625 midpoint (first-run fixture)
    assert points[1][1] == pytest.approx(0.542541, abs=5e-3)
