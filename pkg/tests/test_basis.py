"""Eigenbases from classes, unbiasedness certification, tensor products."""

import itertools

import numpy as np
import pytest

from mubkit import (
    Basis,
    CommutingClass,
    PrimeDim,
    WeylLabel,
    build_complete_mub,
    certify_unbiased,
    default_pairing,
    eigenbasis_of_class,
    tensor_mub,
)
from mubkit.errors import DimensionMismatchError, IncompleteSetError, PairingError

D21 = PrimeDim(2, 1)
D22 = PrimeDim(2, 2)


def test_z_class_gives_computational_basis():
    basis = eigenbasis_of_class(CommutingClass([WeylLabel.from_pauli("Z")], D21), D21)
    assert np.allclose(basis.vectors, np.eye(2))


def test_x_class_gives_hadamard_basis():
    basis = eigenbasis_of_class(CommutingClass([WeylLabel.from_pauli("X")], D21), D21)
    s = 1 / np.sqrt(2)
    assert np.allclose(basis.vectors, [[s, s], [s, -s]])


def test_qutrit_z_class_gives_computational_basis():
    d31 = PrimeDim(3, 1)
    basis = eigenbasis_of_class(CommutingClass([WeylLabel.make((0,), (1,), 3)], d31), d31)
    assert np.allclose(basis.vectors, np.eye(3))


def test_bell_class_matches_direct_eigensolve_oracle():
    cls_ = CommutingClass([WeylLabel.from_pauli("XX"), WeylLabel.from_pauli("ZZ")], D22)
    basis = eigenbasis_of_class(cls_, D22)

    # oracle: eigenvectors of XX + 2 YY + 4 ZZ (distinct integer spectrum)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0, -1.0]).astype(complex)
    h = np.kron(x, x) + 2 * np.kron(y, y) + 4 * np.kron(z, z)
    _, oracle_vectors = np.linalg.eigh(h)

    overlap = np.abs(basis.vectors.conj() @ oracle_vectors) ** 2
    # a perfect matching: each output vector coincides with one oracle vector
    assert np.allclose(np.sort(overlap.max(axis=1)), 1.0)
    assert np.allclose(overlap.sum(axis=0), 1.0)

    for vec in basis.vectors:  # Bell states have Schmidt rank 2
        svals = np.linalg.svd(vec.reshape(2, 2), compute_uv=False)
        assert (svals > 1e-8).sum() == 2
        assert np.allclose(svals, 0.5**0.5)


def test_eigenbasis_vectors_eigenvectors_of_members():
    dims = PrimeDim(3, 2)
    from mubkit import enumerate_lagrangians, weyl_matrix

    for cls_ in enumerate_lagrangians(dims)[::7]:
        basis = eigenbasis_of_class(cls_, dims)
        for lbl in cls_.members[:3]:
            m = weyl_matrix(lbl, dims)
            for vec in basis.vectors[:3]:
                image = m @ vec
                lam = vec.conj() @ image
                assert abs(abs(lam) - 1) < 1e-10
                assert np.abs(image - lam * vec).max() < 1e-10


def test_deterministic_vector_phase_and_order():
    cls_ = CommutingClass([WeylLabel.from_pauli("XX"), WeylLabel.from_pauli("ZZ")], D22)
    a = eigenbasis_of_class(cls_, D22)
    b = eigenbasis_of_class(cls_, D22)
    assert np.array_equal(a.vectors, b.vectors)
    for vec in a.vectors:
        lead = vec[np.abs(vec) > 1e-8][0]
        assert abs(lead.imag) < 1e-12 and lead.real > 0


def test_certify_unbiased_examples():
    comp = eigenbasis_of_class(CommutingClass([WeylLabel.from_pauli("Z")], D21), D21)
    had = eigenbasis_of_class(CommutingClass([WeylLabel.from_pauli("X")], D21), D21)
    rec = certify_unbiased(comp, had)
    assert rec.passed and rec.max_dev < 1e-12

    self_rec = certify_unbiased(comp, comp)
    assert not self_rec.passed
    assert abs(self_rec.max_dev - (1 - 1 / 2)) < 1e-12

    with pytest.raises(DimensionMismatchError):
        certify_unbiased(comp, eigenbasis_of_class(CommutingClass([WeylLabel.from_pauli("ZZ"), WeylLabel.from_pauli("XX")], D22), D22))


def test_all_pairs_of_two_qubit_set_certify(mub4):
    for a, b in itertools.combinations(mub4.bases, 2):
        assert certify_unbiased(a, b, tol=1e-9).passed


@pytest.mark.parametrize("fixture,count", [("mub4", 5), ("mub8", 9), ("mub9", 10)])
def test_complete_set_sizes(request, fixture, count):
    mub = request.getfixturevalue(fixture)
    assert len(mub.bases) == count
    assert mub.certified and mub.max_dev < 1e-9
    assert mub.is_complete()


def test_basis_validation_rejects_bad_vectors():
    with pytest.raises(ValueError, match="not normalized"):
        Basis(np.eye(3) * 1.1)
    bad = np.eye(3, dtype=complex)
    bad[1] = [1e-3, np.sqrt(1 - 1e-6), 0]  # unit norm, but not orthogonal to row 0
    with pytest.raises(ValueError, match="not orthogonal"):
        Basis(bad)


def test_basis_diagonalization_check_rejects_wrong_source():
    x_cls = CommutingClass([WeylLabel.from_pauli("X")], D21)
    with pytest.raises(ValueError, match="not diagonal"):
        Basis(np.eye(2, dtype=complex), source=x_cls, _dims=D21)


def test_tensor_computational_is_computational():
    mub_a = build_complete_mub(D21, seed=0)
    mub_b = build_complete_mub(PrimeDim(3, 1), seed=0)
    comp_a = next(i for i, b in enumerate(mub_a.bases) if np.allclose(b.vectors, np.eye(2)))
    comp_b = next(i for i, b in enumerate(mub_b.bases) if np.allclose(b.vectors, np.eye(3)))
    out = tensor_mub(mub_a, mub_b, [(comp_a, comp_b)])
    assert out.m == 6
    assert np.allclose(out.bases[0].vectors, np.eye(6))


def test_tensor_qubit_qutrit_three_pairs_certified():
    mub_a = build_complete_mub(D21, seed=0)
    mub_b = build_complete_mub(PrimeDim(3, 1), seed=0)
    out = tensor_mub(mub_a, mub_b, [(0, 0), (1, 1), (2, 2)])
    assert out.m == 6 and len(out.bases) == 3
    assert out.certified and out.max_dev < 1e-9
    for a, b in itertools.combinations(out.bases, 2):
        assert certify_unbiased(a, b, tol=1e-9).passed


def test_tensor_auto_pairing_matches_counts():
    mub_a = build_complete_mub(D21, seed=0)
    mub_b = build_complete_mub(PrimeDim(3, 1), seed=0)
    pairing = default_pairing(mub_a, mub_b)
    assert len(pairing) == 3  # min(3 qubit bases, 4 qutrit bases)
    out = tensor_mub(mub_a, mub_b)
    assert len(out.bases) == 3


def test_tensor_pairing_errors():
    mub_a = build_complete_mub(D21, seed=0)
    mub_b = build_complete_mub(PrimeDim(3, 1), seed=0)
    with pytest.raises(PairingError, match="injective"):
        tensor_mub(mub_a, mub_b, [(0, 0), (0, 1)])
    with pytest.raises(PairingError, match="longer"):
        tensor_mub(mub_a, mub_b, [(0, 0), (1, 1), (2, 2), (2, 3)])
    with pytest.raises(PairingError, match="range"):
        tensor_mub(mub_a, mub_b, [(0, 9)])


def test_require_complete(mub4):
    from mubkit.basis import MubSet, require_complete

    require_complete(mub4)
    partial = MubSet(mub4.dims, mub4.bases[:3], True, mub4.max_dev)
    with pytest.raises(IncompleteSetError):
        require_complete(partial)
