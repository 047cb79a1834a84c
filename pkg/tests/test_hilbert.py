import numpy as np
import pytest

from jointweak.errors import DimensionMismatch, NormalizationError, NotHermitian
from jointweak.hilbert import (
    Ket,
    Operator,
    check_commute,
    classify,
    expm_hermitian,
    identity,
    joint_eigenbasis,
    ket,
    projector,
    sigma_x,
    sigma_y,
    sigma_z,
    tensor,
)

from helpers import random_state


def test_tensor_identity():
    i4 = tensor(identity(2), identity(2))
    np.testing.assert_allclose(i4.entries, np.eye(4))


def test_tensor_basis_action():
    # sigma_x on the first qubit flips |+z,+z> to |-z,+z>
    op = tensor(sigma_x(), identity(2))
    state = op.apply(ket([1, 0, 0, 0]))
    np.testing.assert_allclose(state.amplitudes, [0, 0, 1, 0])


def test_tensor_rank1_projector_trace():
    p = tensor(projector(ket([1, 0])), projector(ket([0, 1])))
    assert abs(np.trace(p.entries) - 1) < 1e-14
    assert classify(p) == "idempotent"


def test_tensor_ordering_left_factor_first():
    op = tensor(sigma_z(), identity(2))
    np.testing.assert_allclose(np.diag(op.entries), [1, 1, -1, -1])


def test_expm_diagonal():
    u = expm_hermitian(sigma_z(), -1j * np.pi / 2)
    np.testing.assert_allclose(
        u.entries, np.diag([np.exp(-1j * np.pi / 2), np.exp(1j * np.pi / 2)]),
        atol=1e-14,
    )


@pytest.mark.parametrize("g", [0.0, 0.3, 1.0, 2.7])
def test_expm_involutory_identity(g):
    u = expm_hermitian(sigma_x(), -1j * g)
    expected = np.cos(g) * np.eye(2) - 1j * np.sin(g) * sigma_x().entries
    np.testing.assert_allclose(u.entries, expected, atol=1e-10)


@pytest.mark.parametrize("g", [0.0, 0.4, 1.9])
def test_expm_projector_identity(g):
    p = projector(ket([1, 1j]))
    u = expm_hermitian(p, -1j * g)
    expected = np.eye(2) - p.entries * (1 - np.exp(-1j * g))
    np.testing.assert_allclose(u.entries, expected, atol=1e-10)


def test_expm_unitary_and_norm_preserving():
    rng = np.random.default_rng(11)
    h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = Operator(h + h.conj().T)
    u = expm_hermitian(h, -1j * 0.7)
    np.testing.assert_allclose(
        u.entries.conj().T @ u.entries, np.eye(4), atol=1e-10
    )
    state = random_state(rng, 4)
    assert abs(u.apply(state).norm() - 1) < 1e-10


def test_expm_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        expm_hermitian(Operator([[0, 1], [0, 0]]), -1j)


def test_check_commute():
    a = tensor(sigma_x(), identity(2))
    b = tensor(identity(2), sigma_z())
    assert check_commute(a, b)
    assert not check_commute(sigma_x(), sigma_z())
    pa = tensor(projector(ket([1, 0])), identity(2))
    pb = tensor(identity(2), projector(ket([0, 1])))
    assert check_commute(pa, pb)
    with pytest.raises(DimensionMismatch):
        check_commute(sigma_x(), a)


def test_classify():
    assert classify(tensor(sigma_x(), sigma_z())) == "involutory"
    assert classify(tensor(projector(ket([1, 0])), identity(2))) == "idempotent"
    assert classify(Operator(sigma_x().entries + 2 * sigma_z().entries)) == "neither"
    assert classify(identity(4)) == "both"


def test_ket_normalized_flag():
    with pytest.raises(NormalizationError):
        Ket(np.array([1.0, 1.0]), normalized=True)
    k = Ket(np.array([1.0, 1.0])).normalize()
    assert abs(k.norm() - 1) < 1e-15


def test_operator_flag_validation():
    with pytest.raises(NotHermitian):
        Operator([[0, 1], [0, 0]], hermitian=True)
    with pytest.raises(ValueError):
        Operator([[2, 0], [0, 2]], involutory=True)


def test_immutability():
    k = ket([1, 0])
    with pytest.raises(ValueError):
        k.amplitudes[0] = 5


def test_joint_eigenbasis_reconstructs_pair():
    rng = np.random.default_rng(5)
    from helpers import commuting_pair

    for kind in ("involutory", "projector"):
        a, b = commuting_pair(rng, kind)
        vecs, ea, eb = joint_eigenbasis(a, b)
        np.testing.assert_allclose(
            vecs @ np.diag(ea) @ vecs.conj().T, a.entries, atol=1e-12
        )
        np.testing.assert_allclose(
            vecs @ np.diag(eb) @ vecs.conj().T, b.entries, atol=1e-12
        )
