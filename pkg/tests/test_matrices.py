import numpy as np
import pytest

from berezin_lab import (
    NotSquareError,
    NotUnitaryError,
    ZeroEntryError,
    equivalence_normal_form,
    haar_random_unitary,
    load_matrix,
    save_matrix,
    to_doubly_stochastic,
    validate_unitary,
)


def test_identity_is_unitary_with_zero_entries():
    u = validate_unitary(np.eye(3), tol=1e-10)
    assert not u.nonzero_entries


def test_real_hadamard_is_unitary_with_nonzero_entries():
    m = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    u = validate_unitary(m, tol=1e-10)
    assert u.nonzero_entries


def test_shear_rejected():
    with pytest.raises(NotUnitaryError):
        validate_unitary(np.array([[1, 1], [0, 1]]))


def test_nonsquare_rejected():
    with pytest.raises(NotSquareError):
        validate_unitary(np.ones((2, 3)))


def test_haar_n1_is_unit_modulus():
    u = haar_random_unitary(1, seed=5)
    assert abs(abs(u.matrix[0, 0]) - 1.0) < 1e-14


def test_haar_is_unitary():
    u = haar_random_unitary(3, seed=123)
    validate_unitary(u.matrix, tol=1e-10)


def test_haar_deterministic_given_seed():
    a = haar_random_unitary(4, seed=99).matrix
    b = haar_random_unitary(4, seed=99).matrix
    assert np.array_equal(a, b)


def test_haar_zero_entries_never_seen():
    # vanishing entries have Haar measure zero; check empirically
    hits = sum(
        np.min(np.abs(haar_random_unitary(3, seed=i).matrix)) < 1e-12
        for i in range(10_000)
    )
    assert hits == 0


def test_squared_moduli_of_permutation_is_itself():
    perm = np.eye(3)[[2, 0, 1]]
    p = to_doubly_stochastic(validate_unitary(perm))
    np.testing.assert_array_equal(p.matrix, perm)


def test_squared_moduli_of_hadamard_is_flat():
    u = validate_unitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
    np.testing.assert_allclose(to_doubly_stochastic(u).matrix, np.full((2, 2), 0.5))


def test_squared_moduli_symmetric_family_values():
    # u = Id + (i - 1)/3: diagonal |1 + (i-1)/3|^2 = 5/9, off-diagonal 2/9
    m = np.eye(3, dtype=complex) + (1j - 1.0) / 3.0
    p = to_doubly_stochastic(validate_unitary(m)).matrix
    np.testing.assert_allclose(np.diag(p), 5.0 / 9.0, atol=1e-14)
    off = p[~np.eye(3, dtype=bool)]
    np.testing.assert_allclose(off, 2.0 / 9.0, atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_row_column_sums(n):
    p = to_doubly_stochastic(haar_random_unitary(n, seed=n)).matrix
    np.testing.assert_allclose(p.sum(axis=0), 1.0, atol=1e-12)
    np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-12)


class TestNormalForm:
    def test_phased_hadamard_strips_to_positive_first_row_col(self):
        had = validate_unitary(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
        phases = np.diag(np.exp(1j * np.array([0.3, -1.1])))
        u = validate_unitary(phases @ had.matrix)
        nf = equivalence_normal_form(u).matrix
        assert np.all(nf[0, :].real > 0) and np.max(np.abs(nf[0, :].imag)) < 1e-14
        assert np.all(nf[:, 0].real > 0) and np.max(np.abs(nf[:, 0].imag)) < 1e-14

    def test_idempotent(self):
        u = haar_random_unitary(4, seed=7)
        once = equivalence_normal_form(u)
        twice = equivalence_normal_form(once)
        np.testing.assert_allclose(once.matrix, twice.matrix, atol=1e-14)

    def test_preserves_squared_moduli(self):
        u = haar_random_unitary(4, seed=11)
        nf = equivalence_normal_form(u)
        np.testing.assert_allclose(
            to_doubly_stochastic(nf).matrix, to_doubly_stochastic(u).matrix, atol=1e-15
        )

    def test_class_invariant_over_random_phases(self):
        for trial in range(100):
            rng = np.random.default_rng(trial)
            u = haar_random_unitary(3, seed=[1000, trial])
            kap = np.diag(np.exp(1j * rng.uniform(-np.pi, np.pi, 3)))
            lam = np.diag(np.exp(1j * rng.uniform(-np.pi, np.pi, 3)))
            v = validate_unitary(kap @ u.matrix @ lam)
            np.testing.assert_allclose(
                equivalence_normal_form(v).matrix,
                equivalence_normal_form(u).matrix,
                atol=1e-12,
            )

    def test_zero_entry_rejected(self):
        with pytest.raises(ZeroEntryError):
            equivalence_normal_form(validate_unitary(np.eye(3)))


def test_matrix_json_round_trip(tmp_path):
    u = haar_random_unitary(5, seed=3).matrix
    path = tmp_path / "u.json"
    save_matrix(path, u)
    np.testing.assert_array_equal(load_matrix(path), u)
