"""Tests for the complex linear algebra helpers."""

import math

import numpy as np
import pytest

from eqcoin.exceptions import EqcoinDimensionError, EqcoinMatrixError
from eqcoin.linalg import (
    IDENTITY_2,
    PAULI_X,
    as_matrix,
    as_vector,
    entropy_bits,
    hermitian_eigenvalues,
    hermitian_eigenvalues_2x2,
    is_hermitian,
    is_normalized,
    is_unitary,
    kron,
    partial_trace,
    projector,
    von_neumann_entropy,
)

H = 1 / math.sqrt(2)
SINGLET = np.array([0, 1, -1, 0]) * H


def _random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (m + m.conj().T) / 2


class TestPredicates:
    """Test unitarity, Hermiticity and normalization checks."""

    def test_hadamard_is_unitary(self):
        """The Hadamard matrix is unitary but not every matrix is."""
        assert is_unitary([[H, H], [H, -H]])
        assert not is_unitary([[1, 1], [0, 1]])

    def test_non_square_is_not_unitary(self):
        """Non-square matrices are neither unitary nor Hermitian."""
        m = np.zeros((2, 3))
        assert not is_unitary(m)
        assert not is_hermitian(m)

    def test_hermitian(self):
        """Pauli X is Hermitian, i sigma_x is not."""
        assert is_hermitian(PAULI_X)
        assert not is_hermitian(1j * PAULI_X)

    def test_normalized(self):
        """Unit vectors pass, others fail."""
        assert is_normalized([H, 1j * H])
        assert not is_normalized([1, 1])

    def test_constants_read_only(self):
        """Shared matrices cannot be modified in place."""
        with pytest.raises(ValueError):
            IDENTITY_2[0, 0] = 2

    def test_shape_conversion_errors(self):
        """Wrong dimensionality raises EqcoinDimensionError."""
        with pytest.raises(EqcoinDimensionError):
            as_matrix([1, 2])
        with pytest.raises(EqcoinDimensionError):
            as_vector([[1, 2]])


class TestKronAndProjector:
    """Test tensor products and projectors."""

    def test_kron_matches_ordering(self):
        """|0> (x) |1> is the second basis vector of the product space."""
        assert np.array_equal(kron([1, 0], [0, 1]), [0, 1, 0, 0])

    def test_kron_matrices(self):
        """Kronecker product dimensions multiply."""
        assert kron(PAULI_X, IDENTITY_2).shape == (4, 4)

    def test_projector(self):
        """|v><v| is Hermitian, idempotent and of unit trace."""
        p = projector([H, 1j * H])
        assert is_hermitian(p)
        assert np.allclose(p @ p, p)
        assert np.trace(p) == pytest.approx(1.0)


class TestPartialTrace:
    """Test partial_trace."""

    def test_singlet_is_maximally_mixed(self):
        """Either half of the singlet is I/2."""
        rho = projector(SINGLET)
        assert np.allclose(partial_trace(rho, [2, 2], keep=0), IDENTITY_2 / 2)
        assert np.allclose(partial_trace(rho, [2, 2], keep=1), IDENTITY_2 / 2)

    def test_product_state_keeps_factor(self):
        """Reducing a product state returns the kept factor."""
        a = np.array([0.6, 0.8j])
        b = np.array([1, 0, 0])
        rho = projector(kron(a, b))
        assert np.allclose(partial_trace(rho, [2, 3], keep=0), projector(a))
        assert np.allclose(partial_trace(rho, [2, 3], keep=1), projector(b))

    def test_three_subsystems(self):
        """Middle subsystem of a three-party product state."""
        middle = np.array([H, -H])
        psi = kron(kron([1, 0], middle), [0, 1])
        assert np.allclose(partial_trace(projector(psi), [2, 2, 2], keep=1), projector(middle))

    def test_trace_preserved(self):
        """The reduced matrix of a random state has unit trace."""
        rng = np.random.default_rng(3)
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        v /= np.linalg.norm(v)
        reduced = partial_trace(projector(v), [2, 4], keep=0)
        assert np.trace(reduced).real == pytest.approx(1.0, abs=1e-12)

    def test_dimension_mismatch(self):
        """Dims that do not multiply to the matrix size are rejected."""
        with pytest.raises(EqcoinDimensionError):
            partial_trace(np.eye(4), [3, 3], keep=0)

    def test_keep_out_of_range(self):
        """keep must index into dims."""
        with pytest.raises(EqcoinDimensionError):
            partial_trace(np.eye(4) / 4, [2, 2], keep=2)

    def test_non_hermitian(self):
        """Non-Hermitian input is rejected."""
        with pytest.raises(EqcoinMatrixError) as exc_info:
            partial_trace(np.triu(np.ones((4, 4))), [2, 2], keep=0)
        assert exc_info.value.property_name == "hermitian"

    @pytest.mark.parametrize("dims", [[da, db] for da in (2, 3) for db in (2, 4, 8)])
    def test_random_inputs_keep_trace_and_hermiticity(self, dims):
        """100 random Hermitian inputs keep their trace and stay Hermitian on both sides."""
        rng = np.random.default_rng(sum(dims))
        total = dims[0] * dims[1]
        for _ in range(100):
            m = _random_hermitian(rng, total)
            for keep in (0, 1):
                reduced = partial_trace(m, dims, keep=keep)
                assert reduced.shape == (dims[keep], dims[keep])
                assert np.trace(reduced) == pytest.approx(np.trace(m), abs=1e-12)
                assert is_hermitian(reduced)


class TestEigenvalues:
    """Test the Hermitian eigensolvers."""

    def test_two_by_two_closed_form(self):
        """sigma_x has eigenvalues -1 and 1."""
        assert np.allclose(hermitian_eigenvalues(PAULI_X), [-1.0, 1.0])

    def test_batched_two_by_two(self):
        """The closed form broadcasts over stacks."""
        stack = np.stack([PAULI_X, IDENTITY_2, np.diag([0.25, 0.75])])
        eigs = hermitian_eigenvalues_2x2(stack)
        assert eigs.shape == (3, 2)
        assert np.allclose(eigs, [[-1, 1], [1, 1], [0.25, 0.75]])

    @pytest.mark.parametrize("n", [1, 3, 4, 6, 8])
    def test_matches_numpy(self, n):
        """Jacobi eigenvalues agree with numpy.linalg.eigvalsh."""
        rng = np.random.default_rng(n)
        m = _random_hermitian(rng, n)
        assert np.allclose(hermitian_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-9)

    def test_characteristic_polynomial(self):
        """Each eigenvalue makes det(M - lambda I) vanish."""
        rng = np.random.default_rng(11)
        m = _random_hermitian(rng, 3)
        for lam in hermitian_eigenvalues(m):
            assert abs(np.linalg.det(m - lam * np.eye(3))) < 1e-9

    @pytest.mark.parametrize("dims", [[da, db] for da in (2, 3) for db in (2, 4, 8)])
    def test_random_reduced_density_matrices(self, dims):
        """Spectra of 100 random reduced states sum to the trace and solve det(M - lambda I) = 0."""
        rng = np.random.default_rng(10 * dims[0] + dims[1])
        total = dims[0] * dims[1]
        for _ in range(100):
            g = rng.normal(size=(total, total)) + 1j * rng.normal(size=(total, total))
            rho = g @ g.conj().T
            rho /= np.trace(rho).real
            for keep in (0, 1):
                reduced = partial_trace(rho, dims, keep=keep)
                eigs = hermitian_eigenvalues(reduced)
                assert eigs.sum() == pytest.approx(np.trace(reduced).real, abs=1e-9)
                identity = np.eye(dims[keep])
                for lam in eigs:
                    assert abs(np.linalg.det(reduced - lam * identity)) < 1e-9

    def test_nearly_diagonal_matrix_converges(self):
        """Rounding-level off-diagonal entries do not stall the rotations."""
        m = np.diag([0.2, 0.3, 0.5]).astype(np.complex128)
        m[0, 1] = m[1, 0] = 1e-17
        m[1, 2], m[2, 1] = 3e-13j, -3e-13j
        np.testing.assert_allclose(hermitian_eigenvalues(m), [0.2, 0.3, 0.5], atol=1e-12)

    @pytest.mark.filterwarnings("error::RuntimeWarning")
    def test_tiny_entries_skip_rotation_without_overflow(self):
        """An entry near the smallest float is skipped instead of overflowing the angle."""
        m = np.array([[1.0, 1e-300, 0.5], [1e-300, 2.0, 0.0], [0.5, 0.0, 3.0]])
        np.testing.assert_allclose(hermitian_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-12)

    def test_ascending(self):
        """Eigenvalues come back sorted."""
        eigs = hermitian_eigenvalues(np.diag([3.0, -1.0, 2.0]))
        assert list(eigs) == sorted(eigs)

    def test_rejects_non_hermitian(self):
        """Non-Hermitian matrices are rejected."""
        with pytest.raises(EqcoinMatrixError):
            hermitian_eigenvalues([[0, 1, 0], [0, 0, 0], [0, 0, 0]])

    def test_rejects_large_matrices(self):
        """Dimensions above the supported maximum are rejected."""
        with pytest.raises(EqcoinDimensionError, match="exceeds"):
            hermitian_eigenvalues(np.eye(9))


class TestEntropy:
    """Test entropy helpers."""

    def test_pure_state_has_zero_entropy(self):
        """A projector has zero entropy."""
        assert von_neumann_entropy(projector([H, H])) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed_qubit(self):
        """I/2 has one bit of entropy."""
        assert von_neumann_entropy(IDENTITY_2 / 2) == pytest.approx(1.0)

    def test_maximally_mixed_qutrit(self):
        """I/3 has log2(3) bits."""
        assert von_neumann_entropy(np.eye(3) / 3) == pytest.approx(math.log2(3))

    def test_entropy_bits_zero_convention(self):
        """0 log 0 counts as zero and the sum runs over the last axis."""
        assert np.allclose(entropy_bits([[1.0, 0.0], [0.5, 0.5]]), [0.0, 1.0])

    def test_rejects_bad_trace(self):
        """A trace away from one is rejected."""
        with pytest.raises(EqcoinMatrixError) as exc_info:
            von_neumann_entropy(IDENTITY_2)
        assert exc_info.value.property_name == "trace"

    def test_rejects_negative_eigenvalue(self):
        """Clearly negative eigenvalues are rejected."""
        with pytest.raises(EqcoinMatrixError) as exc_info:
            von_neumann_entropy(np.diag([1.5, -0.5]))
        assert exc_info.value.property_name == "positive"
